#pragma once

#include "abreu/ellipsoid.hpp"
#include "abreu/field.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace abreu {

// S_{x,h} = {y : u(y) < u(x) + p.(y - x) + h} with p the slope at x.
struct Section {
  Point center = Point::Zero();
  double height = 0.0;
  double center_value = 0.0;
  Point gradient = Point::Zero();
  bool boundary_center = false;
  // Inner normal at the center (boundary) or at the closest boundary point.
  Point normal = Point(0.0, 1.0);
  std::vector<int> nodes;
  // Convex hull of the nodes, boundary hits inside the section and sub-grid
  // crossings of the section boundary along grid lines.
  std::vector<Point> hull;
  double floor = 0.0;  // 4 h_grid^2 max eigenvalue of the local Hessian
  bool below_floor = false;
};

// Throws OutOfDomain for centers outside the closed domain.
Section extract_section(const ScalarField& u, const Point& x, double height);

// The nodes of the section along every grid line form one contiguous run.
bool grid_convex(const Section& section, const Grid& grid);

struct EllipsoidFit {
  Ellipse ellipse;
  double volume = 0.0;
  Mat2 sliding = Mat2::Identity();  // A_h, det 1
  double tau = 0.0;
  Dilation dilation;
  int khachiyan_iterations = 0;
  bool centered = false;
};

struct FitOptions {
  KhachiyanOptions khachiyan;
  // Boundary sections are fitted on the hull united with its reflection
  // through the center; empty means "only for boundary centers".
  std::optional<bool> centered;
};

EllipsoidFit fit_john_ellipsoid(const Section& section, const FitOptions& options = {});

struct MaximalSection {
  Point center = Point::Zero();
  double hbar = 0.0;
  Point touching = Point::Zero();
  double dist = 0.0;
  int iterations = 0;
};

// Bisection to relative tolerance `rel_tol` on the hit containment test.
// Throws TooCloseToBoundary within one grid cell of the boundary and
// IncompleteData when u has no boundary values.
MaximalSection maximal_height(const ScalarField& u, const Point& y, double rel_tol = 1e-6);

struct DistanceRatios {
  std::vector<Point> points;
  std::vector<double> lower;  // hbar^{1/2} / dist
  std::vector<double> upper;  // dist hbar^{1/2}
  double lower_min = 0.0;
  double lower_max = 0.0;
  double upper_min = 0.0;
  double upper_max = 0.0;
  double k_fit = 0.0;  // smallest k with every lower ratio in [1/k, k]
};

// Maximal sections at `count` interior nodes (seeded choice among nodes at
// least 1.5 grid cells from the boundary).
DistanceRatios section_distance_ratios(const ScalarField& u, std::size_t count, std::uint64_t seed = 0);

struct ScanRow {
  double h = 0.0;
  double tau = 0.0;
  double vol_ratio = 0.0;  // vol(E_h) / (pi h)
  double k_inner = 0.0;
  double k_outer = 0.0;
  std::size_t nodes = 0;
};

struct LocalizationScan {
  Point x0 = Point::Zero();
  std::vector<ScanRow> rows;
  std::vector<double> dropped;  // heights with fewer than 12 section nodes
  std::vector<std::string> warnings;
  // |tau_h| ~ c0 + c1 |log h|
  double c0 = 0.0;
  double c1 = 0.0;
  double r_squared = 0.0;
};

inline constexpr std::size_t kMinSectionNodes = 12;

LocalizationScan localization_scan(const ScalarField& u, const Point& x0, const std::vector<double>& heights,
                                   const FitOptions& options = {});

struct SeparationBounds {
  double rho_low = 0.0;
  double rho_high = 0.0;
  std::size_t pairs = 0;
};

// Ratios (u(x) - u(x0) - grad u(x0).(x - x0)) / |x - x0|^2 over all ordered
// pairs of distinct samples. Throws ConvexityViolation below -10 h^2.
SeparationBounds quadratic_separation(const ScalarField& u, const std::vector<Point>& boundary_samples);

struct NormalizedSection {
  ScalarField u;            // u~(x~) = u_y(T x~) / hbar on T^{-1}(Omega)
  Point offset;             // y
  Mat2 linear;              // T x~ = y + linear x~
  MaximalSection maximal;
  EllipsoidFit fit;
  double value_at_origin = 0.0;
  Point gradient_at_origin = Point::Zero();
  double c_inner = 0.0;     // B_c within S~_1
  double c_outer = 0.0;     // S~_1 within B_C
  double sliding_condition = 0.0;  // ||A|| ||A^{-1}||
};

// Throws OutOfDomain if the resampling leaves the data.
NormalizedSection normalize_section(const ScalarField& u, const Point& y);

}  // namespace abreu
