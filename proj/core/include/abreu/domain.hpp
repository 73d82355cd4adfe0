#pragma once

#include "abreu/polynomial.hpp"
#include "abreu/types.hpp"

#include <memory>
#include <string>
#include <vector>

namespace abreu {

enum class DomainKind { Disk, Ellipse, LevelSet };

std::string to_string(DomainKind kind);

// User-supplied boundary defining function F with Omega = {F < 0}. The
// gradient and Hessian are required; the Hessian must be positive definite
// on the closure for the domain to be accepted.
struct LevelSetFunction {
  std::function<double(const Point&)> value;
  std::function<Point(const Point&)> gradient;
  std::function<Mat2(const Point&)> hessian;
};

// A bounded, uniformly convex planar region.
//
// Besides the defining function the domain caches a dense boundary polygon
// (used for distances, areas and clipping) and two size quantities that the
// localization hypotheses bundle together: the interior tangent-ball radius
// `rho()` and the enclosing radius `outer_radius()` about the center.
class Domain {
 public:
  static Domain disk(const Point& center, double radius);
  // Semi-axes a, b along the axes rotated by `angle` (radians).
  static Domain ellipse(const Point& center, double a, double b, double angle = 0.0);
  // `interior_point` must lie inside; the domain is star-shaped about it since
  // it is convex.
  static Domain level_set(LevelSetFunction fn, const Point& interior_point,
                          std::string description = "levelset");
  static Domain polynomial_level_set(const Polynomial2& f, const Point& interior_point);

  DomainKind kind() const noexcept { return kind_; }
  const std::string& description() const noexcept { return description_; }
  const Point& center() const noexcept { return center_; }
  // Disk: (radius, radius, 0); ellipse: (a, b, angle); level set: unused.
  const Eigen::Vector3d& shape_parameters() const noexcept { return shape_; }

  double defining_function(const Point& p) const;
  Point defining_gradient(const Point& p) const;
  Mat2 defining_hessian(const Point& p) const;
  bool contains(const Point& p) const { return defining_function(p) < 0.0; }

  // Boundary point on the ray from the center at polar angle `angle`.
  Point boundary_point(double angle) const;
  std::vector<Point> boundary_samples(std::size_t count) const;
  Point outer_normal(const Point& boundary) const;
  Point inner_normal(const Point& boundary) const { return -outer_normal(boundary); }
  // Signed curvature of the boundary curve (positive for convex).
  double curvature(const Point& boundary) const;

  double rho() const noexcept { return rho_; }
  double min_curvature() const noexcept { return min_curvature_; }
  double outer_radius() const noexcept { return outer_radius_; }
  double diameter() const noexcept { return diameter_; }
  double area() const noexcept { return area_; }
  // rho of the normalized hypotheses: interior balls of radius r and
  // Omega inside B_{1/r}; min(rho(), 1 / outer_radius()).
  double localization_rho() const;

  double distance_to_boundary(const Point& p) const;
  // Nearest boundary point to p.
  Point closest_boundary_point(const Point& p) const;
  const std::vector<Point>& boundary_polygon() const noexcept { return polygon_; }

  // Largest r such that the disk of radius r tangent at `boundary` lies in
  // the closure (sampled test).
  double tangent_ball_radius(const Point& boundary) const;

 private:
  Domain() = default;
  void finalize();
  double boundary_radius(double angle) const;

  DomainKind kind_ = DomainKind::Disk;
  std::string description_;
  Point center_ = Point::Zero();
  Eigen::Vector3d shape_ = Eigen::Vector3d::Zero();
  std::shared_ptr<const LevelSetFunction> level_set_;

  std::vector<Point> polygon_;
  std::vector<double> polygon_angles_;
  double rho_ = 0.0;
  double min_curvature_ = 0.0;
  double outer_radius_ = 0.0;
  double diameter_ = 0.0;
  double area_ = 0.0;
};

// Builds a domain from a kind name ("disk", "ellipse", "levelset") and its
// parameters, validating convexity. Throws ErrorKind::InvalidDomain.
struct DomainParameters {
  Point center = Point::Zero();
  double radius = 1.0;
  double semi_axis_a = 1.0;
  double semi_axis_b = 1.0;
  double angle = 0.0;
  Polynomial2 level_function;  // levelset only
};

Domain build_domain(DomainKind kind, const DomainParameters& params);

}  // namespace abreu
