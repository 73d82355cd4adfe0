#pragma once

#include "abreu/grid.hpp"
#include "abreu/types.hpp"

#include <span>
#include <vector>

namespace abreu {

// Values of a function on the interior nodes of a grid plus its trace at the
// boundary hits. The trace function, when present, also serves boundary
// points that are not hits (boundary samples, section centers).
class ScalarField {
 public:
  ScalarField() = default;
  // `boundary_values` is either empty (no trace) or one value per hit.
  ScalarField(GridPtr grid, std::vector<double> values, std::vector<double> boundary_values = {},
              PointFunction trace = {});

  static ScalarField sample(GridPtr grid, const PointFunction& fn);
  // Interior values given, hits filled from `trace`.
  static ScalarField with_trace(GridPtr grid, std::vector<double> values, PointFunction trace);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> boundary_values() const noexcept { return boundary_; }
  bool has_boundary() const noexcept { return !boundary_.empty(); }
  double boundary(std::size_t hit) const { return boundary_[hit]; }
  bool has_trace() const noexcept { return static_cast<bool>(trace_); }
  const PointFunction& trace() const noexcept { return trace_; }
  // Trace at an arbitrary boundary point; throws IncompleteData without one.
  double trace_at(const Point& p) const;

  // Value at the end of an arm (neighbour node or boundary hit).
  double arm_value(std::size_t node, Arm a) const;

  double min() const;
  double max() const;
  double max_abs() const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
  std::vector<double> boundary_;
  PointFunction trace_;
};

// Non-uniform three-point second difference along one lattice line through a
// node: D = center*u0 + forward*u_f + backward*u_b. Exact on quadratics.
struct SecondDifference {
  double center;
  double forward;
  double backward;
  ArmTarget forward_target;
  ArmTarget backward_target;
};

SecondDifference second_difference(const Grid& grid, std::size_t node, Axis axis);

struct HessianField {
  GridPtr grid;
  std::vector<Sym2> values;

  std::size_t size() const noexcept { return values.size(); }
  const Sym2& operator[](std::size_t i) const { return values[i]; }
  double min_eigenvalue() const;
};

// u_xx, u_yy from the axis lines and u_xy = (D_diag - D_antidiag) / 2, which
// is the standard 9-point cross difference at full-stencil nodes and the
// Shortley-Weller analogue at cut cells. Throws IncompleteData if a
// boundary value is needed but the field has none.
HessianField discrete_hessian(const ScalarField& field);
Sym2 discrete_hessian_at(const ScalarField& field, std::size_t node);

// Gradient at a node by non-uniform centered first differences (exact on
// quadratics, including cut cells).
Point discrete_gradient(const ScalarField& field, std::size_t node);

// Area weight of each node: its dual cell clipped to the domain, with the
// clipped cells of exterior lattice points folded into the nearest interior
// node. Sums to the domain area.
std::vector<double> quadrature_weights(const Grid& grid);

// (sum_n weight_n |f_n|^p)^(1/p) with the quadrature weights above.
double lp_norm(const ScalarField& f, double p);

// Area of the convex polygon `clip` intersected with the axis-aligned square.
double clipped_square_area(const std::vector<Point>& clip, const Point& lo, const Point& hi);

}  // namespace abreu
