#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>

namespace abreu {

using Point = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// Boundary data (phi, psi, ...) as a function of a point on or near the boundary.
using PointFunction = std::function<double(const Point&)>;

// Symmetric 2x2 matrix [[xx, xy], [xy, yy]]. Used for per-node Hessians and
// cofactor matrices; symmetry holds by construction.
struct Sym2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  static constexpr Sym2 identity() { return {1.0, 0.0, 1.0}; }
  static Sym2 from(const Mat2& m) { return {m(0, 0), 0.5 * (m(0, 1) + m(1, 0)), m(1, 1)}; }

  constexpr double det() const { return xx * yy - xy * xy; }
  constexpr double trace() const { return xx + yy; }

  double min_eigenvalue() const {
    const double half_gap = std::hypot(0.5 * (xx - yy), xy);
    return 0.5 * (xx + yy) - half_gap;
  }
  double max_eigenvalue() const {
    const double half_gap = std::hypot(0.5 * (xx - yy), xy);
    return 0.5 * (xx + yy) + half_gap;
  }

  // trace(this * other), the contraction A^{ij} B_{ij}.
  constexpr double contract(const Sym2& other) const {
    return xx * other.xx + 2.0 * xy * other.xy + yy * other.yy;
  }

  Mat2 matrix() const {
    Mat2 m;
    m << xx, xy, xy, yy;
    return m;
  }

  constexpr Sym2 operator+(const Sym2& o) const { return {xx + o.xx, xy + o.xy, yy + o.yy}; }
  constexpr Sym2 operator-(const Sym2& o) const { return {xx - o.xx, xy - o.xy, yy - o.yy}; }
  constexpr Sym2 operator*(double s) const { return {xx * s, xy * s, yy * s}; }
  constexpr bool operator==(const Sym2&) const = default;
};

}  // namespace abreu
