#pragma once

#include "abreu/domain.hpp"
#include "abreu/polynomial.hpp"

#include <string>
#include <vector>

namespace abreu {

// Closed-form u* with w* = (det D^2 u*)^(theta - 1) and f* = U^{ij} w*_ij.
struct ExactSolution {
  std::string name;
  double theta = 0.0;
  Polynomial2 u;
  Polynomial2 det;  // det D^2 u*

  double value(const Point& p) const { return u(p); }
  Point gradient(const Point& p) const { return u.gradient(p); }
  Sym2 hessian(const Point& p) const { return u.hessian(p); }
  double w(const Point& p) const;
  // Symbolic: (theta-1) D^(theta-3) U^{ij} [(theta-2) D_i D_j + D D_ij].
  double f(const Point& p) const;

  PointFunction u_function() const;
  PointFunction w_function() const;
  PointFunction f_function() const;
};

// u = c1 r^2 / 2 + c2 r^4 / 4; throws NonConvexProfile unless c1 > 0, c2 >= 0.
ExactSolution radial_solution(double c1, double c2, double theta);

// det D^2 u = u''(r) u'(r) / r for the radial profile above.
double radial_determinant(double c1, double c2, double r);

// u = (x - center)^T H (x - center) / 2 for a positive definite H.
ExactSolution quadratic_solution(const Mat2& hessian, double theta, const Point& center = Point::Zero());

// u = |A (x - center)|^2 / 2; throws InvalidShear unless |det A - 1| <= 1e-12.
ExactSolution sheared_quadratic(const Mat2& a, double theta, const Point& center = Point::Zero());

// U^{ij} w_ij from the evaluators by 8th-order centered differences of w*.
double forcing_finite_difference(const ExactSolution& s, const Point& p, double step = 1e-3);

struct ForcingAudit {
  bool nonpositive = true;
  double max_value = 0.0;
  Point argmax = Point::Zero();
  double max_disagreement = 0.0;  // symbolic vs finite-difference
  std::size_t samples = 0;
};

// 10^4 polar samples of the closed domain (100 radii x 100 angles).
std::vector<Point> audit_points(const Domain& domain, std::size_t radii = 100, std::size_t angles = 100);
ForcingAudit audit_forcing(const ExactSolution& s, const Domain& domain);

struct FixtureInfo {
  std::string name;
  std::string description;
};

// paraboloid, paraboloid2, radial, radial_mild, sheared, diag.
std::vector<FixtureInfo> list_fixtures();
// Throws InvalidInput for unknown names.
ExactSolution fixture(const std::string& name, double theta);

}  // namespace abreu
