#include "abreu/oracle.hpp"

#include "abreu/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace abreu {
namespace {

Polynomial2 determinant_of(const Polynomial2& u) {
  return u.derivative(2, 0) * u.derivative(0, 2) - u.derivative(1, 1) * u.derivative(1, 1);
}

ExactSolution make(std::string name, Polynomial2 u, double theta) {
  ExactSolution s;
  s.name = std::move(name);
  s.theta = theta;
  s.det = determinant_of(u);
  s.u = std::move(u);
  return s;
}

constexpr std::array<double, 9> kSecond{-1.0 / 560, 8.0 / 315, -1.0 / 5, 8.0 / 5, -205.0 / 72,
                                        8.0 / 5,    -1.0 / 5,  8.0 / 315, -1.0 / 560};
constexpr std::array<double, 9> kFirst{1.0 / 280, -4.0 / 105, 1.0 / 5, -4.0 / 5, 0.0,
                                       4.0 / 5,   -1.0 / 5,  4.0 / 105, -1.0 / 280};

}  // namespace

double ExactSolution::w(const Point& p) const { return std::pow(det(p), theta - 1.0); }

double ExactSolution::f(const Point& p) const {
  const double d = det(p);
  const Point g = det.gradient(p);
  const Sym2 dh = det.hessian(p);
  const Sym2 h = hessian(p);
  const Sym2 cof{h.yy, -h.xy, h.xx};
  const Sym2 inner{(theta - 2.0) * g.x() * g.x() + d * dh.xx, (theta - 2.0) * g.x() * g.y() + d * dh.xy,
                   (theta - 2.0) * g.y() * g.y() + d * dh.yy};
  return (theta - 1.0) * std::pow(d, theta - 3.0) * cof.contract(inner);
}

PointFunction ExactSolution::u_function() const {
  return [poly = u](const Point& p) { return poly(p); };
}
PointFunction ExactSolution::w_function() const {
  return [self = *this](const Point& p) { return self.w(p); };
}
PointFunction ExactSolution::f_function() const {
  return [self = *this](const Point& p) { return self.f(p); };
}

ExactSolution radial_solution(double c1, double c2, double theta) {
  if (!(c1 > 0.0) || !(c2 >= 0.0)) {
    std::ostringstream msg;
    msg << "radial profile needs c1 > 0 and c2 >= 0 for u'' > 0 (got c1 = " << c1 << ", c2 = " << c2 << ")";
    throw Error(ErrorKind::NonConvexProfile, msg.str());
  }
  const Polynomial2 r2 = Polynomial2::monomial(2, 0) + Polynomial2::monomial(0, 2);
  std::ostringstream name;
  name << "radial(" << c1 << "," << c2 << ")";
  return make(name.str(), r2 * (0.5 * c1) + r2 * r2 * (0.25 * c2), theta);
}

double radial_determinant(double c1, double c2, double r) {
  const double upp = c1 + 3.0 * c2 * r * r;
  if (r == 0.0) return upp * upp;
  const double up = c1 * r + c2 * r * r * r;
  return upp * up / r;
}

ExactSolution quadratic_solution(const Mat2& hessian, double theta, const Point& center) {
  const Sym2 q = Sym2::from(hessian);
  if (!(q.min_eigenvalue() > 0.0)) throw Error(ErrorKind::NonConvexProfile, "quadratic needs a positive definite Hessian");
  // (x - c)^T Q (x - c) / 2 expanded.
  const double cx = center.x(), cy = center.y();
  Polynomial2 u({{2, 0, 0.5 * q.xx},
                 {1, 1, q.xy},
                 {0, 2, 0.5 * q.yy},
                 {1, 0, -(q.xx * cx + q.xy * cy)},
                 {0, 1, -(q.xy * cx + q.yy * cy)},
                 {0, 0, 0.5 * (q.xx * cx * cx + 2.0 * q.xy * cx * cy + q.yy * cy * cy)}});
  return make("quadratic", std::move(u), theta);
}

ExactSolution sheared_quadratic(const Mat2& a, double theta, const Point& center) {
  if (!(std::abs(a.determinant() - 1.0) <= 1e-12)) {
    std::ostringstream msg;
    msg << "shear must have unit determinant (det = " << a.determinant() << ")";
    throw Error(ErrorKind::InvalidShear, msg.str());
  }
  ExactSolution s = quadratic_solution(a.transpose() * a, theta, center);
  s.name = "sheared";
  return s;
}

double forcing_finite_difference(const ExactSolution& s, const Point& p, double step) {
  double wxx = 0.0, wyy = 0.0, wxy = 0.0;
  for (int k = -4; k <= 4; ++k) {
    const auto ik = static_cast<std::size_t>(k + 4);
    wxx += kSecond[ik] * s.w(p + Point(k * step, 0.0));
    wyy += kSecond[ik] * s.w(p + Point(0.0, k * step));
    if (kFirst[ik] == 0.0) continue;
    for (int l = -4; l <= 4; ++l) {
      const auto il = static_cast<std::size_t>(l + 4);
      if (kFirst[il] == 0.0) continue;
      wxy += kFirst[ik] * kFirst[il] * s.w(p + Point(k * step, l * step));
    }
  }
  const double h2 = step * step;
  const Sym2 hess_w{wxx / h2, wxy / h2, wyy / h2};
  const Sym2 h = s.hessian(p);
  return Sym2{h.yy, -h.xy, h.xx}.contract(hess_w);
}

std::vector<Point> audit_points(const Domain& domain, std::size_t radii, std::size_t angles) {
  std::vector<Point> out;
  out.reserve(radii * angles);
  const Point c = domain.center();
  for (std::size_t a = 0; a < angles; ++a) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(a) / static_cast<double>(angles);
    const Point b = domain.boundary_point(angle);
    for (std::size_t r = 0; r < radii; ++r) {
      const double t = static_cast<double>(r + 1) / static_cast<double>(radii);
      out.push_back(c + t * (b - c));
    }
  }
  return out;
}

ForcingAudit audit_forcing(const ExactSolution& s, const Domain& domain) {
  ForcingAudit audit;
  audit.max_value = -std::numeric_limits<double>::infinity();
  for (const Point& p : audit_points(domain)) {
    const double v = s.f(p);
    if (v > audit.max_value) audit.max_value = v, audit.argmax = p;
    audit.max_disagreement = std::max(audit.max_disagreement, std::abs(v - forcing_finite_difference(s, p)));
    ++audit.samples;
  }
  audit.nonpositive = audit.max_value <= 0.0;
  return audit;
}

std::vector<FixtureInfo> list_fixtures() {
  return {{"paraboloid", "|x|^2/2, det 1, f = 0"},
          {"paraboloid2", "|x|^2, det 4, f = 0"},
          {"radial", "r^2/2 + r^4/4"},
          {"radial_mild", "r^2/2 + r^4/16"},
          {"sheared", "|A x|^2/2 with A = [[1, 0.5], [0, 1]]"},
          {"diag", "(4 x^2 + y^2)/2"}};
}

ExactSolution fixture(const std::string& name, double theta) {
  ExactSolution s;
  if (name == "paraboloid") {
    s = quadratic_solution(Mat2::Identity(), theta);
  } else if (name == "paraboloid2") {
    s = quadratic_solution(2.0 * Mat2::Identity(), theta);
  } else if (name == "radial") {
    s = radial_solution(1.0, 1.0, theta);
  } else if (name == "radial_mild") {
    s = radial_solution(1.0, 0.25, theta);
  } else if (name == "sheared") {
    Mat2 a;
    a << 1.0, 0.5, 0.0, 1.0;
    s = sheared_quadratic(a, theta);
  } else if (name == "diag") {
    s = quadratic_solution(Eigen::Vector2d(4.0, 1.0).asDiagonal().toDenseMatrix(), theta);
  } else {
    throw Error(ErrorKind::InvalidInput, "unknown fixture '" + name + "'");
  }
  s.name = name;
  return s;
}

}  // namespace abreu
