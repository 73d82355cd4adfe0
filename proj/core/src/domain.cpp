#include "abreu/domain.hpp"

#include "abreu/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace abreu {
namespace {

constexpr std::size_t kPolygonVertices = 4096;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Mat2 rotation(double angle) {
  Mat2 q;
  q << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return q;
}

double segment_distance(const Point& p, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (a + t * ab - p).norm();
}

}  // namespace

std::string to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::Disk: return "disk";
    case DomainKind::Ellipse: return "ellipse";
    case DomainKind::LevelSet: return "levelset";
  }
  return "unknown";
}

Domain Domain::disk(const Point& center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius) || !center.allFinite())
    throw Error(ErrorKind::InvalidDomain, "disk radius must be positive and finite");
  Domain d;
  d.kind_ = DomainKind::Disk;
  d.description_ = "disk";
  d.center_ = center;
  d.shape_ = {radius, radius, 0.0};
  d.finalize();
  return d;
}

Domain Domain::ellipse(const Point& center, double a, double b, double angle) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b) || !std::isfinite(angle) ||
      !center.allFinite()) {
    std::ostringstream msg;
    msg << "ellipse semi-axes must be positive and finite (got " << a << ", " << b << ")";
    throw Error(ErrorKind::InvalidDomain, msg.str());
  }
  Domain d;
  d.kind_ = DomainKind::Ellipse;
  d.description_ = "ellipse";
  d.center_ = center;
  d.shape_ = {a, b, angle};
  d.finalize();
  return d;
}

Domain Domain::level_set(LevelSetFunction fn, const Point& interior_point, std::string description) {
  if (!fn.value || !fn.gradient || !fn.hessian)
    throw Error(ErrorKind::InvalidDomain, "level-set domain needs value, gradient and hessian");
  if (!(fn.value(interior_point) < 0.0))
    throw Error(ErrorKind::InvalidDomain, "level-set interior point is not inside {F < 0}");
  Domain d;
  d.kind_ = DomainKind::LevelSet;
  d.description_ = std::move(description);
  d.center_ = interior_point;
  d.level_set_ = std::make_shared<const LevelSetFunction>(std::move(fn));
  d.finalize();

  // Positive-definite Hessian on the closure, sampled on the boundary polygon
  // and on rays toward it.
  for (std::size_t k = 0; k < d.polygon_.size(); k += 16) {
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const Point p = d.center_ + t * (d.polygon_[k] - d.center_);
      const Eigen::SelfAdjointEigenSolver<Mat2> eig(d.defining_hessian(p));
      if (!(eig.eigenvalues().minCoeff() > 0.0))
        throw Error(ErrorKind::InvalidDomain, "level function Hessian is not positive definite on the closure");
    }
  }
  return d;
}

Domain Domain::polynomial_level_set(const Polynomial2& f, const Point& interior_point) {
  LevelSetFunction fn;
  fn.value = [f](const Point& p) { return f(p); };
  const Polynomial2 fx = f.derivative(1, 0), fy = f.derivative(0, 1);
  fn.gradient = [fx, fy](const Point& p) { return Point(fx(p), fy(p)); };
  fn.hessian = [f](const Point& p) { return f.hessian(p).matrix(); };
  return level_set(std::move(fn), interior_point, "levelset");
}

double Domain::defining_function(const Point& p) const {
  switch (kind_) {
    case DomainKind::Disk: {
      const double r = shape_[0];
      return ((p - center_).squaredNorm() - r * r) / (r * r);
    }
    case DomainKind::Ellipse: {
      const Point q = rotation(shape_[2]).transpose() * (p - center_);
      return q.x() * q.x() / (shape_[0] * shape_[0]) + q.y() * q.y() / (shape_[1] * shape_[1]) - 1.0;
    }
    case DomainKind::LevelSet: return level_set_->value(p);
  }
  return 0.0;
}

Point Domain::defining_gradient(const Point& p) const {
  switch (kind_) {
    case DomainKind::Disk: return 2.0 * (p - center_) / (shape_[0] * shape_[0]);
    case DomainKind::Ellipse: {
      const Mat2 q = rotation(shape_[2]);
      const Point local = q.transpose() * (p - center_);
      const Point g(2.0 * local.x() / (shape_[0] * shape_[0]), 2.0 * local.y() / (shape_[1] * shape_[1]));
      return q * g;
    }
    case DomainKind::LevelSet: return level_set_->gradient(p);
  }
  return Point::Zero();
}

Mat2 Domain::defining_hessian(const Point& p) const {
  switch (kind_) {
    case DomainKind::Disk: return Mat2::Identity() * (2.0 / (shape_[0] * shape_[0]));
    case DomainKind::Ellipse: {
      const Mat2 q = rotation(shape_[2]);
      Mat2 d = Mat2::Zero();
      d(0, 0) = 2.0 / (shape_[0] * shape_[0]);
      d(1, 1) = 2.0 / (shape_[1] * shape_[1]);
      return q * d * q.transpose();
    }
    case DomainKind::LevelSet: return level_set_->hessian(p);
  }
  return Mat2::Zero();
}

double Domain::boundary_radius(double angle) const {
  const Point dir(std::cos(angle), std::sin(angle));
  switch (kind_) {
    case DomainKind::Disk: return shape_[0];
    case DomainKind::Ellipse: {
      const Point local = rotation(shape_[2]).transpose() * dir;
      const double a = shape_[0], b = shape_[1];
      return 1.0 / std::sqrt(local.x() * local.x() / (a * a) + local.y() * local.y() / (b * b));
    }
    case DomainKind::LevelSet: {
      double hi = 1.0;
      int doublings = 0;
      while (level_set_->value(center_ + hi * dir) < 0.0) {
        hi *= 2.0;
        if (++doublings > 60) throw Error(ErrorKind::InvalidDomain, "level-set domain is unbounded");
      }
      double lo = 0.0;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (level_set_->value(center_ + mid * dir) < 0.0 ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
  return 0.0;
}

Point Domain::boundary_point(double angle) const {
  return center_ + boundary_radius(angle) * Point(std::cos(angle), std::sin(angle));
}

std::vector<Point> Domain::boundary_samples(std::size_t count) const {
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k)
    out.push_back(boundary_point(kTwoPi * static_cast<double>(k) / static_cast<double>(count)));
  return out;
}

Point Domain::outer_normal(const Point& boundary) const { return defining_gradient(boundary).normalized(); }

double Domain::curvature(const Point& boundary) const {
  const Point g = defining_gradient(boundary);
  const Mat2 h = defining_hessian(boundary);
  const double num = h(1, 1) * g.x() * g.x() - 2.0 * h(0, 1) * g.x() * g.y() + h(0, 0) * g.y() * g.y();
  return num / std::pow(g.norm(), 3);
}

double Domain::tangent_ball_radius(const Point& boundary) const {
  const Point n = inner_normal(boundary);
  const double kappa = curvature(boundary);
  double hi = kappa > 0.0 ? std::min(1.0 / kappa, diameter_) : diameter_;
  const double slack = 1e-9;
  auto fits = [&](double r) {
    const Point c = boundary + r * n;
    for (int k = 0; k < 512; ++k) {
      const double t = kTwoPi * k / 512.0;
      if (defining_function(c + r * Point(std::cos(t), std::sin(t))) > slack) return false;
    }
    return true;
  };
  if (fits(hi)) return hi;
  double lo = 0.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (fits(mid) ? lo : hi) = mid;
  }
  return lo;
}

void Domain::finalize() {
  polygon_.clear();
  polygon_angles_.clear();
  polygon_.reserve(kPolygonVertices);
  for (std::size_t k = 0; k < kPolygonVertices; ++k) {
    const double t = kTwoPi * static_cast<double>(k) / static_cast<double>(kPolygonVertices);
    polygon_angles_.push_back(t);
    polygon_.push_back(boundary_point(t));
  }

  area_ = 0.0;
  outer_radius_ = 0.0;
  for (std::size_t k = 0; k < polygon_.size(); ++k) {
    const Point& a = polygon_[k];
    const Point& b = polygon_[(k + 1) % polygon_.size()];
    area_ += 0.5 * (a.x() * b.y() - b.x() * a.y());
    outer_radius_ = std::max(outer_radius_, (a - center_).norm());
  }

  min_curvature_ = std::numeric_limits<double>::infinity();
  for (const auto& p : polygon_) {
    const double kappa = curvature(p);
    if (!(kappa > 0.0) || !std::isfinite(kappa))
      throw Error(ErrorKind::InvalidDomain, "boundary curvature is not bounded below by a positive constant");
    min_curvature_ = std::min(min_curvature_, kappa);
  }

  switch (kind_) {
    case DomainKind::Disk:
      area_ = std::numbers::pi * shape_[0] * shape_[0];
      diameter_ = 2.0 * shape_[0];
      rho_ = shape_[0];
      break;
    case DomainKind::Ellipse: {
      const double a = std::max(shape_[0], shape_[1]);
      const double b = std::min(shape_[0], shape_[1]);
      area_ = std::numbers::pi * a * b;
      diameter_ = 2.0 * a;
      rho_ = b * b / a;
      break;
    }
    case DomainKind::LevelSet: {
      diameter_ = 0.0;
      for (std::size_t i = 0; i < polygon_.size(); i += 4)
        for (std::size_t j = i + 4; j < polygon_.size(); j += 4)
          diameter_ = std::max(diameter_, (polygon_[i] - polygon_[j]).norm());
      rho_ = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < polygon_.size(); k += 8) rho_ = std::min(rho_, tangent_ball_radius(polygon_[k]));
      break;
    }
  }
}

double Domain::localization_rho() const { return std::min(rho_, 1.0 / outer_radius_); }

Point Domain::closest_boundary_point(const Point& p) const {
  if (kind_ == DomainKind::Disk) {
    const Point d = p - center_;
    const double n = d.norm();
    const Point dir = n > 0.0 ? Point(d / n) : Point(1.0, 0.0);
    return center_ + shape_[0] * dir;
  }
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < polygon_.size(); ++k) {
    const double d = segment_distance(p, polygon_[k], polygon_[(k + 1) % polygon_.size()]);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  // Golden-section refinement of the boundary parameter around the best segment.
  const double step = kTwoPi / static_cast<double>(polygon_.size());
  double lo = polygon_angles_[best] - step, hi = polygon_angles_[best] + 2.0 * step;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  auto dist = [&](double t) { return (boundary_point(t) - p).norm(); };
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = dist(x1), f2 = dist(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = dist(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = dist(x2);
    }
  }
  return boundary_point(0.5 * (lo + hi));
}

double Domain::distance_to_boundary(const Point& p) const {
  if (kind_ == DomainKind::Disk) return std::abs(shape_[0] - (p - center_).norm());
  return (closest_boundary_point(p) - p).norm();
}

Domain build_domain(DomainKind kind, const DomainParameters& params) {
  switch (kind) {
    case DomainKind::Disk: return Domain::disk(params.center, params.radius);
    case DomainKind::Ellipse:
      return Domain::ellipse(params.center, params.semi_axis_a, params.semi_axis_b, params.angle);
    case DomainKind::LevelSet: return Domain::polynomial_level_set(params.level_function, params.center);
  }
  throw Error(ErrorKind::InvalidDomain, "unknown domain kind");
}

}  // namespace abreu
