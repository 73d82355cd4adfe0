#include "abreu/ellipsoid.hpp"

#include "abreu/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace abreu {
namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

}  // namespace

std::vector<Point> convex_hull(std::vector<Point> points) {
  std::sort(points.begin(), points.end(),
            [](const Point& a, const Point& b) { return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y()); });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) return points;
  std::vector<Point> hull(2 * points.size());
  std::size_t k = 0;
  for (const Point& p : points) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], points[i]) <= 0.0) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  return hull;
}

double polygon_area(const std::vector<Point>& polygon) {
  double a = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const Point& p = polygon[i];
    const Point& q = polygon[(i + 1) % polygon.size()];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * std::abs(a);
}

double Ellipse::area() const { return std::numbers::pi / std::sqrt(shape.determinant()); }

bool Ellipse::contains(const Point& p, double slack) const {
  const Point d = p - center;
  return d.dot(shape * d) <= 1.0 + slack;
}

Eigen::Vector2d Ellipse::semi_axes() const {
  const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Mat2>(shape).eigenvalues();
  return Eigen::Vector2d(1.0 / std::sqrt(ev(1)), 1.0 / std::sqrt(ev(0)));
}

KhachiyanResult minimum_volume_ellipse(const std::vector<Point>& points, const KhachiyanOptions& options) {
  const std::vector<Point> hull = convex_hull(points);
  if (hull.size() < 3 || polygon_area(hull) <= 0.0)
    throw Error(ErrorKind::DegenerateSection, "hull needs at least 3 non-collinear points");

  const auto n = static_cast<Eigen::Index>(hull.size());
  // Work relative to the centroid so the lifted system is well scaled.
  Point mean = Point::Zero();
  for (const Point& p : hull) mean += p;
  mean /= static_cast<double>(hull.size());
  double scale = 0.0;
  for (const Point& p : hull) scale = std::max(scale, (p - mean).norm());

  Eigen::Matrix<double, 3, Eigen::Dynamic> q(3, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Point p = (hull[static_cast<std::size_t>(i)] - mean) / scale;
    q.col(i) << p.x(), p.y(), 1.0;
  }
  Eigen::VectorXd u = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  KhachiyanResult result;
  constexpr double d = 2.0;
  for (; result.iterations < options.max_iters; ++result.iterations) {
    const Eigen::Matrix3d x = q * u.asDiagonal() * q.transpose();
    const Eigen::Matrix3d xinv = x.inverse();
    Eigen::Index j = 0;
    double mj = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double m = q.col(i).dot(xinv * q.col(i));
      if (m > mj) mj = m, j = i;
    }
    const double step = (mj - d - 1.0) / ((d + 1.0) * (mj - 1.0));
    Eigen::VectorXd next = (1.0 - step) * u;
    next(j) += step;
    const double change = (next - u).norm();
    u = std::move(next);
    if (change < options.tol) {
      result.converged = true;
      ++result.iterations;
      break;
    }
  }

  Eigen::Matrix<double, 2, Eigen::Dynamic> p = q.topRows(2);
  const Eigen::Vector2d c = p * u;
  const Mat2 cov = p * u.asDiagonal() * p.transpose() - c * c.transpose();
  Mat2 shape = cov.inverse() / d;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector2d z = p.col(i) - c;
    worst = std::max(worst, z.dot(shape * z));
  }
  if (worst > 1.0) shape /= worst;

  result.ellipse.center = mean + scale * c;
  result.ellipse.shape = shape / (scale * scale);
  return result;
}

SlidingFactor sliding_factor(const Mat2& shape, const Point& normal) {
  const Point nu = normal.normalized();
  SlidingFactor f;
  // Rows: tangent (nu rotated clockwise) and normal, a proper rotation.
  f.rotation << nu.y(), -nu.x(), nu.x(), nu.y();
  const Mat2 m = f.rotation * shape * f.rotation.transpose();
  f.tau = -m(0, 1) / m(0, 0);
  f.diagonal << m(0, 0), m(1, 1) - m(0, 1) * m(0, 1) / m(0, 0);
  Mat2 a;
  a << 1.0, -f.tau, 0.0, 1.0;
  f.sliding = f.rotation.transpose() * a * f.rotation;
  return f;
}

Dilation dilation_factors(const Ellipse& e, const std::vector<Point>& convex_polygon) {
  // Map to the frame where E is the unit disk.
  const Eigen::SelfAdjointEigenSolver<Mat2> eig(e.shape);
  const Mat2 root = eig.operatorSqrt();
  std::vector<Point> mapped;
  mapped.reserve(convex_polygon.size());
  Dilation out;
  for (const Point& p : convex_polygon) {
    mapped.push_back(root * (p - e.center));
    out.outer = std::max(out.outer, mapped.back().norm());
  }
  out.inner = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mapped.size(); ++i) {
    const Point& a = mapped[i];
    const Point& b = mapped[(i + 1) % mapped.size()];
    const double len = (b - a).norm();
    if (len == 0.0) continue;
    // Signed distance of the origin to the edge line (positive inside for CCW order).
    const double dist = (a.x() * b.y() - a.y() * b.x()) / len;
    out.inner = std::min(out.inner, dist);
  }
  out.inner = std::max(out.inner, 0.0);
  return out;
}

}  // namespace abreu
