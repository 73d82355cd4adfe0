#include "support.hpp"

#include "abreu/ellipsoid.hpp"

#include <random>

using namespace abreu;

namespace {

std::vector<Point> ellipse_points(double a, double b, double angle, const Point& c, int n) {
  std::vector<Point> pts;
  const Eigen::Rotation2Dd rot(angle);
  for (int k = 0; k < n; ++k) {
    const double t = 2 * M_PI * k / n;
    pts.push_back(c + rot * Point(a * std::cos(t), b * std::sin(t)));
  }
  return pts;
}

}  // namespace

TEST_CASE("convex hull and area") {
  const std::vector<Point> square = {Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1), Point(0.5, 0.5), Point(0.2, 0.7)};
  const std::vector<Point> hull = convex_hull(square);
  CHECK(hull.size() == 4);
  CHECK(polygon_area(hull) == doctest::Approx(1.0));
}

TEST_CASE("enclosing ellipse of points on an ellipse is that ellipse") {
  for (const auto& [a, b, angle] : {std::tuple{1.0, 1.0, 0.0}, std::tuple{2.0, 0.5, 0.3}, std::tuple{0.3, 0.1, -1.1}}) {
    const Point c(0.2, -0.4);
    const KhachiyanResult r = minimum_volume_ellipse(ellipse_points(a, b, angle, c, 200));
    CHECK(r.converged);
    CHECK(r.ellipse.area() == doctest::Approx(M_PI * a * b).epsilon(1e-3));
    CHECK(r.ellipse.center.x() == doctest::Approx(c.x()).epsilon(1e-4));
    CHECK(r.ellipse.center.y() == doctest::Approx(c.y()).epsilon(1e-4));
    const Eigen::Vector2d axes = r.ellipse.semi_axes();
    CHECK(axes(0) == doctest::Approx(std::min(a, b)).epsilon(1e-3));
    CHECK(axes(1) == doctest::Approx(std::max(a, b)).epsilon(1e-3));
  }
}

TEST_CASE("every input point is enclosed") {
  std::mt19937_64 rng(23);
  std::vector<Point> pts;
  for (int k = 0; k < 300; ++k)
    pts.emplace_back(static_cast<double>(rng() % 10000) / 5000.0 - 1.0, static_cast<double>(rng() % 10000) / 20000.0);
  const Ellipse e = minimum_volume_ellipse(pts).ellipse;
  for (const Point& p : pts) CHECK(e.contains(p, 1e-9));
}

TEST_CASE("collinear points are degenerate") {
  CHECK(test::kind_of([] { minimum_volume_ellipse({Point(0, 0), Point(1, 1), Point(2, 2)}); }) ==
        ErrorKind::DegenerateSection);
  CHECK(test::kind_of([] { minimum_volume_ellipse({Point(0, 0), Point(1, 1)}); }) == ErrorKind::DegenerateSection);
}

TEST_CASE("sliding factor recovers a shear and is unimodular") {
  // {x : |A x|^2 <= 1} has shape A^T A.
  Mat2 a;
  a << 1.0, 0.5, 0.0, 1.0;
  const SlidingFactor s = sliding_factor(a.transpose() * a, Point(0.0, 1.0));
  CHECK(std::abs(s.tau) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s.sliding.determinant() == doctest::Approx(1.0).epsilon(1e-14));
  const Mat2 back = s.rotation.transpose() * ([&] {
    Mat2 A;
    A << 1.0, -s.tau, 0.0, 1.0;
    return Mat2(A.transpose() * s.diagonal.asDiagonal() * A);
  })() * s.rotation;
  CHECK((back - a.transpose() * a).norm() <= 1e-12);
}

TEST_CASE("diagonal shapes in the normal frame have no slide") {
  Mat2 m;
  m << 4.0, 0.0, 0.0, 1.0;
  CHECK(sliding_factor(m, Point(0.0, 1.0)).tau == doctest::Approx(0.0).scale(1.0));
  CHECK(sliding_factor(m, Point(1.0, 0.0)).tau == doctest::Approx(0.0).scale(1.0));
  CHECK(sliding_factor(m, Point(0.0, -1.0)).sliding.determinant() == doctest::Approx(1.0));
}

TEST_CASE("dilation factors of an ellipse against itself and an inscribed square") {
  const Ellipse unit{Point::Zero(), Mat2::Identity()};
  const std::vector<Point> circle = convex_hull(ellipse_points(1.0, 1.0, 0.0, Point::Zero(), 720));
  const Dilation d = dilation_factors(unit, circle);
  CHECK(d.inner == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(d.outer == doctest::Approx(1.0).epsilon(1e-4));
  const std::vector<Point> square = {Point(1, 0), Point(0, 1), Point(-1, 0), Point(0, -1)};
  const Dilation q = dilation_factors(unit, square);
  CHECK(q.inner == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
  CHECK(q.outer == doctest::Approx(1.0).epsilon(1e-9));
}
