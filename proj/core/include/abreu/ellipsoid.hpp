#pragma once

#include "abreu/types.hpp"

#include <vector>

namespace abreu {

// Counter-clockwise convex hull without collinear points.
std::vector<Point> convex_hull(std::vector<Point> points);
double polygon_area(const std::vector<Point>& polygon);

// {z : (z - center)^T shape (z - center) <= 1}
struct Ellipse {
  Point center = Point::Zero();
  Mat2 shape = Mat2::Identity();

  double area() const;
  bool contains(const Point& p, double slack = 0.0) const;
  // Semi-axis lengths, ascending.
  Eigen::Vector2d semi_axes() const;
};

struct KhachiyanOptions {
  double tol = 1e-6;
  int max_iters = 10000;
};

struct KhachiyanResult {
  Ellipse ellipse;
  int iterations = 0;
  bool converged = false;
};

// Minimum-area enclosing ellipse by Khachiyan's barycentric iteration on the
// hull of `points`, scaled afterwards so that every point is enclosed.
// Throws ErrorKind::DegenerateSection for fewer than 3 non-collinear points.
KhachiyanResult minimum_volume_ellipse(const std::vector<Point>& points, const KhachiyanOptions& options = {});

// Factorization of a shape matrix in the frame where `normal` is the second
// axis: M' = R M R^T = A^T D A with A = [[1, -tau], [0, 1]] and D diagonal.
struct SlidingFactor {
  Mat2 rotation;  // R, rows are (tangent, normal)
  double tau = 0.0;
  Eigen::Vector2d diagonal;
  Mat2 sliding;  // A in the original frame, R^T A R; det = 1
};

SlidingFactor sliding_factor(const Mat2& shape, const Point& normal);

// Largest c_in and smallest c_out with c_in E within the polygon and the
// polygon within c_out E (both scaled about the ellipse center).
struct Dilation {
  double inner = 0.0;
  double outer = 0.0;
};
Dilation dilation_factors(const Ellipse& e, const std::vector<Point>& convex_polygon);

}  // namespace abreu
