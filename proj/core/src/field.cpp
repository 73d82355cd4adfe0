#include "abreu/field.hpp"

#include "abreu/error.hpp"
#include "abreu/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace abreu {

ScalarField::ScalarField(GridPtr grid, std::vector<double> values, std::vector<double> boundary_values,
                         PointFunction trace)
    : grid_(std::move(grid)), values_(std::move(values)), boundary_(std::move(boundary_values)),
      trace_(std::move(trace)) {
  if (!grid_) throw Error(ErrorKind::InvalidState, "scalar field without grid");
  if (values_.size() != grid_->size()) {
    std::ostringstream msg;
    msg << "field has " << values_.size() << " values for " << grid_->size() << " nodes";
    throw Error(ErrorKind::InvalidState, msg.str());
  }
  if (!boundary_.empty() && boundary_.size() != grid_->hit_count())
    throw Error(ErrorKind::InvalidState, "boundary trace length does not match the number of boundary hits");
  for (double v : values_)
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidState, "field value is not finite");
  for (double v : boundary_)
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidState, "boundary value is not finite");
}

ScalarField ScalarField::sample(GridPtr grid, const PointFunction& fn) {
  std::vector<double> values(grid->size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = fn(grid->node(i));
  return with_trace(std::move(grid), std::move(values), fn);
}

ScalarField ScalarField::with_trace(GridPtr grid, std::vector<double> values, PointFunction trace) {
  std::vector<double> boundary;
  if (trace) {
    boundary.reserve(grid->hit_count());
    for (const auto& hit : grid->hits()) boundary.push_back(trace(hit.point));
  }
  return ScalarField(std::move(grid), std::move(values), std::move(boundary), std::move(trace));
}

double ScalarField::trace_at(const Point& p) const {
  if (!trace_) throw Error(ErrorKind::IncompleteData, "field has no boundary trace function");
  return trace_(p);
}

double ScalarField::arm_value(std::size_t node, Arm a) const {
  const ArmTarget& t = grid_->arm(node, a);
  if (t.is_node()) return values_[static_cast<std::size_t>(t.node)];
  if (boundary_.empty()) {
    std::ostringstream msg;
    msg << "boundary value needed at node " << node << " but the field has no boundary trace";
    throw Error(ErrorKind::IncompleteData, msg.str());
  }
  return boundary_[static_cast<std::size_t>(t.hit)];
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }
double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

SecondDifference second_difference(const Grid& grid, std::size_t node, Axis axis) {
  const Arm fa = forward_arm(axis), ba = backward_arm(axis);
  const ArmTarget& f = grid.arm(node, fa);
  const ArmTarget& b = grid.arm(node, ba);
  const double step = grid.step_length(fa);
  const double lf = step * f.fraction, lb = step * b.fraction;
  const double wf = 2.0 / (lf * (lf + lb));
  const double wb = 2.0 / (lb * (lf + lb));
  return {-(wf + wb), wf, wb, f, b};
}

double HessianField::min_eigenvalue() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& h : values) m = std::min(m, h.min_eigenvalue());
  return m;
}

namespace {

double apply(const ScalarField& field, std::size_t node, Axis axis) {
  const SecondDifference d = second_difference(field.grid(), node, axis);
  return d.center * field[node] + d.forward * field.arm_value(node, forward_arm(axis)) +
         d.backward * field.arm_value(node, backward_arm(axis));
}

}  // namespace

Sym2 discrete_hessian_at(const ScalarField& field, std::size_t node) {
  const double dxx = apply(field, node, Axis::X);
  const double dyy = apply(field, node, Axis::Y);
  const double dd = apply(field, node, Axis::Diagonal);
  const double da = apply(field, node, Axis::AntiDiagonal);
  return {dxx, 0.5 * (dd - da), dyy};
}

HessianField discrete_hessian(const ScalarField& field) {
  HessianField out{field.grid_ptr(), std::vector<Sym2>(field.size())};
  parallel_for(field.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t n = begin; n < end; ++n) out.values[n] = discrete_hessian_at(field, n);
  });
  return out;
}

Point discrete_gradient(const ScalarField& field, std::size_t node) {
  const Grid& grid = field.grid();
  Point g;
  for (int k = 0; k < 2; ++k) {
    const Axis axis = k == 0 ? Axis::X : Axis::Y;
    const Arm fa = forward_arm(axis), ba = backward_arm(axis);
    const double lf = grid.spacing() * grid.arm(node, fa).fraction;
    const double lb = grid.spacing() * grid.arm(node, ba).fraction;
    const double df = field.arm_value(node, fa) - field[node];
    const double db = field.arm_value(node, ba) - field[node];
    g[k] = (lb * lb * df - lf * lf * db) / (lf * lb * (lf + lb));
  }
  return g;
}

double clipped_square_area(const std::vector<Point>& clip, const Point& lo, const Point& hi) {
  std::vector<Point> poly{{lo.x(), lo.y()}, {hi.x(), lo.y()}, {hi.x(), hi.y()}, {lo.x(), hi.y()}};
  std::vector<Point> next;
  // Sutherland-Hodgman against each edge of the counter-clockwise clip polygon.
  for (std::size_t e = 0; e < clip.size() && !poly.empty(); ++e) {
    const Point& a = clip[e];
    const Point& b = clip[(e + 1) % clip.size()];
    const Point edge = b - a;
    auto side = [&](const Point& p) { return edge.x() * (p.y() - a.y()) - edge.y() * (p.x() - a.x()); };
    bool all_inside = true;
    for (const auto& p : poly)
      if (side(p) < 0.0) {
        all_inside = false;
        break;
      }
    if (all_inside) continue;
    next.clear();
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const Point& p = poly[k];
      const Point& q = poly[(k + 1) % poly.size()];
      const double sp = side(p), sq = side(q);
      if (sp >= 0.0) next.push_back(p);
      if ((sp >= 0.0) != (sq >= 0.0)) next.push_back(p + (sp / (sp - sq)) * (q - p));
    }
    poly.swap(next);
  }
  double area = 0.0;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const Point& p = poly[k];
    const Point& q = poly[(k + 1) % poly.size()];
    area += 0.5 * (p.x() * q.y() - q.x() * p.y());
  }
  return std::abs(area);
}

std::vector<double> quadrature_weights(const Grid& grid) {
  const double h = grid.spacing();
  const Domain& dom = grid.domain();
  const auto& clip = dom.boundary_polygon();
  std::vector<double> weights(grid.size(), h * h);

  auto cell_area = [&](int i, int j) {
    const Point lo((i - 0.5) * h, (j - 0.5) * h), hi((i + 0.5) * h, (j + 0.5) * h);
    bool all_in = true;
    for (const Point& c : {lo, hi, Point(lo.x(), hi.y()), Point(hi.x(), lo.y())})
      if (!dom.contains(c)) {
        all_in = false;
        break;
      }
    return all_in ? h * h : clipped_square_area(clip, lo, hi);
  };

  for (std::size_t n = 0; n < grid.size(); ++n) {
    if (grid.full_stencil(n)) continue;
    const auto [i, j] = grid.lattice(n);
    weights[n] = cell_area(i, j);
  }

  // Exterior lattice points adjacent to interior nodes: fold their clipped
  // cells into the nearest interior neighbour.
  std::vector<std::array<int, 2>> exterior;
  for (const auto& hit : grid.hits()) {
    const auto [i, j] = grid.lattice(static_cast<std::size_t>(hit.node));
    const auto [di, dj] = arm_offset(hit.arm);
    exterior.push_back({i + di, j + dj});
  }
  std::sort(exterior.begin(), exterior.end());
  exterior.erase(std::unique(exterior.begin(), exterior.end()), exterior.end());
  for (const auto& [i, j] : exterior) {
    const double area = cell_area(i, j);
    if (area <= 0.0) continue;
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int dj = -2; dj <= 2; ++dj)
      for (int di = -2; di <= 2; ++di) {
        const int idx = grid.index_of(i + di, j + dj);
        if (idx < 0) continue;
        const double d = std::hypot(di, dj);
        if (d < best_d) {
          best_d = d;
          best = idx;
        }
      }
    if (best >= 0) weights[static_cast<std::size_t>(best)] += area;
  }
  return weights;
}

double lp_norm(const ScalarField& f, double p) {
  const std::vector<double> weights = quadrature_weights(f.grid());
  double sum = 0.0;
  for (std::size_t n = 0; n < f.size(); ++n) sum += weights[n] * std::pow(std::abs(f[n]), p);
  return std::pow(sum, 1.0 / p);
}

}  // namespace abreu
