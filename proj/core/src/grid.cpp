#include "abreu/grid.hpp"

#include "abreu/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace abreu {

std::array<int, 2> arm_offset(Arm arm) {
  switch (arm) {
    case Arm::East: return {1, 0};
    case Arm::West: return {-1, 0};
    case Arm::North: return {0, 1};
    case Arm::South: return {0, -1};
    case Arm::NorthEast: return {1, 1};
    case Arm::SouthWest: return {-1, -1};
    case Arm::SouthEast: return {1, -1};
    case Arm::NorthWest: return {-1, 1};
  }
  return {0, 0};
}

GridPtr Grid::build(std::shared_ptr<const Domain> domain, double spacing) {
  if (!domain) throw Error(ErrorKind::InvalidInput, "grid needs a domain");
  const Domain& dom = *domain;
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    std::ostringstream msg;
    msg << "grid spacing must be positive and finite (got " << spacing << ")";
    throw Error(ErrorKind::InvalidInput, msg.str());
  }

  auto grid = std::shared_ptr<Grid>(new Grid());
  grid->domain_ = std::move(domain);
  grid->h_ = spacing;

  double xmin = dom.center().x(), xmax = xmin, ymin = dom.center().y(), ymax = ymin;
  for (const auto& p : dom.boundary_polygon()) {
    xmin = std::min(xmin, p.x());
    xmax = std::max(xmax, p.x());
    ymin = std::min(ymin, p.y());
    ymax = std::max(ymax, p.y());
  }
  grid->i_min_ = static_cast<int>(std::floor(xmin / spacing)) - 1;
  grid->j_min_ = static_cast<int>(std::floor(ymin / spacing)) - 1;
  grid->width_ = static_cast<int>(std::ceil(xmax / spacing)) + 2 - grid->i_min_;
  grid->height_ = static_cast<int>(std::ceil(ymax / spacing)) + 2 - grid->j_min_;
  grid->index_map_.assign(static_cast<std::size_t>(grid->width_) * static_cast<std::size_t>(grid->height_), -1);

  auto lattice_point = [spacing](int i, int j) { return Point(i * spacing, j * spacing); };

  for (int j = grid->j_min_; j < grid->j_min_ + grid->height_; ++j) {
    for (int i = grid->i_min_; i < grid->i_min_ + grid->width_; ++i) {
      const Point p = lattice_point(i, j);
      if (dom.contains(p)) {
        grid->index_map_[static_cast<std::size_t>((j - grid->j_min_) * grid->width_ + (i - grid->i_min_))] =
            static_cast<int>(grid->nodes_.size());
        grid->nodes_.push_back({i, j});
        grid->points_.push_back(p);
      }
    }
  }
  if (grid->nodes_.empty()) throw Error(ErrorKind::EmptyGrid, "no lattice point lies strictly inside the domain");

  grid->arms_.resize(grid->nodes_.size() * kArmCount);
  for (std::size_t n = 0; n < grid->nodes_.size(); ++n) {
    const auto [i, j] = grid->nodes_[n];
    const Point p = grid->points_[n];
    for (int a = 0; a < kArmCount; ++a) {
      const auto [di, dj] = arm_offset(static_cast<Arm>(a));
      ArmTarget& target = grid->arms_[n * kArmCount + static_cast<std::size_t>(a)];
      const int neighbour = grid->index_of(i + di, j + dj);
      if (neighbour >= 0) {
        target.node = neighbour;
        target.fraction = 1.0;
        continue;
      }
      // Outside (or on) the boundary: bisect F along the lattice step.
      const Point q = lattice_point(i + di, j + dj);
      double lo = 0.0, hi = 1.0;
      while (hi - lo > kBoundaryHitTolerance) {
        const double mid = 0.5 * (lo + hi);
        (dom.defining_function(p + mid * (q - p)) < 0.0 ? lo : hi) = mid;
      }
      const double t = hi;
      target.hit = static_cast<int>(grid->hits_.size());
      target.fraction = t;
      grid->hits_.push_back({p + t * (q - p), static_cast<int>(n), static_cast<Arm>(a), t});
    }
  }
  return grid;
}

int Grid::index_of(int i, int j) const {
  const int li = i - i_min_, lj = j - j_min_;
  if (li < 0 || lj < 0 || li >= width_ || lj >= height_) return -1;
  return index_map_[static_cast<std::size_t>(lj * width_ + li)];
}

double Grid::step_length(Arm a) const {
  return static_cast<int>(a) >= static_cast<int>(Arm::NorthEast) ? h_ * std::sqrt(2.0) : h_;
}

Point Grid::arm_point(std::size_t node, Arm a) const {
  const ArmTarget& t = arm(node, a);
  return t.is_node() ? points_[static_cast<std::size_t>(t.node)] : hits_[static_cast<std::size_t>(t.hit)].point;
}

bool Grid::full_stencil(std::size_t node) const {
  for (int a = 0; a < kArmCount; ++a)
    if (!arms_[node * kArmCount + static_cast<std::size_t>(a)].is_node()) return false;
  return true;
}

std::size_t Grid::full_stencil_count() const {
  std::size_t count = 0;
  for (std::size_t n = 0; n < size(); ++n) count += full_stencil(n) ? 1 : 0;
  return count;
}

double Grid::min_fraction() const {
  double m = 1.0;
  for (const auto& hit : hits_) m = std::min(m, hit.fraction);
  return m;
}

}  // namespace abreu
