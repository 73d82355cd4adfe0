#pragma once

#include "abreu/domain.hpp"

#include <array>
#include <memory>
#include <span>
#include <vector>

namespace abreu {

// Lattice directions from a node. Opposite directions are paired
// (East/West, North/South, NorthEast/SouthWest, SouthEast/NorthWest) so that
// each pair spans one line through the node.
enum class Arm : int { East = 0, West, North, South, NorthEast, SouthWest, SouthEast, NorthWest };
inline constexpr int kArmCount = 8;

// The four lines through a node: x, y and the two diagonals.
enum class Axis : int { X = 0, Y, Diagonal, AntiDiagonal };
inline constexpr int kAxisCount = 4;

constexpr Arm forward_arm(Axis axis) { return static_cast<Arm>(2 * static_cast<int>(axis)); }
constexpr Arm backward_arm(Axis axis) { return static_cast<Arm>(2 * static_cast<int>(axis) + 1); }
std::array<int, 2> arm_offset(Arm arm);

// Where an arm ends: a neighbouring interior node, or a boundary hit at
// `fraction` of the lattice step (fraction in (0, 1]).
struct ArmTarget {
  int node = -1;
  int hit = -1;
  double fraction = 1.0;

  bool is_node() const noexcept { return node >= 0; }
};

struct BoundaryHit {
  Point point;
  int node;
  Arm arm;
  double fraction;
};

// Uniform lattice {(i h, j h)} clipped to the open domain, with cut-cell
// boundary intersections along all four lines through every node.
class Grid {
 public:
  // Throws ErrorKind::InvalidInput for a non-positive spacing and
  // ErrorKind::EmptyGrid when no lattice point is inside.
  static std::shared_ptr<const Grid> build(std::shared_ptr<const Domain> domain, double spacing);

  const Domain& domain() const noexcept { return *domain_; }
  std::shared_ptr<const Domain> domain_ptr() const noexcept { return domain_; }
  double spacing() const noexcept { return h_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  const Point& node(std::size_t i) const { return points_[i]; }
  std::array<int, 2> lattice(std::size_t i) const { return nodes_[i]; }
  // Linear index of lattice point (i, j), or -1 if it is not an interior node.
  int index_of(int i, int j) const;

  const ArmTarget& arm(std::size_t node, Arm a) const { return arms_[node * kArmCount + static_cast<std::size_t>(a)]; }
  std::span<const BoundaryHit> hits() const noexcept { return hits_; }
  std::size_t hit_count() const noexcept { return hits_.size(); }

  // Length of the full lattice step along an arm (h or h*sqrt(2)).
  double step_length(Arm a) const;
  // Point reached by an arm (neighbour node or boundary hit).
  Point arm_point(std::size_t node, Arm a) const;
  // All eight arms end at interior nodes.
  bool full_stencil(std::size_t node) const;
  std::size_t full_stencil_count() const;
  double min_fraction() const;

 private:
  Grid() = default;

  std::shared_ptr<const Domain> domain_;
  double h_ = 0.0;
  int i_min_ = 0, j_min_ = 0, width_ = 0, height_ = 0;
  std::vector<int> index_map_;
  std::vector<std::array<int, 2>> nodes_;
  std::vector<Point> points_;
  std::vector<ArmTarget> arms_;
  std::vector<BoundaryHit> hits_;
};

using GridPtr = std::shared_ptr<const Grid>;

// Bisection tolerance for boundary intersections along a lattice step.
inline constexpr double kBoundaryHitTolerance = 1e-12;

}  // namespace abreu
