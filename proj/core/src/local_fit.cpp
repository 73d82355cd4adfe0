#include "abreu/local_fit.hpp"

#include "abreu/error.hpp"

#include <cmath>
#include <sstream>

namespace abreu {

LocalFit local_quadratic_fit(const ScalarField& field, const Point& p, double radius_cells) {
  const Grid& grid = field.grid();
  const double h = grid.spacing();
  const int ci = static_cast<int>(std::lround(p.x() / h));
  const int cj = static_cast<int>(std::lround(p.y() / h));

  std::vector<Point> pts;
  std::vector<double> vals;
  for (double radius = radius_cells; radius <= 8.0 * radius_cells; radius *= 1.5) {
    pts.clear();
    vals.clear();
    const int reach = static_cast<int>(std::ceil(radius)) + 1;
    const double r2 = radius * radius * h * h;
    for (int dj = -reach; dj <= reach; ++dj) {
      for (int di = -reach; di <= reach; ++di) {
        const int idx = grid.index_of(ci + di, cj + dj);
        if (idx < 0) continue;
        const auto n = static_cast<std::size_t>(idx);
        if ((grid.node(n) - p).squaredNorm() <= r2) {
          pts.push_back(grid.node(n));
          vals.push_back(field[n]);
        }
        if (!field.has_boundary()) continue;
        for (int a = 0; a < kArmCount; ++a) {
          const ArmTarget& t = grid.arm(n, static_cast<Arm>(a));
          if (t.is_node()) continue;
          const Point& q = grid.hits()[static_cast<std::size_t>(t.hit)].point;
          if ((q - p).squaredNorm() <= r2) {
            pts.push_back(q);
            vals.push_back(field.boundary(static_cast<std::size_t>(t.hit)));
          }
        }
      }
    }
    if (pts.size() >= 12) break;
  }
  if (pts.size() < 6) {
    std::ostringstream msg;
    msg << "not enough data near (" << p.x() << ", " << p.y() << ") for a local fit";
    throw Error(ErrorKind::OutOfDomain, msg.str());
  }

  // Unknowns: c, gx, gy, hxx, hxy, hyy in scaled coordinates s = (q - p) / h.
  Eigen::MatrixXd a(static_cast<Eigen::Index>(pts.size()), 6);
  Eigen::VectorXd b(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const Point s = (pts[k] - p) / h;
    const auto r = static_cast<Eigen::Index>(k);
    a(r, 0) = 1.0;
    a(r, 1) = s.x();
    a(r, 2) = s.y();
    a(r, 3) = 0.5 * s.x() * s.x();
    a(r, 4) = s.x() * s.y();
    a(r, 5) = 0.5 * s.y() * s.y();
    b(r) = vals[k];
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
  LocalFit fit;
  fit.value = c(0);
  fit.gradient = Point(c(1), c(2)) / h;
  fit.hessian = Sym2{c(3), c(4), c(5)} * (1.0 / (h * h));
  fit.samples = static_cast<int>(pts.size());
  return fit;
}

double interpolate(const ScalarField& field, const Point& p) {
  const Domain& dom = field.grid().domain();
  // Tolerate points on the boundary up to the hit-bisection accuracy.
  if (dom.defining_function(p) > 1e-9) {
    std::ostringstream msg;
    msg << "interpolation point (" << p.x() << ", " << p.y() << ") lies outside the domain";
    throw Error(ErrorKind::OutOfDomain, msg.str());
  }
  const Grid& grid = field.grid();
  const double h = grid.spacing();
  const int idx = grid.index_of(static_cast<int>(std::lround(p.x() / h)), static_cast<int>(std::lround(p.y() / h)));
  if (idx >= 0 && (grid.node(static_cast<std::size_t>(idx)) - p).norm() < 1e-12 * h)
    return field[static_cast<std::size_t>(idx)];
  return local_quadratic_fit(field, p).value;
}

}  // namespace abreu
