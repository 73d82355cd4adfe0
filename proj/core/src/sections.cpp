#include "abreu/sections.hpp"

#include "abreu/error.hpp"
#include "abreu/local_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace abreu {
namespace {

constexpr double kOnBoundary = 1e-9;

struct CenterData {
  double value;
  Point gradient;
  double max_curvature;
};

int node_at(const Grid& grid, const Point& p) {
  const double h = grid.spacing();
  const int i = static_cast<int>(std::lround(p.x() / h));
  const int j = static_cast<int>(std::lround(p.y() / h));
  if (std::abs(p.x() - i * h) > 1e-12 * h || std::abs(p.y() - j * h) > 1e-12 * h) return -1;
  return grid.index_of(i, j);
}

CenterData center_data(const ScalarField& u, const Point& x, bool on_boundary) {
  const int node = on_boundary ? -1 : node_at(u.grid(), x);
  if (node >= 0) {
    const auto n = static_cast<std::size_t>(node);
    return {u[n], discrete_gradient(u, n), discrete_hessian_at(u, n).max_eigenvalue()};
  }
  const LocalFit fit = local_quadratic_fit(u, x);
  const double value = (on_boundary && u.has_trace()) ? u.trace_at(x) : fit.value;
  return {value, fit.gradient, fit.hessian.max_eigenvalue()};
}

double target_value(const ScalarField& u, const ArmTarget& t) {
  return t.is_node() ? u[static_cast<std::size_t>(t.node)] : u.boundary(static_cast<std::size_t>(t.hit));
}

Arm opposite(Arm a) { return static_cast<Arm>(static_cast<int>(a) ^ 1); }

// Root in (0, lf] of the quadratic through (-lb, sb), (0, s0), (lf, sf) with s0 < 0 <= sf.
double crossing(double sb, double s0, double sf, double lb, double lf) {
  const double linear = lf * s0 / (s0 - sf);
  if (!std::isfinite(sb)) return linear;
  const double b = ((sf - s0) / lf - (s0 - sb) / lb) / (lf + lb);
  const double a = (sf - s0) / lf - b * lf;
  if (std::abs(b) * lf <= 1e-14 * std::abs(a)) return linear;
  const double disc = a * a - 4.0 * b * s0;
  if (disc < 0.0) return linear;
  const double qq = -0.5 * (a + std::copysign(std::sqrt(disc), a));
  for (double t : {qq / b, s0 / qq})
    if (std::isfinite(t) && t > 0.0 && t <= lf * (1.0 + 1e-12)) return std::min(t, lf);
  return linear;
}

}  // namespace

Section extract_section(const ScalarField& u, const Point& x, double height) {
  const Grid& grid = u.grid();
  const Domain& dom = grid.domain();
  if (dom.defining_function(x) > kOnBoundary) {
    std::ostringstream msg;
    msg << "section center (" << x.x() << ", " << x.y() << ") lies outside the domain";
    throw Error(ErrorKind::OutOfDomain, msg.str());
  }
  if (!(height > 0.0)) throw Error(ErrorKind::InvalidInput, "section height must be positive");

  Section s;
  s.center = x;
  s.height = height;
  s.boundary_center = dom.distance_to_boundary(x) < kOnBoundary;
  s.normal = s.boundary_center ? dom.inner_normal(x) : dom.inner_normal(dom.closest_boundary_point(x));
  const CenterData c = center_data(u, x, s.boundary_center);
  s.center_value = c.value;
  s.gradient = c.gradient;
  s.floor = 4.0 * grid.spacing() * grid.spacing() * std::max(c.max_curvature, 0.0);
  s.below_floor = height <= s.floor;

  auto excess = [&](const Point& y, double v) { return v - c.value - c.gradient.dot(y - x) - height; };
  std::vector<double> node_excess(grid.size());
  for (std::size_t n = 0; n < grid.size(); ++n) node_excess[n] = excess(grid.node(n), u[n]);
  auto target_excess = [&](const ArmTarget& t) -> double {
    if (t.is_node()) return node_excess[static_cast<std::size_t>(t.node)];
    if (!u.has_boundary()) return std::numeric_limits<double>::quiet_NaN();
    return excess(grid.hits()[static_cast<std::size_t>(t.hit)].point, target_value(u, t));
  };

  std::vector<Point> points;
  for (std::size_t n = 0; n < grid.size(); ++n) {
    if (!(node_excess[n] < 0.0)) continue;
    s.nodes.push_back(static_cast<int>(n));
    const Point& p = grid.node(n);
    points.push_back(p);
    for (int k = 0; k < kArmCount; ++k) {
      const Arm arm = static_cast<Arm>(k);
      const ArmTarget& t = grid.arm(n, arm);
      const double sf = target_excess(t);
      if (std::isnan(sf)) continue;
      const Point end = grid.arm_point(n, arm);
      if (sf < 0.0) {
        if (!t.is_node()) points.push_back(end);
        continue;
      }
      const ArmTarget& back = grid.arm(n, opposite(arm));
      const double lf = t.fraction * grid.step_length(arm);
      const double lb = back.fraction * grid.step_length(arm);
      const double sb = target_excess(back);
      const double tc = crossing(sb, node_excess[n], sf, lb, lf);
      points.push_back(p + (tc / lf) * (end - p));
    }
  }
  s.hull = convex_hull(std::move(points));
  return s;
}

bool grid_convex(const Section& section, const Grid& grid) {
  std::vector<char> inside(grid.size(), 0);
  for (int n : section.nodes) inside[static_cast<std::size_t>(n)] = 1;
  // Run starts per line; a line is identified by its axis and intercept.
  std::map<std::pair<int, int>, int> starts;
  constexpr std::array<std::array<int, 2>, 4> step{{{1, 0}, {0, 1}, {1, 1}, {1, -1}}};
  for (int n : section.nodes) {
    const auto [i, j] = grid.lattice(static_cast<std::size_t>(n));
    for (int axis = 0; axis < 4; ++axis) {
      const int prev = grid.index_of(i - step[axis][0], j - step[axis][1]);
      if (prev >= 0 && inside[static_cast<std::size_t>(prev)]) continue;
      const int line = axis == 0 ? j : axis == 1 ? i : axis == 2 ? j - i : i + j;
      if (++starts[{axis, line}] > 1) return false;
    }
  }
  return true;
}

EllipsoidFit fit_john_ellipsoid(const Section& section, const FitOptions& options) {
  EllipsoidFit fit;
  fit.centered = options.centered.value_or(section.boundary_center);
  std::vector<Point> points = section.hull;
  if (fit.centered)
    for (const Point& p : section.hull) points.push_back(2.0 * section.center - p);
  if (points.size() < 3) throw Error(ErrorKind::DegenerateSection, "section hull has fewer than 3 vertices");
  const KhachiyanResult k = minimum_volume_ellipse(points, options.khachiyan);
  fit.ellipse = k.ellipse;
  fit.khachiyan_iterations = k.iterations;
  fit.volume = k.ellipse.area();
  const SlidingFactor sf = sliding_factor(k.ellipse.shape, section.normal);
  fit.sliding = sf.sliding;
  fit.tau = sf.tau;
  fit.dilation = dilation_factors(k.ellipse, convex_hull(std::move(points)));
  return fit;
}

MaximalSection maximal_height(const ScalarField& u, const Point& y, double rel_tol) {
  const Grid& grid = u.grid();
  const Domain& dom = grid.domain();
  if (!dom.contains(y)) throw Error(ErrorKind::OutOfDomain, "maximal section center must be interior");
  MaximalSection out;
  out.center = y;
  out.dist = dom.distance_to_boundary(y);
  if (out.dist < grid.spacing()) {
    std::ostringstream msg;
    msg << "point (" << y.x() << ", " << y.y() << ") is within one grid cell of the boundary";
    throw Error(ErrorKind::TooCloseToBoundary, msg.str());
  }
  if (!u.has_boundary()) throw Error(ErrorKind::IncompleteData, "maximal height needs boundary values of u");

  const CenterData c = center_data(u, y, false);
  auto lifted = [&](const Point& z, double v) { return v - c.value - c.gradient.dot(z - y); };
  std::vector<double> hit_value(grid.hit_count()), owner_value(grid.hit_count());
  double hi = 0.0;
  for (std::size_t k = 0; k < grid.hit_count(); ++k) {
    const BoundaryHit& hit = grid.hits()[k];
    hit_value[k] = lifted(hit.point, u.boundary(k));
    owner_value[k] = lifted(grid.node(static_cast<std::size_t>(hit.node)), u[static_cast<std::size_t>(hit.node)]);
    hi = std::max(hi, hit_value[k]);
  }
  auto contained = [&](double h) {
    for (std::size_t k = 0; k < hit_value.size(); ++k)
      if (owner_value[k] < h && hit_value[k] < h) return false;
    return true;
  };
  if (!(hi > 0.0)) throw Error(ErrorKind::ConvexityViolation, "u lies below its tangent plane on the boundary");
  for (int i = 0; contained(hi) && i < 64; ++i) hi *= 2.0;
  double lo = 0.0;
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    (contained(mid) ? lo : hi) = mid;
    ++out.iterations;
  }
  out.hbar = 0.5 * (lo + hi);

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < hit_value.size(); ++k) {
    if (owner_value[k] < hi && hit_value[k] < hi && hit_value[k] < best) {
      best = hit_value[k];
      out.touching = grid.hits()[k].point;
    }
  }
  return out;
}

DistanceRatios section_distance_ratios(const ScalarField& u, std::size_t count, std::uint64_t seed) {
  const Grid& grid = u.grid();
  const Domain& dom = grid.domain();
  std::vector<std::size_t> pool;
  for (std::size_t n = 0; n < grid.size(); ++n)
    if (dom.distance_to_boundary(grid.node(n)) >= 1.5 * grid.spacing()) pool.push_back(n);
  if (pool.size() < count) {
    std::ostringstream msg;
    msg << "only " << pool.size() << " nodes are far enough from the boundary for " << count << " samples";
    throw Error(ErrorKind::InsufficientResolution, msg.str());
  }
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < count; ++i) std::swap(pool[i], pool[i + rng() % (pool.size() - i)]);
  pool.resize(count);
  std::sort(pool.begin(), pool.end());

  DistanceRatios out;
  out.lower_min = out.upper_min = std::numeric_limits<double>::infinity();
  for (std::size_t n : pool) {
    const MaximalSection m = maximal_height(u, grid.node(n));
    const double root = std::sqrt(m.hbar);
    out.points.push_back(grid.node(n));
    out.lower.push_back(root / m.dist);
    out.upper.push_back(m.dist * root);
    out.lower_min = std::min(out.lower_min, out.lower.back());
    out.lower_max = std::max(out.lower_max, out.lower.back());
    out.upper_min = std::min(out.upper_min, out.upper.back());
    out.upper_max = std::max(out.upper_max, out.upper.back());
  }
  out.k_fit = pool.empty() ? 0.0 : std::max(out.lower_max, 1.0 / out.lower_min);
  return out;
}

SeparationBounds quadratic_separation(const ScalarField& u, const std::vector<Point>& boundary_samples) {
  const double h = u.grid().spacing();
  std::vector<double> value(boundary_samples.size());
  std::vector<Point> slope(boundary_samples.size());
  for (std::size_t i = 0; i < boundary_samples.size(); ++i) {
    const CenterData c = center_data(u, boundary_samples[i], true);
    value[i] = c.value;
    slope[i] = c.gradient;
  }
  SeparationBounds out;
  out.rho_low = std::numeric_limits<double>::infinity();
  out.rho_high = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < boundary_samples.size(); ++a) {
    for (std::size_t b = 0; b < boundary_samples.size(); ++b) {
      const Point d = boundary_samples[a] - boundary_samples[b];
      const double d2 = d.squaredNorm();
      if (d2 <= 1e-24) continue;
      const double sep = value[a] - value[b] - slope[b].dot(d);
      if (sep < -10.0 * h * h) {
        std::ostringstream msg;
        msg << "boundary trace is not convex: separation " << sep << " between samples " << b << " and " << a;
        throw Error(ErrorKind::ConvexityViolation, msg.str());
      }
      out.rho_low = std::min(out.rho_low, sep / d2);
      out.rho_high = std::max(out.rho_high, sep / d2);
      ++out.pairs;
    }
  }
  if (out.pairs == 0) throw Error(ErrorKind::InsufficientData, "quadratic separation needs two distinct samples");
  return out;
}

LocalizationScan localization_scan(const ScalarField& u, const Point& x0, const std::vector<double>& heights,
                                   const FitOptions& options) {
  const Domain& dom = u.grid().domain();
  if (dom.distance_to_boundary(x0) > kOnBoundary)
    throw Error(ErrorKind::InvalidInput, "localization scan needs a boundary point");
  LocalizationScan scan;
  scan.x0 = x0;

  // Separation precheck against a ring of boundary samples.
  std::vector<Point> samples{x0};
  for (const Point& p : dom.boundary_samples(16)) samples.push_back(p);
  const SeparationBounds sep = quadratic_separation(u, samples);
  if (!(sep.rho_low > 0.0)) {
    std::ostringstream msg;
    msg << "quadratic separation fails near (" << x0.x() << ", " << x0.y() << "), rho_low = " << sep.rho_low;
    throw Error(ErrorKind::ConvexityViolation, msg.str());
  }

  for (double h : heights) {
    const Section s = extract_section(u, x0, h);
    if (s.nodes.size() < kMinSectionNodes) {
      scan.dropped.push_back(h);
      std::ostringstream msg;
      msg << "section at height " << h << " has " << s.nodes.size() << " nodes; dropped";
      scan.warnings.push_back(msg.str());
      continue;
    }
    const EllipsoidFit fit = fit_john_ellipsoid(s, options);
    scan.rows.push_back({h, fit.tau, fit.volume / (std::numbers::pi * h), fit.dilation.inner, fit.dilation.outer,
                         s.nodes.size()});
  }

  if (scan.rows.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(scan.rows.size());
    for (const ScanRow& r : scan.rows) {
      const double x = std::abs(std::log(r.h)), y = std::abs(r.tau);
      sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    const double den = m * sxx - sx * sx;
    scan.c1 = den > 0.0 ? (m * sxy - sx * sy) / den : 0.0;
    scan.c0 = (sy - scan.c1 * sx) / m;
    double ss_res = 0, ss_tot = 0;
    for (const ScanRow& r : scan.rows) {
      const double y = std::abs(r.tau);
      const double e = y - scan.c0 - scan.c1 * std::abs(std::log(r.h));
      ss_res += e * e;
      ss_tot += (y - sy / m) * (y - sy / m);
    }
    scan.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  }
  return scan;
}

NormalizedSection normalize_section(const ScalarField& u, const Point& y) {
  NormalizedSection out;
  out.maximal = maximal_height(u, y);
  const double hbar = out.maximal.hbar;
  const Domain& dom = u.grid().domain();

  Section s = extract_section(u, y, hbar);
  s.normal = dom.inner_normal(out.maximal.touching);
  out.fit = fit_john_ellipsoid(s, FitOptions{.khachiyan = {}, .centered = false});
  const SlidingFactor sf = sliding_factor(out.fit.ellipse.shape, s.normal);
  Mat2 shear;
  shear << 1.0, -sf.tau, 0.0, 1.0;
  const Mat2 normalizer = Eigen::Vector2d(sf.diagonal.cwiseSqrt()).asDiagonal() * shear /
                          std::pow(sf.diagonal(0) * sf.diagonal(1), 0.25);
  out.offset = y;
  out.linear = std::sqrt(hbar) * sf.rotation.transpose() * normalizer.inverse();
  const Eigen::JacobiSVD<Mat2> svd_a(out.fit.sliding);
  out.sliding_condition = svd_a.singularValues()(0) / svd_a.singularValues()(1);

  const CenterData c = center_data(u, y, false);
  const Mat2 lin = out.linear;
  auto source = u.grid().domain_ptr();
  LevelSetFunction fn{
      [source, y, lin](const Point& p) { return source->defining_function(y + lin * p); },
      [source, y, lin](const Point& p) -> Point { return lin.transpose() * source->defining_gradient(y + lin * p); },
      [source, y, lin](const Point& p) -> Mat2 {
        return lin.transpose() * source->defining_hessian(y + lin * p) * lin;
      }};
  auto domain = std::make_shared<const Domain>(Domain::level_set(std::move(fn), Point::Zero(), "normalized"));
  const double spacing = u.grid().spacing() / Eigen::JacobiSVD<Mat2>(lin).singularValues()(0);
  const GridPtr grid = Grid::build(domain, spacing);

  auto lift = [c, y, hbar](const Point& z, double v) { return (v - c.value - c.gradient.dot(z - y)) / hbar; };
  std::vector<double> values(grid->size());
  for (std::size_t n = 0; n < grid->size(); ++n) {
    const Point z = y + lin * grid->node(n);
    values[n] = lift(z, interpolate(u, z));
  }
  PointFunction trace = [u, lin, y, lift](const Point& p) {
    const Point z = y + lin * p;
    return lift(z, u.has_trace() ? u.trace_at(z) : interpolate(u, z));
  };
  out.u = ScalarField::with_trace(grid, std::move(values), std::move(trace));

  const LocalFit origin = local_quadratic_fit(out.u, Point::Zero());
  out.value_at_origin = origin.value;
  out.gradient_at_origin = origin.gradient;
  const Section unit = extract_section(out.u, Point::Zero(), 1.0);
  const Dilation d = dilation_factors(Ellipse{Point::Zero(), Mat2::Identity()}, unit.hull);
  out.c_inner = d.inner;
  out.c_outer = d.outer;
  return out;
}

}  // namespace abreu
