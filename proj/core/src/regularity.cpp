#include "abreu/regularity.hpp"

#include "abreu/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>

namespace abreu {
namespace {

struct Regression {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

Regression log_log_fit(const std::vector<HolderBin>& bins) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0, m = 0;
  for (const HolderBin& b : bins) {
    const double x = std::log(b.distance), y = std::log(b.oscillation);
    sx += x, sy += y, sxx += x * x, sxy += x * y, m += 1;
  }
  Regression r;
  const double den = m * sxx - sx * sx;
  r.slope = den > 0.0 ? (m * sxy - sx * sy) / den : 0.0;
  r.intercept = (sy - r.slope * sx) / m;
  double ss_res = 0, ss_tot = 0;
  for (const HolderBin& b : bins) {
    const double x = std::log(b.distance), y = std::log(b.oscillation);
    const double e = y - r.intercept - r.slope * x;
    ss_res += e * e;
    ss_tot += (y - sy / m) * (y - sy / m);
  }
  r.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
  return r;
}

// Deterministic subset of [0, n) of size k (partial Fisher-Yates).
std::vector<std::size_t> subsample(std::size_t n, std::size_t k, std::mt19937_64& rng) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  if (k >= n) return idx;
  for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng() % (n - i)]);
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

namespace {

// Oscillations at rounding level carry no regularity information.
double rounding_noise(const ScalarField& f) {
  return 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, f.max_abs());
}

}  // namespace

HolderEstimate fit_holder_exponent(const ScalarField& field, const HolderOptions& options) {
  const Grid& grid = field.grid();
  const Domain& dom = grid.domain();
  const double h = grid.spacing();
  const double max_d = options.max_scale_fraction * dom.diameter();

  std::vector<int> scales;
  int m = 1;
  while (m < options.min_scale_cells) m *= 2;
  for (; m * h <= max_d * (1.0 + 1e-12); m *= 2) scales.push_back(m);
  if (scales.empty()) throw Error(ErrorKind::InsufficientData, "grid too coarse for any Holder scale");
  const double longest = scales.back() * h * (1.0 + 1e-12);
  const int min_bin = static_cast<int>(std::lround(std::log2(scales.front())));

  std::vector<std::size_t> anchors;
  if (options.region == HolderRegion::Global) {
    anchors.resize(grid.size());
    for (std::size_t n = 0; n < grid.size(); ++n) anchors[n] = n;
  } else {
    const double margin = options.interior_margin > 0.0 ? options.interior_margin : dom.diameter() / 8.0;
    for (std::size_t n = 0; n < grid.size(); ++n)
      if (dom.distance_to_boundary(grid.node(n)) >= margin) anchors.push_back(n);
  }
  std::vector<char> eligible(grid.size(), 0);
  for (std::size_t n : anchors) eligible[n] = 1;

  std::map<int, HolderBin> bins;
  std::size_t samples = 0;
  auto record = [&](double d, double osc) {
    if (d > longest) return;
    const int b = std::max(min_bin, static_cast<int>(std::ceil(std::log2(d / h) - 1e-9)));
    HolderBin& bin = bins[b];
    bin.distance = std::ldexp(h, b);
    bin.oscillation = std::max(bin.oscillation, osc);
    ++bin.pairs;
    ++samples;
  };

  constexpr std::array<std::array<int, 2>, 4> dirs{{{1, 0}, {0, 1}, {1, 1}, {1, -1}}};
  std::mt19937_64 rng(options.seed);
  const bool with_hits = options.region == HolderRegion::Global && field.has_boundary();
  const std::size_t streams = scales.size() * (dirs.size() + (with_hits ? 1 : 0));
  const std::size_t per_stream = std::max<std::size_t>(1, options.pair_budget / streams);

  for (int s : scales) {
    for (const auto& dir : dirs) {
      const double d = s * h * std::hypot(dir[0], dir[1]);
      for (std::size_t a : subsample(anchors.size(), per_stream, rng)) {
        const std::size_t n = anchors[a];
        const auto [i, j] = grid.lattice(n);
        const int t = grid.index_of(i + s * dir[0], j + s * dir[1]);
        if (t < 0 || !eligible[static_cast<std::size_t>(t)]) continue;
        record(d, std::abs(field[n] - field[static_cast<std::size_t>(t)]));
      }
    }
    if (!with_hits) continue;
    // Node-to-hit pairs reach the boundary trace.
    for (std::size_t k : subsample(grid.hit_count(), per_stream, rng)) {
      const BoundaryHit& hit = grid.hits()[k];
      const auto off = arm_offset(hit.arm);
      const auto [i, j] = grid.lattice(static_cast<std::size_t>(hit.node));
      const int t = grid.index_of(i - (s - 1) * off[0], j - (s - 1) * off[1]);
      if (t < 0) continue;
      const double d = ((s - 1) + hit.fraction) * grid.step_length(hit.arm);
      record(d, std::abs(field.boundary(k) - field[static_cast<std::size_t>(t)]));
    }
  }

  if (samples < 200) {
    std::ostringstream msg;
    msg << "only " << samples << " usable pairs for the Holder fit (need 200)";
    throw Error(ErrorKind::InsufficientData, msg.str());
  }
  HolderEstimate est;
  est.samples = samples;
  for (const auto& [b, bin] : bins) est.bins.push_back(bin);
  const double noise = rounding_noise(field);
  std::vector<HolderBin> positive;
  for (const HolderBin& b : est.bins)
    if (b.oscillation > noise) positive.push_back(b);
  if (positive.empty()) {
    est.degenerate = true;
    est.exponent = std::numeric_limits<double>::quiet_NaN();
    return est;
  }
  if (positive.size() < 2) throw Error(ErrorKind::InsufficientData, "Holder fit needs two populated scales");
  const Regression r = log_log_fit(positive);
  est.exponent = std::min(r.slope, 1.05);
  est.constant = std::exp(r.intercept);
  est.r_squared = r.r_squared;
  return est;
}

double boundary_threshold(double alpha) { return alpha / (alpha + 2.0); }

BoundaryHolderResult boundary_holder_check(const ScalarField& v, double alpha,
                                           const std::vector<Point>& boundary_samples) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorKind::InvalidInput, "boundary Holder exponent must lie in (0, 1]");
  if (!v.has_trace()) throw Error(ErrorKind::IncompleteData, "boundary check needs the boundary trace of v");
  const Grid& grid = v.grid();
  const double h = grid.spacing();
  const double max_r = grid.domain().diameter() / 8.0;
  const int top = static_cast<int>(std::floor(std::log2(max_r / h) + 1e-9));
  if (top < 2) throw Error(ErrorKind::InsufficientResolution, "grid too coarse for boundary shells");
  std::vector<HolderBin> shells(static_cast<std::size_t>(top + 1));
  for (int k = 0; k <= top; ++k) shells[static_cast<std::size_t>(k)].distance = std::ldexp(h, k);

  const int reach = static_cast<int>(std::ceil(max_r / h)) + 1;
  for (const Point& x0 : boundary_samples) {
    const double v0 = v.trace_at(x0);
    const int ci = static_cast<int>(std::lround(x0.x() / h)), cj = static_cast<int>(std::lround(x0.y() / h));
    for (int dj = -reach; dj <= reach; ++dj) {
      for (int di = -reach; di <= reach; ++di) {
        const int n = grid.index_of(ci + di, cj + dj);
        if (n < 0) continue;
        const double d = (grid.node(static_cast<std::size_t>(n)) - x0).norm();
        const int b = std::max(0, static_cast<int>(std::ceil(std::log2(d / h) - 1e-9)));
        if (b > top) continue;
        HolderBin& s = shells[static_cast<std::size_t>(b)];
        s.oscillation = std::max(s.oscillation, std::abs(v[static_cast<std::size_t>(n)] - v0));
        ++s.pairs;
      }
    }
  }

  BoundaryHolderResult out;
  out.threshold = boundary_threshold(alpha);
  out.shells = shells;
  std::vector<HolderBin> populated, positive;
  for (const HolderBin& s : shells) {
    if (s.pairs == 0) continue;
    populated.push_back(s);
    if (s.oscillation > rounding_noise(v)) positive.push_back(s);
  }
  if (populated.size() < 3) throw Error(ErrorKind::InsufficientResolution, "fewer than 3 populated boundary shells");
  out.exponent = positive.size() >= 2 ? std::min(log_log_fit(positive).slope, 1.05) : 1.05;
  out.pass = out.exponent >= out.threshold - 0.05;
  return out;
}

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skip: return "skip";
  }
  return "skip";
}

namespace {

void boundary_extremes(const Grid& grid, const PointFunction& psi, const std::vector<Point>& samples, double& lo,
                       double& hi) {
  lo = std::numeric_limits<double>::infinity();
  hi = -std::numeric_limits<double>::infinity();
  auto take = [&](const Point& p) {
    const double v = psi(p);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  };
  for (const BoundaryHit& hit : grid.hits()) take(hit.point);
  for (const Point& p : samples) take(p);
}

}  // namespace

MinPrincipleResult min_principle_check(const ScalarField& w, const PointFunction& psi, const ScalarField& f,
                                       const std::vector<Point>& boundary_samples) {
  MinPrincipleResult out;
  const double h = w.grid().spacing();
  out.tolerance = 10.0 * h * h;
  out.min_interior = w.min();
  double hi = 0.0;
  boundary_extremes(w.grid(), psi, boundary_samples, out.min_boundary, hi);
  out.margin = out.min_interior - out.min_boundary;
  out.hypothesis_violated = f.max() > 0.0;
  if (out.hypothesis_violated) {
    out.status = CheckStatus::Skip;
    return out;
  }
  out.status = out.margin >= -out.tolerance ? CheckStatus::Pass : CheckStatus::Fail;
  return out;
}

double abp_exponent(double theta) { return 1.0 / (2.0 * (1.0 - theta)); }

BoundsReport abp_chain_report(const ScalarField& w, const ScalarField& f, const PointFunction& psi, double theta,
                              double p, const std::vector<Point>& boundary_samples) {
  BoundsReport r;
  r.abp_exponent = abp_exponent(theta);
  r.min_w = w.min();
  r.max_w = w.max();
  for (double b : w.boundary_values()) r.max_w = std::max(r.max_w, b), r.min_w = std::min(r.min_w, b);
  boundary_extremes(w.grid(), psi, boundary_samples, r.min_boundary_psi, r.max_boundary_psi);

  std::vector<double> weighted(f.size());
  for (std::size_t n = 0; n < f.size(); ++n) weighted[n] = f[n] * std::pow(std::abs(w[n]), r.abp_exponent);
  r.weighted_forcing = lp_norm(ScalarField(f.grid_ptr(), std::move(weighted)), 2.0);
  r.f_l2 = lp_norm(f, 2.0);
  r.f_lp = lp_norm(f, p);

  const double w_inf = std::max(std::abs(r.min_w), std::abs(r.max_w));
  const double psi_inf = std::max(std::abs(r.min_boundary_psi), std::abs(r.max_boundary_psi));
  r.fitted_constant = r.weighted_forcing > 0.0 ? std::max(0.0, w_inf - psi_inf) / r.weighted_forcing : 0.0;
  const bool holder_step = r.weighted_forcing <= std::pow(w_inf, r.abp_exponent) * r.f_l2 * (1.0 + 1e-12);
  r.chain_holds = r.abp_exponent < 1.0 && std::isfinite(r.fitted_constant) && holder_step &&
                  (r.weighted_forcing > 0.0 || w_inf <= psi_inf * (1.0 + 1e-9));
  return r;
}

namespace {

constexpr std::array<std::array<double, 5>, 5> kCentered{{
    {0.0, 0.0, 1.0, 0.0, 0.0},
    {0.0, -0.5, 0.0, 0.5, 0.0},
    {0.0, 1.0, -2.0, 1.0, 0.0},
    {-0.5, 1.0, 0.0, -1.0, 0.5},
    {1.0, -4.0, 6.0, -4.0, 1.0},
}};

}  // namespace

double centered_difference(const ScalarField& u, std::size_t node, int ax, int ay) {
  const Grid& grid = u.grid();
  const auto [i, j] = grid.lattice(node);
  double sum = 0.0;
  for (int b = -2; b <= 2; ++b) {
    const double cy = kCentered[static_cast<std::size_t>(ay)][static_cast<std::size_t>(b + 2)];
    if (cy == 0.0) continue;
    for (int a = -2; a <= 2; ++a) {
      const double cx = kCentered[static_cast<std::size_t>(ax)][static_cast<std::size_t>(a + 2)];
      if (cx == 0.0) continue;
      const int n = grid.index_of(i + a, j + b);
      if (n < 0) return std::numeric_limits<double>::quiet_NaN();
      sum += cx * cy * u[static_cast<std::size_t>(n)];
    }
  }
  return sum / std::pow(grid.spacing(), ax + ay);
}

SobolevTable sobolev_monitor(const ScalarField& u, double p) {
  if (!(p >= 1.0)) throw Error(ErrorKind::InvalidInput, "Sobolev exponent p must be >= 1");
  const Grid& grid = u.grid();
  SobolevTable table;
  table.p = p;
  std::array<double, 5> sums{};
  std::size_t used = 0;
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const auto [i, j] = grid.lattice(n);
    bool block = true;
    for (int b = -2; b <= 2 && block; ++b)
      for (int a = -2; a <= 2 && block; ++a) block = grid.index_of(i + a, j + b) >= 0;
    if (!block) continue;
    ++used;
    for (int order = 0; order <= 4; ++order)
      for (int ax = 0; ax <= order; ++ax)
        sums[static_cast<std::size_t>(order)] += std::pow(std::abs(centered_difference(u, n, ax, order - ax)), p);
  }
  const double cell = grid.spacing() * grid.spacing();
  table.coverage = grid.size() ? static_cast<double>(used) / static_cast<double>(grid.size()) : 0.0;
  for (int order = 0; order <= 4; ++order) {
    const double norm = std::pow(cell * sums[static_cast<std::size_t>(order)], 1.0 / p);
    table.rows.push_back({order, norm});
    table.w4p += norm;
  }
  return table;
}

}  // namespace abreu
