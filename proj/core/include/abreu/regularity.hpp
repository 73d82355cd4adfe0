#pragma once

#include "abreu/field.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace abreu {

enum class HolderRegion { Interior, Global };

struct HolderOptions {
  HolderRegion region = HolderRegion::Global;
  std::size_t pair_budget = 500000;
  std::uint64_t seed = 0;
  int min_scale_cells = 1;
  // Largest pair distance as a fraction of the domain diameter.
  double max_scale_fraction = 1.0 / 16.0;
  // Interior region: both ends at least this far from the boundary
  // (default diameter / 8 when <= 0).
  double interior_margin = 0.0;
};

struct HolderBin {
  double distance = 0.0;  // upper edge of the dyadic bin
  double oscillation = 0.0;
  std::size_t pairs = 0;
};

struct HolderEstimate {
  double exponent = 0.0;  // clamped to 1.05
  double constant = 0.0;
  double r_squared = 0.0;
  std::vector<HolderBin> bins;
  std::size_t samples = 0;
  bool degenerate = false;  // zero oscillation; exponent undefined
};

// Pairs at dyadic lattice offsets (plus node-to-hit pairs for the global
// region), binned by dyadic distance with the maximum oscillation per bin,
// then log(oscillation) regressed on log(distance). Throws InsufficientData
// below 200 usable pairs.
HolderEstimate fit_holder_exponent(const ScalarField& field, const HolderOptions& options = {});

// alpha / (alpha + 2)
double boundary_threshold(double alpha);

struct BoundaryHolderResult {
  double exponent = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::vector<HolderBin> shells;
};

// Oscillation |v(x) - v(x0)| over interior nodes x in dyadic shells around
// boundary samples x0; passes when the fitted exponent reaches
// alpha/(alpha+2) - 0.05. Throws InsufficientResolution with fewer than 3 shells.
BoundaryHolderResult boundary_holder_check(const ScalarField& v, double alpha, const std::vector<Point>& boundary_samples);

enum class CheckStatus { Pass, Fail, Skip };
std::string to_string(CheckStatus s);

struct MinPrincipleResult {
  CheckStatus status = CheckStatus::Skip;
  double margin = 0.0;  // min interior w - min boundary psi
  double tolerance = 0.0;  // 10 h^2
  double min_interior = 0.0;
  double min_boundary = 0.0;
  bool hypothesis_violated = false;  // f > 0 somewhere
};

// min boundary psi over the hits and `boundary_samples`.
MinPrincipleResult min_principle_check(const ScalarField& w, const PointFunction& psi, const ScalarField& f,
                                       const std::vector<Point>& boundary_samples = {});

struct BoundsReport {
  double min_w = 0.0;
  double max_w = 0.0;
  double min_boundary_psi = 0.0;
  double max_boundary_psi = 0.0;
  double abp_exponent = 0.0;        // (n - 1) / (n (1 - theta)), n = 2
  double weighted_forcing = 0.0;    // || f w^abp_exponent ||_{L^2}
  double f_l2 = 0.0;
  double f_lp = 0.0;
  double fitted_constant = 0.0;     // smallest C in ||w|| <= ||psi|| + C ||f w^e||
  bool chain_holds = false;
};

double abp_exponent(double theta);

BoundsReport abp_chain_report(const ScalarField& w, const ScalarField& f, const PointFunction& psi, double theta,
                              double p, const std::vector<Point>& boundary_samples = {});

struct SobolevRow {
  int order = 0;
  double norm = 0.0;  // discrete L^p norm over all derivatives of this order
};

struct SobolevTable {
  double p = 2.0;
  std::vector<SobolevRow> rows;
  double coverage = 0.0;  // fraction of nodes with the full 5x5 block
  double w4p = 0.0;       // sum over orders, W^{4,p} proxy
};

// Centered tensor-product differences up to order 4 at nodes whose 5x5
// lattice block is interior.
SobolevTable sobolev_monitor(const ScalarField& u, double p);

// Single mixed difference d^a_x d^b_y at a node; NaN when the block is incomplete.
double centered_difference(const ScalarField& u, std::size_t node, int ax, int ay);

}  // namespace abreu
