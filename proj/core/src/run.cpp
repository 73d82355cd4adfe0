#include "abreu/run.hpp"

#include "abreu/csv.hpp"
#include "abreu/function_spec.hpp"
#include "abreu/oracle.hpp"
#include "abreu/parallel.hpp"
#include "abreu/regularity.hpp"
#include "abreu/sections.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace abreu {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json point_json(const Point& p) { return json::array({p.x(), p.y()}); }

// Non-finite values are not representable in JSON.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << j.dump(2) << "\n";
}

json grid_json(const Grid& g) {
  return {{"h", g.spacing()},
          {"nodes", g.size()},
          {"hits", g.hit_count()},
          {"full_stencil_nodes", g.full_stencil_count()},
          {"min_fraction", g.min_fraction()},
          {"domain", {{"kind", to_string(g.domain().kind())},
                      {"rho", g.domain().rho()},
                      {"outer_radius", g.domain().outer_radius()},
                      {"diameter", g.domain().diameter()},
                      {"area", g.domain().area()}}}};
}

json signs_json(const SignAudit& s) {
  return {{"negative_off_diagonal", s.negative_off_diagonal},
          {"positive_off_diagonal", s.positive_off_diagonal},
          {"non_negative_diagonal", s.non_negative_diagonal},
          {"m_matrix_pattern", s.m_matrix_pattern()}};
}

json check(const std::string& name, CheckStatus status, double margin, json extra = json::object()) {
  extra["name"] = name;
  extra["status"] = to_string(status);
  extra["margin"] = number(margin);
  return extra;
}

json holder_json(const HolderEstimate& e) {
  json bins = json::array();
  for (const HolderBin& b : e.bins) bins.push_back({{"distance", b.distance}, {"oscillation", b.oscillation}, {"pairs", b.pairs}});
  return {{"exponent", number(e.exponent)}, {"constant", number(e.constant)}, {"r_squared", number(e.r_squared)},
          {"samples", e.samples},           {"degenerate", e.degenerate},     {"bins", bins}};
}

GridPtr make_grid(const RunConfig& c) { return Grid::build(make_domain(c.domain), c.h); }

struct Clock {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); }
};

json envelope(const std::string& command, const RunConfig& c, json result, double seconds) {
  return {{"command", command}, {"config", serialize_config(c)}, {"result", std::move(result)},
          {"timing", {{"wall_seconds", seconds}}}};
}

// ---- subcommands -----------------------------------------------------------

json run_solve(const RunConfig& c, const fs::path& out) {
  const GridPtr grid = make_grid(c);
  const ProblemData data = problem_from_config(c, grid);
  const CoupledSolution sol = solve_system(data, coupled_options(c.solver));
  write_field_csv(out / "u.csv", sol.u);
  write_field_csv(out / "w.csv", sol.w);
  write_field_csv(out / "affine_curvature.csv", affine_mean_curvature(sol.u, sol.w));
  return {{"grid", grid_json(*grid)}, {"solve", solve_report_json(sol.report)}};
}

MAResult solve_ma_block(const RunConfig& c, const GridPtr& grid) {
  const PointFunction g = compile_function_spec(c.ma.g, c.problem.theta);
  const PointFunction phi = compile_function_spec(c.ma.phi, c.problem.theta);
  MASolveOptions o = coupled_options(c.solver).ma;
  return solve_ma(MAProblem{grid, ScalarField::sample(grid, g), phi}, o);
}

json ma_json(const MAReport& r) {
  return {{"iterations", r.iterations},
          {"residual_history", r.residual_history},
          {"min_hessian_eigenvalue", r.min_hessian_eigenvalue},
          {"residual_floor", r.residual_floor},
          {"backtracks", r.backtracks}};
}

json run_ma(const RunConfig& c, const fs::path& out) {
  const GridPtr grid = make_grid(c);
  const MAResult r = solve_ma_block(c, grid);
  write_field_csv(out / "u.csv", r.u);
  return {{"grid", grid_json(*grid)}, {"ma", ma_json(r.report)}};
}

json run_lma(const RunConfig& c, const fs::path& out) {
  const GridPtr grid = make_grid(c);
  json result{{"grid", grid_json(*grid)}};
  ScalarField u;
  if (c.lma.u_csv.empty()) {
    MAResult r = solve_ma_block(c, grid);
    result["ma"] = ma_json(r.report);
    u = std::move(r.u);
  } else {
    u = read_field_csv(c.lma.u_csv, grid);
    if (!u.has_boundary())
      u = ScalarField::with_trace(grid, std::vector<double>(u.values().begin(), u.values().end()),
                                  compile_function_spec(c.ma.phi, c.problem.theta));
  }
  const PointFunction g = compile_function_spec(c.lma.g, c.problem.theta);
  const PointFunction psi = compile_function_spec(c.lma.psi, c.problem.theta);
  LMAOptions o = coupled_options(c.solver).lma;
  const LMAProblem problem = LMAProblem::from(cofactor_field(u), ScalarField::sample(grid, g), psi);
  const LMAResult r = solve_lma(problem, o);
  write_field_csv(out / "v.csv", r.v);
  result["lma"] = {{"residual", r.report.residual},
                   {"signs", signs_json(r.report.signs)},
                   {"condition_estimate", r.report.condition_estimate ? json(*r.report.condition_estimate) : json(nullptr)},
                   {"lambda_det", problem.lambda_det},
                   {"Lambda_det", problem.Lambda_det},
                   {"min_cofactor_eigenvalue", r.report.min_cofactor_eigenvalue},
                   {"max_cofactor_eigenvalue", r.report.max_cofactor_eigenvalue}};
  return result;
}

json run_sections(const RunConfig& c, const fs::path& out) {
  const GridPtr grid = make_grid(c);
  json result{{"grid", grid_json(*grid)}};
  ScalarField u;
  if (c.sections.source == "fixture") {
    const ExactSolution s = fixture(c.sections.fixture, c.problem.theta);
    u = ScalarField::sample(grid, s.u_function());
    result["source"] = c.sections.fixture;
  } else {
    const ProblemData data = problem_from_config(c, grid);
    CoupledSolution sol = solve_system(data, coupled_options(c.solver));
    result["solve"] = solve_report_json(sol.report);
    result["source"] = "solve";
    u = std::move(sol.u);
  }
  const Domain& dom = grid->domain();

  const SeparationBounds sep =
      quadratic_separation(u, dom.boundary_samples(static_cast<std::size_t>(c.sections.boundary_samples)));
  result["quadratic_separation"] = {{"rho_low", sep.rho_low}, {"rho_high", sep.rho_high}, {"pairs", sep.pairs}};

  const LocalizationScan scan = localization_scan(u, dom.closest_boundary_point(c.sections.x0), c.sections.heights);
  {
    std::ofstream table(out / "sections.csv");
    table << "h,tau,vol_ratio,k_inner,k_outer\n";
    std::ofstream hulls(out / "hulls.csv");
    hulls << "h,x,y\n";
    char line[160];
    for (const ScanRow& r : scan.rows) {
      std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.h, r.tau, r.vol_ratio, r.k_inner, r.k_outer);
      table << line;
      for (const Point& p : extract_section(u, scan.x0, r.h).hull) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", r.h, p.x(), p.y());
        hulls << line;
      }
    }
  }
  json rows = json::array();
  for (const ScanRow& r : scan.rows)
    rows.push_back({{"h", r.h}, {"tau", r.tau}, {"vol_ratio", r.vol_ratio}, {"k_inner", r.k_inner},
                    {"k_outer", r.k_outer}, {"nodes", r.nodes}});
  result["localization"] = {{"x0", point_json(scan.x0)}, {"rows", rows},       {"dropped", scan.dropped},
                            {"warnings", scan.warnings},  {"c0", scan.c0},     {"c1", scan.c1},
                            {"r_squared", scan.r_squared}};

  json maximal = json::array();
  for (const Point& y : c.sections.centers) {
    const MaximalSection m = maximal_height(u, y);
    maximal.push_back({{"center", point_json(y)},
                       {"hbar", m.hbar},
                       {"touching", point_json(m.touching)},
                       {"dist", m.dist},
                       {"ratio", std::sqrt(m.hbar) / m.dist}});
  }
  result["maximal_sections"] = maximal;

  if (c.sections.ratio_samples > 0) {
    const DistanceRatios dr = section_distance_ratios(u, static_cast<std::size_t>(c.sections.ratio_samples), c.seed);
    result["distance_ratios"] = {{"samples", dr.lower.size()}, {"lower_min", dr.lower_min}, {"lower_max", dr.lower_max},
                                 {"upper_min", dr.upper_min},  {"upper_max", dr.upper_max}, {"k_fit", dr.k_fit}};
  }
  if (c.sections.normalize && !c.sections.centers.empty()) {
    const NormalizedSection ns = normalize_section(u, c.sections.centers.front());
    result["normalized"] = {{"center", point_json(ns.offset)},
                            {"hbar", ns.maximal.hbar},
                            {"value_at_origin", ns.value_at_origin},
                            {"gradient_at_origin", point_json(ns.gradient_at_origin)},
                            {"c_inner", ns.c_inner},
                            {"c_outer", ns.c_outer},
                            {"tau", ns.fit.tau},
                            {"sliding_condition", ns.sliding_condition},
                            {"nodes", ns.u.size()}};
    write_field_csv(out / "normalized_u.csv", ns.u);
  }
  return result;
}

json run_verify(const RunConfig& c, const fs::path& out) {
  const GridPtr grid = make_grid(c);
  const ProblemData data = problem_from_config(c, grid);
  const CoupledSolution sol = solve_system(data, coupled_options(c.solver));
  write_field_csv(out / "u.csv", sol.u);
  write_field_csv(out / "w.csv", sol.w);
  json verify = verify_solution(sol, data, c.verify, c.seed);
  write_json(out / "verify.json", verify);
  return {{"grid", grid_json(*grid)}, {"solve", solve_report_json(sol.report)}, {"verify", verify}};
}

json study_json(const ConvergenceStudy& s) {
  json rows = json::array();
  for (const ConvergenceRow& r : s.rows)
    rows.push_back({{"h", r.h}, {"error_u", r.error_u}, {"error_w", r.error_w}, {"order_u", r.order_u},
                    {"order_w", r.order_w}, {"outer_iterations", r.outer_iterations}});
  json j{{"fixture", s.fixture}, {"theta", s.theta}, {"rows", rows}, {"aborted", s.aborted}};
  if (s.aborted) j["error"] = s.error;
  return j;
}

json run_fixture(const RunConfig& c, const fs::path& out) {
  json list = json::array();
  for (const FixtureInfo& f : list_fixtures()) list.push_back({{"name", f.name}, {"description", f.description}});
  json result{{"fixtures", list}};
  if (c.fixture.name.empty()) return result;
  const ExactSolution s = fixture(c.fixture.name, c.problem.theta);
  const GridPtr grid = make_grid(c);
  write_field_csv(out / "u.csv", ScalarField::sample(grid, s.u_function()));
  write_field_csv(out / "w.csv", ScalarField::sample(grid, s.w_function()));
  write_field_csv(out / "f.csv", ScalarField::sample(grid, s.f_function()));
  const ForcingAudit a = audit_forcing(s, grid->domain());
  result["grid"] = grid_json(*grid);
  result["fixture"] = {{"name", s.name},
                       {"theta", s.theta},
                       {"audit", {{"f_nonpositive", a.nonpositive},
                                  {"max_f", a.max_value},
                                  {"argmax", point_json(a.argmax)},
                                  {"max_disagreement", a.max_disagreement},
                                  {"samples", a.samples}}}};
  return result;
}

}  // namespace

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidDomain:
    case ErrorKind::EmptyGrid:
    case ErrorKind::InvalidInput:
    case ErrorKind::InvalidShear:
    case ErrorKind::NonConvexProfile:
    case ErrorKind::IncompleteData:
    case ErrorKind::OutOfDomain:
    case ErrorKind::TooCloseToBoundary:
    case ErrorKind::Io:
      return kExitInvalidInput;
    default:
      return kExitNonConvergence;
  }
}

std::vector<std::string> subcommands() { return {"solve", "ma", "lma", "sections", "verify", "converge", "fixture"}; }

ProblemData problem_from_config(const RunConfig& c, GridPtr grid) {
  const double theta = c.problem.theta;
  ProblemData d;
  d.theta = theta;
  d.f = ScalarField::sample(grid, compile_function_spec(c.problem.f, theta));
  d.phi = compile_function_spec(c.problem.phi, theta);
  d.psi = compile_function_spec(c.problem.psi, theta);
  d.p = c.problem.p;
  d.grid = std::move(grid);
  return d;
}

json solve_report_json(const SolveReport& r) {
  return {{"outer_iterations", r.outer_iterations},
          {"update_history", r.update_history},
          {"newton_iterations", r.newton_iterations},
          {"ma_residual", r.ma_residual},
          {"lma_residual", r.lma_residual},
          {"w_min", r.w_min},
          {"w_max", r.w_max},
          {"psi_min", r.psi_min},
          {"min_hessian_eigenvalue", r.min_hessian_eigenvalue},
          {"f_nonpositive", r.f_nonpositive},
          {"f_lp_norm", r.f_lp_norm},
          {"monotone_updates", r.monotone_updates},
          {"signs", signs_json(r.signs)},
          {"condition_estimate", r.condition_estimate ? json(*r.condition_estimate) : json(nullptr)}};
}

json verify_solution(const CoupledSolution& sol, const ProblemData& data, const VerifyConfig& v, std::uint64_t seed) {
  const Domain& dom = data.grid->domain();
  const std::vector<Point> samples = dom.boundary_samples(256);
  json checks = json::array();
  json flags{{"f_nonpositive", data.f.max() <= 0.0}};

  // Each check is isolated so one failure does not hide the others.
  auto guarded = [&](const std::string& name, auto&& body) {
    try {
      checks.push_back(body());
    } catch (const Error& e) {
      checks.push_back(check(name, CheckStatus::Fail, std::nan(""), {{"error", e.what()}, {"kind", to_string(e.kind())}}));
    }
  };

  if (v.min_principle)
    guarded("min_principle", [&] {
      const MinPrincipleResult m = min_principle_check(sol.w, data.psi, data.f, samples);
      return check("min_principle", m.status, m.margin,
                   {{"tolerance", m.tolerance}, {"min_interior", m.min_interior}, {"min_boundary", m.min_boundary},
                    {"hypothesis_violated", m.hypothesis_violated}});
    });
  if (v.abp)
    guarded("abp_chain", [&] {
      const BoundsReport b = abp_chain_report(sol.w, data.f, data.psi, data.theta, data.p, samples);
      return check("abp_chain", b.chain_holds ? CheckStatus::Pass : CheckStatus::Fail, 1.0 - b.abp_exponent,
                   {{"abp_exponent", b.abp_exponent},
                    {"fitted_constant", b.fitted_constant},
                    {"min_w", b.min_w},
                    {"max_w", b.max_w},
                    {"min_boundary_psi", b.min_boundary_psi},
                    {"max_boundary_psi", b.max_boundary_psi},
                    {"weighted_forcing", b.weighted_forcing},
                    {"f_l2", b.f_l2},
                    {"f_lp", b.f_lp}});
    });
  if (v.holder) {
    for (const HolderRegion region : {HolderRegion::Global, HolderRegion::Interior}) {
      const std::string name = region == HolderRegion::Global ? "holder_global" : "holder_interior";
      guarded(name, [&] {
        HolderOptions o;
        o.region = region;
        o.pair_budget = static_cast<std::size_t>(v.pair_budget);
        o.seed = seed;
        const HolderEstimate e = fit_holder_exponent(sol.w, o);
        const CheckStatus s = e.degenerate ? CheckStatus::Skip
                              : (e.exponent > 0.0 && e.exponent <= 1.05) ? CheckStatus::Pass
                                                                         : CheckStatus::Fail;
        return check(name, s, e.degenerate ? std::nan("") : e.exponent, holder_json(e));
      });
    }
  }
  if (v.boundary_holder)
    guarded("boundary_holder", [&] {
      const BoundaryHolderResult b = boundary_holder_check(sol.w, v.alpha, dom.boundary_samples(64));
      return check("boundary_holder", b.pass ? CheckStatus::Pass : CheckStatus::Fail, b.exponent - (b.threshold - 0.05),
                   {{"exponent", b.exponent}, {"threshold", b.threshold}, {"alpha", v.alpha}});
    });
  if (v.sobolev)
    guarded("sobolev", [&] {
      const SobolevTable t = sobolev_monitor(sol.u, data.p);
      json rows = json::array();
      bool finite = true;
      for (const SobolevRow& r : t.rows) {
        rows.push_back({{"order", r.order}, {"norm", number(r.norm)}});
        finite = finite && std::isfinite(r.norm);
      }
      return check("sobolev", finite ? CheckStatus::Pass : CheckStatus::Fail, t.w4p,
                   {{"p", t.p}, {"coverage", t.coverage}, {"w4p", number(t.w4p)}, {"rows", rows}});
    });
  if (v.sections) {
    guarded("quadratic_separation", [&] {
      const SeparationBounds s = quadratic_separation(sol.u, dom.boundary_samples(64));
      return check("quadratic_separation", s.rho_low > 0.0 ? CheckStatus::Pass : CheckStatus::Fail, s.rho_low,
                   {{"rho_low", s.rho_low}, {"rho_high", s.rho_high}});
    });
    guarded("section_ratios", [&] {
      const DistanceRatios d = section_distance_ratios(sol.u, static_cast<std::size_t>(v.ratio_samples), seed);
      return check("section_ratios", std::isfinite(d.k_fit) ? CheckStatus::Pass : CheckStatus::Fail, d.k_fit,
                   {{"k_fit", d.k_fit}, {"lower_min", d.lower_min}, {"lower_max", d.lower_max},
                    {"upper_min", d.upper_min}, {"upper_max", d.upper_max}, {"samples", d.lower.size()}});
    });
  }
  bool all_ok = true;
  for (const json& c : checks) all_ok = all_ok && c["status"] != "fail";
  return {{"checks", checks}, {"flags", flags}, {"pass", all_ok}};
}

ConvergenceStudy convergence_study(const RunConfig& c, const std::vector<double>& h_list) {
  ConvergenceStudy study;
  study.fixture = c.converge.fixture;
  study.theta = c.problem.theta;
  const ExactSolution s = fixture(c.converge.fixture, c.problem.theta);
  const auto domain = make_domain(c.domain);
  for (double h : h_list) {
    try {
      const GridPtr grid = Grid::build(domain, h);
      ProblemData d{grid, s.theta, ScalarField::sample(grid, s.f_function()), s.u_function(), s.w_function(), c.problem.p};
      const CoupledSolution sol = solve_system(d, coupled_options(c.solver));
      ConvergenceRow row;
      row.h = h;
      row.outer_iterations = sol.report.outer_iterations;
      for (std::size_t n = 0; n < grid->size(); ++n) {
        row.error_u = std::max(row.error_u, std::abs(sol.u[n] - s.value(grid->node(n))));
        row.error_w = std::max(row.error_w, std::abs(sol.w[n] - s.w(grid->node(n))));
      }
      if (!study.rows.empty()) {
        const ConvergenceRow& prev = study.rows.back();
        const double ratio = std::log(prev.h / h);
        row.order_u = std::log(prev.error_u / row.error_u) / ratio;
        row.order_w = std::log(prev.error_w / row.error_w) / ratio;
      }
      study.rows.push_back(row);
    } catch (const Error& e) {
      study.aborted = true;
      study.error = e.what();
      study.error_kind = e.kind();
      break;
    }
  }
  return study;
}

int run(const RunConfig& config, const std::string& requested, const fs::path& out_dir) {
  const std::string command = requested.empty() ? config.command : requested;
  const Clock clock;
  try {
    const auto names = subcommands();
    if (std::find(names.begin(), names.end(), command) == names.end())
      throw Error(ErrorKind::InvalidInput, "unknown subcommand '" + command + "'");
    set_thread_count(config.threads);
    fs::create_directories(out_dir);

    json result;
    int code = kExitSuccess;
    if (command == "solve") result = run_solve(config, out_dir);
    else if (command == "ma") result = run_ma(config, out_dir);
    else if (command == "lma") result = run_lma(config, out_dir);
    else if (command == "sections") result = run_sections(config, out_dir);
    else if (command == "verify") result = run_verify(config, out_dir);
    else if (command == "fixture") result = run_fixture(config, out_dir);
    else {
      const ConvergenceStudy s = convergence_study(config, config.converge.h_list);
      std::ofstream csv(out_dir / "converge.csv");
      csv << "h,error_u,error_w,order_u,order_w\n";
      char line[160];
      for (const ConvergenceRow& r : s.rows) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.h, r.error_u, r.error_w, r.order_u, r.order_w);
        csv << line;
      }
      result = {{"converge", study_json(s)}};
      if (s.aborted) {
        std::cerr << "error: convergence study aborted: " << s.error << "\n";
        code = exit_code(s.error_kind);
      }
    }
    write_json(out_dir / "report.json", envelope(command, config, std::move(result), clock.seconds()));
    return code;
  } catch (const NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    try {
      json history = e.history();
      write_json(out_dir / "report.json",
                 envelope(command, config, {{"error", e.what()}, {"kind", to_string(e.kind())}, {"history", history}},
                          clock.seconds()));
    } catch (const std::exception&) {
    }
    return kExitNonConvergence;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace abreu
