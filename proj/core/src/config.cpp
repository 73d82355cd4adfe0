#include "abreu/config.hpp"

#include "abreu/error.hpp"
#include "abreu/function_spec.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace abreu {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidInput, "config: " + what); }

class Reader {
 public:
  Reader(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) bad(where_ + " must be an object");
  }
  void done() const {
    for (const auto& [k, v] : obj_.items())
      if (!seen_.count(k)) bad("unknown key '" + k + "' in " + where_);
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }
  void read(const std::string& key, double& out) {
    if (const json* j = find(key)) {
      if (!j->is_number() || !std::isfinite(j->get<double>())) bad(path(key) + " must be a finite number");
      out = j->get<double>();
    }
  }
  void read(const std::string& key, int& out) {
    if (const json* j = find(key)) {
      if (!j->is_number_integer()) bad(path(key) + " must be an integer");
      out = j->get<int>();
    }
  }
  void read(const std::string& key, std::uint64_t& out) {
    if (const json* j = find(key)) {
      if (!j->is_number_unsigned() && !(j->is_number_integer() && j->get<long long>() >= 0))
        bad(path(key) + " must be a non-negative integer");
      out = j->get<std::uint64_t>();
    }
  }
  void read(const std::string& key, bool& out) {
    if (const json* j = find(key)) {
      if (!j->is_boolean()) bad(path(key) + " must be a boolean");
      out = j->get<bool>();
    }
  }
  void read(const std::string& key, std::string& out) {
    if (const json* j = find(key)) {
      if (!j->is_string()) bad(path(key) + " must be a string");
      out = j->get<std::string>();
    }
  }
  void read(const std::string& key, Point& out) {
    if (const json* j = find(key)) out = to_point(*j, path(key));
  }
  void read(const std::string& key, std::vector<double>& out) {
    if (const json* j = find(key)) {
      if (!j->is_array()) bad(path(key) + " must be a list of numbers");
      out.clear();
      for (const json& v : *j) {
        if (!v.is_number()) bad(path(key) + " must be a list of numbers");
        out.push_back(v.get<double>());
      }
    }
  }
  void read(const std::string& key, std::vector<Point>& out) {
    if (const json* j = find(key)) {
      if (!j->is_array()) bad(path(key) + " must be a list of points");
      out.clear();
      for (const json& v : *j) out.push_back(to_point(v, path(key)));
    }
  }
  void read_spec(const std::string& key, json& out) {
    if (const json* j = find(key)) {
      validate_function_spec(*j);
      out = *j;
    }
  }
  std::string path(const std::string& key) const { return where_ + "." + key; }

  static Point to_point(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) bad(what + " must be [x, y]");
    return Point(j[0].get<double>(), j[1].get<double>());
  }

 private:
  const json& obj_;
  std::string where_;
  std::set<std::string> seen_;
};

json point_json(const Point& p) { return json::array({p.x(), p.y()}); }

}  // namespace

LinearBackend parse_backend(const std::string& name) {
  if (name == "auto") return LinearBackend::Auto;
  if (name == "direct") return LinearBackend::Direct;
  if (name == "bicgstab") return LinearBackend::BiCgStab;
  bad("solver.backend must be auto, direct or bicgstab");
}

RunConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
  RunConfig c;
  Reader top(j, "config");
  top.read("command", c.command);
  if (const json* d = top.find("domain")) {
    Reader r(*d, "domain");
    r.read("kind", c.domain.kind);
    r.read("h_grid", c.h);
    if (const json* params = r.find("params")) {
      Reader q(*params, "domain.params");
      q.read("center", c.domain.center);
      q.read("radius", c.domain.radius);
      q.read("a", c.domain.a);
      q.read("b", c.domain.b);
      q.read("angle", c.domain.angle);
      if (const json* p = q.find("poly")) {
        validate_function_spec(json{{"poly", *p}});
        c.domain.poly = *p;
      }
      q.read("interior_point", c.domain.interior_point);
      q.done();
    }
    if (c.domain.kind != "disk" && c.domain.kind != "ellipse" && c.domain.kind != "levelset")
      bad("domain.kind must be disk, ellipse or levelset");
    r.done();
  }
  if (!(c.h > 0.0)) bad("domain.h_grid must be positive");
  if (const json* p = top.find("problem")) {
    Reader r(*p, "problem");
    r.read("theta", c.problem.theta);
    r.read_spec("f", c.problem.f);
    r.read_spec("phi", c.problem.phi);
    r.read_spec("psi", c.problem.psi);
    r.read("p", c.problem.p);
    r.done();
  }
  if (const json* s = top.find("solver")) {
    Reader r(*s, "solver");
    r.read("outer_tol", c.solver.outer_tol);
    r.read("max_outer_iters", c.solver.max_outer_iters);
    r.read("relaxation", c.solver.relaxation);
    r.read("newton_tol", c.solver.newton_tol);
    r.read("max_newton_iters", c.solver.max_newton_iters);
    r.read("lma_tol", c.solver.lma_tol);
    r.read("backend", c.solver.backend);
    parse_backend(c.solver.backend);
    r.done();
  }
  if (const json* m = top.find("ma")) {
    Reader r(*m, "ma");
    r.read_spec("g", c.ma.g);
    r.read_spec("phi", c.ma.phi);
    r.done();
  }
  if (const json* l = top.find("lma")) {
    Reader r(*l, "lma");
    r.read("u_csv", c.lma.u_csv);
    r.read_spec("g", c.lma.g);
    r.read_spec("psi", c.lma.psi);
    if (!c.lma.u_csv.empty()) {
      std::filesystem::path p(c.lma.u_csv);
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      if (!std::filesystem::exists(p)) bad("lma.u_csv '" + c.lma.u_csv + "' does not exist");
      c.lma.u_csv = p.string();
    }
    r.done();
  }
  if (const json* s = top.find("sections")) {
    Reader r(*s, "sections");
    r.read("source", c.sections.source);
    r.read("fixture", c.sections.fixture);
    r.read("x0", c.sections.x0);
    r.read("heights", c.sections.heights);
    r.read("centers", c.sections.centers);
    r.read("boundary_samples", c.sections.boundary_samples);
    r.read("ratio_samples", c.sections.ratio_samples);
    r.read("normalize", c.sections.normalize);
    if (c.sections.source != "fixture" && c.sections.source != "solve") bad("sections.source must be fixture or solve");
    for (double h : c.sections.heights)
      if (!(h > 0.0)) bad("sections.heights must be positive");
    r.done();
  }
  if (const json* v = top.find("verify")) {
    Reader r(*v, "verify");
    r.read("min_principle", c.verify.min_principle);
    r.read("abp", c.verify.abp);
    r.read("holder", c.verify.holder);
    r.read("boundary_holder", c.verify.boundary_holder);
    r.read("sobolev", c.verify.sobolev);
    r.read("sections", c.verify.sections);
    r.read("alpha", c.verify.alpha);
    r.read("pair_budget", c.verify.pair_budget);
    r.read("ratio_samples", c.verify.ratio_samples);
    r.done();
  }
  if (const json* v = top.find("converge")) {
    Reader r(*v, "converge");
    r.read("fixture", c.converge.fixture);
    r.read("h_list", c.converge.h_list);
    for (double h : c.converge.h_list)
      if (!(h > 0.0)) bad("converge.h_list must be positive");
    r.done();
  }
  if (const json* v = top.find("fixture")) {
    Reader r(*v, "fixture");
    r.read("name", c.fixture.name);
    r.done();
  }
  top.read("output", c.output);
  top.read("seed", c.seed);
  top.read("threads", c.threads);
  if (c.threads < 1) bad("threads must be >= 1");
  top.done();
  return c;
}

json serialize_config(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["domain"] = {{"kind", c.domain.kind},
                 {"h_grid", c.h},
                 {"params", {{"center", point_json(c.domain.center)},
                             {"radius", c.domain.radius},
                             {"a", c.domain.a},
                             {"b", c.domain.b},
                             {"angle", c.domain.angle},
                             {"poly", c.domain.poly},
                             {"interior_point", point_json(c.domain.interior_point)}}}};
  j["problem"] = {{"theta", c.problem.theta}, {"f", c.problem.f}, {"phi", c.problem.phi},
                  {"psi", c.problem.psi},     {"p", c.problem.p}};
  j["solver"] = {{"outer_tol", c.solver.outer_tol},   {"max_outer_iters", c.solver.max_outer_iters},
                 {"relaxation", c.solver.relaxation}, {"newton_tol", c.solver.newton_tol},
                 {"max_newton_iters", c.solver.max_newton_iters}, {"lma_tol", c.solver.lma_tol},
                 {"backend", c.solver.backend}};
  j["ma"] = {{"g", c.ma.g}, {"phi", c.ma.phi}};
  j["lma"] = {{"u_csv", c.lma.u_csv}, {"g", c.lma.g}, {"psi", c.lma.psi}};
  json centers = json::array();
  for (const Point& p : c.sections.centers) centers.push_back(point_json(p));
  j["sections"] = {{"source", c.sections.source},
                   {"fixture", c.sections.fixture},
                   {"x0", point_json(c.sections.x0)},
                   {"heights", c.sections.heights},
                   {"centers", centers},
                   {"boundary_samples", c.sections.boundary_samples},
                   {"ratio_samples", c.sections.ratio_samples},
                   {"normalize", c.sections.normalize}};
  j["verify"] = {{"min_principle", c.verify.min_principle},
                 {"abp", c.verify.abp},
                 {"holder", c.verify.holder},
                 {"boundary_holder", c.verify.boundary_holder},
                 {"sobolev", c.verify.sobolev},
                 {"sections", c.verify.sections},
                 {"alpha", c.verify.alpha},
                 {"pair_budget", c.verify.pair_budget},
                 {"ratio_samples", c.verify.ratio_samples}};
  j["converge"] = {{"fixture", c.converge.fixture}, {"h_list", c.converge.h_list}};
  j["fixture"] = {{"name", c.fixture.name}};
  j["output"] = c.output;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  return j;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::InvalidInput, "config " + path.string() + ": " + e.what());
  }
  return parse_config(j, path.parent_path());
}

std::shared_ptr<const Domain> make_domain(const DomainConfig& c) {
  DomainParameters p;
  p.center = c.center;
  p.radius = c.radius;
  p.semi_axis_a = c.a;
  p.semi_axis_b = c.b;
  p.angle = c.angle;
  DomainKind kind = DomainKind::Disk;
  if (c.kind == "ellipse") kind = DomainKind::Ellipse;
  if (c.kind == "levelset") {
    kind = DomainKind::LevelSet;
    std::vector<Polynomial2::Term> terms;
    for (const json& t : c.poly) terms.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<double>()});
    p.level_function = Polynomial2(terms);
    p.center = c.interior_point;
  }
  return std::make_shared<const Domain>(build_domain(kind, p));
}

CoupledOptions coupled_options(const SolverConfig& c) {
  CoupledOptions o;
  o.outer_tol = c.outer_tol;
  o.max_outer_iters = c.max_outer_iters;
  o.sigma = c.relaxation;
  o.ma.newton_tol = c.newton_tol;
  o.ma.max_newton_iters = c.max_newton_iters;
  o.ma.backend = parse_backend(c.backend);
  o.lma.tol = c.lma_tol;
  o.lma.backend = o.ma.backend;
  return o;
}

}  // namespace abreu
