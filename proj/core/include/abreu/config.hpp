#pragma once

#include "abreu/coupled_solver.hpp"
#include "abreu/domain.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace abreu {

struct DomainConfig {
  std::string kind = "disk";
  Point center = Point::Zero();
  double radius = 1.0;
  double a = 1.0;
  double b = 1.0;
  double angle = 0.0;
  nlohmann::json poly = nlohmann::json::array();  // levelset terms [[i, j, c], ...]
  Point interior_point = Point::Zero();
};

struct ProblemConfig {
  double theta = 0.25;
  nlohmann::json f = 0.0;
  nlohmann::json phi = {{"poly", {{2, 0, 0.5}, {0, 2, 0.5}}}};
  nlohmann::json psi = 1.0;
  double p = 2.0;
};

struct SolverConfig {
  double outer_tol = 1e-8;
  int max_outer_iters = 200;
  double relaxation = 0.5;
  double newton_tol = 1e-10;
  int max_newton_iters = 50;
  double lma_tol = 1e-10;
  std::string backend = "auto";  // auto | direct | bicgstab
};

struct MAConfig {
  nlohmann::json g = 1.0;
  nlohmann::json phi = {{"poly", {{2, 0, 0.5}, {0, 2, 0.5}}}};
};

struct LMAConfig {
  std::string u_csv;  // empty: u from the "ma" block
  nlohmann::json g = 0.0;
  nlohmann::json psi = 1.0;
};

struct SectionsConfig {
  std::string source = "fixture";  // fixture | solve
  std::string fixture = "paraboloid";
  Point x0 = Point(0.0, -1.0);
  std::vector<double> heights = {0.125, 0.0625, 0.03125, 0.015625};
  std::vector<Point> centers = {Point(0.0, 0.0), Point(0.5, 0.0)};
  int boundary_samples = 64;
  int ratio_samples = 64;
  bool normalize = true;
};

struct VerifyConfig {
  bool min_principle = true;
  bool abp = true;
  bool holder = true;
  bool boundary_holder = true;
  bool sobolev = true;
  bool sections = true;
  double alpha = 1.0;  // Holder exponent of the boundary data
  int pair_budget = 500000;
  int ratio_samples = 64;
};

struct ConvergeConfig {
  std::string fixture = "radial";
  std::vector<double> h_list = {0.0625, 0.03125, 0.015625};
};

struct FixtureConfig {
  std::string name;  // empty: list only
};

struct RunConfig {
  std::string command;  // optional default subcommand
  DomainConfig domain;
  double h = 0.03125;
  ProblemConfig problem;
  SolverConfig solver;
  MAConfig ma;
  LMAConfig lma;
  SectionsConfig sections;
  VerifyConfig verify;
  ConvergeConfig converge;
  FixtureConfig fixture;
  std::string output = "out";
  std::uint64_t seed = 0;
  int threads = 1;
};

// Unknown keys and malformed values throw Error(InvalidInput). Relative
// file paths are resolved against `base_dir`.
RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
nlohmann::json serialize_config(const RunConfig& c);
RunConfig load_config(const std::filesystem::path& path);

std::shared_ptr<const Domain> make_domain(const DomainConfig& c);
CoupledOptions coupled_options(const SolverConfig& c);
LinearBackend parse_backend(const std::string& name);

}  // namespace abreu
