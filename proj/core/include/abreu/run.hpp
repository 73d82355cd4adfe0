#pragma once

#include "abreu/config.hpp"
#include "abreu/error.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace abreu {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitNonConvergence = 2;
inline constexpr int kExitInvalidInput = 3;

int exit_code(ErrorKind kind);

std::vector<std::string> subcommands();

// Executes `command` (or config.command when empty) writing artifacts under
// `out_dir`. Errors are reported on stderr and mapped to exit codes.
int run(const RunConfig& config, const std::string& command, const std::filesystem::path& out_dir);

ProblemData problem_from_config(const RunConfig& config, GridPtr grid);

// Full verification battery on a converged system; the "checks" array holds
// {name, status, margin, ...} per check.
nlohmann::json verify_solution(const CoupledSolution& solution, const ProblemData& data, const VerifyConfig& options,
                               std::uint64_t seed);

nlohmann::json solve_report_json(const SolveReport& report);

struct ConvergenceRow {
  double h = 0.0;
  double error_u = 0.0;
  double error_w = 0.0;
  double order_u = 0.0;  // against the previous (coarser) row; 0 for the first
  double order_w = 0.0;
  int outer_iterations = 0;
};

struct ConvergenceStudy {
  std::string fixture;
  double theta = 0.0;
  std::vector<ConvergenceRow> rows;
  bool aborted = false;
  std::string error;
  ErrorKind error_kind = ErrorKind::NonConvergence;
};

ConvergenceStudy convergence_study(const RunConfig& config, const std::vector<double>& h_list);

}  // namespace abreu
