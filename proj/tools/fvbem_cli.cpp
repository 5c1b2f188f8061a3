// Batch runner for the FVM-BEM coupling experiments.
//
//   fvbem --problem mexican_hat --levels 5 --out-table hat.csv
//   fvbem --problem lshape_practical --levels 5 --out-field field.csv --grid 201x201
//   fvbem --config my_problem.cfg --levels 4
//
// Exit codes: 0 success, 2 configuration error, 3 solver failure,
// 4 invariant violation.

#include <cstdio>
#include <iostream>
#include <regex>

#include <CLI11.hpp>

#include "fvbem/config.hpp"
#include "fvbem/experiment.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kSolverError = 3;
constexpr int kInvariantError = 4;

void parse_grid(const std::string& text, int& nx, int& ny) {
  static const std::regex pattern(R"((\d+)x(\d+))");
  std::smatch m;
  if (!std::regex_match(text, m, pattern))
    throw fvbem::ConfigError("--grid expects NxM, got '" + text + "'");
  nx = std::stoi(m[1]);
  ny = std::stoi(m[2]);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite volume / boundary element coupling for transmission problems"};
  fvbem::RunConfig config;
  std::string upwind, stabilize = "auto", grid;

  auto* problem = app.add_option("--problem", config.problem,
                                 "Built-in problem: mexican_hat, mexican_hat_165, "
                                 "tanh_convection, lshape_practical");
  auto* cfg = app.add_option("--config", config.config_path, "Problem description file")
                  ->check(CLI::ExistingFile);
  problem->excludes(cfg);
  app.add_option("--levels", config.levels, "Number of mesh levels (initial mesh included)")
      ->check(CLI::Range(1, 64));
  app.add_option("--max-levels", config.max_levels, "Hard cap on --levels")
      ->check(CLI::PositiveNumber);
  app.add_option("--upwind", upwind, "none | full | steered (default: the problem's choice)");
  app.add_option("--stabilize", stabilize, "auto | on | off")
      ->check(CLI::IsMember({"auto", "on", "off"}));
  app.add_option("--grid", grid, "Field dump resolution NxM (default 101x101)");
  app.add_option("--out-table", config.out_table, "Convergence table (CSV)");
  app.add_option("--out-field", config.out_field, "Exterior field dump on the finest level (CSV)");
  app.add_option("--threads", config.threads, "Worker threads for dense assembly")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", config.seed, "Accepted for interface compatibility; the runner has no randomized steps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (!upwind.empty()) config.upwind = fvbem::parse_upwind(upwind);
    config.stabilize = stabilize == "on"    ? fvbem::Stabilize::On
                       : stabilize == "off" ? fvbem::Stabilize::Off
                                            : fvbem::Stabilize::Auto;
    if (!grid.empty()) parse_grid(grid, config.grid_nx, config.grid_ny);
    const fvbem::ProblemSpec spec = fvbem::resolve_problem(config);
    const fvbem::RunResult result = fvbem::run(config, spec, std::cerr);
    if (config.out_table.empty()) fvbem::write_error_table(std::cout, result.report);
    if (result.finest && result.finest->solution.a_inf)
      std::cerr << "a_inf = " << *result.finest->solution.a_inf << '\n';
    return 0;
  } catch (const fvbem::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const fvbem::ModelError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const fvbem::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolverError;
  } catch (const fvbem::InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kInvariantError;
  }
}
