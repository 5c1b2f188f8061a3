#ifndef FVBEM_EXPERIMENT_HPP_
#define FVBEM_EXPERIMENT_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fvbem/coupling.hpp"
#include "fvbem/postprocess.hpp"

namespace fvbem {

/// A post-solve check failed (P identity, a_inf constraint, gamma >= 0).
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Stabilize { Auto, On, Off };

struct RunConfig {
  std::string problem;      // built-in name, or empty when config_path is set
  std::string config_path;
  int levels = 5;           // meshes 0 .. levels-1
  int max_levels = 8;
  std::optional<UpwindKind> upwind;  // defaults to the problem's choice
  Stabilize stabilize = Stabilize::Auto;
  std::string out_table;
  std::string out_field;
  int grid_nx = 101;
  int grid_ny = 101;
  int threads = 1;
  std::uint64_t seed = 0;
};

/// Everything computed on one level, kept for the last level only.
struct LevelState {
  PrimalMesh mesh;
  BemBlocks bem;
  DiscreteSolution solution;
  Eigen::VectorXd u0;
};

struct RunResult {
  ErrorReport report;
  std::optional<LevelState> finest;
  std::vector<FieldSample> field;
};

ProblemSpec resolve_problem(const RunConfig& config);

/// Square grid covering twice the bounding box of the domain.
Grid default_grid(const PrimalMesh& mesh, int nx, int ny);

/// Assembles, solves and post-processes every level. Progress lines go to
/// `log`. Throws ConfigError, SolverError or InvariantError.
RunResult run(const RunConfig& config, const ProblemSpec& spec, std::ostream& log);

}  // namespace fvbem

#endif  // FVBEM_EXPERIMENT_HPP_
