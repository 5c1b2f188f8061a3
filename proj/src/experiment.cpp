#include "fvbem/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "fvbem/config.hpp"
#include "fvbem/parallel.hpp"

namespace fvbem {

namespace {

void check_invariants(const CoupledSystem& system, const BemBlocks& bem,
                      const DiscreteSolution& sol, double p_defect) {
  const double scale = 1.0 + std::abs(system.u0_functional);
  if (p_defect > 1e-9 * scale) {
    std::ostringstream msg;
    msg << "P identity violated: defect " << p_defect << " (limit " << 1e-9 * scale << ")";
    throw InvariantError(msg.str());
  }
  if (system.has_ainf) {
    double mean = 0.0;
    for (int e = 0; e < bem.curve.size(); ++e) mean += bem.curve.length(e) * sol.phi[e];
    if (std::abs(mean) > 1e-10 * std::max(sol.phi.norm(), 1e-300)) {
      std::ostringstream msg;
      msg << "a_inf constraint violated: <1, phi_h> = " << mean;
      throw InvariantError(msg.str());
    }
  }
}

}  // namespace

ProblemSpec resolve_problem(const RunConfig& config) {
  if (!config.problem.empty() && !config.config_path.empty())
    throw ConfigError("give either a built-in problem or a config file, not both");
  if (!config.config_path.empty()) return load_problem_config(config.config_path);
  if (config.problem.empty()) throw ConfigError("no problem given");
  try {
    return builtin_problem(config.problem);
  } catch (const ModelError& err) {
    throw ConfigError(err.what());
  }
}

Grid default_grid(const PrimalMesh& mesh, int nx, int ny) {
  Point lo = mesh.nodes().front(), hi = mesh.nodes().front();
  for (const auto& p : mesh.nodes()) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Point center = 0.5 * (lo + hi);
  const double half = (hi - lo).maxCoeff();
  return Grid{center - Point(half, half), center + Point(half, half), nx, ny};
}

RunResult run(const RunConfig& config, const ProblemSpec& spec, std::ostream& log) {
  if (config.levels < 1) throw ConfigError("levels must be at least 1");
  if (config.levels > config.max_levels)
    throw ConfigError("levels " + std::to_string(config.levels) + " exceeds the cap of " +
                      std::to_string(config.max_levels));
  if (config.grid_nx < 1 || config.grid_ny < 1) throw ConfigError("grid must be at least 1x1");
  set_num_threads(config.threads);

  const UpwindKind upwind = config.upwind.value_or(spec.upwind);
  RunResult result;
  result.report.problem = spec.name;
  if (spec.upwind != UpwindKind::None && upwind == UpwindKind::None)
    result.report.warnings.push_back(
        "running a convection-dominated problem without upwinding; expect oscillations "
        "(see max_abs_u)");

  PrimalMesh mesh = build_structured_mesh(spec.domain);
  {
    const EigenvalueReport ev = min_eigenvalue_report(spec.diffusion, mesh);
    if (ev.warning) {
      std::ostringstream msg;
      msg << "lambda_min(A) = " << ev.lambda_min << " at (" << ev.where.x() << ", "
          << ev.where.y() << ") is <= 0.25; ellipticity of the coupling is not guaranteed";
      result.report.warnings.push_back(msg.str());
    }
  }
  for (const auto& w : result.report.warnings) log << "warning: " << w << '\n';

  for (int level = 0; level < config.levels; ++level) {
    if (level > 0) mesh = refine_uniform(mesh);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      check_gamma(spec, mesh);
    } catch (const ModelError& err) {
      throw InvariantError(err.what());
    }
    int beta = 0;
    switch (config.stabilize) {
      case Stabilize::Auto: beta = select_beta(spec, mesh); break;
      case Stabilize::On: beta = 1; break;
      case Stabilize::Off: beta = 0; break;
    }
    const DualMesh dual(mesh);
    BemBlocks bem = assemble_bem(mesh);
    const CoupledSystem system = assemble_system(dual, spec, beta, upwind, bem);
    DiscreteSolution sol = solve(system);
    const double p_defect = check_P_identity(system, sol);
    check_invariants(system, bem, sol, p_defect);

    LevelErrors row;
    row.level = level;
    row.triangles = mesh.num_triangles();
    row.nodes = mesh.num_nodes();
    row.boundary_edges = mesh.num_boundary_edges();
    row.h = mesh.max_h();
    row.max_abs_u = sol.u.cwiseAbs().maxCoeff();
    row.a_inf = sol.a_inf;
    row.p_defect = p_defect;
    if (spec.exact) {
      row.e_h1 = error_h1_semi(mesh, sol.u, spec.exact->grad_u);
      row.e_l2 = error_l2(mesh, sol.u, spec.exact->u);
      const ExactSolution ex = *spec.exact;
      row.e_v = error_vnorm(bem.curve, sol.phi,
                            [ex](const Point& x, const Eigen::Vector2d& n) { return ex.phi(x, n); });
    }
    result.report.levels.push_back(row);

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    log << "level " << level << ": " << row.triangles << " triangles, " << row.nodes
        << " nodes, " << row.boundary_edges << " boundary edges, beta " << beta
        << ", residual " << sol.residual << ", cond ~ " << sol.condition_estimate << ", "
        << seconds << " s\n";

    if (level + 1 == config.levels) {
      LevelState state{mesh, std::move(bem), std::move(sol), interpolate_u0(mesh, spec)};
      result.finest = std::move(state);
    }
  }

  if (!config.out_table.empty()) {
    std::ofstream out(config.out_table);
    if (!out) throw ConfigError("cannot write table to '" + config.out_table + "'");
    write_error_table(out, result.report);
  }
  if (!config.out_field.empty()) {
    const LevelState& s = *result.finest;
    Eigen::VectorXd w(s.mesh.num_boundary_edges());
    for (int k = 0; k < w.size(); ++k) w[k] = s.solution.u[s.mesh.boundary_node(k)] - s.u0[k];
    result.field = eval_exterior_grid(s.mesh, s.bem.curve, s.solution.u, s.solution.phi, w,
                                      s.solution.a_inf.value_or(0.0),
                                      default_grid(s.mesh, config.grid_nx, config.grid_ny));
    std::ofstream out(config.out_field);
    if (!out) throw ConfigError("cannot write field to '" + config.out_field + "'");
    write_field(out, result.field);
  }
  return result;
}

}  // namespace fvbem
