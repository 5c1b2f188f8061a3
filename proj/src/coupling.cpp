#include "fvbem/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/SparseLU>

namespace fvbem {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void append(Triplets& out, const SparseMatrix& m, int row0, int col0, double scale = 1.0) {
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
      out.emplace_back(row0 + it.row(), col0 + it.col(), scale * it.value());
}

CoupledSystem assemble_impl(const DualMesh& dual, const ProblemSpec& spec, int beta,
                            UpwindKind upwind, const BemBlocks& bem, bool ainf) {
  if (beta != 0 && beta != 1) throw std::invalid_argument("beta must be 0 or 1");
  const PrimalMesh& mesh = dual.primal();
  const int n = mesh.num_nodes();
  const int m = mesh.num_boundary_edges();
  if (bem.V.rows() != m || bem.K.cols() != m)
    throw std::invalid_argument("BEM blocks do not match the mesh boundary: " +
                                std::to_string(bem.V.rows()) + " vs " + std::to_string(m) +
                                " edges");
  for (int k = 0; k < m; ++k)
    if ((bem.curve.start(k) - mesh.nodes()[mesh.boundary_node(k)]).norm() > 1e-12)
      throw std::invalid_argument("BEM blocks were assembled on a different boundary");
  const int size = n + m + (ainf ? 1 : 0);

  const VectorFunction no_flow = [](const Point&) { return Eigen::Vector2d(0.0, 0.0); };
  const BoundaryPartition partition =
      classify_boundary(mesh, spec.velocity.b ? spec.velocity.b : no_flow);
  const SparseMatrix fvm =
      upwind == UpwindKind::None
          ? assemble_fvm(dual, spec, partition)
          : assemble_fvm_upwind(dual, spec, partition, UpwindScheme::build(dual, spec, upwind));
  const SparseMatrix trace = assemble_trace_coupling(dual);

  Triplets triplets;
  triplets.reserve(fvm.nonZeros() + trace.nonZeros() + 3 * m * m);
  append(triplets, fvm, 0, 0);
  append(triplets, trace, 0, n, -1.0);
  const Eigen::MatrixXd half_m_minus_k = 0.5 * bem.M - bem.K;
  for (int e = 0; e < m; ++e) {
    for (int k = 0; k < m; ++k) {
      if (half_m_minus_k(e, k) != 0.0)
        triplets.emplace_back(n + e, mesh.boundary_node(k), half_m_minus_k(e, k));
      triplets.emplace_back(n + e, n + k, bem.V(e, k));
    }
    if (ainf) {
      triplets.emplace_back(n + e, n + m, -bem.curve.length(e));
      triplets.emplace_back(n + m, n + e, bem.curve.length(e));
    }
  }

  CoupledSystem sys;
  sys.num_nodes = n;
  sys.num_edges = m;
  sys.has_ainf = ainf;
  sys.beta = beta;
  sys.rhs = Eigen::VectorXd::Zero(size);
  sys.rhs.head(n) = assemble_rhs_interior(dual, spec);
  const Eigen::VectorXd u0 = interpolate_u0(mesh, spec);
  const Eigen::VectorXd bem_rhs = half_m_minus_k * u0;
  sys.rhs.segment(n, m) = bem_rhs;
  sys.u0_functional = bem_rhs.sum();
  sys.rhs_plain = sys.rhs;

  sys.p_test = Eigen::VectorXd::Zero(size);
  sys.p_test.head(n + m) = assemble_P_row(mesh, bem);
  sys.p_trial = sys.p_test;
  if (ainf) sys.p_trial[n + m] = -bem.curve.total_length();

  if (beta == 1) {
    for (int i = 0; i < size; ++i) {
      if (sys.p_test[i] == 0.0) continue;
      for (int j = 0; j < size; ++j)
        if (sys.p_trial[j] != 0.0) triplets.emplace_back(i, j, sys.p_test[i] * sys.p_trial[j]);
    }
    sys.rhs += sys.u0_functional * sys.p_test;
  }

  sys.matrix.resize(size, size);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.matrix.makeCompressed();
  return sys;
}

/// Hager's estimate of ||A^{-1}||_1 using solves with A and A^T.
double inverse_norm_estimate(Eigen::SparseLU<SparseMatrix>& lu, int n) {
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / n);
  double estimate = 0.0;
  for (int iter = 0; iter < 5; ++iter) {
    const Eigen::VectorXd y = lu.solve(x);
    estimate = y.lpNorm<1>();
    const Eigen::VectorXd xi = y.unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
    const Eigen::VectorXd z = lu.transpose().solve(xi);
    Eigen::Index j = 0;
    const double zmax = z.cwiseAbs().maxCoeff(&j);
    if (zmax <= z.dot(x)) break;
    x.setZero();
    x[j] = 1.0;
  }
  return estimate;
}

}  // namespace

BemBlocks assemble_bem(const PrimalMesh& mesh) {
  BemBlocks bem;
  bem.curve = boundary_curve(mesh);
  bem.V = assemble_V(bem.curve);
  bem.K = assemble_K(bem.curve);
  bem.M = assemble_boundary_mass(bem.curve);
  return bem;
}

Eigen::VectorXd assemble_P_row(const PrimalMesh& mesh, const BemBlocks& bem) {
  const int n = mesh.num_nodes();
  const int m = mesh.num_boundary_edges();
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n + m);
  const Eigen::VectorXd node_part = (0.5 * bem.M - bem.K).colwise().sum();
  for (int k = 0; k < m; ++k) p[mesh.boundary_node(k)] = node_part[k];
  p.tail(m) = bem.V.colwise().sum();
  return p;
}

CoupledSystem assemble_coupled(const DualMesh& dual, const ProblemSpec& spec, int beta,
                               UpwindKind upwind, const BemBlocks& bem) {
  if (spec.radiation != Radiation::LogGrowth)
    throw std::invalid_argument("assemble_coupled: problem uses the a_inf radiation condition");
  return assemble_impl(dual, spec, beta, upwind, bem, false);
}

CoupledSystem assemble_ainf_variant(const DualMesh& dual, const ProblemSpec& spec, int beta,
                                    UpwindKind upwind, const BemBlocks& bem) {
  if (spec.radiation != Radiation::ConstantAtInfinity)
    throw std::invalid_argument("assemble_ainf_variant: problem uses log-growth radiation");
  return assemble_impl(dual, spec, beta, upwind, bem, true);
}

CoupledSystem assemble_system(const DualMesh& dual, const ProblemSpec& spec, int beta,
                              UpwindKind upwind, const BemBlocks& bem) {
  return spec.radiation == Radiation::LogGrowth
             ? assemble_coupled(dual, spec, beta, upwind, bem)
             : assemble_ainf_variant(dual, spec, beta, upwind, bem);
}

DiscreteSolution solve(const CoupledSystem& system, const SolveOptions& options) {
  const int size = system.size();
  Eigen::SparseLU<SparseMatrix> lu;
  lu.analyzePattern(system.matrix);
  lu.factorize(system.matrix);
  if (lu.info() != Eigen::Success)
    throw SolverError("sparse LU factorization failed: " + lu.lastErrorMessage(),
                      std::numeric_limits<double>::infinity());

  Eigen::VectorXd x = lu.solve(system.rhs);
  Eigen::VectorXd r = system.rhs - system.matrix * x;
  x += lu.solve(r);
  r = system.rhs - system.matrix * x;

  const double rhs_norm = system.rhs.norm();
  DiscreteSolution sol;
  sol.residual = rhs_norm > 0.0 ? r.norm() / rhs_norm : r.norm();
  if (options.estimate_condition) {
    double a_norm = 0.0;
    for (int k = 0; k < system.matrix.outerSize(); ++k) {
      double col = 0.0;
      for (SparseMatrix::InnerIterator it(system.matrix, k); it; ++it) col += std::abs(it.value());
      a_norm = std::max(a_norm, col);
    }
    sol.condition_estimate = a_norm * inverse_norm_estimate(lu, size);
  }
  if (!x.allFinite() || sol.residual > options.residual_tolerance)
    throw SolverError("linear solve did not reach the residual tolerance (relative residual " +
                          std::to_string(sol.residual) + ", condition estimate " +
                          std::to_string(sol.condition_estimate) + ")",
                      sol.condition_estimate);

  sol.u = x.head(system.num_nodes);
  sol.phi = x.segment(system.num_nodes, system.num_edges);
  if (system.has_ainf) sol.a_inf = x[size - 1];
  return sol;
}

double check_P_identity(const CoupledSystem& system, const DiscreteSolution& solution) {
  double value = system.p_trial.head(system.num_nodes).dot(solution.u) +
                 system.p_trial.segment(system.num_nodes, system.num_edges).dot(solution.phi);
  if (system.has_ainf && solution.a_inf) value += system.p_trial[system.size() - 1] * *solution.a_inf;
  return std::abs(value - system.u0_functional);
}

Eigen::VectorXd interpolate_u0(const PrimalMesh& mesh, const ProblemSpec& spec) {
  const int m = mesh.num_boundary_edges();
  Eigen::VectorXd u0 = Eigen::VectorXd::Zero(m);
  if (!spec.jumps.u0) return u0;
  for (int k = 0; k < m; ++k) u0[k] = spec.jumps.u0(mesh.nodes()[mesh.boundary_node(k)]);
  return u0;
}

}  // namespace fvbem
