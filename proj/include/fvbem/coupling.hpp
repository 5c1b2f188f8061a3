#ifndef FVBEM_COUPLING_HPP_
#define FVBEM_COUPLING_HPP_

#include <optional>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "fvbem/bem.hpp"
#include "fvbem/dual_mesh.hpp"
#include "fvbem/fvm.hpp"
#include "fvbem/model.hpp"

namespace fvbem {

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}
  double condition_estimate() const { return condition_; }

 private:
  double condition_;
};

/// Boundary element matrices on the boundary loop of a mesh. Vertex k of the
/// curve is mesh node PrimalMesh::boundary_node(k).
struct BemBlocks {
  BoundaryCurve curve;
  Eigen::MatrixXd V;  // edges x edges
  Eigen::MatrixXd K;  // edges x boundary vertices
  Eigen::MatrixXd M;  // edges x boundary vertices
};

BemBlocks assemble_bem(const PrimalMesh& mesh);

/// Coefficients of P(v, psi) = <1, (1/2 - K) v + V psi> over the unknowns
/// (all mesh nodes, then boundary edges).
Eigen::VectorXd assemble_P_row(const PrimalMesh& mesh, const BemBlocks& bem);

/// Unknowns are ordered (u at all nodes, phi per boundary edge, a_inf). The
/// rows are the box balances, the Galerkin integral equation per edge and,
/// for the a_inf variant, the constraint sum |E_e| phi_e = 0.
struct CoupledSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  int num_nodes = 0;
  int num_edges = 0;
  bool has_ainf = false;
  int beta = 0;
  /// P evaluated on the trial unknowns; for the a_inf variant the last entry
  /// is -|Gamma|, so that p_trial . x = <1, (1/2 - K) u0> for every solution.
  Eigen::VectorXd p_trial;
  /// P on the test functions (zero on the constraint row).
  Eigen::VectorXd p_test;
  /// <1, (1/2 - K) u0>.
  double u0_functional = 0.0;
  /// Unstabilized right-hand side, kept for comparisons.
  Eigen::VectorXd rhs_plain;

  int size() const { return static_cast<int>(rhs.size()); }
};

struct DiscreteSolution {
  Eigen::VectorXd u;
  Eigen::VectorXd phi;
  std::optional<double> a_inf;
  double residual = 0.0;            // ||A x - b|| / ||b||
  double condition_estimate = 0.0;  // 1-norm estimate
};

/// Coupled system for the log-growth radiation condition. beta = 1 adds the
/// rank-one term P(u) P(v) and the matching right-hand side.
CoupledSystem assemble_coupled(const DualMesh& dual, const ProblemSpec& spec, int beta,
                               UpwindKind upwind, const BemBlocks& bem);

/// Coupled system with the constant a_inf at infinity.
CoupledSystem assemble_ainf_variant(const DualMesh& dual, const ProblemSpec& spec, int beta,
                                    UpwindKind upwind, const BemBlocks& bem);

/// Dispatches on spec.radiation.
CoupledSystem assemble_system(const DualMesh& dual, const ProblemSpec& spec, int beta,
                              UpwindKind upwind, const BemBlocks& bem);

struct SolveOptions {
  double residual_tolerance = 1e-11;
  bool estimate_condition = true;
};

/// Sparse LU with one step of iterative refinement. Throws SolverError when
/// the factorization fails or the residual stays above the tolerance.
DiscreteSolution solve(const CoupledSystem& system, const SolveOptions& options = {});

/// |P(u_h, phi_h) - <1, (1/2 - K) u0>|, including the a_inf term when present.
double check_P_identity(const CoupledSystem& system, const DiscreteSolution& solution);

/// Boundary nodal values of u0 (curve vertex order).
Eigen::VectorXd interpolate_u0(const PrimalMesh& mesh, const ProblemSpec& spec);

}  // namespace fvbem

#endif  // FVBEM_COUPLING_HPP_
