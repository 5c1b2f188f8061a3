#ifndef FVBEM_FVM_HPP_
#define FVBEM_FVM_HPP_

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "fvbem/dual_mesh.hpp"
#include "fvbem/model.hpp"

namespace fvbem {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Piecewise constant dual interpolant: box V_i carries the value v(a_i).
Eigen::VectorXd interp_dual(const Eigen::VectorXd& v, const DualMesh& dual);

/// Weight function of the classical upwind scheme; 1 for t >= 0, else 0.
double phi_full(double t);
/// Weight function with reduced numerical diffusion, 1/2 at t = 0.
double phi_steered(double t);

/// Interface averages and upwind weights, indexed like DualMesh::interfaces().
///
/// lambda[e] belongs to node_i of interface e; the weight seen from node_j is
/// 1 - lambda[e], which keeps the convective flux conservative.
struct UpwindScheme {
  UpwindKind kind = UpwindKind::Full;
  std::vector<double> beta;      // mean of b.n_i over tau_ij
  std::vector<double> a_norm;    // max-row-sum norm of the mean of A
  std::vector<double> lambda;

  static UpwindScheme build(const DualMesh& dual, const ProblemSpec& spec, UpwindKind kind);
};

/// Finite volume matrix: row i is the flux balance of V_i with the diffusive
/// and convective fluxes over interior interfaces, the reaction term and the
/// outflow boundary term.
SparseMatrix assemble_fvm(const DualMesh& dual, const ProblemSpec& spec,
                          const BoundaryPartition& partition);

/// As assemble_fvm, with the convective interface flux evaluated at the
/// upwind value lambda u_i + (1 - lambda) u_j.
SparseMatrix assemble_fvm_upwind(const DualMesh& dual, const ProblemSpec& spec,
                                 const BoundaryPartition& partition,
                                 const UpwindScheme& scheme);

/// Component i is the integral of f over V_i plus the integral of t0 over the
/// boundary part of V_i.
Eigen::VectorXd assemble_rhs_interior(const DualMesh& dual, const ProblemSpec& spec);

/// Nodes x boundary edges; entry (i,e) is the length of the half of edge e
/// attached to V_i.
SparseMatrix assemble_trace_coupling(const DualMesh& dual);

}  // namespace fvbem

#endif  // FVBEM_FVM_HPP_
