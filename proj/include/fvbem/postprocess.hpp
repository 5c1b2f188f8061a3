#ifndef FVBEM_POSTPROCESS_HPP_
#define FVBEM_POSTPROCESS_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fvbem/bem.hpp"
#include "fvbem/model.hpp"

namespace fvbem {

/// ||grad(u - u_h)||_{L2} with the 7-point rule on every triangle.
double error_h1_semi(const PrimalMesh& mesh, const Eigen::VectorXd& u_h,
                     const VectorFunction& grad_u);
/// ||u - u_h||_{L2} with the 7-point rule on every triangle.
double error_l2(const PrimalMesh& mesh, const Eigen::VectorXd& u_h, const ScalarFunction& u);

/// Value of the piecewise linear function u_h at x (x must lie in the mesh).
double eval_interior(const PrimalMesh& mesh, const Eigen::VectorXd& u_h, const Point& x);

/// Edgewise means of phi(x, n) on the curve (8-point Gauss per edge).
Eigen::VectorXd project_p0(const BoundaryCurve& curve, const BoundaryFunction& phi);

/// ||phi - phi_h||_V where phi is replaced by its P0 projection onto the
/// partition that splits every edge into `refine` pieces.
///
/// The fine single-layer matrix may be passed in to reuse it across calls;
/// it must belong to curve.subdivide(refine).
double error_vnorm(const BoundaryCurve& curve, const Eigen::VectorXd& phi_h,
                   const BoundaryFunction& phi, int refine = 4,
                   const Eigen::MatrixXd* fine_V = nullptr);

/// Axis-aligned sampling grid with nx x ny points including the corners.
struct Grid {
  Point lower;
  Point upper;
  int nx = 0;
  int ny = 0;

  Point point(int i, int j) const;
};

enum class SampleRegion { Exterior, Boundary, Interior };

struct FieldSample {
  Point x;
  SampleRegion region;
  /// Exterior potential (or its trace on the boundary); for interior points
  /// the interior solution u_h, which callers may ignore.
  double value;
};

/// Samples the exterior solution; points inside the domain are flagged as
/// Interior and carry u_h(x).
std::vector<FieldSample> eval_exterior_grid(const PrimalMesh& mesh, const BoundaryCurve& curve,
                                            const Eigen::VectorXd& u_h,
                                            const Eigen::VectorXd& phi_h,
                                            const Eigen::VectorXd& w, double a_inf,
                                            const Grid& grid);

/// Slopes -log(e_{k+1}/e_k) / log(N_{k+1}/N_k); empty where undefined (zero
/// or non-finite error).
std::vector<std::optional<double>> eoc(const std::vector<double>& errors,
                                       const std::vector<double>& counts);

struct LevelErrors {
  int level = 0;
  int triangles = 0;
  int nodes = 0;
  int boundary_edges = 0;
  double h = 0.0;
  std::optional<double> e_h1;
  std::optional<double> e_l2;
  std::optional<double> e_v;
  double max_abs_u = 0.0;
  std::optional<double> a_inf;
  double p_defect = 0.0;
};

struct ErrorReport {
  std::string problem;
  std::vector<LevelErrors> levels;
  std::vector<std::string> warnings;
};

/// CSV with columns N,h,e_H1semi,e_L2,e_Vnorm,eoc_H1,eoc_L2,eoc_V followed
/// by level,nodes,edges,max_abs_u,a_inf,P_defect. Missing values are "NA".
void write_error_table(std::ostream& out, const ErrorReport& report);

/// CSV with columns x,y,value,region.
void write_field(std::ostream& out, const std::vector<FieldSample>& samples);

}  // namespace fvbem

#endif  // FVBEM_POSTPROCESS_HPP_
