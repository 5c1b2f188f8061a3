#ifndef FVBEM_MODEL_HPP_
#define FVBEM_MODEL_HPP_

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fvbem/mesh.hpp"

namespace fvbem {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ScalarFunction = std::function<double(const Point&)>;
using MatrixFunction = std::function<Eigen::Matrix2d(const Point&)>;
/// Function on the boundary that may depend on the outward normal.
using BoundaryFunction = std::function<double(const Point&, const Eigen::Vector2d&)>;

/// Symmetric positive definite diffusion matrix A(x).
///
/// A piecewise constant field is sampled at the barycenter of the triangle the
/// point belongs to, so the mesh must be aligned with its discontinuities.
class CoefficientField {
 public:
  enum class Kind { Smooth, PiecewiseConstant };

  CoefficientField() = default;
  static CoefficientField smooth(MatrixFunction f);
  static CoefficientField piecewise_constant(MatrixFunction at_cell_center);
  static CoefficientField isotropic(double value);

  Kind kind() const { return kind_; }
  /// A at x inside the triangle whose barycenter is `cell_center`.
  Eigen::Matrix2d operator()(const Point& x, const Point& cell_center) const {
    return kind_ == Kind::Smooth ? f_(x) : f_(cell_center);
  }

 private:
  Kind kind_ = Kind::Smooth;
  MatrixFunction f_;
};

struct VelocityField {
  VectorFunction b;
  /// Analytic divergence; a central difference is used when absent.
  std::optional<ScalarFunction> divergence;

  Eigen::Vector2d operator()(const Point& x) const { return b(x); }
};

/// Source term f. An indicator source (constant on an axis-aligned rectangle,
/// zero elsewhere) is integrated exactly over the control volumes.
struct SourceField {
  ScalarFunction f;
  struct Indicator {
    Point lower;
    Point upper;
    double value;
  };
  std::optional<Indicator> indicator;

  static SourceField smooth(ScalarFunction f);
  static SourceField rectangle_indicator(const Point& lower, const Point& upper, double value);

  double operator()(const Point& x) const { return f(x); }
};

struct JumpData {
  ScalarFunction u0;
  BoundaryFunction t0;
};

/// Exact interior/exterior pair; phi is grad u_e . n on the boundary.
struct ExactSolution {
  ScalarFunction u;
  VectorFunction grad_u;
  ScalarFunction u_e;
  VectorFunction grad_ue;

  double phi(const Point& x, const Eigen::Vector2d& n) const { return grad_ue(x).dot(n); }
};

enum class Radiation { LogGrowth, ConstantAtInfinity };
enum class UpwindKind { None, Full, Steered };

struct ProblemSpec {
  std::string name;
  DomainDescriptor domain;
  CoefficientField diffusion;
  VelocityField velocity;
  ScalarFunction reaction;
  SourceField source;
  JumpData jumps;
  std::optional<ExactSolution> exact;
  Radiation radiation = Radiation::LogGrowth;
  UpwindKind upwind = UpwindKind::None;
};

std::string to_string(UpwindKind kind);
UpwindKind parse_upwind(const std::string& text);

/// div b at x, analytic when available, else central difference with step
/// 1e-6 * scale.
double divergence(const VelocityField& b, const Point& x, double scale = 1.0);

/// gamma(x) = div b(x) / 2 + r(x).
double gamma(const ProblemSpec& spec, const Point& x);

/// Points where data are sampled for diagnostics: mesh nodes and the nodes of
/// the 7-point rule on every triangle.
std::vector<Point> sample_points(const PrimalMesh& mesh);

/// Throws ModelError naming the first sample point with gamma < -tol.
void check_gamma(const ProblemSpec& spec, const PrimalMesh& mesh, double tol = 1e-12);

/// 1 if gamma vanishes (|gamma| <= tol) at every sample point, else 0.
int select_beta(const ProblemSpec& spec, const PrimalMesh& mesh, double tol = 1e-9);

struct EigenvalueReport {
  double lambda_min;
  Point where;
  /// lambda_min <= 0.25: the ellipticity requirement lambda_min > C_K/4 with
  /// C_K in [1/2, 1) cannot be certified.
  bool warning;
};

EigenvalueReport min_eigenvalue_report(const CoefficientField& a, const PrimalMesh& mesh);

/// Interior and exterior data must match the jumps: checks u - u_e = u0 and
/// the conormal jump on every boundary edge at Gauss points. Returns the
/// largest defect.
double manufactured_defect(const ProblemSpec& spec, const PrimalMesh& mesh);

/// Mexican hat on (-1/4,1/4)^2 with the given off-diagonal factor (160 in the
/// reference configuration).
ProblemSpec mexican_hat_problem(double off_diagonal = 160.0);
ProblemSpec tanh_convection_problem();
ProblemSpec lshape_practical_problem();

/// "mexican_hat", "mexican_hat_165", "tanh_convection", "lshape_practical".
ProblemSpec builtin_problem(const std::string& name);

}  // namespace fvbem

#endif  // FVBEM_MODEL_HPP_
