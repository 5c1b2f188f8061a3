#ifndef FVBEM_BEM_HPP_
#define FVBEM_BEM_HPP_

#include <array>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "fvbem/mesh.hpp"

namespace fvbem {

class BemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Closed polygon traversed counterclockwise. Edge e runs from vertex e to
/// vertex e+1 (cyclically); the outward normal is the tangent rotated
/// clockwise.
class BoundaryCurve {
 public:
  BoundaryCurve() = default;
  explicit BoundaryCurve(std::vector<Point> vertices);

  int size() const { return static_cast<int>(vertices_.size()); }
  const std::vector<Point>& vertices() const { return vertices_; }
  const Point& start(int e) const { return vertices_[e]; }
  const Point& end(int e) const { return vertices_[(e + 1) % size()]; }
  double length(int e) const { return (end(e) - start(e)).norm(); }
  Eigen::Vector2d normal(int e) const;
  double total_length() const;

  /// Splits every edge into `parts` equal pieces; piece p of edge e becomes
  /// edge e*parts + p.
  BoundaryCurve subdivide(int parts) const;

  /// Interior angle at each vertex (pi on straight parts).
  std::vector<double> interior_angles() const;

  /// Edge containing x within tol (relative to the edge length), or -1; the
  /// second value is the local parameter in [0,1].
  std::pair<int, double> locate(const Point& x, double tol = 1e-10) const;

 private:
  std::vector<Point> vertices_;
};

BoundaryCurve boundary_curve(const PrimalMesh& mesh);

/// G(z) = -log|z| / (2 pi).
double fundamental_solution(const Eigen::Vector2d& z);

/// Integral of G(x - y) over y on the segment [a,b].
double single_layer_potential(const Point& a, const Point& b, const Point& x);

/// Integral of dG(x - y)/dn_y over [a,b] against the two linear hat
/// functions (value 1 at a, resp. at b). The normal is the clockwise-rotated
/// tangent of a -> b.
std::array<double, 2> double_layer_potential(const Point& a, const Point& b, const Point& x);

/// Galerkin entry of V for two segments: the double integral of G.
double single_layer_entry(const Point& a1, const Point& b1, const Point& a2, const Point& b2);

/// Integral over x in [a1,b1] of double_layer_potential(a2, b2, x).
std::array<double, 2> double_layer_entry(const Point& a1, const Point& b1, const Point& a2,
                                         const Point& b2);

/// Edges x edges, symmetric.
Eigen::MatrixXd assemble_V(const BoundaryCurve& curve);
/// Edges x vertices; column i tests against the nodal hat of vertex i.
Eigen::MatrixXd assemble_K(const BoundaryCurve& curve);
/// Edges x vertices; entry (e,i) is the integral of hat i over edge e.
Eigen::MatrixXd assemble_boundary_mass(const BoundaryCurve& curve);

/// Exterior potential u_e(x) = -(V phi)(x) + (K w)(x) + a_inf with phi
/// edgewise constant and w the nodal exterior trace. Throws BemError for x
/// inside or on the polygon.
double eval_representation(const BoundaryCurve& curve, const Eigen::VectorXd& phi,
                           const Eigen::VectorXd& w, double a_inf, const Point& x);

/// Exterior trace at a boundary point x: -(V phi)(x) + (K w)(x) + angle/(2 pi) w(x),
/// where angle is the interior angle at x. Throws BemError if x is not on the
/// polygon.
double eval_trace_with_angle(const BoundaryCurve& curve, const Eigen::VectorXd& phi,
                             const Eigen::VectorXd& w, double a_inf, const Point& x);

}  // namespace fvbem

#endif  // FVBEM_BEM_HPP_
