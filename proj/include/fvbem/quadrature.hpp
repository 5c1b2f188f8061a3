#ifndef FVBEM_QUADRATURE_HPP_
#define FVBEM_QUADRATURE_HPP_

#include <array>
#include <vector>

#include <Eigen/Dense>

namespace fvbem {

using Point = Eigen::Vector2d;

/// Node/weight pair of a rule on the unit interval [0,1]; weights sum to 1.
struct LineRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with n points mapped to [0,1]. Rules are computed once
/// by Newton iteration on P_n and cached.
const LineRule& gauss_legendre(int n);

/// Barycentric rule on a triangle; weights sum to 1 (multiply by the area).
struct TriangleRule {
  std::vector<std::array<double, 3>> barycentric;
  std::vector<double> weights;
};

/// Edge-midpoint rule, exact for quadratics.
const TriangleRule& triangle_rule_degree2();
/// 7-point rule exact for polynomials of degree 5.
const TriangleRule& triangle_rule_degree5();

inline double cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

inline double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * cross(b - a, c - a);
}

/// Signed area of a simple polygon (positive for counterclockwise order).
double polygon_area(const std::vector<Point>& polygon);

/// Clips a polygon against an axis-aligned rectangle (Sutherland-Hodgman).
std::vector<Point> clip_to_rectangle(const std::vector<Point>& polygon,
                                     const Point& lower, const Point& upper);

}  // namespace fvbem

#endif  // FVBEM_QUADRATURE_HPP_
