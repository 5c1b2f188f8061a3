#include "fvbem/bem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fvbem/parallel.hpp"

namespace fvbem {

namespace {

constexpr double kInvTwoPi = 0.5 / std::numbers::pi;
// Outer pieces are split until their length is at most this multiple of the
// distance to the source segment; 8 Gauss points then give ~1e-13 accuracy.
constexpr double kAdmissibility = 1.0;
constexpr int kMaxDepth = 60;

/// Coordinates of x in the frame of segment [a,b]: along the tangent and
/// along the outward (clockwise) normal. Offsets below roundoff are zeroed.
struct LocalFrame {
  double length;
  double xi;
  double eta;
};

LocalFrame local_frame(const Point& a, const Point& b, const Point& x) {
  const Eigen::Vector2d d = b - a;
  const double length = d.norm();
  if (!(length > 0.0)) throw BemError("degenerate boundary segment");
  const Eigen::Vector2d t = d / length;
  const Eigen::Vector2d n(t.y(), -t.x());
  const Eigen::Vector2d r = x - a;
  double eta = r.dot(n);
  if (std::abs(eta) <= 1e-14 * length) eta = 0.0;
  return {length, r.dot(t), eta};
}

/// Antiderivative of log(u^2 + eta^2) in u.
double log_antiderivative(double u, double eta) {
  const double r2 = u * u + eta * eta;
  double value = -2.0 * u;
  if (r2 > 0.0) value += u * std::log(r2);
  if (eta != 0.0) value += 2.0 * eta * std::atan(u / eta);
  return value;
}

double segment_point_distance(const Point& a, const Point& b, const Point& x) {
  const Eigen::Vector2d ab = b - a;
  const double t = std::clamp((x - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return (a + t * ab - x).norm();
}

/// Distance between two non-crossing segments.
double segment_distance(const Point& a1, const Point& b1, const Point& a2, const Point& b2) {
  return std::min({segment_point_distance(a2, b2, a1), segment_point_distance(a2, b2, b1),
                   segment_point_distance(a1, b1, a2), segment_point_distance(a1, b1, b2)});
}

bool same_segment(const Point& a1, const Point& b1, const Point& a2, const Point& b2) {
  return (a1 == a2 && b1 == b2) || (a1 == b2 && b1 == a2);
}

/// Integrates f(x) over x in [p,q], refining toward the source segment
/// [a,b] so that every Gauss panel is well separated from it.
template <class F>
void integrate_outer(const Point& p, const Point& q, const Point& a, const Point& b, F&& f,
                     int depth = 0) {
  const double len = (q - p).norm();
  if (depth < kMaxDepth && len > kAdmissibility * segment_distance(p, q, a, b)) {
    const Point m = 0.5 * (p + q);
    integrate_outer(p, m, a, b, f, depth + 1);
    integrate_outer(m, q, a, b, f, depth + 1);
    return;
  }
  const LineRule& gauss = gauss_legendre(8);
  for (std::size_t k = 0; k < gauss.nodes.size(); ++k)
    f(p + gauss.nodes[k] * (q - p), gauss.weights[k] * len);
}

}  // namespace

BoundaryCurve::BoundaryCurve(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 3) throw BemError("boundary curve needs at least three vertices");
  for (int e = 0; e < size(); ++e)
    if (!(length(e) > 0.0)) throw BemError("degenerate boundary segment " + std::to_string(e));
}

Eigen::Vector2d BoundaryCurve::normal(int e) const {
  const Eigen::Vector2d t = (end(e) - start(e)) / length(e);
  return {t.y(), -t.x()};
}

double BoundaryCurve::total_length() const {
  double sum = 0.0;
  for (int e = 0; e < size(); ++e) sum += length(e);
  return sum;
}

BoundaryCurve BoundaryCurve::subdivide(int parts) const {
  if (parts < 1) throw BemError("subdivide needs a positive part count");
  std::vector<Point> out;
  out.reserve(vertices_.size() * parts);
  for (int e = 0; e < size(); ++e)
    for (int p = 0; p < parts; ++p)
      out.push_back(start(e) + (static_cast<double>(p) / parts) * (end(e) - start(e)));
  return BoundaryCurve(std::move(out));
}

std::vector<double> BoundaryCurve::interior_angles() const {
  std::vector<double> angles(vertices_.size());
  for (int i = 0; i < size(); ++i) {
    const int prev = (i + size() - 1) % size();
    const Eigen::Vector2d t0 = (end(prev) - start(prev)) / length(prev);
    const Eigen::Vector2d t1 = (end(i) - start(i)) / length(i);
    double turn = std::atan2(cross(t0, t1), t0.dot(t1));
    if (std::abs(turn) <= 1e-9) turn = 0.0;
    angles[i] = std::numbers::pi - turn;
  }
  return angles;
}

std::pair<int, double> BoundaryCurve::locate(const Point& x, double tol) const {
  for (int e = 0; e < size(); ++e) {
    const Eigen::Vector2d d = end(e) - start(e);
    const double s = (x - start(e)).dot(d) / d.squaredNorm();
    if (s < -tol || s > 1.0 + tol) continue;
    if (std::abs(cross(d, x - start(e))) / d.norm() <= tol * d.norm())
      return {e, s <= tol ? 0.0 : (s >= 1.0 - tol ? 1.0 : s)};
  }
  return {-1, 0.0};
}

BoundaryCurve boundary_curve(const PrimalMesh& mesh) {
  return BoundaryCurve(mesh.boundary_polygon());
}

double fundamental_solution(const Eigen::Vector2d& z) {
  const double r = z.norm();
  if (r == 0.0) throw BemError("fundamental solution is singular at z = 0");
  return -kInvTwoPi * std::log(r);
}

double single_layer_potential(const Point& a, const Point& b, const Point& x) {
  const LocalFrame f = local_frame(a, b, x);
  return -0.5 * kInvTwoPi *
         (log_antiderivative(f.length - f.xi, f.eta) - log_antiderivative(-f.xi, f.eta));
}

std::array<double, 2> double_layer_potential(const Point& a, const Point& b, const Point& x) {
  const LocalFrame f = local_frame(a, b, x);
  if (f.eta == 0.0) return {0.0, 0.0};
  const Eigen::Vector2d ra = a - x, rb = b - x;
  // Integral of eta / |x - y|^2 along the segment equals minus the signed
  // angle from a - x to b - x.
  const double i1 = -std::atan2(cross(ra, rb), ra.dot(rb));
  const double i2 = 0.5 * f.eta * std::log(rb.squaredNorm() / ra.squaredNorm()) + f.xi * i1;
  const double at_end = kInvTwoPi * i2 / f.length;
  return {kInvTwoPi * i1 - at_end, at_end};
}

double single_layer_entry(const Point& a1, const Point& b1, const Point& a2, const Point& b2) {
  if (same_segment(a1, b1, a2, b2)) {
    const double l = (b1 - a1).norm();
    return kInvTwoPi * l * l * (1.5 - std::log(l));
  }
  double sum = 0.0;
  integrate_outer(a1, b1, a2, b2, [&](const Point& x, double w) {
    sum += w * single_layer_potential(a2, b2, x);
  });
  return sum;
}

std::array<double, 2> double_layer_entry(const Point& a1, const Point& b1, const Point& a2,
                                         const Point& b2) {
  if (same_segment(a1, b1, a2, b2)) return {0.0, 0.0};
  std::array<double, 2> sum{0.0, 0.0};
  integrate_outer(a1, b1, a2, b2, [&](const Point& x, double w) {
    const auto d = double_layer_potential(a2, b2, x);
    sum[0] += w * d[0];
    sum[1] += w * d[1];
  });
  return sum;
}

Eigen::MatrixXd assemble_V(const BoundaryCurve& curve) {
  const int n = curve.size();
  Eigen::MatrixXd v(n, n);
  parallel_for(n, [&](int e) {
    for (int f = e; f < n; ++f)
      v(e, f) = single_layer_entry(curve.start(e), curve.end(e), curve.start(f), curve.end(f));
  });
  for (int e = 0; e < n; ++e)
    for (int f = 0; f < e; ++f) v(e, f) = v(f, e);
  return v;
}

Eigen::MatrixXd assemble_K(const BoundaryCurve& curve) {
  const int n = curve.size();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  parallel_for(n, [&](int e) {
    for (int f = 0; f < n; ++f) {
      const auto d = double_layer_entry(curve.start(e), curve.end(e), curve.start(f), curve.end(f));
      k(e, f) += d[0];
      k(e, (f + 1) % n) += d[1];
    }
  });
  return k;
}

Eigen::MatrixXd assemble_boundary_mass(const BoundaryCurve& curve) {
  const int n = curve.size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int e = 0; e < n; ++e) {
    m(e, e) += 0.5 * curve.length(e);
    m(e, (e + 1) % n) += 0.5 * curve.length(e);
  }
  return m;
}

namespace {

double layer_potentials(const BoundaryCurve& curve, const Eigen::VectorXd& phi,
                        const Eigen::VectorXd& w, const Point& x) {
  const int n = curve.size();
  if (phi.size() != n || w.size() != n)
    throw BemError("density sizes do not match the boundary curve");
  double value = 0.0;
  for (int f = 0; f < n; ++f) {
    value -= phi[f] * single_layer_potential(curve.start(f), curve.end(f), x);
    const auto d = double_layer_potential(curve.start(f), curve.end(f), x);
    value += w[f] * d[0] + w[(f + 1) % n] * d[1];
  }
  return value;
}

}  // namespace

double eval_representation(const BoundaryCurve& curve, const Eigen::VectorXd& phi,
                           const Eigen::VectorXd& w, double a_inf, const Point& x) {
  if (curve.locate(x).first >= 0) throw BemError("evaluation point lies on the boundary");
  double angle = 0.0;
  for (int f = 0; f < curve.size(); ++f) {
    const Eigen::Vector2d ra = curve.start(f) - x, rb = curve.end(f) - x;
    angle += std::atan2(cross(ra, rb), ra.dot(rb));
  }
  if (angle > std::numbers::pi) throw BemError("evaluation point lies inside the domain");
  return layer_potentials(curve, phi, w, x) + a_inf;
}

double eval_trace_with_angle(const BoundaryCurve& curve, const Eigen::VectorXd& phi,
                             const Eigen::VectorXd& w, double a_inf, const Point& x) {
  const auto [e, s] = curve.locate(x);
  if (e < 0) throw BemError("trace evaluation point is not on the boundary");
  const int n = curve.size();
  double angle = std::numbers::pi;
  double trace = (1.0 - s) * w[e] + s * w[(e + 1) % n];
  if (s == 0.0 || s == 1.0) {
    const int vertex = s == 0.0 ? e : (e + 1) % n;
    angle = curve.interior_angles()[vertex];
    trace = w[vertex];
  }
  return layer_potentials(curve, phi, w, x) + angle * kInvTwoPi * trace + a_inf;
}

}  // namespace fvbem
