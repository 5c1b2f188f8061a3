#include "fvbem/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace fvbem {

namespace {

LineRule compute_gauss_legendre(int n) {
  LineRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // ascending order on [0,1]
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

}  // namespace

const LineRule& gauss_legendre(int n) {
  if (n < 1 || n > 64) throw std::invalid_argument("gauss_legendre: n out of range");
  static std::mutex mutex;
  static std::map<int, LineRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

const TriangleRule& triangle_rule_degree2() {
  static const TriangleRule rule{
      {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}},
      {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
  return rule;
}

const TriangleRule& triangle_rule_degree5() {
  static const TriangleRule rule = [] {
    const double s = std::sqrt(15.0);
    const double a1 = (6.0 - s) / 21.0, b1 = (9.0 + 2.0 * s) / 21.0;
    const double a2 = (6.0 + s) / 21.0, b2 = (9.0 - 2.0 * s) / 21.0;
    const double w1 = (155.0 - s) / 1200.0, w2 = (155.0 + s) / 1200.0;
    TriangleRule r;
    r.barycentric = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
                     {a1, a1, b1}, {a1, b1, a1}, {b1, a1, a1},
                     {a2, a2, b2}, {a2, b2, a2}, {b2, a2, a2}};
    r.weights = {9.0 / 40.0, w1, w1, w1, w2, w2, w2};
    return r;
  }();
  return rule;
}

double polygon_area(const std::vector<Point>& polygon) {
  double area = 0.0;
  const std::size_t n = polygon.size();
  for (std::size_t k = 0; k < n; ++k) area += cross(polygon[k], polygon[(k + 1) % n]);
  return 0.5 * area;
}

std::vector<Point> clip_to_rectangle(const std::vector<Point>& polygon,
                                     const Point& lower, const Point& upper) {
  std::vector<Point> out = polygon;
  // Each half plane is {x : sign * (x[axis] - bound) <= 0}.
  const std::array<std::array<double, 3>, 4> planes{{{0, -1.0, lower.x()},
                                                     {0, 1.0, upper.x()},
                                                     {1, -1.0, lower.y()},
                                                     {1, 1.0, upper.y()}}};
  for (const auto& plane : planes) {
    if (out.empty()) break;
    const int axis = static_cast<int>(plane[0]);
    const double sign = plane[1], bound = plane[2];
    auto dist = [&](const Point& p) { return sign * (p[axis] - bound); };
    std::vector<Point> in = std::move(out);
    out.clear();
    for (std::size_t k = 0; k < in.size(); ++k) {
      const Point& p = in[k];
      const Point& q = in[(k + 1) % in.size()];
      const double dp = dist(p), dq = dist(q);
      if (dp <= 0.0) out.push_back(p);
      if ((dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0)) {
        const double t = dp / (dp - dq);
        out.push_back(p + t * (q - p));
      }
    }
  }
  return out;
}

}  // namespace fvbem
