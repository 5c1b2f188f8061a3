#include "fvbem/fvm.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fvbem {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void require_finite(double v, const char* what, const Point& x) {
  if (!std::isfinite(v))
    throw ModelError(std::string("non-finite ") + what + " at (" + std::to_string(x.x()) + ", " +
                     std::to_string(x.y()) + ")");
}

Eigen::Matrix2d diffusion_at(const ProblemSpec& spec, const PrimalMesh& mesh, int t,
                             const Point& x) {
  const Eigen::Matrix2d a = spec.diffusion(x, mesh.centroid(t));
  for (int k = 0; k < 4; ++k) require_finite(a(k), "diffusion coefficient", x);
  return a;
}

Eigen::Vector2d velocity_at(const ProblemSpec& spec, const Point& x) {
  if (!spec.velocity.b) return Eigen::Vector2d::Zero();
  const Eigen::Vector2d b = spec.velocity(x);
  require_finite(b.x(), "velocity", x);
  require_finite(b.y(), "velocity", x);
  return b;
}

enum class Convection { Centered, Upwind, Omit };

/// Diffusion and (optionally) pointwise convection across interior
/// interfaces, plus reaction and outflow terms.
Triplets assemble_common(const DualMesh& dual, const ProblemSpec& spec,
                         const BoundaryPartition& partition, Convection convection) {
  const PrimalMesh& mesh = dual.primal();
  const LineRule& gauss = gauss_legendre(2);
  Triplets triplets;
  triplets.reserve(mesh.num_triangles() * 24);

  for (const Interface& face : dual.interfaces()) {
    for (const InterfaceSegment& seg : face.segments) {
      const int t = seg.triangle;
      const auto& tri = mesh.triangles()[t];
      const auto grads = mesh.hat_gradients(t);
      double coeff[3] = {0.0, 0.0, 0.0};
      for (std::size_t q = 0; q < gauss.nodes.size(); ++q) {
        const Point x = seg.from + gauss.nodes[q] * (seg.to - seg.from);
        const double w = gauss.weights[q] * seg.length;
        const Eigen::Vector2d an = diffusion_at(spec, mesh, t, x).transpose() * seg.normal;
        std::array<double, 3> lam{0.0, 0.0, 0.0};
        double bn = 0.0;
        if (convection == Convection::Centered) {
          lam = barycentric(mesh, t, x);
          bn = velocity_at(spec, x).dot(seg.normal);
        }
        for (int k = 0; k < 3; ++k) coeff[k] += w * (-grads[k].dot(an) + bn * lam[k]);
      }
      for (int k = 0; k < 3; ++k) {
        triplets.emplace_back(face.node_i, tri[k], coeff[k]);
        triplets.emplace_back(face.node_j, tri[k], -coeff[k]);
      }
    }
  }

  if (spec.reaction) {
    const TriangleRule& rule = triangle_rule_degree2();
    for (const Box& box : dual.boxes()) {
      for (const BoxPiece& piece : box.pieces) {
        const auto& tri = mesh.triangles()[piece.triangle];
        const auto& c = piece.corners;
        const std::array<std::array<Point, 3>, 2> halves{{{c[0], c[1], c[2]}, {c[0], c[2], c[3]}}};
        double coeff[3] = {0.0, 0.0, 0.0};
        for (const auto& h : halves) {
          const double area = signed_area(h[0], h[1], h[2]);
          for (std::size_t q = 0; q < rule.weights.size(); ++q) {
            const auto& bc = rule.barycentric[q];
            const Point x = bc[0] * h[0] + bc[1] * h[1] + bc[2] * h[2];
            const double r = spec.reaction(x);
            require_finite(r, "reaction coefficient", x);
            const auto lam = barycentric(mesh, piece.triangle, x);
            for (int k = 0; k < 3; ++k) coeff[k] += rule.weights[q] * area * r * lam[k];
          }
        }
        for (int k = 0; k < 3; ++k) triplets.emplace_back(box.node, tri[k], coeff[k]);
      }
    }
  }

  if (spec.velocity.b) {
    for (const BoundarySubEdge& sub : dual.boundary_subedges()) {
      if (!partition.is_outflow(sub.boundary_edge)) continue;
      const auto& be = mesh.boundary_edges()[sub.boundary_edge];
      const Point a = mesh.nodes()[be.nodes[0]];
      const Point b = mesh.nodes()[be.nodes[1]];
      const double edge_length = (b - a).norm();
      const Eigen::Vector2d n = mesh.boundary_normal(sub.boundary_edge);
      const double length = (sub.to - sub.from).norm();
      double coeff[2] = {0.0, 0.0};
      for (std::size_t q = 0; q < gauss.nodes.size(); ++q) {
        const Point x = sub.from + gauss.nodes[q] * (sub.to - sub.from);
        const double s = (x - a).norm() / edge_length;
        const double flux = gauss.weights[q] * length * velocity_at(spec, x).dot(n);
        coeff[0] += flux * (1.0 - s);
        coeff[1] += flux * s;
      }
      triplets.emplace_back(sub.node, be.nodes[0], coeff[0]);
      triplets.emplace_back(sub.node, be.nodes[1], coeff[1]);
    }
  }
  return triplets;
}

SparseMatrix to_sparse(int n, const Triplets& triplets) {
  SparseMatrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

}  // namespace

Eigen::VectorXd interp_dual(const Eigen::VectorXd& v, const DualMesh& dual) {
  if (v.size() != static_cast<Eigen::Index>(dual.boxes().size()))
    throw std::invalid_argument("interp_dual: vector length " + std::to_string(v.size()) +
                                " does not match " + std::to_string(dual.boxes().size()) +
                                " boxes");
  Eigen::VectorXd out(v.size());
  for (const Box& box : dual.boxes()) out[box.node] = v[box.node];
  return out;
}

double phi_full(double t) { return t >= 0.0 ? 1.0 : 0.0; }

double phi_steered(double t) {
  const double capped = t == 0.0 ? 1.0 : std::min(2.0 / std::abs(t), 1.0);
  return t < 0.0 ? capped / 2.0 : 1.0 - capped / 2.0;
}

UpwindScheme UpwindScheme::build(const DualMesh& dual, const ProblemSpec& spec,
                                 UpwindKind kind) {
  if (kind == UpwindKind::None)
    throw std::invalid_argument("UpwindScheme needs the full or steered weight function");
  const PrimalMesh& mesh = dual.primal();
  const LineRule& gauss = gauss_legendre(2);
  UpwindScheme s;
  s.kind = kind;
  const std::size_t n = dual.interfaces().size();
  s.beta.resize(n);
  s.a_norm.resize(n);
  s.lambda.resize(n);
  for (std::size_t e = 0; e < n; ++e) {
    const Interface& face = dual.interfaces()[e];
    double flux = 0.0;
    Eigen::Matrix2d a_sum = Eigen::Matrix2d::Zero();
    for (const InterfaceSegment& seg : face.segments) {
      for (std::size_t q = 0; q < gauss.nodes.size(); ++q) {
        const Point x = seg.from + gauss.nodes[q] * (seg.to - seg.from);
        const double w = gauss.weights[q] * seg.length;
        flux += w * velocity_at(spec, x).dot(seg.normal);
        a_sum += w * diffusion_at(spec, mesh, seg.triangle, x);
      }
    }
    const Eigen::Matrix2d a_mean = a_sum / face.length;
    s.beta[e] = flux / face.length;
    s.a_norm[e] = a_mean.cwiseAbs().rowwise().sum().maxCoeff();
    double peclet = s.beta[e] * face.length / s.a_norm[e];
    if (std::isnan(peclet)) peclet = 0.0;
    s.lambda[e] = kind == UpwindKind::Full ? phi_full(peclet) : phi_steered(peclet);
  }
  return s;
}

SparseMatrix assemble_fvm(const DualMesh& dual, const ProblemSpec& spec,
                          const BoundaryPartition& partition) {
  const Convection mode = spec.velocity.b ? Convection::Centered : Convection::Omit;
  return to_sparse(dual.primal().num_nodes(), assemble_common(dual, spec, partition, mode));
}

SparseMatrix assemble_fvm_upwind(const DualMesh& dual, const ProblemSpec& spec,
                                 const BoundaryPartition& partition,
                                 const UpwindScheme& scheme) {
  Triplets triplets = assemble_common(dual, spec, partition, Convection::Upwind);
  for (std::size_t e = 0; e < dual.interfaces().size(); ++e) {
    const Interface& face = dual.interfaces()[e];
    const double flux = scheme.beta[e] * face.length;
    const double lam = scheme.lambda[e];
    triplets.emplace_back(face.node_i, face.node_i, flux * lam);
    triplets.emplace_back(face.node_i, face.node_j, flux * (1.0 - lam));
    triplets.emplace_back(face.node_j, face.node_i, -flux * lam);
    triplets.emplace_back(face.node_j, face.node_j, -flux * (1.0 - lam));
  }
  return to_sparse(dual.primal().num_nodes(), triplets);
}

Eigen::VectorXd assemble_rhs_interior(const DualMesh& dual, const ProblemSpec& spec) {
  const PrimalMesh& mesh = dual.primal();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(mesh.num_nodes());
  const TriangleRule& rule = triangle_rule_degree5();
  for (const Box& box : dual.boxes()) {
    double sum = 0.0;
    for (const BoxPiece& piece : box.pieces) {
      const auto& c = piece.corners;
      if (spec.source.indicator) {
        const auto& ind = *spec.source.indicator;
        const std::vector<Point> quad(c.begin(), c.end());
        sum += ind.value * polygon_area(clip_to_rectangle(quad, ind.lower, ind.upper));
        continue;
      }
      if (!spec.source.f) continue;
      const std::array<std::array<Point, 3>, 2> halves{{{c[0], c[1], c[2]}, {c[0], c[2], c[3]}}};
      for (const auto& h : halves) {
        const double area = signed_area(h[0], h[1], h[2]);
        for (std::size_t q = 0; q < rule.weights.size(); ++q) {
          const auto& bc = rule.barycentric[q];
          const Point x = bc[0] * h[0] + bc[1] * h[1] + bc[2] * h[2];
          const double f = spec.source(x);
          require_finite(f, "source", x);
          sum += rule.weights[q] * area * f;
        }
      }
    }
    rhs[box.node] += sum;
  }

  if (spec.jumps.t0) {
    const LineRule& gauss = gauss_legendre(2);
    for (const BoundarySubEdge& sub : dual.boundary_subedges()) {
      const Eigen::Vector2d n = mesh.boundary_normal(sub.boundary_edge);
      const double length = (sub.to - sub.from).norm();
      for (std::size_t q = 0; q < gauss.nodes.size(); ++q) {
        const Point x = sub.from + gauss.nodes[q] * (sub.to - sub.from);
        rhs[sub.node] += gauss.weights[q] * length * spec.jumps.t0(x, n);
      }
    }
  }
  return rhs;
}

SparseMatrix assemble_trace_coupling(const DualMesh& dual) {
  const PrimalMesh& mesh = dual.primal();
  Triplets triplets;
  for (const BoundarySubEdge& sub : dual.boundary_subedges())
    triplets.emplace_back(sub.node, sub.boundary_edge, (sub.to - sub.from).norm());
  SparseMatrix m(mesh.num_nodes(), mesh.num_boundary_edges());
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

}  // namespace fvbem
