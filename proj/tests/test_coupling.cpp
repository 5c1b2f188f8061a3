#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "fvbem/coupling.hpp"
#include "fvbem/dual_mesh.hpp"
#include "fvbem/model.hpp"
#include "oracles.hpp"

using namespace fvbem;

namespace {

struct Level {
  PrimalMesh mesh;
  std::unique_ptr<DualMesh> dual;
  BemBlocks bem;
};

Level make_level(const ProblemSpec& spec, int levels) {
  Level l;
  l.mesh = refine_uniform(build_structured_mesh(spec.domain), levels);
  l.dual = std::make_unique<DualMesh>(l.mesh);
  l.bem = assemble_bem(l.mesh);
  return l;
}

double rel_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

/// Constant coefficients and polynomial data, for which Gauss rules of
/// moderate degree are exact on every interface and box.
ProblemSpec polynomial_problem() {
  ProblemSpec spec;
  spec.name = "polynomial";
  spec.domain = DomainDescriptor::square({0, 0}, 0.25);
  Eigen::Matrix2d a;
  a << 2.0, 0.3, 0.3, 1.0;
  spec.diffusion = CoefficientField::smooth([a](const Point&) { return a; });
  spec.velocity.b = [](const Point&) { return Eigen::Vector2d(1.0, -0.5); };
  spec.velocity.divergence = [](const Point&) { return 0.0; };
  spec.reaction = [](const Point&) { return 0.2; };
  spec.source = SourceField::smooth([](const Point& x) { return 1.0 + x.x(); });
  spec.jumps.u0 = [](const Point& x) { return x.x(); };
  spec.jumps.t0 = [](const Point&, const Eigen::Vector2d&) { return 0.3; };
  return spec;
}

double uh_in(const PrimalMesh& mesh, const Eigen::VectorXd& u, int t, const Point& x) {
  const auto& tri = mesh.triangles()[t];
  const Point& p0 = mesh.nodes()[tri[0]];
  const Point& p1 = mesh.nodes()[tri[1]];
  const Point& p2 = mesh.nodes()[tri[2]];
  const double area = oracle::triangle_area(p0, p1, p2);
  return (oracle::triangle_area(x, p1, p2) * u[tri[0]] + oracle::triangle_area(p0, x, p2) * u[tri[1]] +
          oracle::triangle_area(p0, p1, x) * u[tri[2]]) /
         area;
}

Eigen::Vector2d grad_uh(const PrimalMesh& mesh, const Eigen::VectorXd& u, int t) {
  const auto& tri = mesh.triangles()[t];
  const auto g = oracle::hat_gradients(mesh.nodes()[tri[0]], mesh.nodes()[tri[1]], mesh.nodes()[tri[2]]);
  return u[tri[0]] * g[0] + u[tri[1]] * g[1] + u[tri[2]] * g[2];
}

}  // namespace

TEST_CASE("system dimensions") {
  const ProblemSpec hat = builtin_problem("mexican_hat");
  const Level l = make_level(hat, 0);
  const CoupledSystem sys = assemble_system(*l.dual, hat, 0, UpwindKind::None, l.bem);
  CHECK(sys.size() == 13 + 8);
  CHECK(sys.matrix.rows() == 21);
  CHECK(sys.matrix.cols() == 21);
  CHECK_FALSE(sys.has_ainf);

  const ProblemSpec lsh = builtin_problem("lshape_practical");
  const Level ll = make_level(lsh, 0);
  const CoupledSystem lsys = assemble_system(*ll.dual, lsh, 0, UpwindKind::Full, ll.bem);
  CHECK(lsys.size() == 11 + 8 + 1);
  CHECK(lsys.has_ainf);

  CHECK_THROWS_AS(assemble_coupled(*ll.dual, lsh, 0, UpwindKind::Full, ll.bem), std::invalid_argument);
  CHECK_THROWS_AS(assemble_ainf_variant(*l.dual, hat, 0, UpwindKind::None, l.bem), std::invalid_argument);
  CHECK_THROWS_AS(assemble_system(*l.dual, hat, 0, UpwindKind::None, ll.bem), std::invalid_argument);
  CHECK_THROWS_AS(assemble_system(*l.dual, hat, 2, UpwindKind::None, l.bem), std::invalid_argument);
}

TEST_CASE("block layout") {
  const ProblemSpec lsh = builtin_problem("lshape_practical");
  const Level l = make_level(lsh, 1);
  const CoupledSystem sys = assemble_system(*l.dual, lsh, 0, UpwindKind::Full, l.bem);
  const Eigen::MatrixXd a(sys.matrix);
  const int n = sys.num_nodes, m = sys.num_edges;
  CHECK((a.block(n, n, m, m) - l.bem.V).cwiseAbs().maxCoeff() == 0.0);
  for (int e = 0; e < m; ++e) {
    const double len = l.bem.curve.length(e);
    // a_inf enters the integral equation as -<psi_e, a_inf> and the
    // constraint row is sum |E_e| phi_e = 0
    CHECK(a(n + e, n + m) == doctest::Approx(-len).epsilon(1e-15));
    CHECK(a(n + m, n + e) == doctest::Approx(len).epsilon(1e-15));
  }
  CHECK(a.row(n + m).head(n).norm() == 0.0);
  CHECK(a(n + m, n + m) == 0.0);
  // trace coupling carries the minus sign of the box balance
  const auto& be = l.mesh.boundary_edges()[0];
  CHECK(a(be.nodes[0], n) == doctest::Approx(-0.5 * l.bem.curve.length(0)).epsilon(1e-15));
}

TEST_CASE("P functional") {
  const ProblemSpec hat = builtin_problem("mexican_hat");
  const Level l = make_level(hat, 2);
  const Eigen::VectorXd p = assemble_P_row(l.mesh, l.bem);
  const int n = l.mesh.num_nodes(), m = l.mesh.num_boundary_edges();
  REQUIRE(p.size() == n + m);
  for (int e = 0; e < m; ++e) CHECK(p[n + e] == doctest::Approx(l.bem.V.col(e).sum()).epsilon(1e-14));
  // P((1, 0)) = |Gamma|/2 - <1, K1> = |Gamma|
  CHECK(std::abs(p.head(n).sum() - l.bem.curve.total_length()) <= 1e-7);
  for (int i = 0; i < n; ++i)
    if (!l.mesh.is_boundary_node(i)) CHECK(p[i] == 0.0);
  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(n + m, -1.0, 2.0);
  CHECK(p.dot(3.5 * v) == doctest::Approx(3.5 * p.dot(v)).epsilon(1e-14));
}

TEST_CASE("stabilized right-hand side") {
  const ProblemSpec hat = builtin_problem("mexican_hat");
  const Level l = make_level(hat, 1);
  const CoupledSystem s0 = assemble_system(*l.dual, hat, 0, UpwindKind::None, l.bem);
  const CoupledSystem s1 = assemble_system(*l.dual, hat, 1, UpwindKind::None, l.bem);
  CHECK(s0.u0_functional != 0.0);
  CHECK((s1.rhs - s0.rhs - s0.u0_functional * s0.p_test).cwiseAbs().maxCoeff() <= 1e-15);
  const Eigen::MatrixXd diff = Eigen::MatrixXd(s1.matrix) - Eigen::MatrixXd(s0.matrix);
  CHECK((diff - s0.p_test * s0.p_trial.transpose()).cwiseAbs().maxCoeff() <= 1e-14 * Eigen::MatrixXd(s0.matrix).cwiseAbs().maxCoeff());
  CHECK((s1.rhs_plain - s0.rhs).norm() == 0.0);
}

TEST_CASE("zero data give the zero solution") {
  ProblemSpec spec = builtin_problem("tanh_convection");
  spec.source = SourceField::smooth([](const Point&) { return 0.0; });
  spec.jumps.u0 = [](const Point&) { return 0.0; };
  spec.jumps.t0 = [](const Point&, const Eigen::Vector2d&) { return 0.0; };
  const Level l = make_level(spec, 1);
  const CoupledSystem sys = assemble_system(*l.dual, spec, 0, UpwindKind::Steered, l.bem);
  CHECK(sys.rhs.norm() == 0.0);
  const DiscreteSolution sol = solve(sys);
  CHECK(sol.u.norm() == 0.0);
  CHECK(sol.phi.norm() == 0.0);
}

TEST_CASE("solver") {
  CoupledSystem id;
  id.num_nodes = 3;
  id.num_edges = 2;
  id.matrix.resize(5, 5);
  id.matrix.setIdentity();
  id.rhs = Eigen::VectorXd::LinSpaced(5, 1.0, 5.0);
  const DiscreteSolution s = solve(id);
  CHECK((s.u - id.rhs.head(3)).norm() == 0.0);
  CHECK((s.phi - id.rhs.tail(2)).norm() == 0.0);
  CHECK(s.condition_estimate == doctest::Approx(1.0));

  CoupledSystem singular = id;
  std::vector<Eigen::Triplet<double>> t{{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 1.0},
                                        {2, 2, 1.0}, {3, 3, 1.0}, {4, 4, 1.0}};
  singular.matrix.setFromTriplets(t.begin(), t.end());
  CHECK_THROWS_AS(solve(singular), SolverError);

  const ProblemSpec hat = builtin_problem("mexican_hat");
  const Level l = make_level(hat, 2);
  const DiscreteSolution sol = solve(assemble_system(*l.dual, hat, 1, UpwindKind::None, l.bem));
  CHECK(sol.residual <= 1e-11);
  CHECK(sol.condition_estimate > 1.0);
  CHECK(std::isfinite(sol.condition_estimate));
}

TEST_CASE("stabilized and plain systems have the same solution") {
  for (const char* name : {"mexican_hat", "tanh_convection", "lshape_practical"}) {
    const ProblemSpec spec = builtin_problem(name);
    const Level l = make_level(spec, 2);
    for (UpwindKind up : {UpwindKind::None, UpwindKind::Full}) {
      const DiscreteSolution a = solve(assemble_system(*l.dual, spec, 0, up, l.bem));
      const DiscreteSolution b = solve(assemble_system(*l.dual, spec, 1, up, l.bem));
      CHECK(rel_diff(b.u, a.u) <= 1e-10);
      CHECK(rel_diff(b.phi, a.phi) <= 1e-10);
    }
  }
}

TEST_CASE("P identity holds after the solve") {
  const ProblemSpec hat = builtin_problem("mexican_hat");
  const Level l = make_level(hat, 2);
  const CoupledSystem s0 = assemble_system(*l.dual, hat, 0, UpwindKind::None, l.bem);
  const CoupledSystem s1 = assemble_system(*l.dual, hat, 1, UpwindKind::None, l.bem);
  const double d0 = check_P_identity(s0, solve(s0));
  const double d1 = check_P_identity(s1, solve(s1));
  CHECK(d0 <= 1e-9 * (1 + std::abs(s0.u0_functional)));
  CHECK(d1 <= 1e-9 * (1 + std::abs(s1.u0_functional)));
  CHECK(std::abs(d0 - d1) <= 1e-12);

  const ProblemSpec lsh = builtin_problem("lshape_practical");
  const Level ll = make_level(lsh, 2);
  const CoupledSystem sl = assemble_system(*ll.dual, lsh, 0, UpwindKind::Full, ll.bem);
  CHECK(sl.u0_functional == 0.0);
  const DiscreteSolution sol = solve(sl);
  CHECK(check_P_identity(sl, sol) <= 1e-9);
  REQUIRE(sol.a_inf.has_value());
  double mean = 0.0;
  for (int e = 0; e < sl.num_edges; ++e) mean += ll.bem.curve.length(e) * sol.phi[e];
  CHECK(std::abs(mean) <= 1e-10 * sol.phi.norm());
}

TEST_CASE("rows of the solved system are box balances") {
  const ProblemSpec spec = polynomial_problem();
  const Level l = make_level(spec, 2);
  const PrimalMesh& mesh = l.mesh;
  const DualMesh& dual = *l.dual;
  const CoupledSystem sys = assemble_system(dual, spec, 0, UpwindKind::None, l.bem);
  const DiscreteSolution sol = solve(sys);
  const LineRule& g5 = gauss_legendre(5);
  const auto part = classify_boundary(mesh, spec.velocity.b);

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> pick(0, mesh.num_nodes() - 1);
  std::vector<int> rows{pick(rng), pick(rng), pick(rng), mesh.boundary_node(3)};
  for (int i : rows) {
    double balance = 0.0;
    for (const auto& tau : dual.interfaces()) {
      if (tau.node_i != i && tau.node_j != i) continue;
      const double sign = tau.node_i == i ? 1.0 : -1.0;
      for (const auto& seg : tau.segments) {
        const Eigen::Vector2d gu = grad_uh(mesh, sol.u, seg.triangle);
        for (std::size_t q = 0; q < g5.nodes.size(); ++q) {
          const Point x = seg.from + g5.nodes[q] * (seg.to - seg.from);
          const Eigen::Vector2d flux =
              -(spec.diffusion(x, x) * gu) + spec.velocity(x) * uh_in(mesh, sol.u, seg.triangle, x);
          balance += sign * seg.length * g5.weights[q] * flux.dot(seg.normal);
        }
      }
    }
    // reaction over the box pieces, each split into two triangles
    double source = 0.0;
    for (const auto& piece : dual.boxes()[i].pieces) {
      const auto& c = piece.corners;
      for (const auto& tri : {std::array<Point, 3>{c[0], c[1], c[2]}, std::array<Point, 3>{c[0], c[2], c[3]}}) {
        const double area = oracle::triangle_area(tri[0], tri[1], tri[2]);
        for (const auto& r : oracle::degree4_rule()) {
          const Point x = r.l1 * tri[0] + r.l2 * tri[1] + r.l3 * tri[2];
          balance += area * r.w * spec.reaction(x) * uh_in(mesh, sol.u, piece.triangle, x);
          source += area * r.w * spec.source(x);
        }
      }
    }
    // outflow term, the coupling density and t0 on the boundary halves of V_i
    for (std::size_t s = 0; s < dual.boundary_subedges().size(); ++s) {
      const auto& sub = dual.boundary_subedges()[s];
      if (sub.node != i) continue;
      const auto& be = mesh.boundary_edges()[sub.boundary_edge];
      const Eigen::Vector2d n = oracle::edge_normal(mesh.nodes()[be.nodes[0]], mesh.nodes()[be.nodes[1]]);
      const double len = (sub.to - sub.from).norm();
      for (std::size_t q = 0; q < g5.nodes.size(); ++q) {
        const Point x = sub.from + g5.nodes[q] * (sub.to - sub.from);
        if (part.subedge_tags[s] == FlowTag::Outflow)
          balance += len * g5.weights[q] * spec.velocity(x).dot(n) * uh_in(mesh, sol.u, be.triangle, x);
        source += len * g5.weights[q] * spec.jumps.t0(x, n);
      }
      balance -= len * sol.phi[sub.boundary_edge];
    }
    CHECK(std::abs(balance - source) <= 1e-10 * (1.0 + std::abs(source)));
  }
}

TEST_CASE("u0 interpolation follows the boundary loop") {
  const ProblemSpec spec = polynomial_problem();
  const PrimalMesh mesh = build_structured_mesh(spec.domain);
  const Eigen::VectorXd u0 = interpolate_u0(mesh, spec);
  for (int k = 0; k < mesh.num_boundary_edges(); ++k)
    CHECK(u0[k] == mesh.nodes()[mesh.boundary_node(k)].x());
}
