#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <set>
#include <sstream>

#include "fvbem/dual_mesh.hpp"
#include "fvbem/fvm.hpp"
#include "fvbem/mesh.hpp"
#include "oracles.hpp"

using namespace fvbem;

namespace {

PrimalMesh hat_square() { return build_structured_mesh(DomainDescriptor::square({0, 0}, 0.25)); }
PrimalMesh lshape() { return build_structured_mesh(DomainDescriptor::lshape()); }

std::vector<PrimalMesh> suite() {
  std::vector<PrimalMesh> out;
  for (const auto& base : {hat_square(), lshape(),
                           build_structured_mesh(DomainDescriptor::square({0.25, 0.25}, 0.25)),
                           build_structured_mesh(DomainDescriptor::rectangle({0, 0}, {2, 1}, 3, 2))}) {
    out.push_back(base);
    out.push_back(refine_uniform(base));
    out.push_back(refine_uniform(base, 2));
  }
  return out;
}

}  // namespace

TEST_CASE("initial meshes have the expected counts") {
  const PrimalMesh sq = hat_square();
  CHECK(sq.num_triangles() == 16);
  CHECK(sq.num_nodes() == 13);
  CHECK(sq.num_boundary_edges() == 8);
  const PrimalMesh l = lshape();
  CHECK(l.num_triangles() == 12);
  CHECK(l.num_nodes() == 11);
  CHECK(build_structured_mesh(DomainDescriptor::square({0.25, 0.25}, 0.25)).num_triangles() == 16);
  CHECK(sq.domain_area() == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(l.domain_area() == doctest::Approx(0.1875).epsilon(1e-14));
}

TEST_CASE("invalid domains are rejected") {
  CHECK_THROWS_AS(build_structured_mesh(DomainDescriptor::square({0, 0}, 0.0)), MeshError);
  CHECK_THROWS_AS(build_structured_mesh(DomainDescriptor::rectangle({1, 0}, {0, 1}, 2, 2)), MeshError);
  CHECK_THROWS_AS(build_structured_mesh(DomainDescriptor::rectangle({0, 0}, {1, 1}, 0, 2)), MeshError);
  // two triangles with opposite orientation sharing an edge
  CHECK_THROWS_AS(PrimalMesh({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, {{0, 1, 2}, {1, 2, 3}}), MeshError);
}

TEST_CASE("triangles are positively oriented and the boundary is one ccw loop") {
  for (const auto& mesh : suite()) {
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      const auto& tri = mesh.triangles()[t];
      CHECK(signed_area(mesh.nodes()[tri[0]], mesh.nodes()[tri[1]], mesh.nodes()[tri[2]]) > 0.0);
    }
    const int m = mesh.num_boundary_edges();
    for (int k = 0; k < m; ++k)
      CHECK(mesh.boundary_edges()[k].nodes[1] == mesh.boundary_edges()[(k + 1) % m].nodes[0]);
    CHECK(polygon_area(mesh.boundary_polygon()) ==
          doctest::Approx(mesh.domain_area()).epsilon(1e-13));
    // outward normal points away from the adjacent triangle
    for (int k = 0; k < m; ++k) {
      const Point c = mesh.centroid(mesh.boundary_edges()[k].triangle);
      CHECK((mesh.boundary_midpoint(k) - c).dot(mesh.boundary_normal(k)) > 0.0);
    }
  }
}

TEST_CASE("every interior edge is shared by exactly two triangles") {
  for (const auto& mesh : suite()) {
    std::map<std::pair<int, int>, int> count;
    for (const auto& tri : mesh.triangles())
      for (int k = 0; k < 3; ++k) {
        int a = tri[k], b = tri[(k + 1) % 3];
        if (a > b) std::swap(a, b);
        ++count[{a, b}];
      }
    int boundary = 0;
    for (const auto& [edge, c] : count) {
      CHECK(c <= 2);
      if (c == 1) ++boundary;
    }
    CHECK(boundary == mesh.num_boundary_edges());
    CHECK(static_cast<int>(count.size()) == static_cast<int>(mesh.edges().size()));
  }
}

TEST_CASE("refinement quadruples triangles, halves h and keeps parents as a prefix") {
  PrimalMesh mesh = hat_square();
  CHECK(refine_uniform(mesh).num_triangles() == 64);
  CHECK(refine_uniform(lshape()).num_triangles() == 48);
  const double shape = mesh.shape_regularity();
  for (int level = 0; level < 4; ++level) {
    const PrimalMesh fine = refine_uniform(mesh);
    CHECK(fine.num_triangles() == 4 * mesh.num_triangles());
    CHECK(fine.max_h() == doctest::Approx(0.5 * mesh.max_h()).epsilon(1e-13));
    CHECK(fine.shape_regularity() == doctest::Approx(shape).epsilon(1e-12));
    for (int i = 0; i < mesh.num_nodes(); ++i) CHECK((fine.nodes()[i] - mesh.nodes()[i]).norm() == 0.0);
    CHECK(fine.boundary_node(0) == mesh.boundary_node(0));
    CHECK(fine.num_boundary_edges() == 2 * mesh.num_boundary_edges());
    mesh = fine;
  }
}

TEST_CASE("box areas on the reference triangle are a third each") {
  const PrimalMesh tri({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
  const DualMesh dual(tri);
  for (const auto& box : dual.boxes()) {
    CHECK(box.area == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(std::abs(polygon_area(box.polygon)) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  }
}

TEST_CASE("boxes partition the domain") {
  for (const auto& mesh : suite()) {
    const DualMesh dual(mesh);
    double sum = 0.0;
    for (const auto& box : dual.boxes()) {
      CHECK(polygon_area(box.polygon) == doctest::Approx(box.area).epsilon(1e-12));
      sum += box.area;
    }
    CHECK(std::abs(sum - mesh.domain_area()) <= 1e-12 * mesh.domain_area());
  }
}

TEST_CASE("box pieces match the incident triangles") {
  // On the crossed grid a cell-center node touches 4 triangles and an interior
  // grid vertex 8; after one refinement, midpoints of interior primal edges
  // touch 6, giving the hexagonal boxes of a regular diagonal grid.
  const PrimalMesh mesh = hat_square();
  const DualMesh dual(mesh);
  std::vector<int> incident(mesh.num_nodes(), 0);
  for (const auto& tri : mesh.triangles())
    for (int v : tri) ++incident[v];
  for (int i = 0; i < mesh.num_nodes(); ++i)
    CHECK(static_cast<int>(dual.boxes()[i].pieces.size()) == incident[i]);
  int center = -1;
  for (int i = 0; i < mesh.num_nodes(); ++i)
    if (mesh.nodes()[i].norm() < 1e-15) center = i;
  REQUIRE(center >= 0);
  CHECK(incident[center] == 8);

  const PrimalMesh fine = refine_uniform(mesh);
  const DualMesh fine_dual(fine);
  int hexagons = 0;
  for (int i = mesh.num_nodes(); i < fine.num_nodes(); ++i)
    if (!fine.is_boundary_node(i)) {
      CHECK(fine_dual.boxes()[i].pieces.size() == 6);
      ++hexagons;
    }
  CHECK(hexagons > 0);
}

TEST_CASE("interfaces consist of one or two segments with consistent normals") {
  for (const auto& mesh : suite()) {
    const DualMesh dual(mesh);
    REQUIRE(dual.interfaces().size() == mesh.edges().size());
    for (const auto& tau : dual.interfaces()) {
      const auto& e = mesh.edges()[tau.edge];
      const bool interior = e.triangles[1] >= 0;
      CHECK(tau.node_i < tau.node_j);
      CHECK(tau.segments.size() == (interior ? 2u : 1u));
      const Eigen::Vector2d dir = mesh.nodes()[tau.node_j] - mesh.nodes()[tau.node_i];
      double len = 0.0;
      for (const auto& s : tau.segments) {
        CHECK(s.normal.dot(dir) > 0.0);
        CHECK(s.normal.norm() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(s.normal.dot(s.to - s.from)) <= 1e-14 * s.length);
        CHECK((s.to - s.from).norm() == doctest::Approx(s.length).epsilon(1e-14));
        len += s.length;
      }
      CHECK(len == doctest::Approx(tau.length).epsilon(1e-14));
      // both segments start at the edge midpoint
      const Point mid = 0.5 * (mesh.nodes()[tau.node_i] + mesh.nodes()[tau.node_j]);
      for (const auto& s : tau.segments) CHECK((s.from - mid).norm() <= 1e-15);
    }
  }
}

TEST_CASE("boundary sub-edges split every boundary edge at its midpoint") {
  const PrimalMesh mesh = lshape();
  const DualMesh dual(mesh);
  REQUIRE(static_cast<int>(dual.boundary_subedges().size()) == 2 * mesh.num_boundary_edges());
  for (int k = 0; k < mesh.num_boundary_edges(); ++k) {
    const auto& a = dual.boundary_subedges()[2 * k];
    const auto& b = dual.boundary_subedges()[2 * k + 1];
    CHECK(a.node == mesh.boundary_edges()[k].nodes[0]);
    CHECK(b.node == mesh.boundary_edges()[k].nodes[1]);
    CHECK((a.to - b.from).norm() == 0.0);
    CHECK((a.to - a.from).norm() ==
          doctest::Approx(0.5 * mesh.boundary_edge_length(k)).epsilon(1e-14));
  }
}

TEST_CASE("edge integrals of v_h minus its dual interpolant vanish") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (const auto& mesh : {hat_square(), refine_uniform(lshape())}) {
    const DualMesh dual(mesh);
    Eigen::VectorXd v(mesh.num_nodes());
    for (int i = 0; i < v.size(); ++i) v[i] = dist(rng);
    const Eigen::VectorXd box_value = interp_dual(v, dual);
    for (const auto& edge : mesh.edges()) {
      const int a = edge.nodes[0], b = edge.nodes[1];
      const Point pa = mesh.nodes()[a], pb = mesh.nodes()[b];
      std::vector<double> cuts{0.0, 1.0};
      for (int node : {a, b})
        for (double s : oracle::crossings(pa, pb, dual.boxes()[node].polygon)) cuts.push_back(s);
      std::sort(cuts.begin(), cuts.end());
      double integral = 0.0;
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double s0 = cuts[k], s1 = cuts[k + 1];
        if (s1 - s0 < 1e-15) continue;
        const double sm = 0.5 * (s0 + s1);
        const Point x = pa + sm * (pb - pa);
        int owner = -1;
        for (int node : {a, b})
          if (oracle::inside_polygon(dual.boxes()[node].polygon, x)) owner = node;
        REQUIRE(owner >= 0);
        const double vh = (1 - sm) * v[a] + sm * v[b];  // exact midpoint rule for linears
        integral += (s1 - s0) * (vh - box_value[owner]);
      }
      // integral is in the edge parameter; the physical value carries a factor |E|
      CHECK(std::abs(integral) <= 1e-14 * v.cwiseAbs().maxCoeff());
    }
  }
}

TEST_CASE("boundary classification follows the sign of b.n") {
  const PrimalMesh sq = hat_square();
  auto all = [](const std::vector<FlowTag>& tags, FlowTag t) {
    return std::all_of(tags.begin(), tags.end(), [t](FlowTag x) { return x == t; });
  };
  const auto zero = classify_boundary(sq, [](const Point&) { return Eigen::Vector2d(0, 0); });
  CHECK(all(zero.edge_tags, FlowTag::Outflow));
  CHECK(zero.subedge_tags.size() == 2 * zero.edge_tags.size());

  const PrimalMesh sq2 = build_structured_mesh(DomainDescriptor::square({0.25, 0.25}, 0.25));
  const auto stretch =
      classify_boundary(sq2, [](const Point& x) { return Eigen::Vector2d(1000 * x.x(), 0); });
  CHECK(all(stretch.edge_tags, FlowTag::Outflow));

  const PrimalMesh unit = build_structured_mesh(DomainDescriptor::rectangle({0, 0}, {1, 1}, 2, 2));
  const auto p = classify_boundary(unit, [](const Point&) { return Eigen::Vector2d(1, 0); });
  for (int k = 0; k < unit.num_boundary_edges(); ++k) {
    const Point m = unit.boundary_midpoint(k);
    const FlowTag expected = m.x() < 1e-14 ? FlowTag::Inflow : FlowTag::Outflow;
    CHECK(p.edge_tags[k] == expected);
    CHECK(p.subedge_tags[2 * k] == expected);
    CHECK(p.subedge_tags[2 * k + 1] == expected);
  }
}

TEST_CASE("point location and barycentric coordinates") {
  const PrimalMesh mesh = refine_uniform(lshape());
  const PointLocator locator(mesh);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-0.25, 0.25);
  for (int k = 0; k < 200; ++k) {
    const Point x(dist(rng), dist(rng));
    const bool inside = !(x.x() > 0 && x.y() < 0);
    const int t = locator.locate(x);
    CHECK((t >= 0) == inside);
    if (t >= 0) {
      CHECK(t == mesh.locate(x));
      const auto bc = barycentric(mesh, t, x);
      const auto& tri = mesh.triangles()[t];
      const Point back = bc[0] * mesh.nodes()[tri[0]] + bc[1] * mesh.nodes()[tri[1]] +
                         bc[2] * mesh.nodes()[tri[2]];
      CHECK((back - x).norm() <= 1e-14);
    }
  }
}

TEST_CASE("mesh dump lists nodes, triangles and boundary edges") {
  const PrimalMesh mesh = hat_square();
  std::ostringstream out;
  write_mesh(out, mesh);
  std::istringstream in(out.str());
  std::map<std::string, int> records;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    ++records[kind];
  }
  CHECK(records["node"] == 13);
  CHECK(records["triangle"] == 16);
  CHECK(records["boundary"] == 8);
}
