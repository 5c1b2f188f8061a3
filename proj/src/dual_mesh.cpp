#include "fvbem/dual_mesh.hpp"

#include <algorithm>
#include <cmath>

namespace fvbem {

namespace {

Point midpoint(const PrimalMesh& mesh, int a, int b) {
  return 0.5 * (mesh.nodes()[a] + mesh.nodes()[b]);
}

int other_triangle(const Edge& e, int t) {
  return e.triangles[0] == t ? e.triangles[1] : e.triangles[0];
}

int local_index(const Triangle& tri, int node) {
  for (int k = 0; k < 3; ++k)
    if (tri[k] == node) return k;
  throw MeshError("node is not a vertex of the triangle");
}

}  // namespace

DualMesh::DualMesh(const PrimalMesh& mesh) : mesh_(&mesh) {
  const int n = mesh.num_nodes();
  std::vector<int> any_triangle(n, -1);
  for (int t = 0; t < mesh.num_triangles(); ++t)
    for (int v : mesh.triangles()[t])
      if (any_triangle[v] == -1) any_triangle[v] = t;

  boxes_.resize(n);
  for (int i = 0; i < n; ++i) {
    Box& box = boxes_[i];
    box.node = i;
    const bool on_boundary = mesh.is_boundary_node(i);
    int t = on_boundary ? mesh.boundary_edges()[mesh.boundary_position(i)].triangle
                        : any_triangle[i];
    if (t == -1) throw MeshError("node without incident triangle");
    const int first = t;
    if (on_boundary) box.polygon.push_back(mesh.nodes()[i]);
    do {
      const auto& tri = mesh.triangles()[t];
      const int li = local_index(tri, i);
      const int j = tri[(li + 1) % 3], k = tri[(li + 2) % 3];
      const Point mij = midpoint(mesh, i, j), mik = midpoint(mesh, i, k);
      const Point g = mesh.centroid(t);
      box.pieces.push_back(BoxPiece{t, {mesh.nodes()[i], mij, g, mik}});
      if (box.polygon.size() <= 1) box.polygon.push_back(mij);
      box.polygon.push_back(g);
      const Edge& across = mesh.edges()[mesh.triangle_edges(t)[(li + 2) % 3]];
      const int next = other_triangle(across, t);
      if (next == -1) {
        box.polygon.push_back(mik);
        break;
      }
      if (next == first) break;
      box.polygon.push_back(mik);
      t = next;
      if (box.pieces.size() > static_cast<std::size_t>(mesh.num_triangles()))
        throw MeshError("corrupt vertex fan");
    } while (true);
    box.area = 0.0;
    for (const auto& piece : box.pieces) {
      const auto& c = piece.corners;
      box.area += signed_area(c[0], c[1], c[2]) + signed_area(c[0], c[2], c[3]);
    }
  }

  interfaces_.resize(mesh.edges().size());
  for (std::size_t id = 0; id < mesh.edges().size(); ++id) {
    const Edge& e = mesh.edges()[id];
    Interface& face = interfaces_[id];
    face.node_i = e.nodes[0];
    face.node_j = e.nodes[1];
    face.edge = static_cast<int>(id);
    face.length = 0.0;
    const Point m = midpoint(mesh, e.nodes[0], e.nodes[1]);
    const Eigen::Vector2d ij = mesh.nodes()[e.nodes[1]] - mesh.nodes()[e.nodes[0]];
    for (int t : e.triangles) {
      if (t == -1) continue;
      InterfaceSegment s;
      s.from = m;
      s.to = mesh.centroid(t);
      s.triangle = t;
      const Eigen::Vector2d d = s.to - s.from;
      s.length = d.norm();
      s.normal = Eigen::Vector2d(d.y(), -d.x()) / s.length;
      if (s.normal.dot(ij) < 0.0) s.normal = -s.normal;
      face.length += s.length;
      face.segments.push_back(s);
    }
  }

  subedges_.reserve(2 * mesh.num_boundary_edges());
  for (int k = 0; k < mesh.num_boundary_edges(); ++k) {
    const auto& be = mesh.boundary_edges()[k];
    const Point m = mesh.boundary_midpoint(k);
    subedges_.push_back(BoundarySubEdge{k, be.nodes[0], mesh.nodes()[be.nodes[0]], m});
    subedges_.push_back(BoundarySubEdge{k, be.nodes[1], m, mesh.nodes()[be.nodes[1]]});
  }
}

DualMesh build_dual_mesh(const PrimalMesh& mesh) { return DualMesh(mesh); }

bool point_in_polygon(const std::vector<Point>& polygon, const Point& x, double tol) {
  const std::size_t n = polygon.size();
  double scale = 0.0;
  for (const auto& p : polygon) scale = std::max(scale, (p - polygon.front()).norm());
  for (std::size_t k = 0; k < n; ++k) {
    const Point& a = polygon[k];
    const Point& b = polygon[(k + 1) % n];
    const Eigen::Vector2d ab = b - a;
    const double t = std::clamp((x - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
    if ((a + t * ab - x).norm() <= tol * std::max(scale, 1.0)) return true;
  }
  bool inside = false;
  for (std::size_t k = 0, l = n - 1; k < n; l = k++) {
    const Point& a = polygon[k];
    const Point& b = polygon[l];
    if ((a.y() > x.y()) != (b.y() > x.y())) {
      const double xc = a.x() + (x.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (x.x() < xc) inside = !inside;
    }
  }
  return inside;
}

}  // namespace fvbem
