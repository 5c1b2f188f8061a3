#include "fvbem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace fvbem {

DomainDescriptor DomainDescriptor::square(const Point& center, double halfwidth) {
  if (!(halfwidth > 0.0)) throw MeshError("square: halfwidth must be positive");
  DomainDescriptor d;
  d.kind = Kind::Square;
  d.lower = center - Point(halfwidth, halfwidth);
  d.upper = center + Point(halfwidth, halfwidth);
  d.cells_x = d.cells_y = 2;
  return d;
}

DomainDescriptor DomainDescriptor::rectangle(const Point& lower, const Point& upper,
                                             int cells_x, int cells_y) {
  if (!(upper.x() > lower.x() && upper.y() > lower.y()))
    throw MeshError("rectangle: empty extent");
  if (cells_x < 1 || cells_y < 1) throw MeshError("rectangle: need at least one cell");
  DomainDescriptor d;
  d.kind = Kind::Rectangle;
  d.lower = lower;
  d.upper = upper;
  d.cells_x = cells_x;
  d.cells_y = cells_y;
  return d;
}

DomainDescriptor DomainDescriptor::lshape(double halfwidth) {
  if (!(halfwidth > 0.0)) throw MeshError("lshape: halfwidth must be positive");
  DomainDescriptor d;
  d.kind = Kind::LShape;
  d.lower = Point(-halfwidth, -halfwidth);
  d.upper = Point(halfwidth, halfwidth);
  d.cells_x = d.cells_y = 2;
  return d;
}

std::string DomainDescriptor::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Square: os << "square"; break;
    case Kind::Rectangle: os << "rectangle"; break;
    case Kind::LShape: os << "lshape"; break;
  }
  os << " [" << lower.x() << "," << upper.x() << "]x[" << lower.y() << "," << upper.y()
     << "]";
  return os.str();
}

PrimalMesh::PrimalMesh(std::vector<Point> nodes, std::vector<Triangle> triangles)
    : nodes_(std::move(nodes)), triangles_(std::move(triangles)) {
  validate();
  build_topology();
}

void PrimalMesh::validate() const {
  if (triangles_.empty()) throw MeshError("mesh has no triangles");
  const int n = num_nodes();
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    for (int v : triangles_[t])
      if (v < 0 || v >= n) throw MeshError("triangle references a missing node");
    const auto& tri = triangles_[t];
    if (!(signed_area(nodes_[tri[0]], nodes_[tri[1]], nodes_[tri[2]]) > 0.0))
      throw MeshError("triangle " + std::to_string(t) +
                      " is degenerate or clockwise");
  }
}

void PrimalMesh::build_topology() {
  const auto n = static_cast<long long>(nodes_.size());
  std::unordered_map<long long, int> lookup;
  lookup.reserve(triangles_.size() * 2);
  edges_.clear();
  tri_edges_.assign(triangles_.size(), {-1, -1, -1});
  // orientation of the first traversal, used to check conformity
  std::vector<std::array<int, 2>> first_direction;

  for (int t = 0; t < num_triangles(); ++t) {
    for (int k = 0; k < 3; ++k) {
      const int a = triangles_[t][k], b = triangles_[t][(k + 1) % 3];
      const long long key = std::min(a, b) * n + std::max(a, b);
      auto it = lookup.find(key);
      if (it == lookup.end()) {
        const int id = static_cast<int>(edges_.size());
        lookup.emplace(key, id);
        edges_.push_back(Edge{{std::min(a, b), std::max(a, b)}, {t, -1}});
        first_direction.push_back({a, b});
        tri_edges_[t][k] = id;
      } else {
        Edge& e = edges_[it->second];
        if (e.triangles[1] != -1)
          throw MeshError("non-conforming mesh: edge shared by more than two triangles");
        if (first_direction[it->second][0] != b)
          throw MeshError("inconsistent triangle orientation across an edge");
        e.triangles[1] = t;
        tri_edges_[t][k] = it->second;
      }
    }
  }

  std::vector<int> outgoing(nodes_.size(), -1);
  std::vector<BoundaryEdge> unordered;
  for (int id = 0; id < static_cast<int>(edges_.size()); ++id) {
    if (edges_[id].triangles[1] != -1) continue;
    const auto dir = first_direction[id];
    if (outgoing[dir[0]] != -1)
      throw MeshError("boundary is not a simple closed loop (pinched vertex)");
    outgoing[dir[0]] = static_cast<int>(unordered.size());
    unordered.push_back(BoundaryEdge{dir, id, edges_[id].triangles[0]});
  }
  if (unordered.size() < 3) throw MeshError("boundary has fewer than three edges");

  int start = -1;
  for (int v = 0; v < static_cast<int>(nodes_.size()); ++v)
    if (outgoing[v] != -1) { start = v; break; }

  boundary_.clear();
  boundary_pos_.assign(nodes_.size(), -1);
  int v = start;
  do {
    const int k = outgoing[v];
    if (k == -1) throw MeshError("boundary loop is open");
    boundary_pos_[v] = static_cast<int>(boundary_.size());
    boundary_.push_back(unordered[k]);
    v = unordered[k].nodes[1];
    if (boundary_.size() > unordered.size()) throw MeshError("boundary loop is corrupt");
  } while (v != start);
  if (boundary_.size() != unordered.size())
    throw MeshError("boundary consists of more than one loop");
}

Point PrimalMesh::centroid(int t) const {
  const auto& tri = triangles_[t];
  return (nodes_[tri[0]] + nodes_[tri[1]] + nodes_[tri[2]]) / 3.0;
}

double PrimalMesh::area(int t) const {
  const auto& tri = triangles_[t];
  return signed_area(nodes_[tri[0]], nodes_[tri[1]], nodes_[tri[2]]);
}

double PrimalMesh::diameter(int t) const {
  const auto& tri = triangles_[t];
  double h = 0.0;
  for (int k = 0; k < 3; ++k)
    h = std::max(h, (nodes_[tri[k]] - nodes_[tri[(k + 1) % 3]]).norm());
  return h;
}

double PrimalMesh::inradius(int t) const {
  const auto& tri = triangles_[t];
  double perimeter = 0.0;
  for (int k = 0; k < 3; ++k) perimeter += (nodes_[tri[k]] - nodes_[tri[(k + 1) % 3]]).norm();
  return 2.0 * area(t) / perimeter;
}

std::array<Eigen::Vector2d, 3> PrimalMesh::hat_gradients(int t) const {
  const auto& tri = triangles_[t];
  const double two_area = 2.0 * area(t);
  std::array<Eigen::Vector2d, 3> grads;
  for (int k = 0; k < 3; ++k) {
    const Point& p = nodes_[tri[(k + 1) % 3]];
    const Point& q = nodes_[tri[(k + 2) % 3]];
    // gradient is the inward normal of the opposite edge scaled by 1/(2|T|)
    grads[k] = Eigen::Vector2d(p.y() - q.y(), q.x() - p.x()) / two_area;
  }
  return grads;
}

double PrimalMesh::max_h() const {
  double h = 0.0;
  for (int t = 0; t < num_triangles(); ++t) h = std::max(h, diameter(t));
  return h;
}

double PrimalMesh::shape_regularity() const {
  double q = std::numeric_limits<double>::infinity();
  for (int t = 0; t < num_triangles(); ++t) q = std::min(q, inradius(t) / diameter(t));
  return q;
}

double PrimalMesh::domain_area() const {
  double a = 0.0;
  for (int t = 0; t < num_triangles(); ++t) a += area(t);
  return a;
}

double PrimalMesh::domain_diameter() const {
  double d = 0.0;
  for (std::size_t i = 0; i < boundary_.size(); ++i)
    for (std::size_t j = i + 1; j < boundary_.size(); ++j)
      d = std::max(d, (nodes_[boundary_[i].nodes[0]] - nodes_[boundary_[j].nodes[0]]).norm());
  return d;
}

double PrimalMesh::boundary_length() const {
  double l = 0.0;
  for (int k = 0; k < num_boundary_edges(); ++k) l += boundary_edge_length(k);
  return l;
}

Point PrimalMesh::boundary_midpoint(int k) const {
  return 0.5 * (nodes_[boundary_[k].nodes[0]] + nodes_[boundary_[k].nodes[1]]);
}

Eigen::Vector2d PrimalMesh::boundary_normal(int k) const {
  const Eigen::Vector2d t = nodes_[boundary_[k].nodes[1]] - nodes_[boundary_[k].nodes[0]];
  return Eigen::Vector2d(t.y(), -t.x()) / t.norm();
}

double PrimalMesh::boundary_edge_length(int k) const {
  return (nodes_[boundary_[k].nodes[1]] - nodes_[boundary_[k].nodes[0]]).norm();
}

std::vector<Point> PrimalMesh::boundary_polygon() const {
  std::vector<Point> poly;
  poly.reserve(boundary_.size());
  for (const auto& e : boundary_) poly.push_back(nodes_[e.nodes[0]]);
  return poly;
}

std::array<double, 3> barycentric(const PrimalMesh& mesh, int t, const Point& x) {
  const auto& tri = mesh.triangles()[t];
  const auto& p = mesh.nodes();
  const double a = mesh.area(t);
  return {signed_area(x, p[tri[1]], p[tri[2]]) / a, signed_area(p[tri[0]], x, p[tri[2]]) / a,
          signed_area(p[tri[0]], p[tri[1]], x) / a};
}

int PrimalMesh::locate(const Point& x, double tol) const {
  for (int t = 0; t < num_triangles(); ++t) {
    const auto l = barycentric(*this, t, x);
    if (l[0] >= -tol && l[1] >= -tol && l[2] >= -tol) return t;
  }
  return -1;
}

PointLocator::PointLocator(const PrimalMesh& mesh) : mesh_(mesh) {
  lower_ = upper_ = mesh.nodes().front();
  for (const auto& p : mesh.nodes()) {
    lower_ = lower_.cwiseMin(p);
    upper_ = upper_.cwiseMax(p);
  }
  const int side = std::max(1, static_cast<int>(std::sqrt(mesh.num_triangles() / 2.0)));
  nx_ = ny_ = side;
  buckets_.assign(static_cast<std::size_t>(nx_) * ny_, {});
  const Point extent = (upper_ - lower_).cwiseMax(Point(1e-300, 1e-300));
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    Point lo = mesh.nodes()[tri[0]], hi = lo;
    for (int v : tri) {
      lo = lo.cwiseMin(mesh.nodes()[v]);
      hi = hi.cwiseMax(mesh.nodes()[v]);
    }
    const int i0 = std::clamp(static_cast<int>((lo.x() - lower_.x()) / extent.x() * nx_), 0, nx_ - 1);
    const int i1 = std::clamp(static_cast<int>((hi.x() - lower_.x()) / extent.x() * nx_), 0, nx_ - 1);
    const int j0 = std::clamp(static_cast<int>((lo.y() - lower_.y()) / extent.y() * ny_), 0, ny_ - 1);
    const int j1 = std::clamp(static_cast<int>((hi.y() - lower_.y()) / extent.y() * ny_), 0, ny_ - 1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) buckets_[static_cast<std::size_t>(j) * nx_ + i].push_back(t);
  }
}

int PointLocator::locate(const Point& x, double tol) const {
  const double slack = 1e-9 * (upper_ - lower_).norm();
  if (x.x() < lower_.x() - slack || x.x() > upper_.x() + slack ||
      x.y() < lower_.y() - slack || x.y() > upper_.y() + slack)
    return -1;
  const Point extent = (upper_ - lower_).cwiseMax(Point(1e-300, 1e-300));
  const int i = std::clamp(static_cast<int>((x.x() - lower_.x()) / extent.x() * nx_), 0, nx_ - 1);
  const int j = std::clamp(static_cast<int>((x.y() - lower_.y()) / extent.y() * ny_), 0, ny_ - 1);
  for (int t : buckets_[static_cast<std::size_t>(j) * nx_ + i]) {
    const auto l = barycentric(mesh_, t, x);
    if (l[0] >= -tol && l[1] >= -tol && l[2] >= -tol) return t;
  }
  return -1;
}

PrimalMesh build_structured_mesh(const DomainDescriptor& domain) {
  const int nx = domain.cells_x, ny = domain.cells_y;
  if (nx < 1 || ny < 1) throw MeshError("structured mesh needs at least one cell");
  auto cell_active = [&](int i, int j) {
    if (domain.kind != DomainDescriptor::Kind::LShape) return true;
    return !(i == 1 && j == 0);  // lower-right quadrant removed
  };
  switch (domain.kind) {
    case DomainDescriptor::Kind::Square:
    case DomainDescriptor::Kind::Rectangle:
      break;
    case DomainDescriptor::Kind::LShape:
      if (nx != 2 || ny != 2) throw MeshError("lshape is built from a 2x2 cell grid");
      break;
    default:
      throw MeshError("unsupported domain descriptor");
  }

  const double dx = (domain.upper.x() - domain.lower.x()) / nx;
  const double dy = (domain.upper.y() - domain.lower.y()) / ny;
  std::vector<int> corner_id(static_cast<std::size_t>(nx + 1) * (ny + 1), -1);
  std::vector<Point> nodes;
  auto corner = [&](int i, int j) -> int& {
    return corner_id[static_cast<std::size_t>(j) * (nx + 1) + i];
  };
  // corner nodes row by row, only those touching an active cell
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      bool used = false;
      for (int cj = j - 1; cj <= j; ++cj)
        for (int ci = i - 1; ci <= i; ++ci)
          if (ci >= 0 && ci < nx && cj >= 0 && cj < ny && cell_active(ci, cj)) used = true;
      if (!used) continue;
      corner(i, j) = static_cast<int>(nodes.size());
      nodes.emplace_back(domain.lower.x() + i * dx, domain.lower.y() + j * dy);
    }
  }
  std::vector<Triangle> triangles;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (!cell_active(i, j)) continue;
      const int c = static_cast<int>(nodes.size());
      nodes.emplace_back(domain.lower.x() + (i + 0.5) * dx, domain.lower.y() + (j + 0.5) * dy);
      const int p00 = corner(i, j), p10 = corner(i + 1, j);
      const int p11 = corner(i + 1, j + 1), p01 = corner(i, j + 1);
      triangles.push_back({p00, p10, c});
      triangles.push_back({p10, p11, c});
      triangles.push_back({p11, p01, c});
      triangles.push_back({p01, p00, c});
    }
  }
  return PrimalMesh(std::move(nodes), std::move(triangles));
}

PrimalMesh refine_uniform(const PrimalMesh& mesh) {
  std::vector<Point> nodes = mesh.nodes();
  const int n = mesh.num_nodes();
  nodes.reserve(n + mesh.edges().size());
  for (const auto& e : mesh.edges())
    nodes.push_back(0.5 * (mesh.nodes()[e.nodes[0]] + mesh.nodes()[e.nodes[1]]));

  std::vector<Triangle> triangles;
  triangles.reserve(4 * mesh.triangles().size());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const auto& te = mesh.triangle_edges(t);
    const int a = tri[0], b = tri[1], c = tri[2];
    const int mab = n + te[0], mbc = n + te[1], mca = n + te[2];
    triangles.push_back({a, mab, mca});
    triangles.push_back({mab, b, mbc});
    triangles.push_back({mca, mbc, c});
    triangles.push_back({mab, mbc, mca});
  }
  return PrimalMesh(std::move(nodes), std::move(triangles));
}

PrimalMesh refine_uniform(const PrimalMesh& mesh, int levels) {
  PrimalMesh out = mesh;
  for (int l = 0; l < levels; ++l) out = refine_uniform(out);
  return out;
}

void write_mesh(std::ostream& out, const PrimalMesh& mesh) {
  out.precision(17);
  for (int i = 0; i < mesh.num_nodes(); ++i)
    out << "node " << i << ' ' << mesh.nodes()[i].x() << ' ' << mesh.nodes()[i].y() << '\n';
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    out << "triangle " << t << ' ' << tri[0] << ' ' << tri[1] << ' ' << tri[2] << '\n';
  }
  for (int k = 0; k < mesh.num_boundary_edges(); ++k) {
    const auto& e = mesh.boundary_edges()[k];
    out << "boundary " << k << ' ' << e.nodes[0] << ' ' << e.nodes[1] << '\n';
  }
}

BoundaryPartition classify_boundary(const PrimalMesh& mesh, const VectorFunction& b) {
  BoundaryPartition part;
  const int m = mesh.num_boundary_edges();
  part.edge_tags.resize(m);
  part.subedge_tags.resize(2 * m);
  for (int k = 0; k < m; ++k) {
    const double bn = b(mesh.boundary_midpoint(k)).dot(mesh.boundary_normal(k));
    const FlowTag tag = bn >= 0.0 ? FlowTag::Outflow : FlowTag::Inflow;
    part.edge_tags[k] = tag;
    part.subedge_tags[2 * k] = tag;
    part.subedge_tags[2 * k + 1] = tag;
  }
  return part;
}

}  // namespace fvbem
