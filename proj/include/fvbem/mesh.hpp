#ifndef FVBEM_MESH_HPP_
#define FVBEM_MESH_HPP_

#include <array>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "fvbem/quadrature.hpp"

namespace fvbem {

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Triangle = std::array<int, 3>;

/// Undirected primal edge. `triangles[1]` is -1 on the boundary.
struct Edge {
  std::array<int, 2> nodes;
  std::array<int, 2> triangles;
};

/// Boundary edge in loop order; `nodes` follow the counterclockwise loop.
struct BoundaryEdge {
  std::array<int, 2> nodes;
  int edge;      // index into PrimalMesh::edges()
  int triangle;  // the adjacent triangle
};

/// Description of the polygonal domains the structured mesher understands.
struct DomainDescriptor {
  enum class Kind { Square, Rectangle, LShape };

  Kind kind = Kind::Square;
  Point lower{0.0, 0.0};
  Point upper{1.0, 1.0};
  int cells_x = 2;
  int cells_y = 2;

  static DomainDescriptor square(const Point& center, double halfwidth);
  static DomainDescriptor rectangle(const Point& lower, const Point& upper,
                                    int cells_x, int cells_y);
  /// (-hw,hw)^2 without the closed lower-right quadrant [0,hw]x[-hw,0].
  static DomainDescriptor lshape(double halfwidth = 0.25);

  std::string describe() const;
};

/// Conforming triangulation of a polygon with a connected boundary.
///
/// Triangles are stored counterclockwise. The boundary loop is traced
/// counterclockwise starting at the boundary node with the smallest index, so
/// nested refinements keep the same starting node. The outward normal of a
/// boundary edge is its unit tangent rotated clockwise by 90 degrees.
class PrimalMesh {
 public:
  PrimalMesh() = default;
  PrimalMesh(std::vector<Point> nodes, std::vector<Triangle> triangles);

  const std::vector<Point>& nodes() const { return nodes_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_; }

  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  int num_boundary_edges() const { return static_cast<int>(boundary_.size()); }

  /// Edge ids of triangle t; local edge k joins vertices k and k+1.
  const std::array<int, 3>& triangle_edges(int t) const { return tri_edges_[t]; }
  /// Loop position of a node on the boundary, -1 for interior nodes.
  int boundary_position(int node) const { return boundary_pos_[node]; }
  bool is_boundary_node(int node) const { return boundary_pos_[node] >= 0; }
  /// Boundary node k is the start of boundary edge k.
  int boundary_node(int k) const { return boundary_[k].nodes[0]; }

  Point centroid(int t) const;
  double area(int t) const;
  double diameter(int t) const;
  double inradius(int t) const;
  /// Gradients of the three nodal hat functions on triangle t.
  std::array<Eigen::Vector2d, 3> hat_gradients(int t) const;

  double max_h() const;
  /// min over triangles of inradius / diameter.
  double shape_regularity() const;
  double domain_area() const;
  /// Largest distance between two boundary nodes.
  double domain_diameter() const;
  double boundary_length() const;

  Point boundary_midpoint(int k) const;
  Eigen::Vector2d boundary_normal(int k) const;
  double boundary_edge_length(int k) const;
  /// Boundary vertices in loop order.
  std::vector<Point> boundary_polygon() const;

  /// Triangle containing x (with tolerance), or -1. Linear scan; see
  /// PointLocator for repeated queries.
  int locate(const Point& x, double tol = 1e-12) const;

 private:
  void build_topology();
  void validate() const;

  std::vector<Point> nodes_;
  std::vector<Triangle> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> tri_edges_;
  std::vector<BoundaryEdge> boundary_;
  std::vector<int> boundary_pos_;
};

/// Bucket grid over the mesh bounding box for point-in-triangle queries.
class PointLocator {
 public:
  explicit PointLocator(const PrimalMesh& mesh);
  /// Triangle containing x, or -1 if x lies outside the mesh.
  int locate(const Point& x, double tol = 1e-12) const;

 private:
  const PrimalMesh& mesh_;
  Point lower_, upper_;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<int>> buckets_;
};

/// Barycentric coordinates of x with respect to triangle t.
std::array<double, 3> barycentric(const PrimalMesh& mesh, int t, const Point& x);

PrimalMesh build_structured_mesh(const DomainDescriptor& domain);

/// Red refinement: every triangle is split into four by its edge midpoints.
/// Parent nodes keep their indices; midpoints are appended in edge order.
PrimalMesh refine_uniform(const PrimalMesh& mesh);

/// Refines `levels` times.
PrimalMesh refine_uniform(const PrimalMesh& mesh, int levels);

/// Writes "node i x y", "triangle t a b c" and "boundary k a b" records,
/// one per line, indices 0-based.
void write_mesh(std::ostream& out, const PrimalMesh& mesh);

enum class FlowTag { Inflow, Outflow };

/// Inflow/outflow tags per boundary edge and per boundary dual sub-edge
/// (sub-edge 2k belongs to the start node of edge k, 2k+1 to its end node).
struct BoundaryPartition {
  std::vector<FlowTag> edge_tags;
  std::vector<FlowTag> subedge_tags;

  bool is_outflow(int boundary_edge) const {
    return edge_tags[boundary_edge] == FlowTag::Outflow;
  }
};

using VectorFunction = std::function<Eigen::Vector2d(const Point&)>;

/// Tags an edge outflow iff b.n >= 0 at its midpoint.
BoundaryPartition classify_boundary(const PrimalMesh& mesh, const VectorFunction& b);

}  // namespace fvbem

#endif  // FVBEM_MESH_HPP_
