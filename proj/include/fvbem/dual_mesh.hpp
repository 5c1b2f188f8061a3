#ifndef FVBEM_DUAL_MESH_HPP_
#define FVBEM_DUAL_MESH_HPP_

#include <array>
#include <vector>

#include "fvbem/mesh.hpp"

namespace fvbem {

/// Straight piece of an interface: from the primal edge midpoint to the
/// barycenter of `triangle`.
struct InterfaceSegment {
  Point from;
  Point to;
  int triangle;
  /// Unit normal pointing out of the box of Interface::node_i.
  Eigen::Vector2d normal;
  double length;
};

/// tau_ij = V_i cap V_j for the primal edge (node_i, node_j), node_i < node_j.
struct Interface {
  int node_i;
  int node_j;
  int edge;
  std::vector<InterfaceSegment> segments;  // 2 for interior edges, 1 on the boundary
  double length;
};

/// Quadrilateral (node, edge midpoint, barycenter, edge midpoint) of a box
/// inside one triangle, counterclockwise.
struct BoxPiece {
  int triangle;
  std::array<Point, 4> corners;
};

/// Control volume V_i around primal node i.
struct Box {
  int node;
  std::vector<Point> polygon;  // closed, counterclockwise, no repeated vertex
  std::vector<BoxPiece> pieces;
  double area;
};

/// Half of a boundary edge, attached to one box.
struct BoundarySubEdge {
  int boundary_edge;
  int node;
  Point from;
  Point to;
};

/// Barycentric dual mesh of a PrimalMesh.
class DualMesh {
 public:
  explicit DualMesh(const PrimalMesh& mesh);

  const PrimalMesh& primal() const { return *mesh_; }
  const std::vector<Box>& boxes() const { return boxes_; }
  /// One interface per primal edge, same indexing as PrimalMesh::edges().
  const std::vector<Interface>& interfaces() const { return interfaces_; }
  /// Sub-edge 2k runs from the start node of boundary edge k to its midpoint,
  /// sub-edge 2k+1 from the midpoint to the end node.
  const std::vector<BoundarySubEdge>& boundary_subedges() const { return subedges_; }

 private:
  const PrimalMesh* mesh_;
  std::vector<Box> boxes_;
  std::vector<Interface> interfaces_;
  std::vector<BoundarySubEdge> subedges_;
};

DualMesh build_dual_mesh(const PrimalMesh& mesh);

/// Whether x lies inside (or on the boundary of) a simple polygon.
bool point_in_polygon(const std::vector<Point>& polygon, const Point& x, double tol = 1e-12);

}  // namespace fvbem

#endif  // FVBEM_DUAL_MESH_HPP_
