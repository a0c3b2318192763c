#pragma once

#include <array>
#include <memory>
#include <vector>

#include "hdgshape/domain_shape.hpp"
#include "hdgshape/geometry.hpp"

namespace hdgshape {

struct MeshEdge {
  std::array<int, 2> vertices{-1, -1};  // background vertex ids, vertices[0] < vertices[1]
  std::array<int, 2> elements{-1, -1};  // elements[1] == -1 on the boundary
  std::array<int, 2> local{-1, -1};     // local edge index inside each element
  Point normal{0.0, 0.0};               // unit, points out of elements[0]
  double length = 0.0;

  bool on_boundary() const { return elements[1] < 0; }
};

/// Local edge i is opposite local vertex i.
struct MeshElement {
  int background = -1;
  std::array<int, 3> vertices{-1, -1, -1};  // counter-clockwise
  std::array<int, 3> edges{-1, -1, -1};
  double area = 0.0;
  double diameter = 0.0;
};

/// The polygonal subdomain D_h: background triangles lying in the closure of Omega.
class ComputationalMesh {
 public:
  std::shared_ptr<const BackgroundMesh> background;
  std::vector<MeshElement> elements;
  std::vector<MeshEdge> edges;
  std::vector<int> interior_edges;
  std::vector<int> boundary_edges;
  std::vector<int> element_of_background;  // -1 for discarded triangles
  double h = 0.0;

  const Point& vertex(int v) const { return background->vertices[static_cast<std::size_t>(v)]; }
  Point element_vertex(int e, int i) const;
  Point centroid(int e) const;
  Point edge_midpoint(int edge) const;
  /// Point on an edge at reference coordinate s in [-1, 1], from vertices[0] to vertices[1].
  Point edge_point(int edge, double s) const;
  /// Outward normal of edge `edge` seen from element `elem`.
  Point normal_from(int edge, int elem) const;
  /// Height of the owning element with respect to the edge (h_e^perp).
  double edge_height(int edge) const;

  double area() const;
  std::size_t num_elements() const { return elements.size(); }

  /// Element containing x (closed), or -1.
  int locate(const Point& x) const;
  /// x in the open set D_h (not on the computational boundary).
  bool in_interior(const Point& x) const;
  /// Distance from x to element e (0 inside).
  double distance_to_element(const Point& x, int e) const;
  /// Element closest to x (distance to the closed triangle); ties keep the lower index.
  int nearest_element(const Point& x) const;
};

/// Keeps every background triangle contained in the closure of Omega
/// (tolerance 1e-12 h).  Only the largest edge-connected component is kept.
/// Throws GeometryError if nothing is selected.
ComputationalMesh classify_elements(std::shared_ptr<const BackgroundMesh> mesh,
                                    const DomainShape& shape);

/// Builds the edge skeleton for an explicit list of background triangles.
ComputationalMesh make_computational_mesh(std::shared_ptr<const BackgroundMesh> mesh,
                                          const std::vector<int>& triangles);

}  // namespace hdgshape
