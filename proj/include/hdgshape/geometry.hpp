#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace hdgshape {

using Point = Eigen::Vector2d;

inline double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Left-hand perpendicular, (x, y) -> (-y, x).
inline Point perp(const Point& a) { return {-a.y(), a.x()}; }

double distance_to_segment(const Point& x, const Point& a, const Point& b);

/// Closed-segment intersection test, touching counts.
bool segments_intersect(const Point& p1, const Point& p2, const Point& q1, const Point& q2);

struct BoundingBox {
  Point lo{0.0, 0.0};
  Point hi{1.0, 1.0};

  double width() const { return hi.x() - lo.x(); }
  double height() const { return hi.y() - lo.y(); }
};

/// Triangulation of a rectangle by a uniform grid with every cell split along
/// its lower-left/upper-right diagonal.  Triangles are counter-clockwise.
class BackgroundMesh {
 public:
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;
  double h = 0.0;      // max element diameter
  double h_min = 0.0;  // min element diameter

  BoundingBox box;
  int nx = 0;
  int ny = 0;

  /// Triangle containing x (closed), or nullopt outside the box.
  std::optional<int> locate(const Point& x) const;

  double signed_area(int t) const;
  double diameter(int t) const;
  double inscribed_diameter(int t) const;

  /// h_min / h, the quasi-uniformity constant r.
  double quasi_uniformity() const { return h > 0.0 ? h_min / h : 0.0; }
  /// min over triangles of inscribed diameter / diameter, the constant rho.
  double shape_regularity() const;
};

/// Uniform right-triangle grid over `box` with max element diameter <= h_target.
/// Throws GeometryError if h_target <= 0 or exceeds the box extent.
BackgroundMesh build_background_mesh(const BoundingBox& box, double h_target);

/// Same grid with an explicit number of cells per direction.
BackgroundMesh build_background_mesh(const BoundingBox& box, int nx, int ny);

double triangle_diameter(const Point& a, const Point& b, const Point& c);
double triangle_inscribed_diameter(const Point& a, const Point& b, const Point& c);

}  // namespace hdgshape
