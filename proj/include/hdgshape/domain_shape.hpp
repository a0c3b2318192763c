#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "hdgshape/geometry.hpp"

namespace hdgshape {

struct Circle {
  Point center{0.0, 0.0};
  double radius = 1.0;
};

/// Closed polygon; the last point connects back to the first.
struct Polyline {
  std::vector<Point> points;
};

/// One closed loop of the boundary.  `hole` loops bound the domain from the
/// inside.  `movable` loops form the deformable Neumann part of the boundary;
/// the remaining loops are held fixed (Dirichlet part of the deformation).
struct BoundaryComponent {
  std::variant<Circle, Polyline> curve;
  bool hole = false;
  bool movable = false;
};

/// Position on the boundary.  For circles `param` is the angle in [0, 2pi);
/// for polylines it is segment index plus fraction, in [0, N).
struct BoundaryLocation {
  int component = -1;
  double param = 0.0;
};

struct BoundaryHit {
  double distance = 0.0;
  Point point{0.0, 0.0};
  BoundaryLocation location;
};

/// Explicit description of Gamma as a union of closed loops.
class DomainShape {
 public:
  DomainShape() = default;
  explicit DomainShape(std::vector<BoundaryComponent> components);

  const std::vector<BoundaryComponent>& components() const { return components_; }
  std::size_t size() const { return components_.size(); }

  /// Throws GeometryError for self-intersecting polylines, intersecting loops,
  /// degenerate loops or non-positive enclosed area.
  void validate() const;
  bool is_valid() const;

  /// x in the closure of Omega, accepting points within `tol` of Gamma.
  bool contains(const Point& x, double tol = 0.0) const;

  /// Triangle (a, b, c) contained in the closure of Omega: corners inside and
  /// no part of Gamma entering the triangle by more than `tol`.
  bool contains_triangle(const Point& a, const Point& b, const Point& c, double tol) const;

  /// Enclosed area: outer loops minus holes, arcs integrated exactly.
  double area() const;

  double component_length(int c) const;
  /// Total length of the movable (true) or fixed (false) loops.
  double boundary_length(bool movable) const;
  double boundary_length() const;

  /// First boundary crossing of the ray origin + s * dir, 0 <= s <= max_distance.
  /// A ray starting on Gamma returns a hit at distance 0.
  std::optional<BoundaryHit> cast_ray(const Point& origin, const Point& dir,
                                      double max_distance) const;
  BoundaryHit closest_point(const Point& x) const;
  double distance(const Point& x) const { return closest_point(x).distance; }

  Point point_at(const BoundaryLocation& loc) const;
  /// Unit outward normal of Omega at loc.
  Point outward_normal(const BoundaryLocation& loc) const;

  /// Parameter increment from `from` to `to` along the shorter way around.
  double param_delta(const BoundaryLocation& from, const BoundaryLocation& to) const;
  /// Boundary length between two locations on the same loop (shorter way).
  double arc_length(const BoundaryLocation& from, const BoundaryLocation& to) const;
  /// Polyline vertices strictly between two locations (shorter way), in order.
  std::vector<Point> polyline_vertices_between(const BoundaryLocation& from,
                                               const BoundaryLocation& to) const;

  /// Longest segment of all movable polylines; 0 if there are none.
  double max_segment_length() const;

  /// Copy with the points of polyline component c replaced.
  DomainShape with_polyline(int c, std::vector<Point> points) const;

 private:
  struct PolylineIndex {
    double y0 = 0.0;
    double dy = 1.0;
    std::vector<std::vector<int>> buckets;  // segments overlapping each y-slab
    BoundingBox box;
    double orientation = 1.0;  // +1 counter-clockwise
  };

  struct SegmentHit {
    double distance = 0.0;
    int segment = 0;
    double fraction = 0.0;
  };

  bool component_contains(int c, const Point& x) const;
  SegmentHit polyline_closest(int c, const Point& x) const;
  void build_index();

  std::vector<BoundaryComponent> components_;
  std::vector<PolylineIndex> index_;
  double scale_ = 1.0;
};

/// Signed shoelace area of a closed polygon.
double polygon_signed_area(const std::vector<Point>& pts);

/// True if any two non-adjacent segments of the closed polygon touch.
bool polygon_self_intersects(const std::vector<Point>& pts);

/// Regular polygon with n vertices, counter-clockwise, starting at angle phase.
std::vector<Point> regular_polygon(const Point& center, double radius, int n, double phase = 0.0);

}  // namespace hdgshape
