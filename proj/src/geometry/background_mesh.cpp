#include <algorithm>
#include <cmath>
#include <limits>

#include "hdgshape/errors.hpp"
#include "hdgshape/geometry.hpp"

namespace hdgshape {

double distance_to_segment(const Point& x, const Point& a, const Point& b) {
  const Point d = b - a;
  const double len2 = d.squaredNorm();
  double t = len2 > 0.0 ? (x - a).dot(d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (x - (a + t * d)).norm();
}

namespace {

int orientation_sign(const Point& a, const Point& b, const Point& c) {
  const double v = cross(b - a, c - a);
  const double scale = (b - a).norm() * (c - a).norm();
  if (std::abs(v) <= 1e-14 * scale) return 0;
  return v > 0.0 ? 1 : -1;
}

bool on_segment(const Point& a, const Point& b, const Point& p) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

}  // namespace

bool segments_intersect(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
  const int o1 = orientation_sign(p1, p2, q1);
  const int o2 = orientation_sign(p1, p2, q2);
  const int o3 = orientation_sign(q1, q2, p1);
  const int o4 = orientation_sign(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

double triangle_diameter(const Point& a, const Point& b, const Point& c) {
  return std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
}

double triangle_inscribed_diameter(const Point& a, const Point& b, const Point& c) {
  const double area = 0.5 * std::abs(cross(b - a, c - a));
  const double perimeter = (b - a).norm() + (c - b).norm() + (a - c).norm();
  return 4.0 * area / perimeter;
}

std::optional<int> BackgroundMesh::locate(const Point& x) const {
  const double dx = box.width() / nx;
  const double dy = box.height() / ny;
  const double eps = 1e-12 * std::max(dx, dy);
  if (x.x() < box.lo.x() - eps || x.x() > box.hi.x() + eps || x.y() < box.lo.y() - eps ||
      x.y() > box.hi.y() + eps) {
    return std::nullopt;
  }
  const int i = std::clamp(static_cast<int>(std::floor((x.x() - box.lo.x()) / dx)), 0, nx - 1);
  const int j = std::clamp(static_cast<int>(std::floor((x.y() - box.lo.y()) / dy)), 0, ny - 1);
  const double u = (x.x() - (box.lo.x() + i * dx)) / dx;
  const double v = (x.y() - (box.lo.y() + j * dy)) / dy;
  return 2 * (j * nx + i) + (v > u ? 1 : 0);
}

double BackgroundMesh::signed_area(int t) const {
  const auto& tri = triangles[static_cast<std::size_t>(t)];
  return 0.5 * cross(vertices[tri[1]] - vertices[tri[0]], vertices[tri[2]] - vertices[tri[0]]);
}

double BackgroundMesh::diameter(int t) const {
  const auto& tri = triangles[static_cast<std::size_t>(t)];
  return triangle_diameter(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
}

double BackgroundMesh::inscribed_diameter(int t) const {
  const auto& tri = triangles[static_cast<std::size_t>(t)];
  return triangle_inscribed_diameter(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
}

double BackgroundMesh::shape_regularity() const {
  double rho = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const int ti = static_cast<int>(t);
    rho = std::min(rho, inscribed_diameter(ti) / diameter(ti));
  }
  return rho;
}

BackgroundMesh build_background_mesh(const BoundingBox& box, int nx, int ny) {
  if (!(box.width() > 0.0) || !(box.height() > 0.0)) {
    throw GeometryError("background mesh: degenerate bounding box");
  }
  if (nx < 1 || ny < 1) throw GeometryError("background mesh: need at least one cell per direction");

  BackgroundMesh mesh;
  mesh.box = box;
  mesh.nx = nx;
  mesh.ny = ny;
  const double dx = box.width() / nx;
  const double dy = box.height() / ny;
  mesh.vertices.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      const double x = i == nx ? box.hi.x() : box.lo.x() + i * dx;
      const double y = j == ny ? box.hi.y() : box.lo.y() + j * dy;
      mesh.vertices.emplace_back(x, y);
    }
  }
  const auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  mesh.triangles.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({a, c, d});
    }
  }
  mesh.h = 0.0;
  mesh.h_min = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const double d = mesh.diameter(static_cast<int>(t));
    mesh.h = std::max(mesh.h, d);
    mesh.h_min = std::min(mesh.h_min, d);
  }
  return mesh;
}

BackgroundMesh build_background_mesh(const BoundingBox& box, double h_target) {
  if (!(h_target > 0.0) || !std::isfinite(h_target)) {
    throw GeometryError("background mesh: h_target must be positive");
  }
  if (h_target > std::min(box.width(), box.height())) {
    throw GeometryError("background mesh: h_target exceeds the bounding box extent");
  }
  // Cells with diagonal <= h_target.
  const double side = h_target / std::sqrt(2.0);
  const int nx = std::max(1, static_cast<int>(std::ceil(box.width() / side - 1e-9)));
  const int ny = std::max(1, static_cast<int>(std::ceil(box.height() / side - 1e-9)));
  return build_background_mesh(box, nx, ny);
}

}  // namespace hdgshape
