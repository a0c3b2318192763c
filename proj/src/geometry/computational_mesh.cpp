#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>

#include "hdgshape/computational_mesh.hpp"
#include "hdgshape/errors.hpp"

namespace hdgshape {

namespace {

bool in_triangle(const Point& x, const Point& a, const Point& b, const Point& c, double tol) {
  const double area2 = cross(b - a, c - a);
  const double l0 = cross(b - x, c - x) / area2;
  const double l1 = cross(c - x, a - x) / area2;
  const double l2 = 1.0 - l0 - l1;
  return l0 >= -tol && l1 >= -tol && l2 >= -tol;
}

// Background triangles in the 3x3 block of cells around x.
template <class F>
void for_nearby_triangles(const BackgroundMesh& bg, const Point& x, F&& f) {
  const double dx = bg.box.width() / bg.nx;
  const double dy = bg.box.height() / bg.ny;
  const int i0 = static_cast<int>(std::floor((x.x() - bg.box.lo.x()) / dx));
  const int j0 = static_cast<int>(std::floor((x.y() - bg.box.lo.y()) / dy));
  for (int j = j0 - 1; j <= j0 + 1; ++j) {
    if (j < 0 || j >= bg.ny) continue;
    for (int i = i0 - 1; i <= i0 + 1; ++i) {
      if (i < 0 || i >= bg.nx) continue;
      const int base = 2 * (j * bg.nx + i);
      if (f(base) || f(base + 1)) return;
    }
  }
}

}  // namespace

Point ComputationalMesh::element_vertex(int e, int i) const {
  return vertex(elements[static_cast<std::size_t>(e)].vertices[static_cast<std::size_t>(i)]);
}

Point ComputationalMesh::centroid(int e) const {
  return (element_vertex(e, 0) + element_vertex(e, 1) + element_vertex(e, 2)) / 3.0;
}

Point ComputationalMesh::edge_midpoint(int edge) const { return edge_point(edge, 0.0); }

Point ComputationalMesh::edge_point(int edge, double s) const {
  const auto& ed = edges[static_cast<std::size_t>(edge)];
  const Point& a = vertex(ed.vertices[0]);
  const Point& b = vertex(ed.vertices[1]);
  return a + 0.5 * (s + 1.0) * (b - a);
}

Point ComputationalMesh::normal_from(int edge, int elem) const {
  const auto& ed = edges[static_cast<std::size_t>(edge)];
  return ed.elements[0] == elem ? ed.normal : Point(-ed.normal);
}

double ComputationalMesh::edge_height(int edge) const {
  const auto& ed = edges[static_cast<std::size_t>(edge)];
  return 2.0 * elements[static_cast<std::size_t>(ed.elements[0])].area / ed.length;
}

double ComputationalMesh::area() const {
  double a = 0.0;
  for (const auto& el : elements) a += el.area;
  return a;
}

int ComputationalMesh::locate(const Point& x) const {
  if (const auto t = background->locate(x)) {
    const int e = element_of_background[static_cast<std::size_t>(*t)];
    if (e >= 0) return e;
  }
  int found = -1;
  for_nearby_triangles(*background, x, [&](int t) {
    const int e = element_of_background[static_cast<std::size_t>(t)];
    if (e < 0) return false;
    if (in_triangle(x, element_vertex(e, 0), element_vertex(e, 1), element_vertex(e, 2), 1e-12)) {
      found = e;
      return true;
    }
    return false;
  });
  return found;
}

bool ComputationalMesh::in_interior(const Point& x) const {
  if (locate(x) < 0) return false;
  const double tol = 1e-12 * h;
  bool on_boundary = false;
  for_nearby_triangles(*background, x, [&](int t) {
    const int e = element_of_background[static_cast<std::size_t>(t)];
    if (e < 0) return false;
    for (int edge : elements[static_cast<std::size_t>(e)].edges) {
      const auto& ed = edges[static_cast<std::size_t>(edge)];
      if (!ed.on_boundary()) continue;
      if (distance_to_segment(x, vertex(ed.vertices[0]), vertex(ed.vertices[1])) <= tol) {
        on_boundary = true;
        return true;
      }
    }
    return false;
  });
  return !on_boundary;
}

double ComputationalMesh::distance_to_element(const Point& x, int e) const {
  const Point a = element_vertex(e, 0), b = element_vertex(e, 1), c = element_vertex(e, 2);
  if (in_triangle(x, a, b, c, 0.0)) return 0.0;
  return std::min({distance_to_segment(x, a, b), distance_to_segment(x, b, c),
                   distance_to_segment(x, c, a)});
}

int ComputationalMesh::nearest_element(const Point& x) const {
  const BackgroundMesh& bg = *background;
  const double cw = bg.box.width() / bg.nx, ch = bg.box.height() / bg.ny;
  const int ci = static_cast<int>(std::floor((x.x() - bg.box.lo.x()) / cw));
  const int cj = static_cast<int>(std::floor((x.y() - bg.box.lo.y()) / ch));
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  // Rings of grid cells; one extra ring after the first hit covers elements that
  // are closer than the ring index suggests.
  int stop = std::max(bg.nx, bg.ny) + std::abs(ci) + std::abs(cj);
  for (int ring = 0; ring <= stop; ++ring) {
    for (int j = cj - ring; j <= cj + ring; ++j) {
      for (int i = ci - ring; i <= ci + ring; ++i) {
        if (std::max(std::abs(i - ci), std::abs(j - cj)) != ring) continue;
        if (i < 0 || j < 0 || i >= bg.nx || j >= bg.ny) continue;
        for (int t = 0; t < 2; ++t) {
          const int e = element_of_background[static_cast<std::size_t>(2 * (j * bg.nx + i) + t)];
          if (e < 0) continue;
          const double d = distance_to_element(x, e);
          if (d < best_d || (d == best_d && e < best)) {
            best_d = d;
            best = e;
          }
        }
      }
    }
    if (best >= 0 && stop > ring + 1) stop = ring + 1;
  }
  return best;
}

ComputationalMesh make_computational_mesh(std::shared_ptr<const BackgroundMesh> mesh,
                                          const std::vector<int>& triangles) {
  ComputationalMesh cm;
  cm.background = mesh;
  cm.h = mesh->h;
  cm.element_of_background.assign(mesh->triangles.size(), -1);
  cm.elements.reserve(triangles.size());
  std::unordered_map<std::uint64_t, int> edge_of;
  edge_of.reserve(triangles.size() * 2);
  for (int t : triangles) {
    const int e = static_cast<int>(cm.elements.size());
    cm.element_of_background[static_cast<std::size_t>(t)] = e;
    MeshElement el;
    el.background = t;
    el.vertices = mesh->triangles[static_cast<std::size_t>(t)];
    el.area = mesh->signed_area(t);
    el.diameter = mesh->diameter(t);
    for (int i = 0; i < 3; ++i) {
      const int p = el.vertices[static_cast<std::size_t>((i + 1) % 3)];
      const int q = el.vertices[static_cast<std::size_t>((i + 2) % 3)];
      const int lo = std::min(p, q), hi = std::max(p, q);
      const std::uint64_t key = (static_cast<std::uint64_t>(lo) << 32) | static_cast<std::uint32_t>(hi);
      auto it = edge_of.find(key);
      if (it == edge_of.end()) {
        MeshEdge ed;
        ed.vertices = {lo, hi};
        ed.elements = {e, -1};
        ed.local = {i, -1};
        const Point d = mesh->vertices[static_cast<std::size_t>(q)] - mesh->vertices[static_cast<std::size_t>(p)];
        ed.length = d.norm();
        ed.normal = Point(d.y(), -d.x()) / ed.length;
        const int id = static_cast<int>(cm.edges.size());
        cm.edges.push_back(ed);
        edge_of.emplace(key, id);
        el.edges[static_cast<std::size_t>(i)] = id;
      } else {
        auto& ed = cm.edges[static_cast<std::size_t>(it->second)];
        ed.elements[1] = e;
        ed.local[1] = i;
        el.edges[static_cast<std::size_t>(i)] = it->second;
      }
    }
    cm.elements.push_back(el);
  }
  for (std::size_t i = 0; i < cm.edges.size(); ++i) {
    (cm.edges[i].on_boundary() ? cm.boundary_edges : cm.interior_edges).push_back(static_cast<int>(i));
  }
  return cm;
}

ComputationalMesh classify_elements(std::shared_ptr<const BackgroundMesh> mesh,
                                    const DomainShape& shape) {
  const double tol = 1e-12 * mesh->h;
  std::vector<int> selected;
  for (std::size_t t = 0; t < mesh->triangles.size(); ++t) {
    const auto& tri = mesh->triangles[t];
    const Point& a = mesh->vertices[static_cast<std::size_t>(tri[0])];
    const Point& b = mesh->vertices[static_cast<std::size_t>(tri[1])];
    const Point& c = mesh->vertices[static_cast<std::size_t>(tri[2])];
    if (shape.contains_triangle(a, b, c, tol)) {
      selected.push_back(static_cast<int>(t));
    }
  }
  if (selected.empty()) throw GeometryError("computational mesh: no background element inside the domain");

  ComputationalMesh all = make_computational_mesh(mesh, selected);
  // Largest edge-connected component.
  const std::size_t n = all.elements.size();
  std::vector<int> label(n, -1);
  std::vector<std::size_t> sizes;
  std::vector<int> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    const int id = static_cast<int>(sizes.size());
    std::size_t count = 0;
    stack.push_back(static_cast<int>(s));
    label[s] = id;
    while (!stack.empty()) {
      const int e = stack.back();
      stack.pop_back();
      ++count;
      for (int edge : all.elements[static_cast<std::size_t>(e)].edges) {
        const auto& ed = all.edges[static_cast<std::size_t>(edge)];
        const int other = ed.elements[0] == e ? ed.elements[1] : ed.elements[0];
        if (other >= 0 && label[static_cast<std::size_t>(other)] < 0) {
          label[static_cast<std::size_t>(other)] = id;
          stack.push_back(other);
        }
      }
    }
    sizes.push_back(count);
  }
  if (sizes.size() == 1) return all;
  const int keep = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<int> kept;
  for (std::size_t e = 0; e < n; ++e) {
    if (label[e] == keep) kept.push_back(all.elements[e].background);
  }
  return make_computational_mesh(mesh, kept);
}

}  // namespace hdgshape
