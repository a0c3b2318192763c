#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "hdgshape/errors.hpp"
#include "hdgshape/quadrature.hpp"
#include "hdgshape/transfer.hpp"

namespace hdgshape {

namespace {

constexpr int kPathSamples = 16;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct PathBuilder {
  const ComputationalMesh& mesh;
  const DomainShape& shape;
  double max_length;
  double zero_tol;

  bool crosses_interior(const Point& x, const Point& y) const {
    for (int i = 1; i <= kPathSamples; ++i) {
      if (mesh.in_interior(x + (y - x) * (static_cast<double>(i) / (kPathSamples + 1)))) return true;
    }
    return false;
  }

  TransferNode make(const Point& x, const BoundaryHit& hit, const Point& fallback_t) const {
    TransferNode n;
    n.x = x;
    n.xbar = hit.point;
    n.location = hit.location;
    n.normal = shape.outward_normal(hit.location);
    n.length = (hit.point - x).norm();
    if (n.length <= zero_tol) {
      n.length = 0.0;
      n.t = fallback_t;
    } else {
      n.t = (hit.point - x) / n.length;
    }
    return n;
  }

  // Zero-length path if x already lies on Gamma.
  std::optional<TransferNode> on_boundary(const Point& x, const Point& fallback_t) const {
    const BoundaryHit c = shape.closest_point(x);
    if (c.distance > zero_tol) return std::nullopt;
    return make(x, c, fallback_t);
  }

  std::optional<TransferNode> ray(const Point& x, const Point& dir, const Point& fallback_t) const {
    const double dn = dir.norm();
    if (!(dn > 0.0)) return std::nullopt;
    const auto hit = shape.cast_ray(x, dir / dn, max_length);
    if (!hit) return std::nullopt;
    TransferNode n = make(x, *hit, fallback_t);
    if (n.length > 0.0 && crosses_interior(x, n.xbar)) return std::nullopt;
    return n;
  }

  std::optional<TransferNode> closest(const Point& x, const Point& fallback_t) const {
    const BoundaryHit c = shape.closest_point(x);
    if (c.distance > max_length) return std::nullopt;
    TransferNode n = make(x, c, fallback_t);
    if (n.length > 0.0 && crosses_interior(x, n.xbar)) return std::nullopt;
    return n;
  }
};

Point rotate(const Point& v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

// Counter-clockwise angle from u to w in (0, 2pi].
double ccw_angle(const Point& u, const Point& w) {
  double a = std::atan2(cross(u, w), u.dot(w));
  if (a <= 0.0) a += kTwoPi;
  return a;
}

struct DirectedEdge {
  int start = -1;  // background vertex ids, D_h on the left
  int end = -1;
  bool forward = true;  // start == canonical vertices[0]
  Point d{0.0, 0.0};    // unit direction
};

struct Corner {
  int vertex = -1;
  int in_slot = -1;
  int out_slot = -1;
  Point bisector{0.0, 0.0};
  Point sector_start{0.0, 0.0};
  double sector = 0.0;
};

bool in_arc(const DomainShape& shape, const TransferNode& a, const TransferNode& b, const TransferNode& x) {
  if (x.location.component != a.location.component || x.location.component != b.location.component) {
    return false;
  }
  const double dab = shape.param_delta(a.location, b.location);
  const double dax = shape.param_delta(a.location, x.location);
  const double tol = 1e-9;
  if (dab >= 0.0) return dax >= -tol && dax <= dab + tol;
  return dax <= tol && dax >= dab - tol;
}

}  // namespace

TransferMap build_transfer_map(const ComputationalMesh& mesh, const DomainShape& shape, int q_per_edge) {
  if (q_per_edge < 1) throw GeometryError("transfer map: need at least one node per edge");
  TransferMap tm;
  tm.q = q_per_edge;
  tm.slot_of_edge.assign(mesh.edges.size(), -1);
  const std::size_t nb = mesh.boundary_edges.size();
  tm.edges.resize(nb);

  const PathBuilder pb{mesh, shape, 4.0 * mesh.h, 1e-12 * mesh.h};

  std::vector<DirectedEdge> directed(nb);
  for (std::size_t i = 0; i < nb; ++i) {
    const int e = mesh.boundary_edges[i];
    tm.slot_of_edge[static_cast<std::size_t>(e)] = static_cast<int>(i);
    const MeshEdge& ed = mesh.edges[static_cast<std::size_t>(e)];
    const Point left = perp(ed.normal);
    const Point d = mesh.vertex(ed.vertices[1]) - mesh.vertex(ed.vertices[0]);
    DirectedEdge& de = directed[i];
    de.forward = d.dot(left) > 0.0;
    de.start = de.forward ? ed.vertices[0] : ed.vertices[1];
    de.end = de.forward ? ed.vertices[1] : ed.vertices[0];
    de.d = (mesh.vertex(de.end) - mesh.vertex(de.start)).normalized();
  }

  // Pair every incoming edge with the outgoing edge bounding the same exterior sector.
  std::vector<std::vector<int>> out_at(mesh.background->vertices.size());
  for (std::size_t i = 0; i < nb; ++i) out_at[static_cast<std::size_t>(directed[i].start)].push_back(static_cast<int>(i));
  std::vector<Corner> corners;
  std::vector<int> corner_of_in(nb, -1), corner_of_out(nb, -1);
  for (std::size_t i = 0; i < nb; ++i) {
    const DirectedEdge& in = directed[i];
    const Point back = -in.d;
    int best = -1;
    double best_angle = 0.0;
    for (int o : out_at[static_cast<std::size_t>(in.end)]) {
      const double a = ccw_angle(back, directed[static_cast<std::size_t>(o)].d);
      if (best < 0 || a < best_angle) {
        best = o;
        best_angle = a;
      }
    }
    if (best < 0) throw GeometryError("transfer map: open boundary at edge " + std::to_string(mesh.boundary_edges[i]));
    Corner c;
    c.vertex = in.end;
    c.in_slot = static_cast<int>(i);
    c.out_slot = best;
    c.sector_start = back;
    c.sector = best_angle;
    c.bisector = rotate(back, 0.5 * best_angle);
    corner_of_in[i] = static_cast<int>(corners.size());
    corner_of_out[static_cast<std::size_t>(best)] = static_cast<int>(corners.size());
    corners.push_back(c);
  }

  std::vector<TransferNode> corner_path(corners.size());
  for (std::size_t c = 0; c < corners.size(); ++c) {
    const Corner& cn = corners[c];
    const Point& v = mesh.vertex(cn.vertex);
    std::optional<TransferNode> p = pb.on_boundary(v, cn.bisector);
    if (!p) p = pb.ray(v, cn.bisector, cn.bisector);
    if (!p) p = pb.closest(v, cn.bisector);
    if (!p) {
      // Sweep the exterior sector and keep the shortest admissible ray.
      for (int j = 1; j < kPathSamples; ++j) {
        const Point dir = rotate(cn.sector_start, cn.sector * j / kPathSamples);
        auto cand = pb.ray(v, dir, cn.bisector);
        if (cand && (!p || cand->length < p->length)) p = cand;
      }
    }
    if (!p) {
      throw GeometryError("transfer map: no admissible path from a vertex of boundary edge " +
                          std::to_string(mesh.boundary_edges[static_cast<std::size_t>(cn.in_slot)]));
    }
    corner_path[c] = *p;
  }

  const Rule1D& gl = gauss_legendre(q_per_edge);
  double R = 0.0;
  for (std::size_t i = 0; i < nb; ++i) {
    const int e = mesh.boundary_edges[i];
    const MeshEdge& ed = mesh.edges[static_cast<std::size_t>(e)];
    EdgeTransfer& et = tm.edges[i];
    et.edge = e;
    et.element = ed.elements[0];
    const TransferNode& at_start = corner_path[static_cast<std::size_t>(corner_of_out[i])];
    const TransferNode& at_end = corner_path[static_cast<std::size_t>(corner_of_in[i])];
    et.endpoints[0] = directed[i].forward ? at_start : at_end;
    et.endpoints[1] = directed[i].forward ? at_end : at_start;
    et.s = gl.points;
    et.weights = gl.weights;
    et.nodes.resize(gl.points.size());

    const Point n = ed.normal;
    const Point ta = et.endpoints[0].t, tb = et.endpoints[1].t;
    for (std::size_t j = 0; j < gl.points.size(); ++j) {
      const double s = gl.points[j];
      const Point x = mesh.edge_point(e, s);
      if (auto z = pb.on_boundary(x, n)) {
        et.nodes[j] = *z;
        continue;
      }
      const double lambda = 0.5 * (s + 1.0);
      std::optional<TransferNode> first_valid;
      std::optional<TransferNode> chosen;
      for (int attempt = 0; attempt < 3 && !chosen; ++attempt) {
        std::optional<TransferNode> cand;
        if (attempt == 0) cand = pb.ray(x, n, n);
        if (attempt == 1) cand = pb.ray(x, (1.0 - lambda) * ta + lambda * tb, n);
        if (attempt == 2) cand = pb.closest(x, n);
        if (!cand) continue;
        if (!first_valid) first_valid = cand;
        if (in_arc(shape, et.endpoints[0], et.endpoints[1], *cand)) chosen = cand;
      }
      if (!chosen) chosen = first_valid;
      if (!chosen) throw GeometryError("transfer map: no admissible path for boundary edge " + std::to_string(e));
      et.nodes[j] = *chosen;
    }

    // H_e^perp: longest normal segment from e to Gamma inside the patch, and at
    // least every path length.  Normal rays leaving through a side path are skipped.
    double H = std::max(et.endpoints[0].length, et.endpoints[1].length);
    for (const auto& node : et.nodes) H = std::max(H, node.length);
    for (int j = 0; j <= 8; ++j) {
      const Point x = mesh.edge_point(e, -1.0 + 0.25 * j);
      if (const auto hit = pb.ray(x, n, n)) {
        if (in_arc(shape, et.endpoints[0], et.endpoints[1], *hit)) H = std::max(H, hit->length);
      }
    }
    et.H_perp = H;
    et.h_perp = mesh.edge_height(e);
    et.r = H / et.h_perp;
    R = std::max(R, et.r);

    std::vector<double> weight_of(shape.size(), 0.0);
    for (std::size_t j = 0; j < et.nodes.size(); ++j) {
      weight_of[static_cast<std::size_t>(et.nodes[j].location.component)] += et.weights[j];
    }
    et.component = static_cast<int>(std::max_element(weight_of.begin(), weight_of.end()) - weight_of.begin());
    et.mixed = std::count_if(weight_of.begin(), weight_of.end(), [](double w) { return w > 0.0; }) > 1;
    et.dirichlet = !shape.components()[static_cast<std::size_t>(et.component)].movable;
  }
  tm.R = R;
  return tm;
}

}  // namespace hdgshape
