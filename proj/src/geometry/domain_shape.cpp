#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "hdgshape/domain_shape.hpp"
#include "hdgshape/errors.hpp"

namespace hdgshape {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a;
}

const Point& vertex_at(const std::vector<Point>& pts, std::size_t i) { return pts[i % pts.size()]; }

// Circle/segment crossing: the segment has points both inside and outside the circle.
bool circle_segment_cross(const Circle& c, const Point& a, const Point& b) {
  const double dmin = distance_to_segment(c.center, a, b);
  const double dmax = std::max((a - c.center).norm(), (b - c.center).norm());
  return dmin <= c.radius && dmax >= c.radius;
}

}  // namespace

double polygon_signed_area(const std::vector<Point>& pts) {
  double s = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) s += cross(pts[i], vertex_at(pts, i + 1));
  return 0.5 * s;
}

bool polygon_self_intersects(const std::vector<Point>& pts) {
  const std::size_t n = pts.size();
  if (n < 3) return true;
  for (std::size_t i = 0; i < n; ++i) {
    const Point d0 = vertex_at(pts, i + 1) - pts[i];
    const Point d1 = vertex_at(pts, i + 2) - vertex_at(pts, i + 1);
    if (d0.squaredNorm() == 0.0) return true;
    // Adjacent segments folding back onto each other.
    if (std::abs(cross(d0, d1)) <= 1e-14 * d0.norm() * d1.norm() && d0.dot(d1) < 0.0) return true;
  }
  if (n == 3) return false;

  std::vector<std::size_t> order(n);
  std::vector<double> ylo(n), yhi(n);
  for (std::size_t i = 0; i < n; ++i) {
    order[i] = i;
    ylo[i] = std::min(pts[i].y(), vertex_at(pts, i + 1).y());
    yhi[i] = std::max(pts[i].y(), vertex_at(pts, i + 1).y());
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ylo[a] < ylo[b]; });
  for (std::size_t oi = 0; oi < n; ++oi) {
    const std::size_t i = order[oi];
    const Point& a = pts[i];
    const Point& b = vertex_at(pts, i + 1);
    const double xlo = std::min(a.x(), b.x()), xhi = std::max(a.x(), b.x());
    for (std::size_t oj = oi + 1; oj < n && ylo[order[oj]] <= yhi[i]; ++oj) {
      const std::size_t j = order[oj];
      if (j == (i + 1) % n || i == (j + 1) % n) continue;
      const Point& c = pts[j];
      const Point& d = vertex_at(pts, j + 1);
      if (std::max(c.x(), d.x()) < xlo || std::min(c.x(), d.x()) > xhi) continue;
      if (segments_intersect(a, b, c, d)) return true;
    }
  }
  return false;
}

std::vector<Point> regular_polygon(const Point& center, double radius, int n, double phase) {
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = phase + kTwoPi * i / n;
    pts.emplace_back(center.x() + radius * std::cos(t), center.y() + radius * std::sin(t));
  }
  return pts;
}

DomainShape::DomainShape(std::vector<BoundaryComponent> components)
    : components_(std::move(components)) {
  build_index();
}

void DomainShape::build_index() {
  index_.assign(components_.size(), PolylineIndex{});
  double extent = 0.0;
  for (std::size_t c = 0; c < components_.size(); ++c) {
    if (const auto* circ = std::get_if<Circle>(&components_[c].curve)) {
      extent = std::max(extent, circ->center.norm() + circ->radius);
      continue;
    }
    const auto& pts = std::get<Polyline>(components_[c].curve).points;
    PolylineIndex& idx = index_[c];
    if (pts.empty()) continue;
    idx.box.lo = pts[0];
    idx.box.hi = pts[0];
    for (const Point& p : pts) {
      idx.box.lo = idx.box.lo.cwiseMin(p);
      idx.box.hi = idx.box.hi.cwiseMax(p);
      extent = std::max(extent, p.norm());
    }
    idx.orientation = polygon_signed_area(pts) >= 0.0 ? 1.0 : -1.0;
    const std::size_t n = pts.size();
    const int nb = static_cast<int>(std::clamp<std::size_t>(n / 4, 1, 4096));
    idx.y0 = idx.box.lo.y();
    idx.dy = idx.box.height() > 0.0 ? idx.box.height() / nb : 1.0;
    idx.buckets.assign(static_cast<std::size_t>(nb), {});
    for (std::size_t i = 0; i < n; ++i) {
      const double y0 = std::min(pts[i].y(), vertex_at(pts, i + 1).y());
      const double y1 = std::max(pts[i].y(), vertex_at(pts, i + 1).y());
      const int b0 = std::clamp(static_cast<int>(std::floor((y0 - idx.y0) / idx.dy)), 0, nb - 1);
      const int b1 = std::clamp(static_cast<int>(std::floor((y1 - idx.y0) / idx.dy)), 0, nb - 1);
      for (int b = b0; b <= b1; ++b) idx.buckets[static_cast<std::size_t>(b)].push_back(static_cast<int>(i));
    }
  }
  scale_ = std::max(extent, 1e-300);
}

void DomainShape::validate() const {
  if (components_.empty()) throw GeometryError("domain: no boundary components");
  for (std::size_t c = 0; c < components_.size(); ++c) {
    if (const auto* circ = std::get_if<Circle>(&components_[c].curve)) {
      if (!(circ->radius > 0.0)) throw GeometryError("domain: circle with non-positive radius");
      continue;
    }
    const auto& pts = std::get<Polyline>(components_[c].curve).points;
    if (pts.size() < 3) throw GeometryError("domain: polyline with fewer than 3 points");
    if (polygon_self_intersects(pts)) throw GeometryError("domain: self-intersecting polyline");
  }
  for (std::size_t c1 = 0; c1 < components_.size(); ++c1) {
    for (std::size_t c2 = c1 + 1; c2 < components_.size(); ++c2) {
      const auto& k1 = components_[c1].curve;
      const auto& k2 = components_[c2].curve;
      bool hit = false;
      if (std::holds_alternative<Circle>(k1) && std::holds_alternative<Circle>(k2)) {
        const auto& a = std::get<Circle>(k1);
        const auto& b = std::get<Circle>(k2);
        const double d = (a.center - b.center).norm();
        hit = d <= a.radius + b.radius && d >= std::abs(a.radius - b.radius);
      } else if (std::holds_alternative<Circle>(k1) || std::holds_alternative<Circle>(k2)) {
        const auto& circ = std::holds_alternative<Circle>(k1) ? std::get<Circle>(k1) : std::get<Circle>(k2);
        const auto& pts = std::holds_alternative<Polyline>(k1) ? std::get<Polyline>(k1).points
                                                                 : std::get<Polyline>(k2).points;
        for (std::size_t i = 0; i < pts.size() && !hit; ++i) {
          hit = circle_segment_cross(circ, pts[i], vertex_at(pts, i + 1));
        }
      } else {
        const auto& p = std::get<Polyline>(k1).points;
        const auto& q = std::get<Polyline>(k2).points;
        const auto& bq = index_[c2].box;
        for (std::size_t i = 0; i < p.size() && !hit; ++i) {
          const Point& a = p[i];
          const Point& b = vertex_at(p, i + 1);
          if (std::max(a.x(), b.x()) < bq.lo.x() || std::min(a.x(), b.x()) > bq.hi.x() ||
              std::max(a.y(), b.y()) < bq.lo.y() || std::min(a.y(), b.y()) > bq.hi.y()) {
            continue;
          }
          for (std::size_t j = 0; j < q.size() && !hit; ++j) {
            hit = segments_intersect(a, b, q[j], vertex_at(q, j + 1));
          }
        }
      }
      if (hit) throw GeometryError("domain: boundary loops intersect");
    }
  }
  if (!(area() > 0.0)) throw GeometryError("domain: non-positive enclosed area");
}

bool DomainShape::is_valid() const {
  try {
    validate();
    return true;
  } catch (const GeometryError&) {
    return false;
  }
}

bool DomainShape::component_contains(int c, const Point& x) const {
  const auto& comp = components_[static_cast<std::size_t>(c)];
  if (const auto* circ = std::get_if<Circle>(&comp.curve)) {
    return (x - circ->center).squaredNorm() <= circ->radius * circ->radius;
  }
  const auto& pts = std::get<Polyline>(comp.curve).points;
  const PolylineIndex& idx = index_[static_cast<std::size_t>(c)];
  if (x.y() < idx.box.lo.y() || x.y() > idx.box.hi.y() || x.x() < idx.box.lo.x() ||
      x.x() > idx.box.hi.x()) {
    return false;
  }
  const int nb = static_cast<int>(idx.buckets.size());
  const int b = std::clamp(static_cast<int>(std::floor((x.y() - idx.y0) / idx.dy)), 0, nb - 1);
  bool inside = false;
  for (int i : idx.buckets[static_cast<std::size_t>(b)]) {
    const Point& p = pts[static_cast<std::size_t>(i)];
    const Point& q = vertex_at(pts, static_cast<std::size_t>(i) + 1);
    if ((p.y() > x.y()) != (q.y() > x.y())) {
      const double xi = p.x() + (x.y() - p.y()) * (q.x() - p.x()) / (q.y() - p.y());
      if (xi > x.x()) inside = !inside;
    }
  }
  return inside;
}

bool DomainShape::contains(const Point& x, double tol) const {
  if (tol > 0.0 && distance(x) <= tol) return true;
  bool in_outer = false;
  bool any_outer = false;
  for (std::size_t c = 0; c < components_.size(); ++c) {
    const bool inside = component_contains(static_cast<int>(c), x);
    if (components_[c].hole) {
      if (inside) {
        // Closed set: points exactly on a hole circle remain in the domain.
        if (const auto* circ = std::get_if<Circle>(&components_[c].curve)) {
          if ((x - circ->center).squaredNorm() == circ->radius * circ->radius) continue;
        }
        return false;
      }
    } else {
      any_outer = true;
      in_outer = in_outer || inside;
    }
  }
  return any_outer && in_outer;
}

bool DomainShape::contains_triangle(const Point& a, const Point& b, const Point& c, double tol) const {
  if (!contains(a, tol) || !contains(b, tol) || !contains(c, tol) || !contains((a + b + c) / 3.0, tol)) {
    return false;
  }
  const std::array<Point, 3> v{a, b, c};
  const double orient = cross(b - a, c - a) > 0.0 ? 1.0 : -1.0;
  // Signed distance of x to the line through edge i, positive towards the triangle.
  const auto inward = [&](int i, const Point& x) {
    const Point& p = v[static_cast<std::size_t>(i)];
    const Point& q = v[static_cast<std::size_t>((i + 1) % 3)];
    return orient * cross(q - p, x - p) / (q - p).norm();
  };
  const auto strictly_inside = [&](const Point& x) {
    return inward(0, x) > tol && inward(1, x) > tol && inward(2, x) > tol;
  };
  for (std::size_t ci = 0; ci < components_.size(); ++ci) {
    const auto& comp = components_[ci];
    if (const auto* circ = std::get_if<Circle>(&comp.curve)) {
      // A disk is convex, so only holes can cut into the triangle.
      if (!comp.hole) continue;
      if (strictly_inside(circ->center)) return false;
      for (int i = 0; i < 3; ++i) {
        if (distance_to_segment(circ->center, v[static_cast<std::size_t>(i)],
                                v[static_cast<std::size_t>((i + 1) % 3)]) < circ->radius - tol) {
          return false;
        }
      }
      continue;
    }
    const auto& pts = std::get<Polyline>(comp.curve).points;
    const PolylineIndex& idx = index_[ci];
    const double ylo = std::min({a.y(), b.y(), c.y()}), yhi = std::max({a.y(), b.y(), c.y()});
    const double xlo = std::min({a.x(), b.x(), c.x()}), xhi = std::max({a.x(), b.x(), c.x()});
    if (yhi < idx.box.lo.y() || ylo > idx.box.hi.y() || xhi < idx.box.lo.x() || xlo > idx.box.hi.x()) continue;
    const int nb = static_cast<int>(idx.buckets.size());
    const int b0 = std::clamp(static_cast<int>(std::floor((ylo - idx.y0) / idx.dy)), 0, nb - 1);
    const int b1 = std::clamp(static_cast<int>(std::floor((yhi - idx.y0) / idx.dy)), 0, nb - 1);
    for (int bk = b0; bk <= b1; ++bk) {
      for (int s : idx.buckets[static_cast<std::size_t>(bk)]) {
        const Point& p = pts[static_cast<std::size_t>(s)];
        const Point& q = vertex_at(pts, static_cast<std::size_t>(s) + 1);
        if (strictly_inside(p)) return false;
        const Point d = q - p;
        const double dl = d.norm();
        for (int i = 0; i < 3; ++i) {
          const Point& e0 = v[static_cast<std::size_t>(i)];
          const Point& e1 = v[static_cast<std::size_t>((i + 1) % 3)];
          const double sp = inward(i, p), sq = inward(i, q);
          const double s0 = cross(d, e0 - p) / dl, s1 = cross(d, e1 - p) / dl;
          const bool cross_edge_line = (sp > tol && sq < -tol) || (sp < -tol && sq > tol);
          const bool cross_seg_line = (s0 > tol && s1 < -tol) || (s0 < -tol && s1 > tol);
          if (cross_edge_line && cross_seg_line) return false;
        }
      }
    }
  }
  return true;
}

double DomainShape::area() const {
  double a = 0.0;
  for (const auto& comp : components_) {
    double ac = 0.0;
    if (const auto* circ = std::get_if<Circle>(&comp.curve)) {
      ac = std::numbers::pi * circ->radius * circ->radius;
    } else {
      ac = std::abs(polygon_signed_area(std::get<Polyline>(comp.curve).points));
    }
    a += comp.hole ? -ac : ac;
  }
  return a;
}

double DomainShape::component_length(int c) const {
  const auto& comp = components_[static_cast<std::size_t>(c)];
  if (const auto* circ = std::get_if<Circle>(&comp.curve)) return kTwoPi * circ->radius;
  const auto& pts = std::get<Polyline>(comp.curve).points;
  double len = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) len += (vertex_at(pts, i + 1) - pts[i]).norm();
  return len;
}

double DomainShape::boundary_length(bool movable) const {
  double len = 0.0;
  for (std::size_t c = 0; c < components_.size(); ++c) {
    if (components_[c].movable == movable) len += component_length(static_cast<int>(c));
  }
  return len;
}

double DomainShape::boundary_length() const { return boundary_length(true) + boundary_length(false); }

DomainShape::SegmentHit DomainShape::polyline_closest(int c, const Point& x) const {
  const auto& pts = std::get<Polyline>(components_[static_cast<std::size_t>(c)].curve).points;
  const PolylineIndex& idx = index_[static_cast<std::size_t>(c)];
  const int nb = static_cast<int>(idx.buckets.size());
  SegmentHit best{std::numeric_limits<double>::infinity(), 0, 0.0};
  const auto visit = [&](int b) {
    for (int i : idx.buckets[static_cast<std::size_t>(b)]) {
      const Point& p = pts[static_cast<std::size_t>(i)];
      const Point d = vertex_at(pts, static_cast<std::size_t>(i) + 1) - p;
      const double len2 = d.squaredNorm();
      const double t = len2 > 0.0 ? std::clamp((x - p).dot(d) / len2, 0.0, 1.0) : 0.0;
      const double dist = (x - (p + t * d)).norm();
      if (dist < best.distance) best = {dist, i, t};
    }
  };
  const auto slab_gap = [&](int b) {
    const double lo = idx.y0 + b * idx.dy;
    const double hi = lo + idx.dy;
    return std::max({0.0, lo - x.y(), x.y() - hi});
  };
  const int b0 = std::clamp(static_cast<int>(std::floor((x.y() - idx.y0) / idx.dy)), 0, nb - 1);
  visit(b0);
  for (int step = 1; step < nb; ++step) {
    bool progressed = false;
    for (int b : {b0 - step, b0 + step}) {
      if (b < 0 || b >= nb) continue;
      if (slab_gap(b) > best.distance) continue;
      visit(b);
      progressed = true;
    }
    if (!progressed) {
      const bool below = b0 - step >= 0 && slab_gap(b0 - step) <= best.distance;
      const bool above = b0 + step < nb && slab_gap(b0 + step) <= best.distance;
      if (!below && !above) break;
    }
  }
  if (best.fraction >= 1.0) {
    best.segment = static_cast<int>((static_cast<std::size_t>(best.segment) + 1) % pts.size());
    best.fraction = 0.0;
  }
  return best;
}

BoundaryHit DomainShape::closest_point(const Point& x) const {
  BoundaryHit best;
  best.distance = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < components_.size(); ++c) {
    const int ci = static_cast<int>(c);
    if (const auto* circ = std::get_if<Circle>(&components_[c].curve)) {
      const Point r = x - circ->center;
      const double theta = r.squaredNorm() > 0.0 ? wrap_angle(std::atan2(r.y(), r.x())) : 0.0;
      const double dist = std::abs(r.norm() - circ->radius);
      if (dist < best.distance) {
        best.distance = dist;
        best.location = {ci, theta};
        best.point = point_at(best.location);
      }
    } else {
      const SegmentHit hit = polyline_closest(ci, x);
      if (hit.distance < best.distance) {
        best.distance = hit.distance;
        best.location = {ci, hit.segment + hit.fraction};
        best.point = point_at(best.location);
      }
    }
  }
  return best;
}

std::optional<BoundaryHit> DomainShape::cast_ray(const Point& origin, const Point& dir,
                                                 double max_distance) const {
  const double dn = dir.norm();
  if (!(dn > 0.0)) return std::nullopt;
  const Point d = dir / dn;
  {
    const BoundaryHit on = closest_point(origin);
    if (on.distance <= 1e-13 * scale_) {
      BoundaryHit hit = on;
      hit.distance = 0.0;
      return hit;
    }
  }
  std::optional<BoundaryHit> best;
  const auto offer = [&](int c, double s, double param) {
    if (s < 0.0 || s > max_distance) return;
    if (best && s >= best->distance) return;
    BoundaryHit h;
    h.distance = s;
    h.location = {c, param};
    h.point = origin + s * d;
    best = h;
  };
  for (std::size_t c = 0; c < components_.size(); ++c) {
    const int ci = static_cast<int>(c);
    if (const auto* circ = std::get_if<Circle>(&components_[c].curve)) {
      const Point m = origin - circ->center;
      const double b = m.dot(d);
      const double disc = b * b - (m.squaredNorm() - circ->radius * circ->radius);
      if (disc < 0.0) continue;
      const double sq = std::sqrt(disc);
      for (double s : {-b - sq, -b + sq}) {
        if (s < 0.0) continue;
        const Point p = m + s * d;
        offer(ci, s, wrap_angle(std::atan2(p.y(), p.x())));
        break;
      }
      continue;
    }
    const auto& pts = std::get<Polyline>(components_[c].curve).points;
    const PolylineIndex& idx = index_[c];
    const int nb = static_cast<int>(idx.buckets.size());
    double yend;
    if (std::isfinite(max_distance)) {
      yend = origin.y() + max_distance * d.y();
    } else {
      yend = d.y() > 0.0 ? idx.box.hi.y() : (d.y() < 0.0 ? idx.box.lo.y() : origin.y());
    }
    const double ylo = std::min(origin.y(), yend), yhi = std::max(origin.y(), yend);
    if (yhi < idx.box.lo.y() || ylo > idx.box.hi.y()) continue;
    const int b0 = std::clamp(static_cast<int>(std::floor((ylo - idx.y0) / idx.dy)), 0, nb - 1);
    const int b1 = std::clamp(static_cast<int>(std::floor((yhi - idx.y0) / idx.dy)), 0, nb - 1);
    for (int b = b0; b <= b1; ++b) {
      for (int i : idx.buckets[static_cast<std::size_t>(b)]) {
        const Point& p = pts[static_cast<std::size_t>(i)];
        const Point e = vertex_at(pts, static_cast<std::size_t>(i) + 1) - p;
        const double denom = cross(d, e);
        if (std::abs(denom) <= 1e-15 * e.norm()) continue;
        const Point w = p - origin;
        const double s = cross(w, e) / denom;
        const double t = cross(w, d) / denom;
        if (t < -1e-12 || t > 1.0 + 1e-12) continue;
        offer(ci, s, i + std::clamp(t, 0.0, 1.0 - 1e-15));
      }
    }
  }
  if (best) best->point = point_at(best->location);
  return best;
}

Point DomainShape::point_at(const BoundaryLocation& loc) const {
  const auto& comp = components_[static_cast<std::size_t>(loc.component)];
  if (const auto* circ = std::get_if<Circle>(&comp.curve)) {
    return circ->center + circ->radius * Point(std::cos(loc.param), std::sin(loc.param));
  }
  const auto& pts = std::get<Polyline>(comp.curve).points;
  const std::size_t n = pts.size();
  double s = std::fmod(loc.param, static_cast<double>(n));
  if (s < 0.0) s += static_cast<double>(n);
  const std::size_t i = std::min(static_cast<std::size_t>(s), n - 1);
  const double t = s - static_cast<double>(i);
  return (1.0 - t) * pts[i] + t * vertex_at(pts, i + 1);
}

Point DomainShape::outward_normal(const BoundaryLocation& loc) const {
  const auto& comp = components_[static_cast<std::size_t>(loc.component)];
  const double sgn_hole = comp.hole ? -1.0 : 1.0;
  if (std::holds_alternative<Circle>(comp.curve)) {
    return sgn_hole * Point(std::cos(loc.param), std::sin(loc.param));
  }
  const auto& pts = std::get<Polyline>(comp.curve).points;
  const std::size_t n = pts.size();
  double s = std::fmod(loc.param, static_cast<double>(n));
  if (s < 0.0) s += static_cast<double>(n);
  const std::size_t i = std::min(static_cast<std::size_t>(s), n - 1);
  const Point d = vertex_at(pts, i + 1) - pts[i];
  const double sgn = index_[static_cast<std::size_t>(loc.component)].orientation * sgn_hole;
  return sgn * Point(d.y(), -d.x()) / d.norm();
}

double DomainShape::param_delta(const BoundaryLocation& from, const BoundaryLocation& to) const {
  const auto& comp = components_[static_cast<std::size_t>(from.component)];
  const double period = std::holds_alternative<Circle>(comp.curve)
                            ? kTwoPi
                            : static_cast<double>(std::get<Polyline>(comp.curve).points.size());
  double d = std::fmod(to.param - from.param, period);
  if (d > 0.5 * period) d -= period;
  if (d <= -0.5 * period) d += period;
  return d;
}

double DomainShape::arc_length(const BoundaryLocation& from, const BoundaryLocation& to) const {
  const auto& comp = components_[static_cast<std::size_t>(from.component)];
  const double delta = param_delta(from, to);
  if (const auto* circ = std::get_if<Circle>(&comp.curve)) return circ->radius * std::abs(delta);
  const auto& pts = std::get<Polyline>(comp.curve).points;
  const double n = static_cast<double>(pts.size());
  double a = std::fmod(delta >= 0.0 ? from.param : from.param + delta, n);
  if (a < 0.0) a += n;
  double remaining = std::abs(delta);
  double len = 0.0;
  while (remaining > 0.0) {
    const std::size_t i = std::min(static_cast<std::size_t>(a), pts.size() - 1);
    const double seg_end = static_cast<double>(i) + 1.0;
    const double step = std::min(remaining, seg_end - a);
    len += step * (vertex_at(pts, i + 1) - pts[i]).norm();
    remaining -= step;
    a = seg_end >= n ? 0.0 : seg_end;
  }
  return len;
}

std::vector<Point> DomainShape::polyline_vertices_between(const BoundaryLocation& from,
                                                          const BoundaryLocation& to) const {
  std::vector<Point> out;
  const auto& comp = components_[static_cast<std::size_t>(from.component)];
  if (!std::holds_alternative<Polyline>(comp.curve)) return out;
  const auto& pts = std::get<Polyline>(comp.curve).points;
  const long n = static_cast<long>(pts.size());
  const double delta = param_delta(from, to);
  if (delta == 0.0) return out;
  if (delta > 0.0) {
    long k = static_cast<long>(std::floor(from.param)) + 1;
    for (; static_cast<double>(k) < from.param + delta; ++k) {
      out.push_back(pts[static_cast<std::size_t>(((k % n) + n) % n)]);
    }
  } else {
    long k = static_cast<long>(std::ceil(from.param)) - 1;
    for (; static_cast<double>(k) > from.param + delta; --k) {
      out.push_back(pts[static_cast<std::size_t>(((k % n) + n) % n)]);
    }
  }
  return out;
}

double DomainShape::max_segment_length() const {
  double m = 0.0;
  for (const auto& comp : components_) {
    if (!comp.movable) continue;
    const auto* poly = std::get_if<Polyline>(&comp.curve);
    if (!poly) continue;
    const auto& pts = poly->points;
    for (std::size_t i = 0; i < pts.size(); ++i) m = std::max(m, (vertex_at(pts, i + 1) - pts[i]).norm());
  }
  return m;
}

DomainShape DomainShape::with_polyline(int c, std::vector<Point> points) const {
  std::vector<BoundaryComponent> comps = components_;
  auto& comp = comps.at(static_cast<std::size_t>(c));
  if (!std::holds_alternative<Polyline>(comp.curve)) {
    throw GeometryError("domain: component is not a polyline");
  }
  comp.curve = Polyline{std::move(points)};
  return DomainShape(std::move(comps));
}

}  // namespace hdgshape
