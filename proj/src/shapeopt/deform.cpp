#include <cmath>
#include <variant>

#include "hdgshape/errors.hpp"
#include "hdgshape/shapeopt.hpp"

namespace hdgshape {

std::vector<std::vector<Point>> sample_movable(const DomainShape& shape, const std::function<Point(const Point&)>& v) {
  std::vector<std::vector<Point>> out(shape.size());
  for (std::size_t c = 0; c < shape.size(); ++c) {
    const BoundaryComponent& comp = shape.components()[c];
    if (!comp.movable) continue;
    const auto* poly = std::get_if<Polyline>(&comp.curve);
    if (!poly) throw ConfigError("movable boundary loops must be polylines");
    out[c].reserve(poly->points.size());
    for (const Point& p : poly->points) out[c].push_back(v(p));
  }
  return out;
}

std::vector<std::vector<Point>> smooth_velocity(const DomainShape& shape, const std::vector<std::vector<Point>>& velocity,
                                                double width) {
  if (!(width > 0.0)) return velocity;
  if (velocity.size() != shape.size()) throw ConfigError("velocity samples do not match the movable points");
  std::vector<std::vector<Point>> out = velocity;
  for (std::size_t c = 0; c < shape.size(); ++c) {
    const auto* poly = std::get_if<Polyline>(&shape.components()[c].curve);
    if (!shape.components()[c].movable || !poly) continue;
    const std::vector<Point>& pts = poly->points;
    const std::size_t n = pts.size();
    if (velocity[c].size() != n) throw ConfigError("velocity samples do not match the movable points");
    if (n < 3) continue;
    // Vertex i carries half of each adjacent segment.
    std::vector<double> seg(n), dual(n);
    for (std::size_t i = 0; i < n; ++i) seg[i] = (pts[(i + 1) % n] - pts[i]).norm();
    for (std::size_t i = 0; i < n; ++i) dual[i] = 0.5 * (seg[i] + seg[(i + n - 1) % n]);
    for (std::size_t i = 0; i < n; ++i) {
      Point sum = dual[i] * velocity[c][i];
      double wsum = dual[i];
      for (int dir : {1, -1}) {
        double s = 0.0;
        std::size_t j = i;
        for (std::size_t step = 1; step < n / 2; ++step) {
          s += dir > 0 ? seg[j] : seg[(j + n - 1) % n];
          j = (j + n + dir) % n;
          if (s >= width) break;
          const double w = dual[j] * (1.0 - s / width);
          sum += w * velocity[c][j];
          wsum += w;
        }
      }
      out[c][i] = sum / wsum;
    }
  }
  return out;
}

DomainShape deform_shape(const DomainShape& shape, const std::vector<std::vector<Point>>& velocity, double tau) {
  if (tau == 0.0) return shape;
  DomainShape out = shape;
  for (std::size_t c = 0; c < shape.size(); ++c) {
    const BoundaryComponent& comp = shape.components()[c];
    if (!comp.movable) continue;
    const auto* poly = std::get_if<Polyline>(&comp.curve);
    if (!poly) throw ConfigError("movable boundary loops must be polylines");
    if (velocity.size() != shape.size() || velocity[c].size() != poly->points.size())
      throw ConfigError("velocity samples do not match the movable points");
    std::vector<Point> pts = poly->points;
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i] += tau * velocity[c][i];
    out = out.with_polyline(static_cast<int>(c), std::move(pts));
  }
  out.validate();
  return out;
}

DomainShape deform_shape(const DomainShape& shape, const std::function<Point(const Point&)>& v, double tau) {
  return deform_shape(shape, sample_movable(shape, v), tau);
}

LineSearchResult armijo_line_search(double f0, double slope, double tau0,
                                    const std::function<std::optional<double>(double)>& trial, const OptConfig& cfg) {
  if (!(slope < 0.0)) throw ConfigError("line search needs a descent direction");
  if (!(tau0 > 0.0) || !std::isfinite(tau0)) throw ConfigError("line search needs a positive initial step");
  LineSearchResult res;
  double tau = tau0;
  for (int j = 0; j <= cfg.max_backtracks; ++j, tau *= cfg.beta) {
    res.backtracks = j;
    const std::optional<double> f = trial(tau);
    if (f && std::isfinite(*f) && *f <= f0 + cfg.c1 * tau * slope) {
      res.accepted = true;
      res.tau = tau;
      res.value = *f;
      return res;
    }
  }
  return res;
}

}  // namespace hdgshape
