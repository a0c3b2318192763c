#include <cmath>
#include <numbers>

#include "hdgshape/cli.hpp"
#include "hdgshape/errors.hpp"

namespace hdgshape {

ManufacturedProblem manufactured_annulus(double outer, double inner) {
  if (!(outer > inner && inner > 0.0)) throw ConfigError("annulus needs outer_radius > inner_radius > 0");
  ManufacturedProblem m;
  m.shape = DomainShape({{Circle{{0.0, 0.0}, outer}, false, true}, {Circle{{0.0, 0.0}, inner}, true, false}});

  auto ss = [](const Point& x) { return std::sin(x.x()) * std::sin(x.y()); };
  auto minus_grad_ss = [](const Point& x) {
    return Point(-std::cos(x.x()) * std::sin(x.y()), -std::sin(x.x()) * std::cos(x.y()));
  };
  m.y = ss;
  m.z = ss;
  m.p = minus_grad_ss;
  m.r = minus_grad_ss;

  m.data.f = [=](const Point& x) { return 2.0 * ss(x); };
  m.data.g = ss;
  m.data.grad_g = [=](const Point& x) { return Point(-minus_grad_ss(x)); };
  // y - target = 2 sin x1 sin x2 = -Delta z, with z = sin x1 sin x2 on Gamma.
  m.data.target = [=](const Point& x) { return -ss(x); };
  m.data.adjoint_dirichlet = ss;

  const double b = inner * inner;
  auto e = [=](const Point& x) { return std::exp(x.squaredNorm() - b); };
  m.V = [=](const Point& x) { return Point(e(x), e(x)); };
  m.sigma = [=](const Point& x) {
    const Point g = -2.0 * e(x) * x;
    Eigen::Matrix2d s;
    s << g.x(), g.y(), g.x(), g.y();
    return s;
  };
  m.deformation_source = [=](const Point& x) {
    const double s = -(4.0 + 4.0 * x.squaredNorm()) * e(x);
    return Point(s, s);
  };
  // Flux terms cancel because g = y; only 1/2 (g - target)^2 survives.
  m.G = [=](const Point& x) { return 2.0 * ss(x) * ss(x); };
  return m;
}

double shape_recovery_radius() { return std::sqrt(1.0 / (2.0 * std::numbers::pi)); }

double shape_recovery_area(double inner) {
  return std::numbers::pi * (1.0 / (2.0 * std::numbers::pi) - inner * inner);
}

ProblemData shape_recovery_data(double inner) {
  const double A = 1.0 / (2.0 * std::numbers::pi);
  const double B = inner * inner;
  ProblemData d;
  d.f = [=](const Point& x) { return A + B - 4.0 * x.squaredNorm(); };
  d.target = [=](const Point& x) {
    const double r2 = x.squaredNorm();
    return (r2 - A) * (r2 - B);
  };
  return d;
}

double target_area(const RunConfig& cfg) {
  return std::isnan(cfg.opt.m0) ? shape_recovery_area(cfg.inner_radius) : cfg.opt.m0;
}

DomainShape initial_shape(const RunConfig& cfg) {
  if (cfg.boundary_points < 3) throw ConfigError("boundary_points must be >= 3");
  if (!(cfg.initial_ax > 0.0 && cfg.initial_ay > 0.0)) throw ConfigError("initial_axes must be positive");
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(cfg.boundary_points));
  for (int i = 0; i < cfg.boundary_points; ++i) {
    const double t = 2.0 * std::numbers::pi * i / cfg.boundary_points;
    pts.emplace_back(cfg.initial_ax * std::cos(t), cfg.initial_ay * std::sin(t));
  }
  DomainShape s({{Polyline{std::move(pts)}, false, true}, {Circle{{0.0, 0.0}, cfg.inner_radius}, true, false}});
  try {
    s.validate();
  } catch (const GeometryError& e) {
    throw ConfigError(std::string("initial shape: ") + e.what());
  }
  return s;
}

}  // namespace hdgshape
