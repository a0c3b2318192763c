#include <cmath>
#include <variant>

#include "hdgshape/errors.hpp"
#include "hdgshape/quadrature.hpp"
#include "hdgshape/shapeopt.hpp"

namespace hdgshape {

void OptConfig::validate() const {
  if (!(tol >= 0.0)) throw ConfigError("tol must be >= 0");
  if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be >= 0");
  if (max_iters < 0) throw ConfigError("max_iters must be >= 0");
  if (!(step0 > 0.0)) throw ConfigError("step0 must be positive");
  if (!(step_growth >= 0.0)) throw ConfigError("step_growth must be >= 0");
  if (!(damping > 0.0 && damping <= 1.0)) throw ConfigError("damping must lie in (0, 1]");
  if (!(smoothing >= 0.0)) throw ConfigError("smoothing must be >= 0");
  if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("beta must lie in (0, 1)");
  if (!(c1 > 0.0 && c1 < 1.0)) throw ConfigError("c1 must lie in (0, 1)");
  if (max_backtracks < 0) throw ConfigError("max_backtracks must be >= 0");
}

namespace {

void add_segment(std::vector<GammaPoint>& out, const DomainShape& shape, const Point& a, const Point& b, int element,
                 const Rule1D& gl) {
  const double len = (b - a).norm();
  if (len <= 0.0) return;
  const Point n = shape.outward_normal(shape.closest_point(0.5 * (a + b)).location);
  for (std::size_t i = 0; i < gl.points.size(); ++i) {
    const double s = 0.5 * (gl.points[i] + 1.0);
    out.push_back({a + s * (b - a), n, 0.5 * len * gl.weights[i], element});
  }
}

}  // namespace

std::vector<GammaPoint> gamma_quadrature(const Discretization& disc, bool movable_only, int points) {
  const DomainShape& shape = disc.shape;
  const ComputationalMesh& mesh = *disc.mesh;
  const Rule1D& gl = gauss_legendre(points);
  std::vector<GammaPoint> out;
  for (const EdgeTransfer& et : disc.transfer.edges) {
    if (movable_only && et.dirichlet) continue;
    const BoundaryLocation& l0 = et.endpoints[0].location;
    const BoundaryLocation& l1 = et.endpoints[1].location;
    if (l0.component != l1.component) {
      // Arc straddles two loops: fall back to the edge nodes.
      const double half = 0.5 * mesh.edges[static_cast<std::size_t>(et.edge)].length;
      for (std::size_t r = 0; r < et.nodes.size(); ++r)
        out.push_back({et.nodes[r].xbar, et.nodes[r].normal, half * et.weights[r], et.element});
      continue;
    }
    const BoundaryComponent& comp = shape.components()[static_cast<std::size_t>(l0.component)];
    if (const auto* c = std::get_if<Circle>(&comp.curve)) {
      const double d = shape.param_delta(l0, l1);
      for (std::size_t i = 0; i < gl.points.size(); ++i) {
        const BoundaryLocation loc{l0.component, l0.param + 0.5 * (gl.points[i] + 1.0) * d};
        out.push_back({shape.point_at(loc), shape.outward_normal(loc), 0.5 * std::abs(d) * c->radius * gl.weights[i],
                       et.element});
      }
    } else {
      std::vector<Point> pts{et.endpoints[0].xbar};
      for (const Point& p : shape.polyline_vertices_between(l0, l1)) pts.push_back(p);
      pts.push_back(et.endpoints[1].xbar);
      for (std::size_t i = 0; i + 1 < pts.size(); ++i) add_segment(out, shape, pts[i], pts[i + 1], et.element, gl);
    }
  }
  return out;
}

double integrate_over_omega(const Discretization& disc, const std::function<double(int, const Point&)>& f,
                            int degree) {
  const ComputationalMesh& mesh = *disc.mesh;
  const Rule2D& rule = triangle_rule(degree);
  double sum = 0.0;
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const AffineMap map = element_map(mesh, static_cast<int>(e));
    double local = 0.0;
    for (std::size_t i = 0; i < rule.points.size(); ++i)
      local += rule.weights[i] * f(static_cast<int>(e), map.to_physical(rule.points[i]));
    sum += local * map.det;
  }
  for (const ExtensionPatch& p : disc.patches)
    for (std::size_t i = 0; i < p.points.size(); ++i) sum += p.weights[i] * f(p.element, p.points[i]);
  return sum;
}

double evaluate_J(const Discretization& disc, const ScalarHdgSolution& y, const ProblemData& data) {
  return 0.5 * integrate_over_omega(
                   disc,
                   [&](int e, const Point& x) {
                     const double d = y.primal_at(e, x) - data.target(x);
                     return d * d;
                   },
                   2 * y.k + 2);
}

double shape_gradient_at(const ScalarHdgSolution& y, const ScalarHdgSolution& z, const ProblemData& data, int e,
                         const Point& x, const Point& n) {
  const double rn = z.flux_at(e, x).dot(n);
  const double pn = y.flux_at(e, x).dot(n) / data.a(x);
  const double gd = data.g(x) - data.target(x);
  return rn * (pn + data.grad_g(x).dot(n)) + 0.5 * gd * gd;
}

std::vector<std::vector<double>> evaluate_shape_gradient(const Discretization& disc, const ScalarHdgSolution& y,
                                                         const ScalarHdgSolution& z, const ProblemData& data) {
  std::vector<std::vector<double>> G(disc.transfer.edges.size());
  for (std::size_t s = 0; s < G.size(); ++s) {
    const EdgeTransfer& et = disc.transfer.edges[s];
    G[s].assign(et.nodes.size(), 0.0);
    if (et.dirichlet) continue;
    for (std::size_t r = 0; r < et.nodes.size(); ++r)
      G[s][r] = shape_gradient_at(y, z, data, et.element, et.nodes[r].xbar, et.nodes[r].normal);
  }
  return G;
}

double evaluate_chi(const Discretization& disc, const ScalarHdgSolution& y, const ScalarHdgSolution& z,
                    const ProblemData& data) {
  const double length = disc.shape.boundary_length(true);
  if (!(length > 0.0)) throw GeometryError("shape has no movable boundary");
  double sum = 0.0;
  for (const GammaPoint& gp : gamma_quadrature(disc, true, y.k + 2))
    sum += gp.weight * shape_gradient_at(y, z, data, gp.element, gp.x, gp.normal);
  return -sum / length;
}

double update_multiplier(double xi, double chi, double area, double m0, double epsilon) {
  return (xi + chi) / 2.0 + epsilon * (area - m0);
}

std::vector<std::vector<Point>> deformation_datum(const Discretization& disc, const std::vector<std::vector<double>>& G,
                                                  double xi) {
  std::vector<std::vector<Point>> out(disc.transfer.edges.size());
  for (std::size_t s = 0; s < out.size(); ++s) {
    const EdgeTransfer& et = disc.transfer.edges[s];
    if (et.dirichlet) continue;
    for (std::size_t r = 0; r < et.nodes.size(); ++r) out[s].push_back((G[s][r] + xi) * et.nodes[r].normal);
  }
  return out;
}

double evaluate_deltaJ(const Discretization& disc, const std::vector<std::vector<Point>>& datum,
                       const TensorHdgSolution& V) {
  const ComputationalMesh& mesh = *disc.mesh;
  double sum = 0.0;
  for (std::size_t s = 0; s < disc.transfer.edges.size(); ++s) {
    const EdgeTransfer& et = disc.transfer.edges[s];
    if (et.dirichlet || datum[s].empty()) continue;
    const double half = 0.5 * mesh.edges[static_cast<std::size_t>(et.edge)].length;
    for (std::size_t r = 0; r < et.nodes.size(); ++r) {
      const Point vhat(V.comp[0].trace_at(et.edge, et.s[r]), V.comp[1].trace_at(et.edge, et.s[r]));
      sum += half * et.weights[r] * datum[s][r].dot(vhat);
    }
  }
  return sum;
}

Point velocity_at(const Discretization& disc, const TensorHdgSolution& V, const Point& x) {
  const int e = disc.mesh->nearest_element(x);
  if (e < 0) throw GeometryError("no element near boundary point");
  return V.V_at(e, x);
}

}  // namespace hdgshape
