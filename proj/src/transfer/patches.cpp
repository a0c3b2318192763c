#include <algorithm>
#include <cmath>

#include "hdgshape/quadrature.hpp"
#include "hdgshape/transfer.hpp"

namespace hdgshape {

namespace {

// Signed fan triangle (m, p, q).
void add_triangle(ExtensionPatch& patch, const Rule2D& rule, const Point& m, const Point& p, const Point& q) {
  const double det = cross(p - m, q - m);
  if (det == 0.0) return;
  for (std::size_t i = 0; i < rule.points.size(); ++i) {
    const Point& xi = rule.points[i];
    patch.points.push_back(m + xi.x() * (p - m) + xi.y() * (q - m));
    patch.weights.push_back(rule.weights[i] * det);
  }
}

// Region swept from m to the circular arc theta in [theta0, theta0 + dtheta].
void add_arc_fan(ExtensionPatch& patch, int degree, const Point& m, const Circle& circ, double theta0,
                 double dtheta) {
  if (dtheta == 0.0) return;
  const Rule1D rv = gauss_legendre_unit(std::max(1, (degree + 3) / 2));
  const Rule1D rt = gauss_legendre_unit(degree + 4);
  for (std::size_t a = 0; a < rt.points.size(); ++a) {
    const double th = theta0 + dtheta * rt.points[a];
    const Point g = circ.center + circ.radius * Point(std::cos(th), std::sin(th));
    const Point dg = circ.radius * Point(-std::sin(th), std::cos(th));
    const double jac = cross(g - m, dg) * dtheta * rt.weights[a];
    for (std::size_t b = 0; b < rv.points.size(); ++b) {
      const double v = rv.points[b];
      patch.points.push_back(m + v * (g - m));
      patch.weights.push_back(jac * v * rv.weights[b]);
    }
  }
}

}  // namespace

std::vector<ExtensionPatch> build_extension_patches(const TransferMap& tm, const ComputationalMesh& mesh,
                                                    const DomainShape& shape, int degree) {
  const Rule2D& rule = triangle_rule(degree);
  std::vector<ExtensionPatch> patches(tm.edges.size());
  const double min_area = 1e-14 * mesh.h * mesh.h;
  for (std::size_t i = 0; i < tm.edges.size(); ++i) {
    const EdgeTransfer& et = tm.edges[i];
    ExtensionPatch& patch = patches[i];
    patch.edge = et.edge;
    patch.element = et.element;
    const MeshEdge& ed = mesh.edges[static_cast<std::size_t>(et.edge)];

    // Orient so that the patch is on the left: b -> a -> abar -> Gamma -> bbar -> b.
    const Point v0 = mesh.vertex(ed.vertices[0]);
    const Point v1 = mesh.vertex(ed.vertices[1]);
    const bool forward = (v1 - v0).dot(perp(ed.normal)) > 0.0;
    const TransferNode& pa = forward ? et.endpoints[0] : et.endpoints[1];
    const TransferNode& pb = forward ? et.endpoints[1] : et.endpoints[0];
    const Point m = 0.5 * (v0 + v1);

    if (pa.length > 0.0) add_triangle(patch, rule, m, pa.x, pa.xbar);
    if (pa.location.component == pb.location.component) {
      const auto& comp = shape.components()[static_cast<std::size_t>(pa.location.component)];
      if (const auto* circ = std::get_if<Circle>(&comp.curve)) {
        add_arc_fan(patch, degree, m, *circ, pa.location.param, shape.param_delta(pa.location, pb.location));
      } else {
        std::vector<Point> chain{pa.xbar};
        for (const Point& p : shape.polyline_vertices_between(pa.location, pb.location)) chain.push_back(p);
        chain.push_back(pb.xbar);
        for (std::size_t j = 0; j + 1 < chain.size(); ++j) add_triangle(patch, rule, m, chain[j], chain[j + 1]);
      }
    } else {
      add_triangle(patch, rule, m, pa.xbar, pb.xbar);
    }
    if (pb.length > 0.0) add_triangle(patch, rule, m, pb.xbar, pb.x);

    double area = 0.0;
    for (double w : patch.weights) area += w;
    if (std::abs(area) < min_area) {
      patch.points.clear();
      patch.weights.clear();
      area = 0.0;
    }
    patch.area = area;
  }
  return patches;
}

AffineMap element_map(const ComputationalMesh& mesh, int e) {
  return AffineMap(mesh.element_vertex(e, 0), mesh.element_vertex(e, 1), mesh.element_vertex(e, 2));
}

double extrapolate(const ComputationalMesh& mesh, int element, int k, const double* coeffs, const Point& x) {
  const ElementBasis basis(reference_basis(k), element_map(mesh, element));
  return basis.evaluate(coeffs, x);
}

AdmissibilityReport check_admissibility(const ComputationalMesh& mesh, const TransferMap& tm, int k,
                                        double tau, double a_min) {
  AdmissibilityReport rep;
  rep.r = mesh.background->quasi_uniformity();
  rep.rho = mesh.background->shape_regularity();
  rep.R = tm.R;
  rep.H_threshold = 1.0 / (4.0 * tau * std::min(1.0, 1.0 + 1.0 / a_min));
  for (const auto& et : tm.edges) {
    rep.max_H_perp = std::max(rep.max_H_perp, et.H_perp);
    if (et.H_perp > rep.H_threshold) ++rep.edges_failing_H;
  }
  rep.H_ok = rep.edges_failing_H == 0;
  const double beta = 1.0 / rep.rho;
  rep.C_ext = (k + 1.0) * (k + 1.0) * std::pow(3.0 * beta + 2.0, k);
  rep.C_inv = static_cast<double>(k) * k;
  rep.R_threshold = std::pow(2.0, -1.0 / 3.0) * std::pow(rep.C_inv * rep.C_ext, -2.0 / 3.0);
  rep.R_ok = rep.R < rep.R_threshold;
  return rep;
}

}  // namespace hdgshape
