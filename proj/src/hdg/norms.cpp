#include <cmath>

#include "hdgshape/hdg.hpp"
#include "hdgshape/quadrature.hpp"

namespace hdgshape {

ErrorNorms compute_error_norms(const Discretization& disc, const ScalarHdgSolution& sol, const ScalarField& u,
                               const VectorField& q) {
  const ComputationalMesh& mesh = *disc.mesh;
  const int k = sol.k;
  const Rule2D& rule = triangle_rule(2 * k + 4);
  double ep = 0.0, eq = 0.0, et = 0.0;

  auto accumulate = [&](int e, const Point& x, double w) {
    const double du = u(x) - sol.primal_at(e, x);
    const Point dq = q(x) - sol.flux_at(e, x);
    ep += w * du * du;
    eq += w * dq.squaredNorm();
  };

  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const AffineMap map = element_map(mesh, static_cast<int>(e));
    for (std::size_t i = 0; i < rule.points.size(); ++i)
      accumulate(static_cast<int>(e), map.to_physical(rule.points[i]), rule.weights[i] * map.det);
  }
  for (const ExtensionPatch& p : disc.patches)
    for (std::size_t i = 0; i < p.points.size(); ++i) accumulate(p.element, p.points[i], p.weights[i]);

  // Trace error against the edgewise L2 projection of u.
  const Rule1D& gl = gauss_legendre(k + 3);
  std::vector<double> mu(static_cast<std::size_t>(k + 1));
  for (std::size_t edge = 0; edge < mesh.edges.size(); ++edge) {
    const MeshEdge& me = mesh.edges[edge];
    const double half = 0.5 * me.length;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(k + 1);
    for (std::size_t r = 0; r < gl.points.size(); ++r) {
      legendre_basis(k, gl.points[r], mu.data());
      const double v = gl.weights[r] * u(mesh.edge_point(static_cast<int>(edge), gl.points[r]));
      for (int l = 0; l <= k; ++l) c[l] += v * mu[static_cast<std::size_t>(l)];
    }
    const double d2 = (c - sol.trace.row(static_cast<Eigen::Index>(edge)).transpose()).squaredNorm() * half;
    for (int side = 0; side < 2; ++side) {
      const int e = me.elements[static_cast<std::size_t>(side)];
      if (e >= 0) et += mesh.elements[static_cast<std::size_t>(e)].diameter * d2;
    }
  }
  return {std::sqrt(std::max(ep, 0.0)), std::sqrt(std::max(eq, 0.0)), std::sqrt(et)};
}

namespace {

// <q_hat . n, mu_l>_e from one side, for all l.
Eigen::VectorXd side_flux(const ComputationalMesh& mesh, const ScalarHdgSolution& sol, int edge, int e, double tau,
                          const Rule1D& gl) {
  const int k = sol.k;
  const ElementBasis basis(reference_basis(k), element_map(mesh, e));
  const Point n = mesh.normal_from(edge, e);
  const double half = 0.5 * mesh.edges[static_cast<std::size_t>(edge)].length;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(k + 1);
  std::vector<double> mu(static_cast<std::size_t>(k + 1));
  for (std::size_t r = 0; r < gl.points.size(); ++r) {
    const Point x = mesh.edge_point(edge, gl.points[r]);
    const Point qx(basis.evaluate(sol.flux_x.row(e).data(), x), basis.evaluate(sol.flux_y.row(e).data(), x));
    const double u = basis.evaluate(sol.primal.row(e).data(), x);
    const double qn = qx.dot(n) + tau * (u - sol.trace_at(edge, gl.points[r]));
    legendre_basis(k, gl.points[r], mu.data());
    for (int l = 0; l <= k; ++l) out[l] += gl.weights[r] * half * qn * mu[static_cast<std::size_t>(l)];
  }
  return out;
}

}  // namespace

FluxJump flux_jump_residual(const Discretization& disc, const ScalarHdgSolution& sol, const HdgConfig& cfg) {
  const ComputationalMesh& mesh = *disc.mesh;
  const Rule1D& gl = gauss_legendre(cfg.edge_order());
  FluxJump out;
  for (int edge : mesh.interior_edges) {
    const MeshEdge& me = mesh.edges[static_cast<std::size_t>(edge)];
    const Eigen::VectorXd a = side_flux(mesh, sol, edge, me.elements[0], cfg.tau, gl);
    const Eigen::VectorXd b = side_flux(mesh, sol, edge, me.elements[1], cfg.tau, gl);
    out.max_jump = std::max(out.max_jump, (a + b).cwiseAbs().maxCoeff());
    out.scale = std::max({out.scale, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
  }
  return out;
}

DeformationEnergy deformation_energy(const Discretization& disc, const TensorHdgSolution& sol,
                                     const std::vector<std::vector<Point>>& neumann, const HdgConfig& cfg,
                                     const VectorField& dirichlet) {
  const ComputationalMesh& mesh = *disc.mesh;
  const TransferMap& tm = disc.transfer;
  const int k = sol.comp[0].k;
  const Rule2D& rule = triangle_rule(2 * k);
  const Rule1D& gl = gauss_legendre(k + 1);
  const Rule1D path = gauss_legendre_unit(cfg.path_order());
  DeformationEnergy out;

  for (const ScalarHdgSolution& c : sol.comp) {
    for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
      const int ei = static_cast<int>(e);
      const AffineMap map = element_map(mesh, ei);
      for (std::size_t i = 0; i < rule.points.size(); ++i)
        out.sigma += rule.weights[i] * map.det * c.flux_at(ei, map.to_physical(rule.points[i])).squaredNorm();
      for (int edge : mesh.elements[e].edges) {
        const double half = 0.5 * mesh.edges[static_cast<std::size_t>(edge)].length;
        for (std::size_t r = 0; r < gl.points.size(); ++r) {
          const double d = c.primal_at(ei, mesh.edge_point(edge, gl.points[r])) - c.trace_at(edge, gl.points[r]);
          out.jump += cfg.tau * gl.weights[r] * half * d * d;
        }
      }
    }
  }

  for (std::size_t s = 0; s < tm.edges.size(); ++s) {
    const EdgeTransfer& et = tm.edges[s];
    const double half = 0.5 * mesh.edges[static_cast<std::size_t>(et.edge)].length;
    const Point n = mesh.normal_from(et.edge, et.element);
    for (std::size_t r = 0; r < et.nodes.size(); ++r) {
      const TransferNode& node = et.nodes[r];
      const double w = et.weights[r] * half;
      for (int i = 0; i < 2; ++i) {
        const ScalarHdgSolution& c = sol.comp[static_cast<std::size_t>(i)];
        const double trace = c.trace_at(et.edge, et.s[r]);
        if (et.dirichlet) {
          const double flux = c.flux_at(et.element, node.x).dot(n) +
                              cfg.tau * (c.primal_at(et.element, node.x) - trace);
          double gD = dirichlet ? dirichlet(node.xbar)[i] : 0.0;
          for (std::size_t p = 0; p < path.points.size(); ++p) {
            const Point y = node.x + node.length * path.points[p] * node.t;
            gD += node.length * path.weights[p] * c.flux_at(et.element, y).dot(node.t);
          }
          out.dirichlet += w * flux * gD;
        } else {
          out.neumann += w * neumann[s][r][i] * trace;
        }
      }
    }
  }
  return out;
}

}  // namespace hdgshape
