#pragma once

// Reference computations shared by the unit tests and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "hdgshape/hdg.hpp"
#include "hdgshape/quadrature.hpp"
#include "hdgshape/transfer.hpp"

namespace hdgshape::oracle {

// All unknowns (q_x, q_y, u per element, then traces per edge) assembled
// directly from the weak form, without condensation or integration by parts.
struct Monolithic {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
};

inline Monolithic monolithic_system(const Discretization& d, const ScalarField& a, const ScalarField& f,
                             const std::vector<EdgeCondition>& cond, const std::vector<std::vector<double>>& gD,
                             const std::vector<std::vector<double>>& gN, const HdgConfig& cfg) {
  const ComputationalMesh& mesh = *d.mesh;
  const int k = cfg.k, n = dim_pk(k), m = k + 1;
  const int ne = static_cast<int>(mesh.elements.size());
  const int N = ne * 3 * n + static_cast<int>(mesh.edges.size()) * m;
  Monolithic s{Eigen::MatrixXd::Zero(N, N), Eigen::VectorXd::Zero(N)};
  auto qo = [&](int e, int c) { return e * 3 * n + c * n; };
  auto uo = [&](int e) { return e * 3 * n + 2 * n; };
  auto lo = [&](int edge) { return ne * 3 * n + edge * m; };
  const Rule2D& rule = triangle_rule(cfg.volume_order());
  const Rule1D& gl = gauss_legendre(cfg.edge_order());
  std::vector<double> phi(n), gx(n), gy(n), mu(m);

  for (int e = 0; e < ne; ++e) {
    const AffineMap map = element_map(mesh, e);
    const ElementBasis basis(reference_basis(k), map);
    for (std::size_t p = 0; p < rule.points.size(); ++p) {
      const Point x = map.to_physical(rule.points[p]);
      const double w = rule.weights[p] * map.det;
      basis.eval_grad(x, phi.data(), gx.data(), gy.data());
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          for (int c = 0; c < 2; ++c) {
            const double dci = c == 0 ? gx[i] : gy[i];
            s.A(qo(e, c) + i, qo(e, c) + j) += w * phi[j] * phi[i] / a(x);
            s.A(qo(e, c) + i, uo(e) + j) -= w * phi[j] * dci;
            s.A(uo(e) + i, qo(e, c) + j) -= w * phi[j] * dci;
          }
        }
        s.b[uo(e) + i] += w * f(x) * phi[i];
      }
    }
    for (int edge : mesh.elements[e].edges) {
      const Point nr = mesh.normal_from(edge, e);
      const double half = 0.5 * mesh.edges[edge].length;
      for (std::size_t r = 0; r < gl.points.size(); ++r) {
        const double w = gl.weights[r] * half;
        basis.eval(mesh.edge_point(edge, gl.points[r]), phi.data());
        legendre_basis(k, gl.points[r], mu.data());
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) {
            for (int c = 0; c < 2; ++c) s.A(uo(e) + i, qo(e, c) + j) += w * phi[j] * nr[c] * phi[i];
            s.A(uo(e) + i, uo(e) + j) += w * cfg.tau * phi[j] * phi[i];
          }
          for (int l = 0; l < m; ++l) {
            for (int c = 0; c < 2; ++c) s.A(qo(e, c) + i, lo(edge) + l) += w * mu[l] * phi[i] * nr[c];
            s.A(uo(e) + i, lo(edge) + l) -= w * cfg.tau * mu[l] * phi[i];
          }
        }
        const int slot = d.transfer.slot_of_edge[edge];
        if (slot >= 0 && cond[slot] == EdgeCondition::Dirichlet) continue;
        for (int l = 0; l < m; ++l) {
          for (int j = 0; j < n; ++j) {
            for (int c = 0; c < 2; ++c) s.A(lo(edge) + l, qo(e, c) + j) += w * phi[j] * nr[c] * mu[l];
            s.A(lo(edge) + l, uo(e) + j) += w * cfg.tau * phi[j] * mu[l];
          }
          for (int j = 0; j < m; ++j) s.A(lo(edge) + l, lo(edge) + j) -= w * cfg.tau * mu[j] * mu[l];
        }
      }
    }
  }

  const Rule1D path = gauss_legendre_unit(cfg.path_order());
  for (std::size_t slot = 0; slot < d.transfer.edges.size(); ++slot) {
    const EdgeTransfer& et = d.transfer.edges[slot];
    const double half = 0.5 * mesh.edges[et.edge].length;
    const ElementBasis basis(reference_basis(k), element_map(mesh, et.element));
    for (std::size_t r = 0; r < et.nodes.size(); ++r) {
      const TransferNode& node = et.nodes[r];
      const double w = et.weights[r] * half;
      legendre_basis(k, et.s[r], mu.data());
      for (int l = 0; l < m; ++l) {
        if (cond[slot] == EdgeCondition::Neumann) {
          if (!gN.empty()) s.b[lo(et.edge) + l] += w * gN[slot][r] * mu[l];
          continue;
        }
        std::vector<double> nu(m);
        legendre_basis(k, et.s[r], nu.data());
        for (int j = 0; j < m; ++j) s.A(lo(et.edge) + l, lo(et.edge) + j) += w * nu[j] * mu[l];
        for (std::size_t p = 0; p < path.points.size(); ++p) {
          const Point y = node.x + node.length * path.points[p] * node.t;
          basis.eval(y, phi.data());
          for (int j = 0; j < n; ++j)
            for (int c = 0; c < 2; ++c)
              s.A(lo(et.edge) + l, qo(et.element, c) + j) -=
                  w * mu[l] * node.length * path.weights[p] * phi[j] * node.t[c] / a(y);
        }
        if (!gD.empty()) s.b[lo(et.edge) + l] += w * gD[slot][r] * mu[l];
      }
    }
  }
  return s;
}

struct MonolithicComparison {
  double residual = 0.0;    // |A x - b| / |b| of the dense solve
  double difference = 0.0;  // max coefficient difference / max(1, max |x|)
};

// Condensed solve vs dense monolithic solve with variable a, f, g and Neumann data.
inline MonolithicComparison compare_with_monolithic(const Discretization& d, const HdgConfig& cfg,
                                                    const std::vector<EdgeCondition>& cond) {
  const ScalarField a = [](const Point& x) { return 1.0 + 0.5 * x.x() * x.x() + 0.25 * x.y(); };
  const ScalarField f = [](const Point& x) { return std::sin(3 * x.x()) + x.y(); };
  const ScalarField g = [](const Point& x) { return std::cos(x.x() - 2 * x.y()); };
  const ScalarField gn = [](const Point& x) { return x.x() * x.y() - 0.3; };
  const auto gD = sample_on_gamma(d.transfer, g);
  const auto gN = sample_on_gamma(d.transfer, gn);

  const CondensedSystem sys(d, a, cfg, cond);
  ScalarLoads loads;
  loads.volume = [&](int, const Point& x) { return f(x); };
  loads.dirichlet = gD;
  loads.neumann = gN;
  const ScalarHdgSolution sol = sys.solve(loads);

  const Monolithic mono = monolithic_system(d, a, f, cond, gD, gN, cfg);
  const Eigen::VectorXd x = mono.A.fullPivLu().solve(mono.b);
  MonolithicComparison out;
  out.residual = (mono.A * x - mono.b).norm() / mono.b.norm();

  const int n = dim_pk(cfg.k), m = cfg.k + 1;
  const int ne = static_cast<int>(d.mesh->elements.size());
  double err = 0.0;
  for (int e = 0; e < ne; ++e) {
    for (int i = 0; i < n; ++i) {
      err = std::max({err, std::abs(x[e * 3 * n + i] - sol.flux_x(e, i)),
                      std::abs(x[e * 3 * n + n + i] - sol.flux_y(e, i)),
                      std::abs(x[e * 3 * n + 2 * n + i] - sol.primal(e, i))});
    }
  }
  for (std::size_t edge = 0; edge < d.mesh->edges.size(); ++edge)
    for (int l = 0; l < m; ++l)
      err = std::max(err, std::abs(x[ne * 3 * n + static_cast<int>(edge) * m + l] - sol.trace(edge, l)));
  out.difference = err / std::max(x.cwiseAbs().maxCoeff(), 1.0);
  return out;
}

// Largest |extrapolate(p_h) - p| over the points of every `stride`-th patch, where
// p is a random monomial expansion of degree k and p_h its L2 projection on the
// patch element.  Sums are taken in long double.
inline double patch_extrapolation_defect(const ComputationalMesh& mesh, const std::vector<ExtensionPatch>& patches,
                                         int k, std::mt19937& rng, std::size_t stride = 7) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto exps = reference_basis(k).exponents();
  double worst = 0.0;
  for (std::size_t pi = 0; pi < patches.size(); pi += stride) {
    const ExtensionPatch& patch = patches[pi];
    if (patch.points.empty()) continue;
    std::vector<double> c(exps.size());
    for (double& v : c) v = u(rng);
    const auto monomial = [&](const Point& x) {
      long double r = 0.0L;
      for (std::size_t i = 0; i < c.size(); ++i) {
        r += c[i] * std::pow(static_cast<long double>(x.x()), exps[i].first) *
             std::pow(static_cast<long double>(x.y()), exps[i].second);
      }
      return r;
    };
    const AffineMap map = element_map(mesh, patch.element);
    const ElementBasis eb(reference_basis(k), map);
    const Rule2D& rule = triangle_rule(2 * k);
    std::vector<long double> acc(c.size(), 0.0L);
    std::vector<double> phi(c.size());
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Point x = map.to_physical(rule.points[q]);
      eb.eval(x, phi.data());
      for (std::size_t i = 0; i < c.size(); ++i) acc[i] += rule.weights[q] * monomial(x) * phi[i];
    }
    std::vector<double> coef(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) coef[i] = static_cast<double>(acc[i]);
    for (const Point& x : patch.points) {
      worst = std::max(worst, std::abs(extrapolate(mesh, patch.element, k, coef.data(), x) -
                                       static_cast<double>(monomial(x))));
    }
  }
  return worst;
}

}  // namespace hdgshape::oracle
