#include <map>
#include <memory>
#include <mutex>

#include "hdgshape/errors.hpp"
#include "hdgshape/hdg.hpp"
#include "hdgshape/kernels.hpp"
#include "tables.hpp"

namespace hdgshape {

namespace detail {

const VolumeTable& volume_table(int k, int degree) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<VolumeTable>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{k, degree}];
  if (!slot) {
    auto t = std::make_unique<VolumeTable>();
    const ReferenceBasis& ref = reference_basis(k);
    t->rule = &triangle_rule(degree);
    t->n = ref.size();
    t->nq = t->rule->points.size();
    const std::size_t n = static_cast<std::size_t>(t->n);
    t->phi.resize(n * t->nq);
    t->dxi.resize(n * t->nq);
    t->deta.resize(n * t->nq);
    std::vector<double> v(n), gx(n), gy(n);
    for (std::size_t q = 0; q < t->nq; ++q) {
      ref.eval_grad(t->rule->points[q], v.data(), gx.data(), gy.data());
      for (std::size_t i = 0; i < n; ++i) {
        t->phi[i * t->nq + q] = v[i];
        t->dxi[i * t->nq + q] = gx[i];
        t->deta[i * t->nq + q] = gy[i];
      }
    }
    slot = std::move(t);
  }
  return *slot;
}

}  // namespace detail

void HdgConfig::validate() const {
  if (k < 1) throw ConfigError("polynomial degree k must be >= 1");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("stabilization tau must be positive");
  if (volume_order() < 2 * k) throw ConfigError("volume quadrature degree must be >= 2k");
  if (edge_order() < k + 1) throw ConfigError("edge quadrature needs at least k + 1 points");
  if (path_order() < 1) throw ConfigError("path quadrature needs at least one point");
  if (!(solver_tolerance > 0.0)) throw ConfigError("solver tolerance must be positive");
}

LocalBlocks assemble_local(const ComputationalMesh& mesh, int e, const ScalarField& a, const ScalarField& f,
                           const HdgConfig& cfg) {
  const int k = cfg.k;
  const detail::VolumeTable& vt = detail::volume_table(k, cfg.volume_order());
  const int n = vt.n;
  const int m = k + 1;
  const std::size_t nq = vt.nq;
  const AffineMap map = element_map(mesh, e);
  const ElementBasis basis(reference_basis(k), map);
  const Eigen::Matrix2d& J = map.Binv;

  std::vector<double> w(nq), wa(nq), dx(static_cast<std::size_t>(n) * nq), dy(dx.size());
  for (std::size_t q = 0; q < nq; ++q) {
    const Point x = map.to_physical(vt.rule->points[q]);
    w[q] = vt.rule->weights[q] * map.det;
    wa[q] = w[q] / a(x);
  }
  for (std::size_t i = 0; i < dx.size(); ++i) {
    dx[i] = J(0, 0) * vt.dxi[i] + J(1, 0) * vt.deta[i];
    dy[i] = J(0, 1) * vt.dxi[i] + J(1, 1) * vt.deta[i];
  }

  RowMatrix Ma = RowMatrix::Zero(n, n), Dx = RowMatrix::Zero(n, n), Dy = RowMatrix::Zero(n, n);
  const auto nn = static_cast<std::size_t>(n);
  kernels::weighted_gram(vt.phi.data(), nn, vt.phi.data(), nn, wa.data(), nq, Ma.data());
  // D_c(i, j) = (d_c phi_i, phi_j)
  kernels::weighted_gram(dx.data(), nn, vt.phi.data(), nn, w.data(), nq, Dx.data());
  kernels::weighted_gram(dy.data(), nn, vt.phi.data(), nn, w.data(), nq, Dy.data());

  LocalBlocks lb;
  lb.load = Eigen::VectorXd::Zero(n);
  if (f) {
    for (std::size_t q = 0; q < nq; ++q) {
      const double fw = w[q] * f(map.to_physical(vt.rule->points[q]));
      for (int i = 0; i < n; ++i) lb.load[i] += fw * vt.phi[static_cast<std::size_t>(i) * nq + q];
    }
  }

  Eigen::MatrixXd Ex = Eigen::MatrixXd::Zero(n, 3 * m), Ey = Ex, F = Ex;
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
  const Rule1D& gl = gauss_legendre(cfg.edge_order());
  std::vector<double> phi(nn), mu(static_cast<std::size_t>(m));
  for (int l = 0; l < 3; ++l) {
    const int edge = mesh.elements[static_cast<std::size_t>(e)].edges[static_cast<std::size_t>(l)];
    const MeshEdge& me = mesh.edges[static_cast<std::size_t>(edge)];
    const Point nrm = mesh.normal_from(edge, e);
    const double half = 0.5 * me.length;
    lb.edge_mass[static_cast<std::size_t>(l)] = half;
    for (std::size_t r = 0; r < gl.points.size(); ++r) {
      const double s = gl.points[r];
      const double wr = gl.weights[r] * half;
      basis.eval(mesh.edge_point(edge, s), phi.data());
      legendre_basis(k, s, mu.data());
      for (int j = 0; j < n; ++j) {
        const double pj = wr * phi[static_cast<std::size_t>(j)];
        for (int i = 0; i < n; ++i) S(i, j) += pj * phi[static_cast<std::size_t>(i)];
        for (int b = 0; b < m; ++b) {
          const double v = pj * mu[static_cast<std::size_t>(b)];
          Ex(j, l * m + b) += v * nrm.x();
          Ey(j, l * m + b) += v * nrm.y();
          F(j, l * m + b) += v;
        }
      }
    }
  }

  const double tau = cfg.tau;
  lb.A = Eigen::MatrixXd::Zero(3 * n, 3 * n);
  lb.A.block(0, 0, n, n) = Ma;
  lb.A.block(n, n, n, n) = Ma;
  lb.A.block(0, 2 * n, n, n) = -Dx;
  lb.A.block(n, 2 * n, n, n) = -Dy;
  lb.A.block(2 * n, 0, n, n) = Dx.transpose();
  lb.A.block(2 * n, n, n, n) = Dy.transpose();
  lb.A.block(2 * n, 2 * n, n, n) = tau * S;

  lb.B.resize(3 * n, 3 * m);
  lb.B << -Ex, -Ey, tau * F;

  for (int l = 0; l < 3; ++l) {
    auto& C = lb.C[static_cast<std::size_t>(l)];
    C.resize(m, 3 * n);
    C << Ex.middleCols(l * m, m).transpose(), Ey.middleCols(l * m, m).transpose(),
        tau * F.middleCols(l * m, m).transpose();
  }
  return lb;
}

}  // namespace hdgshape
