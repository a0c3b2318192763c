#include <cmath>
#include <string>

#include "hdgshape/errors.hpp"
#include "hdgshape/hdg.hpp"
#include "tables.hpp"

namespace hdgshape {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

}  // namespace

CondensedSystem::CondensedSystem(const Discretization& disc, ScalarField a, const HdgConfig& cfg,
                                 std::vector<EdgeCondition> conditions)
    : disc_(&disc), a_(std::move(a)), cfg_(cfg), conditions_(std::move(conditions)) {
  cfg_.validate();
  const ComputationalMesh& mesh = *disc.mesh;
  const TransferMap& tm = disc.transfer;
  if (conditions_.size() != tm.edges.size())
    throw ConfigError("one boundary condition per boundary edge is required");
  if (tm.q < cfg_.k + 1) throw ConfigError("transfer map has too few nodes per edge for degree k");

  const int n = dim_pk(cfg_.k);
  const int m = cfg_.k + 1;
  const std::size_t ne = mesh.elements.size();
  elements_.resize(ne);
  path_Y_.assign(tm.edges.size(), Eigen::MatrixXd());

  // Row blocks of each element: for local edge l, m x 3m against its own traces,
  // plus the diagonal coefficient (-tau or +1 times the edge mass).
  std::vector<Eigen::MatrixXd> rows(ne);
  std::vector<std::array<double, 3>> diag(ne);

  parallel_for(ne, assembly_threads(cfg_), [&](std::size_t begin, std::size_t end) {
    for (std::size_t e = begin; e < end; ++e) {
      const int ei = static_cast<int>(e);
      const LocalBlocks lb = assemble_local(mesh, ei, a_, ScalarField(), cfg_);
      const Eigen::PartialPivLU<Eigen::MatrixXd> lu(lb.A);
      ElementData& d = elements_[e];
      d.X = lu.solve(lb.B);
      Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(3 * n, n);
      rhs.bottomRows(n).setIdentity();
      d.Y = lu.solve(rhs);
      if (!d.X.allFinite() || !d.Y.allFinite())
        throw SolverError("singular local system on element " + std::to_string(ei));
      d.W.resize(3 * m, n);
      Eigen::MatrixXd& R = rows[e];
      R.resize(3 * m, 3 * m);
      for (int l = 0; l < 3; ++l) {
        const int edge = mesh.elements[e].edges[static_cast<std::size_t>(l)];
        const int slot = tm.slot_of_edge[static_cast<std::size_t>(edge)];
        const bool dir = slot >= 0 && conditions_[static_cast<std::size_t>(slot)] == EdgeCondition::Dirichlet;
        const double mass = lb.edge_mass[static_cast<std::size_t>(l)];
        d.W.middleRows(l * m, m) = lb.C[static_cast<std::size_t>(l)] * d.Y;
        if (dir) {
          const Eigen::MatrixXd P = path_functional(slot);
          R.middleRows(l * m, m) = -P * d.X.topRows(2 * n);
          path_Y_[static_cast<std::size_t>(slot)] = P * d.Y.topRows(2 * n);
          diag[e][static_cast<std::size_t>(l)] = mass;
        } else {
          R.middleRows(l * m, m) = lb.C[static_cast<std::size_t>(l)] * d.X;
          diag[e][static_cast<std::size_t>(l)] = -cfg_.tau * mass;
        }
      }
    }
  });

  const auto N = static_cast<Eigen::Index>(mesh.edges.size()) * m;
  Triplets trip;
  trip.reserve(ne * static_cast<std::size_t>(9 * m * m + 3 * m));
  for (std::size_t e = 0; e < ne; ++e) {
    const auto& eds = mesh.elements[e].edges;
    for (int l = 0; l < 3; ++l) {
      const int r0 = eds[static_cast<std::size_t>(l)] * m;
      for (int c = 0; c < 3; ++c) {
        const int c0 = eds[static_cast<std::size_t>(c)] * m;
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) trip.emplace_back(r0 + i, c0 + j, rows[e](l * m + i, c * m + j));
      }
      for (int i = 0; i < m; ++i) trip.emplace_back(r0 + i, r0 + i, diag[e][static_cast<std::size_t>(l)]);
    }
  }
  K_.resize(N, N);
  K_.setFromTriplets(trip.begin(), trip.end());
  K_.makeCompressed();
  lu_.analyzePattern(K_);
  lu_.factorize(K_);
  if (lu_.info() != Eigen::Success) throw SolverError("trace system factorization failed: " + lu_.lastErrorMessage());
}

Eigen::MatrixXd CondensedSystem::path_functional(int slot) const {
  const ComputationalMesh& mesh = *disc_->mesh;
  const EdgeTransfer& et = disc_->transfer.edges[static_cast<std::size_t>(slot)];
  const int k = cfg_.k;
  const int n = dim_pk(k);
  const int m = k + 1;
  const ElementBasis basis(reference_basis(k), element_map(mesh, et.element));
  const Rule1D path = gauss_legendre_unit(cfg_.path_order());
  const double half = 0.5 * mesh.edges[static_cast<std::size_t>(et.edge)].length;

  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(m, 2 * n);
  std::vector<double> mu(static_cast<std::size_t>(m)), phi(static_cast<std::size_t>(n));
  Eigen::VectorXd acc(n);
  for (std::size_t r = 0; r < et.nodes.size(); ++r) {
    const TransferNode& node = et.nodes[r];
    if (node.length <= 0.0) continue;
    acc.setZero();
    for (std::size_t p = 0; p < path.points.size(); ++p) {
      const Point y = node.x + node.length * path.points[p] * node.t;
      basis.eval(y, phi.data());
      const double c = path.weights[p] / a_(y);
      for (int j = 0; j < n; ++j) acc[j] += c * phi[static_cast<std::size_t>(j)];
    }
    acc *= node.length;
    legendre_basis(k, et.s[r], mu.data());
    const double wr = et.weights[r] * half;
    for (int l = 0; l < m; ++l) {
      const double v = wr * mu[static_cast<std::size_t>(l)];
      P.block(l, 0, 1, n) += (v * node.t.x()) * acc.transpose();
      P.block(l, n, 1, n) += (v * node.t.y()) * acc.transpose();
    }
  }
  return P;
}

Eigen::VectorXd CondensedSystem::element_load(int e, const std::function<double(int, const Point&)>& volume) const {
  const int k = cfg_.k;
  const int n = dim_pk(k);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  if (!volume) return b;
  const detail::VolumeTable& vt = detail::volume_table(k, cfg_.volume_order());
  const AffineMap map = element_map(*disc_->mesh, e);
  for (std::size_t q = 0; q < vt.nq; ++q) {
    const Point x = map.to_physical(vt.rule->points[q]);
    const double fw = vt.rule->weights[q] * map.det * volume(e, x);
    for (int i = 0; i < n; ++i) b[i] += fw * vt.phi[static_cast<std::size_t>(i) * vt.nq + q];
  }
  return b;
}

Eigen::VectorXd CondensedSystem::rhs(const ScalarLoads& loads) const {
  const ComputationalMesh& mesh = *disc_->mesh;
  const TransferMap& tm = disc_->transfer;
  const int k = cfg_.k;
  const int m = k + 1;
  Eigen::VectorXd F = Eigen::VectorXd::Zero(K_.rows());

  if (loads.volume) {
    std::vector<Eigen::VectorXd> bs(mesh.elements.size());
    parallel_for(bs.size(), assembly_threads(cfg_), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) bs[i] = element_load(static_cast<int>(i), loads.volume);
    });
    for (std::size_t e = 0; e < bs.size(); ++e) {
      const Eigen::VectorXd Wb = elements_[e].W * bs[e];
      for (int l = 0; l < 3; ++l) {
        const int edge = mesh.elements[e].edges[static_cast<std::size_t>(l)];
        const int slot = tm.slot_of_edge[static_cast<std::size_t>(edge)];
        if (slot >= 0 && conditions_[static_cast<std::size_t>(slot)] == EdgeCondition::Dirichlet) {
          F.segment(edge * m, m) += path_Y_[static_cast<std::size_t>(slot)] * bs[e];
        } else {
          F.segment(edge * m, m) -= Wb.segment(l * m, m);
        }
      }
    }
  }

  std::vector<double> mu(static_cast<std::size_t>(m));
  for (std::size_t s = 0; s < tm.edges.size(); ++s) {
    const EdgeTransfer& et = tm.edges[s];
    const bool dir = conditions_[s] == EdgeCondition::Dirichlet;
    const auto& data = dir ? loads.dirichlet : loads.neumann;
    if (data.empty()) continue;
    if (data.size() != tm.edges.size() || data[s].size() != et.nodes.size())
      throw ConfigError("boundary data does not match the transfer nodes");
    const double half = 0.5 * mesh.edges[static_cast<std::size_t>(et.edge)].length;
    for (std::size_t r = 0; r < et.nodes.size(); ++r) {
      legendre_basis(k, et.s[r], mu.data());
      const double v = et.weights[r] * half * data[s][r];
      for (int l = 0; l < m; ++l) F[et.edge * m + l] += v * mu[static_cast<std::size_t>(l)];
    }
  }
  return F;
}

ScalarHdgSolution CondensedSystem::solve(const ScalarLoads& loads) const {
  const ComputationalMesh& mesh = *disc_->mesh;
  const int k = cfg_.k;
  const int n = dim_pk(k);
  const int m = k + 1;

  const Eigen::VectorXd F = rhs(loads);
  Eigen::VectorXd x = lu_.solve(F);
  if (lu_.info() != Eigen::Success) throw SolverError("trace system solve failed");
  const double fnorm = std::max(F.norm(), 1e-300);
  for (int it = 0; it < 3; ++it) {
    const Eigen::VectorXd r = F - K_ * x;
    if (r.norm() <= cfg_.solver_tolerance * fnorm) break;
    x += lu_.solve(r);
  }
  if (!x.allFinite()) throw SolverError("trace system produced non-finite values");

  ScalarHdgSolution sol;
  sol.k = k;
  sol.mesh = disc_->mesh;
  const auto ne = static_cast<Eigen::Index>(mesh.elements.size());
  sol.flux_x.resize(ne, n);
  sol.flux_y.resize(ne, n);
  sol.primal.resize(ne, n);
  sol.trace = Eigen::Map<const RowMatrix>(x.data(), static_cast<Eigen::Index>(mesh.edges.size()), m);

  parallel_for(mesh.elements.size(), assembly_threads(cfg_), [&](std::size_t b, std::size_t end) {
    Eigen::VectorXd lam(3 * m);
    for (std::size_t e = b; e < end; ++e) {
      for (int l = 0; l < 3; ++l) lam.segment(l * m, m) = x.segment(mesh.elements[e].edges[static_cast<std::size_t>(l)] * m, m);
      Eigen::VectorXd local = elements_[e].X * lam;
      if (loads.volume) local += elements_[e].Y * element_load(static_cast<int>(e), loads.volume);
      const auto ei = static_cast<Eigen::Index>(e);
      sol.flux_x.row(ei) = local.segment(0, n).transpose();
      sol.flux_y.row(ei) = local.segment(n, n).transpose();
      sol.primal.row(ei) = local.segment(2 * n, n).transpose();
    }
  });
  return sol;
}

}  // namespace hdgshape
