#include "hdgshape/errors.hpp"
#include "hdgshape/hdg.hpp"

namespace hdgshape {

double ScalarHdgSolution::primal_at(int e, const Point& x) const {
  return extrapolate(*mesh, e, k, primal.row(e).data(), x);
}

Point ScalarHdgSolution::flux_at(int e, const Point& x) const {
  const ElementBasis basis(reference_basis(k), element_map(*mesh, e));
  return {basis.evaluate(flux_x.row(e).data(), x), basis.evaluate(flux_y.row(e).data(), x)};
}

double ScalarHdgSolution::trace_at(int edge, double s) const {
  double mu[64];
  legendre_basis(k, s, mu);
  double v = 0.0;
  for (int l = 0; l <= k; ++l) v += trace(edge, l) * mu[l];
  return v;
}

Eigen::Matrix2d TensorHdgSolution::sigma_at(int e, const Point& x) const {
  const Point r0 = comp[0].flux_at(e, x);
  const Point r1 = comp[1].flux_at(e, x);
  Eigen::Matrix2d s;
  s << r0.x(), r0.y(), r1.x(), r1.y();
  return s;
}

Discretization make_discretization(std::shared_ptr<const BackgroundMesh> background, const DomainShape& shape,
                                   const HdgConfig& cfg) {
  cfg.validate();
  Discretization d;
  d.mesh = std::make_shared<const ComputationalMesh>(classify_elements(std::move(background), shape));
  d.shape = shape;
  d.transfer = build_transfer_map(*d.mesh, shape, cfg.edge_order());
  d.patches = build_extension_patches(d.transfer, *d.mesh, shape, cfg.volume_order());
  return d;
}

std::vector<std::vector<double>> sample_on_gamma(const TransferMap& tm, const ScalarField& g) {
  std::vector<std::vector<double>> out(tm.edges.size());
  for (std::size_t s = 0; s < tm.edges.size(); ++s) {
    out[s].reserve(tm.edges[s].nodes.size());
    for (const TransferNode& node : tm.edges[s].nodes) out[s].push_back(g(node.xbar));
  }
  return out;
}

DiffusionSolver::DiffusionSolver(const Discretization& disc, ProblemData data, const HdgConfig& cfg)
    : disc_(&disc),
      data_(std::move(data)),
      cfg_(cfg),
      system_(disc, data_.a, cfg, std::vector<EdgeCondition>(disc.transfer.edges.size(), EdgeCondition::Dirichlet)) {}

ScalarHdgSolution DiffusionSolver::state() const {
  ScalarLoads loads;
  const ScalarField f = data_.f;
  loads.volume = [f](int, const Point& x) { return f(x); };
  loads.dirichlet = sample_on_gamma(disc_->transfer, data_.g);
  return system_.solve(loads);
}

ScalarHdgSolution DiffusionSolver::adjoint(const ScalarHdgSolution& state) const {
  ScalarLoads loads;
  const ScalarField target = data_.target;
  loads.volume = [&state, target](int e, const Point& x) { return state.primal_at(e, x) - target(x); };
  if (data_.adjoint_dirichlet) loads.dirichlet = sample_on_gamma(disc_->transfer, data_.adjoint_dirichlet);
  return system_.solve(loads);
}

ScalarHdgSolution solve_state(const Discretization& disc, const ProblemData& data, const HdgConfig& cfg) {
  return DiffusionSolver(disc, data, cfg).state();
}

ScalarHdgSolution solve_adjoint(const Discretization& disc, const ProblemData& data, const HdgConfig& cfg,
                                const ScalarHdgSolution& state) {
  return DiffusionSolver(disc, data, cfg).adjoint(state);
}

TensorHdgSolution solve_deformation(const Discretization& disc, const std::vector<std::vector<Point>>& neumann,
                                    const HdgConfig& cfg, const VectorField& dirichlet, const VectorField& source) {
  const TransferMap& tm = disc.transfer;
  std::vector<EdgeCondition> cond(tm.edges.size());
  bool any_dirichlet = false;
  for (std::size_t s = 0; s < tm.edges.size(); ++s) {
    cond[s] = tm.edges[s].dirichlet ? EdgeCondition::Dirichlet : EdgeCondition::Neumann;
    any_dirichlet = any_dirichlet || tm.edges[s].dirichlet;
  }
  if (!any_dirichlet) throw SolverError("deformation problem needs at least one fixed boundary edge");
  if (neumann.size() != tm.edges.size()) throw ConfigError("Neumann datum must be given per boundary edge");

  const CondensedSystem system(disc, [](const Point&) { return 1.0; }, cfg, cond);
  TensorHdgSolution out;
  for (int i = 0; i < 2; ++i) {
    ScalarLoads loads;
    loads.neumann.resize(tm.edges.size());
    for (std::size_t s = 0; s < tm.edges.size(); ++s) {
      if (cond[s] != EdgeCondition::Neumann) continue;
      if (neumann[s].size() != tm.edges[s].nodes.size())
        throw ConfigError("Neumann datum does not match the transfer nodes");
      for (const Point& v : neumann[s]) loads.neumann[s].push_back(v[i]);
    }
    if (dirichlet) loads.dirichlet = sample_on_gamma(tm, [&](const Point& x) { return dirichlet(x)[i]; });
    if (source) loads.volume = [&source, i](int, const Point& x) { return source(x)[i]; };
    out.comp[static_cast<std::size_t>(i)] = system.solve(loads);
  }
  return out;
}

}  // namespace hdgshape
