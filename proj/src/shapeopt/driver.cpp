#include <cmath>
#include <memory>
#include <string>

#include "hdgshape/errors.hpp"
#include "hdgshape/shapeopt.hpp"

namespace hdgshape {

std::string to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::MaxIterations: return "max_iterations";
    case Termination::LineSearchFailed: return "line_search_failed";
  }
  return "unknown";
}

namespace {

// Discretization and state for one shape.  The solver keeps its factorization
// so the adjoint of an accepted trial costs only a back substitution.
struct Evaluation {
  DomainShape shape;
  std::unique_ptr<Discretization> disc;
  std::unique_ptr<DiffusionSolver> solver;
  ScalarHdgSolution y;
  double J = 0.0;
  double area = 0.0;
};

Evaluation evaluate(const OptimizationProblem& p, const DomainShape& shape) {
  Evaluation ev;
  ev.shape = shape;
  ev.disc = std::make_unique<Discretization>(make_discretization(p.background, shape, p.hdg));
  ev.solver = std::make_unique<DiffusionSolver>(*ev.disc, p.data, p.hdg);
  ev.y = ev.solver->state();
  ev.J = evaluate_J(*ev.disc, ev.y, p.data);
  ev.area = shape.area();
  return ev;
}

bool inside_box(const DomainShape& shape, const BoundingBox& box) {
  for (const BoundaryComponent& c : shape.components()) {
    const auto* poly = std::get_if<Polyline>(&c.curve);
    if (!poly) continue;
    for (const Point& q : poly->points)
      if (q.x() <= box.lo.x() || q.y() <= box.lo.y() || q.x() >= box.hi.x() || q.y() >= box.hi.y()) return false;
  }
  return true;
}

template <class E>
[[noreturn]] void rethrow_at(int iteration, const E& e) {
  throw E("iteration " + std::to_string(iteration) + ": " + e.what());
}

}  // namespace

OptimizationResult run_optimization(const OptimizationProblem& p, const IterationObserver& observer) {
  p.hdg.validate();
  p.opt.validate();
  if (!p.background) throw ConfigError("background mesh missing");
  p.initial.validate();

  const OptConfig& opt = p.opt;
  OptimizationResult result;
  Evaluation ev;
  double xi = 0.0, dJt0 = 0.0, prev_Jt = 0.0;
  double last_tau = 0.0, armijo_bound = 0.0;
  double max_step = opt.step0 * p.background->h;  // largest first-trial displacement
  int last_backtracks = 0;

  for (int k = 0;; ++k) {
    ShapeIterState st;
    TensorHdgSolution V;
    try {
      if (k == 0) ev = evaluate(p, p.initial);
      const Discretization& disc = *ev.disc;
      const ScalarHdgSolution z = ev.solver->adjoint(ev.y);
      const double chi = evaluate_chi(disc, ev.y, z, p.data);
      if (opt.update_multiplier) xi = k == 0 ? chi : update_multiplier(xi, chi, ev.area, opt.m0, opt.epsilon);
      const auto G = evaluate_shape_gradient(disc, ev.y, z, p.data);
      const auto datum = deformation_datum(disc, G, xi);
      V = solve_deformation(disc, datum, p.hdg);

      st.iteration = k;
      st.shape = ev.shape;
      st.xi = xi;
      st.chi = chi;
      st.J = ev.J;
      st.Jt = ev.J + xi * (ev.area - opt.m0);
      st.dJt = evaluate_deltaJ(disc, datum, V);
      st.tau = last_tau;
      st.backtracks = last_backtracks;
      st.area = ev.area;
      st.elements = static_cast<int>(disc.mesh->elements.size());
      st.R = disc.transfer.R;
      st.max_segment = ev.shape.max_segment_length();
      const DeformationEnergy en = deformation_energy(disc, V, datum, p.hdg);
      const double lhs = en.sigma + en.jump + en.dirichlet;
      st.energy_residual = std::abs(lhs + en.neumann) / std::max({std::abs(lhs), std::abs(en.neumann), 1e-300});
      st.descent_ok = st.dJt <= 1e-10 * std::abs(st.Jt);
      // The step into this shape was accepted against the previous multiplier.
      st.armijo_ok = k == 0 || ev.J + result.history.back().xi * (ev.area - opt.m0) <= armijo_bound;
    } catch (const GeometryError& e) {
      rethrow_at(k, e);
    } catch (const SolverError& e) {
      rethrow_at(k, e);
    }

    result.history.push_back(st);
    if (observer) observer(st, *ev.disc, ev.y);

    if (k == 0) dJt0 = st.dJt;
    if (k > 0) {
      const bool small_ratio = dJt0 != 0.0 && std::abs(st.dJt / dJt0) <= opt.tol;
      const bool small_change = std::abs(st.Jt - prev_Jt) <= opt.tol;
      const bool stop = opt.exit_rule == OptConfig::ExitRule::Either ? (small_ratio || small_change)
                                                                      : (small_ratio && small_change);
      if (stop) {
        result.reason = Termination::Converged;
        return result;
      }
    }
    if (k >= opt.max_iters) {
      result.reason = Termination::MaxIterations;
      return result;
    }
    prev_Jt = st.Jt;

    if (!(st.dJt < 0.0)) {
      result.reason = st.dJt == 0.0 ? Termination::Converged : Termination::LineSearchFailed;
      result.message = "no descent direction at iteration " + std::to_string(k);
      return result;
    }

    const Discretization& disc = *ev.disc;
    const auto vel = smooth_velocity(
        ev.shape, sample_movable(ev.shape, [&](const Point& x) { return velocity_at(disc, V, x); }),
        opt.smoothing * p.background->h);
    double vmax = 0.0;
    for (const auto& c : vel)
      for (const Point& v : c) vmax = std::max(vmax, v.norm());
    if (!(vmax > 0.0)) {
      result.reason = Termination::Converged;
      result.message = "zero deformation field at iteration " + std::to_string(k);
      return result;
    }

    std::optional<Evaluation> accepted;
    const double Jt0 = st.Jt;
    auto trial = [&](double tau) -> std::optional<double> {
      try {
        const DomainShape moved = deform_shape(ev.shape, vel, tau);
        if (!inside_box(moved, p.background->box)) return std::nullopt;
        Evaluation t = evaluate(p, moved);
        const double value = t.J + xi * (t.area - opt.m0);
        accepted = std::move(t);
        return value;
      } catch (const GeometryError&) {
        return std::nullopt;
      } catch (const SolverError&) {
        return std::nullopt;
      }
    };
    if (k > 0 && (ev.area - opt.m0) * (result.history[k - 1].area - opt.m0) < 0.0) max_step *= opt.damping;
    double tau0 = max_step / vmax;
    if (opt.step_growth > 0.0 && last_tau > 0.0) tau0 = std::min(tau0, opt.step_growth * last_tau);
    const LineSearchResult ls = armijo_line_search(Jt0, st.dJt, tau0, trial, opt);
    if (!ls.accepted) {
      result.reason = Termination::LineSearchFailed;
      result.message = "no step accepted after " + std::to_string(opt.max_backtracks) + " backtracks at iteration " +
                       std::to_string(k);
      return result;
    }
    armijo_bound = Jt0 + opt.c1 * ls.tau * st.dJt;
    last_tau = ls.tau;
    last_backtracks = ls.backtracks;
    ev = std::move(*accepted);
  }
}

}  // namespace hdgshape
