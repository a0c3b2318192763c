#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hdgshape/hdg.hpp"

namespace hdgshape {

struct OptConfig {
  enum class ExitRule {
    Either,  // stop when either the dJ ratio or the J change drops below tol
    Both,    // stop only when both do
  };

  double tol = 1e-8;
  double epsilon = 1e-4;
  double m0 = 0.0;
  int max_iters = 90;
  double step0 = 1.0;  // first Armijo trial, in units of h / max |V| on the movable points
  double step_growth = 0.0;  // > 0: first trial also capped at step_growth * previous step
  double damping = 1.0;      // displacement cap factor applied when area - m0 changes sign; 1 = off
  double smoothing = 0.0;    // hat-kernel half width along movable loops, in units of h; 0 = off
  double beta = 0.5;
  double c1 = 1e-4;
  int max_backtracks = 30;
  bool update_multiplier = true;  // false: xi stays at 0 (pure J descent)
  ExitRule exit_rule = ExitRule::Either;

  void validate() const;
};

/// Point of a quadrature rule on Gamma, attached to the element whose
/// extension patch contains it.
struct GammaPoint {
  Point x{0.0, 0.0};
  Point normal{0.0, 0.0};
  double weight = 0.0;
  int element = -1;
};

/// Quadrature over Gamma assembled from the arcs Gamma_e of the boundary edges;
/// each circle arc or polyline piece gets `points` Gauss nodes.
std::vector<GammaPoint> gamma_quadrature(const Discretization& disc, bool movable_only, int points);

/// int_Omega f over D_h plus the extension patches; f receives the element whose
/// polynomial should be used at x.
double integrate_over_omega(const Discretization& disc, const std::function<double(int, const Point&)>& f,
                            int degree);

/// 1/2 int_Omega (y_h - target)^2 with y_h extrapolated on the patches.
double evaluate_J(const Discretization& disc, const ScalarHdgSolution& y, const ProblemData& data);

/// G_h at a point of Gamma from the polynomials of element e.
double shape_gradient_at(const ScalarHdgSolution& y, const ScalarHdgSolution& z, const ProblemData& data, int e,
                         const Point& x, const Point& n);

/// G_h at xbar of every transfer node (zero on fixed edges).
std::vector<std::vector<double>> evaluate_shape_gradient(const Discretization& disc, const ScalarHdgSolution& y,
                                                         const ScalarHdgSolution& z, const ProblemData& data);

/// chi = -(1 / |Gamma_N|) int_{Gamma_N} G over the movable part of Gamma.
double evaluate_chi(const Discretization& disc, const ScalarHdgSolution& y, const ScalarHdgSolution& z,
                    const ProblemData& data);

/// xi_{k+1} = (xi_k + chi) / 2 + epsilon (area - m0)
double update_multiplier(double xi, double chi, double area, double m0, double epsilon);

/// Neumann datum G~ n at each node of the movable edges, G~ = G + xi.
std::vector<std::vector<Point>> deformation_datum(const Discretization& disc, const std::vector<std::vector<double>>& G,
                                                  double xi);

/// <datum, V_hat> over the movable edges of Gamma_h.
double evaluate_deltaJ(const Discretization& disc, const std::vector<std::vector<Point>>& datum,
                       const TensorHdgSolution& V);

/// V_h at x from the element nearest to x.
Point velocity_at(const Discretization& disc, const TensorHdgSolution& V, const Point& x);

/// Velocities at the vertices of every movable polyline (empty for other loops).
std::vector<std::vector<Point>> sample_movable(const DomainShape& shape, const std::function<Point(const Point&)>& v);

/// Arc-length weighted hat-kernel average of vertex velocities along each closed
/// movable polyline.  Constant fields are preserved; width <= 0 is the identity.
std::vector<std::vector<Point>> smooth_velocity(const DomainShape& shape, const std::vector<std::vector<Point>>& velocity,
                                                double width);

/// Moves every vertex of the movable polylines by tau * velocity; fixed loops are
/// copied unchanged.  Throws GeometryError if the result is not a valid shape.
DomainShape deform_shape(const DomainShape& shape, const std::vector<std::vector<Point>>& velocity, double tau);
DomainShape deform_shape(const DomainShape& shape, const std::function<Point(const Point&)>& v, double tau);

struct LineSearchResult {
  bool accepted = false;
  double tau = 0.0;
  double value = 0.0;  // objective at the accepted step
  int backtracks = 0;
};

/// Backtracking from tau0 by beta until f(tau) <= f0 + c1 tau slope.  `trial`
/// returns nullopt for an inadmissible step, which counts as a rejection.
/// Throws ConfigError unless slope < 0 and tau0 > 0.
LineSearchResult armijo_line_search(double f0, double slope, double tau0,
                                    const std::function<std::optional<double>(double)>& trial, const OptConfig& cfg);

struct ShapeIterState {
  int iteration = 0;
  DomainShape shape;
  double xi = 0.0;
  double chi = 0.0;
  double J = 0.0;
  double Jt = 0.0;      // J + xi (area - m0)
  double dJt = 0.0;     // directional derivative along the computed V
  double tau = 0.0;     // step that produced this shape (0 at iteration 0)
  int backtracks = 0;
  double area = 0.0;
  int elements = 0;
  double R = 0.0;
  double max_segment = 0.0;
  double energy_residual = 0.0;  // relative defect of the discrete energy identity
  bool descent_ok = true;        // dJt <= 1e-10 |Jt|
  bool armijo_ok = true;         // sufficient decrease of the step into this shape
};

enum class Termination { Converged, MaxIterations, LineSearchFailed };
std::string to_string(Termination t);

struct OptimizationProblem {
  ProblemData data;
  DomainShape initial;
  std::shared_ptr<const BackgroundMesh> background;
  HdgConfig hdg;
  OptConfig opt;
};

struct OptimizationResult {
  std::vector<ShapeIterState> history;
  Termination reason = Termination::MaxIterations;
  std::string message;
};

/// Called once per recorded iterate with the discretization and state used for it.
using IterationObserver =
    std::function<void(const ShapeIterState&, const Discretization&, const ScalarHdgSolution&)>;

/// Gradient descent with the multiplier update for the area constraint.  Only
/// the state is re-solved for line-search trials.  Solver and geometry failures
/// are rethrown with the iteration index prepended.
OptimizationResult run_optimization(const OptimizationProblem& problem, const IterationObserver& observer = {});

}  // namespace hdgshape
