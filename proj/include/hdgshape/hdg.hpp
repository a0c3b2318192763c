#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "hdgshape/basis.hpp"
#include "hdgshape/computational_mesh.hpp"
#include "hdgshape/domain_shape.hpp"
#include "hdgshape/transfer.hpp"

namespace hdgshape {

using ScalarField = std::function<double(const Point&)>;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using VectorField = std::function<Point(const Point&)>;

struct HdgConfig {
  int k = 1;
  double tau = 1.0;
  int volume_degree = -1;  // triangle rule degree, default 2k + 2
  int edge_points = -1;    // Gauss points per edge, default k + 2
  int path_points = -1;    // Gauss points per transfer path, default k + 2
  double solver_tolerance = 1e-12;
  int threads = 0;  // 0: hardware concurrency capped by HDG_SHAPEOPT_THREADS

  int volume_order() const { return volume_degree > 0 ? volume_degree : 2 * k + 2; }
  int edge_order() const { return edge_points > 0 ? edge_points : k + 2; }
  int path_order() const { return path_points > 0 ? path_points : k + 2; }
  /// Throws ConfigError unless k >= 1, tau > 0 and the quadrature is rich enough.
  void validate() const;
};

struct ProblemData {
  ScalarField a = [](const Point&) { return 1.0; };
  ScalarField f = [](const Point&) { return 0.0; };
  ScalarField g = [](const Point&) { return 0.0; };
  VectorField grad_g = [](const Point&) { return Point(0.0, 0.0); };
  ScalarField target = [](const Point&) { return 0.0; };
  ScalarField adjoint_dirichlet;  // empty: homogeneous
  double a_min = 1.0;
  double a_max = 1.0;
};

/// Everything geometric a solve needs: D_h, its transfer paths and extension patches.
struct Discretization {
  std::shared_ptr<const ComputationalMesh> mesh;
  DomainShape shape;
  TransferMap transfer;
  std::vector<ExtensionPatch> patches;
};

/// Extracts D_h, builds paths with cfg.edge_order() nodes per edge and patches
/// exact to cfg.volume_order().
Discretization make_discretization(std::shared_ptr<const BackgroundMesh> background, const DomainShape& shape,
                                   const HdgConfig& cfg);

/// (flux, primal, trace) coefficients.  Flux and primal rows are per element,
/// trace rows per mesh edge (Legendre coefficients in the canonical edge direction).
struct ScalarHdgSolution {
  int k = 1;
  std::shared_ptr<const ComputationalMesh> mesh;
  RowMatrix flux_x;  // elements x dim P_k
  RowMatrix flux_y;
  RowMatrix primal;
  RowMatrix trace;   // edges x (k + 1)

  /// Values of the element polynomials of element e at x (x may lie outside e).
  double primal_at(int e, const Point& x) const;
  Point flux_at(int e, const Point& x) const;
  double trace_at(int edge, double s) const;
};

/// sigma row i and V component i live in comp[i].
struct TensorHdgSolution {
  std::array<ScalarHdgSolution, 2> comp;

  Point V_at(int e, const Point& x) const { return {comp[0].primal_at(e, x), comp[1].primal_at(e, x)}; }
  Eigen::Matrix2d sigma_at(int e, const Point& x) const;
};

/// Element matrices for one element.  Unknown order is (q_x, q_y, u), each
/// dim P_k long; trace unknowns are the three local edges in order, k + 1 each.
struct LocalBlocks {
  Eigen::MatrixXd A;     // 3n x 3n
  Eigen::MatrixXd B;     // 3n x 3m, local equations' dependence on the traces
  std::array<Eigen::MatrixXd, 3> C;  // m x 3n, flux + stabilization on local edge l
  std::array<double, 3> edge_mass{};  // <mu_i, mu_j>_e = edge_mass * delta_ij
  Eigen::VectorXd load;  // (w, phi_i) for the volume source, n long
};

LocalBlocks assemble_local(const ComputationalMesh& mesh, int e, const ScalarField& a, const ScalarField& f,
                           const HdgConfig& cfg);

enum class EdgeCondition { Dirichlet, Neumann };

struct ScalarLoads {
  std::function<double(int, const Point&)> volume;  // element-aware source, may be empty
  std::vector<std::vector<double>> dirichlet;       // per transfer slot: values at xbar of each node
  std::vector<std::vector<double>> neumann;         // per transfer slot: flux datum at each node
};

/// Statically condensed trace system of one scalar diffusion operator.  Rows
/// on Dirichlet boundary edges carry the transfer-path integral of the
/// extrapolated flux, so the transferred condition is solved monolithically.
class CondensedSystem {
 public:
  CondensedSystem(const Discretization& disc, ScalarField a, const HdgConfig& cfg,
                  std::vector<EdgeCondition> conditions);

  ScalarHdgSolution solve(const ScalarLoads& loads) const;

  Eigen::VectorXd rhs(const ScalarLoads& loads) const;
  const Eigen::SparseMatrix<double>& matrix() const { return K_; }
  std::size_t num_unknowns() const { return static_cast<std::size_t>(K_.rows()); }
  const std::vector<EdgeCondition>& conditions() const { return conditions_; }

 private:
  struct ElementData {
    Eigen::MatrixXd X;  // A^{-1} B
    Eigen::MatrixXd Y;  // A^{-1} [0; 0; I]
    Eigen::MatrixXd W;  // stacked C_l Y, 3m x n
  };

  Eigen::VectorXd element_load(int e, const std::function<double(int, const Point&)>& volume) const;
  // P_l: path integral functional, m x 2n, for a Dirichlet slot.
  Eigen::MatrixXd path_functional(int slot) const;

  const Discretization* disc_;
  ScalarField a_;
  HdgConfig cfg_;
  std::vector<EdgeCondition> conditions_;
  std::vector<ElementData> elements_;
  std::vector<Eigen::MatrixXd> path_Y_;  // per slot, P_l Y_q (Dirichlet slots only)
  Eigen::SparseMatrix<double> K_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
};

/// Values of a scalar field at the mapped points xbar of every transfer node.
std::vector<std::vector<double>> sample_on_gamma(const TransferMap& tm, const ScalarField& g);

/// State and adjoint share one factorization.
class DiffusionSolver {
 public:
  DiffusionSolver(const Discretization& disc, ProblemData data, const HdgConfig& cfg);

  ScalarHdgSolution state() const;
  ScalarHdgSolution adjoint(const ScalarHdgSolution& state) const;
  const CondensedSystem& system() const { return system_; }

 private:
  const Discretization* disc_;
  ProblemData data_;
  HdgConfig cfg_;
  CondensedSystem system_;
};

ScalarHdgSolution solve_state(const Discretization& disc, const ProblemData& data, const HdgConfig& cfg);
ScalarHdgSolution solve_adjoint(const Discretization& disc, const ProblemData& data, const HdgConfig& cfg,
                                const ScalarHdgSolution& state);

/// Deformation field: Neumann datum sigma n at each node of the movable edges
/// (indexed by transfer slot; ignored on Dirichlet slots), optional Dirichlet
/// datum V(xbar) on fixed edges (default 0) and optional volume source.
TensorHdgSolution solve_deformation(const Discretization& disc, const std::vector<std::vector<Point>>& neumann,
                                    const HdgConfig& cfg, const VectorField& dirichlet = {},
                                    const VectorField& source = {});

struct ErrorNorms {
  double primal = 0.0;  // L2 over Omega (D_h plus patches)
  double flux = 0.0;
  double trace = 0.0;   // (sum_K h_K ||P_M u - u_hat||^2_{dK})^{1/2}
};

ErrorNorms compute_error_norms(const Discretization& disc, const ScalarHdgSolution& sol, const ScalarField& u,
                               const VectorField& q);

/// Max over interior edges and Legendre modes of |sum_K <q_hat . n, mu>_e|, and
/// the largest single-side contribution as a scale.
struct FluxJump {
  double max_jump = 0.0;
  double scale = 0.0;
};
FluxJump flux_jump_residual(const Discretization& disc, const ScalarHdgSolution& sol, const HdgConfig& cfg);

/// Terms of the discrete energy identity of the deformation scheme:
/// sigma + jump + dirichlet = -neumann.
struct DeformationEnergy {
  double sigma = 0.0;      // ||sigma_h||^2 over D_h
  double jump = 0.0;       // ||tau^{1/2}(V_h - V_hat)||^2 over all element boundaries
  double dirichlet = 0.0;  // <sigma_hat n, g_h^D> on Dirichlet edges
  double neumann = 0.0;    // <datum, V_hat> on Neumann edges
};
DeformationEnergy deformation_energy(const Discretization& disc, const TensorHdgSolution& sol,
                                     const std::vector<std::vector<Point>>& neumann, const HdgConfig& cfg,
                                     const VectorField& dirichlet = {});

/// Worker count for element loops.
int assembly_threads(const HdgConfig& cfg);

/// Runs body(begin, end) over [0, n) on assembly_threads(cfg) threads.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace hdgshape
