#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "hdgshape/errors.hpp"
#include "hdgshape/hdg.hpp"
#include "hdgshape/quadrature.hpp"
#include "oracles.hpp"

using namespace hdgshape;

namespace {

const double kPi = std::numbers::pi;

DomainShape square(double lo, double hi, bool movable = false) {
  return DomainShape({{Polyline{{{lo, lo}, {hi, lo}, {hi, hi}, {lo, hi}}}, false, movable}});
}

DomainShape annulus() {
  return DomainShape({{Circle{{0, 0}, 0.2}, false, false}, {Circle{{0, 0}, 0.05}, true, false}});
}

DomainShape disk_with_hole(bool outer_movable) {
  return DomainShape({{Circle{{0, 0}, 0.42}, false, outer_movable}, {Circle{{0.03, -0.02}, 0.12}, true, false}});
}

Discretization discretize(const BoundingBox& box, int n, const DomainShape& shape, const HdgConfig& cfg) {
  return make_discretization(std::make_shared<BackgroundMesh>(build_background_mesh(box, n, n)), shape, cfg);
}

double max_abs_diff(const RowMatrix& a, const RowMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

void check_against_monolithic(const Discretization& d, const HdgConfig& cfg, const std::vector<EdgeCondition>& cond) {
  const oracle::MonolithicComparison c = oracle::compare_with_monolithic(d, cfg, cond);
  REQUIRE(c.residual <= 1e-11);
  CHECK(c.difference <= 1e-10);
}

}  // namespace

TEST_CASE("config validation") {
  HdgConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.k = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = HdgConfig{};
  cfg.tau = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = HdgConfig{};
  cfg.edge_points = 1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = HdgConfig{};
  cfg.k = 3;
  CHECK(cfg.volume_order() == 8);
  CHECK(cfg.edge_order() == 5);
}

TEST_CASE("local blocks on the unit right triangle") {
  auto bg = std::make_shared<BackgroundMesh>(build_background_mesh(BoundingBox{{0, 0}, {1, 1}}, 1, 1));
  const ComputationalMesh mesh = make_computational_mesh(bg, {0});
  const double area = mesh.elements[0].area;
  REQUIRE(area == doctest::Approx(0.5));

  SUBCASE("k = 0, a = 1") {
    HdgConfig cfg;
    cfg.k = 0;
    const LocalBlocks lb = assemble_local(mesh, 0, [](const Point&) { return 1.0; }, {}, cfg);
    // One basis function sqrt(2): mass 2|K|, no derivative coupling.
    CHECK(lb.A(0, 0) == doctest::Approx(2 * area).epsilon(1e-14));
    CHECK(lb.A(1, 1) == doctest::Approx(2 * area).epsilon(1e-14));
    CHECK(std::abs(lb.A(0, 2)) <= 1e-14);
    // tau * (sqrt2)^2 * perimeter
    const double perim = 2.0 + std::sqrt(2.0);
    CHECK(lb.A(2, 2) == doctest::Approx(2.0 * perim).epsilon(1e-13));
  }

  SUBCASE("integration by parts and symmetry, k = 1..3") {
    for (int k = 1; k <= 3; ++k) {
      HdgConfig cfg;
      cfg.k = k;
      cfg.tau = 1.7;
      const LocalBlocks lb = assemble_local(mesh, 0, [](const Point& x) { return 2.0 + x.x(); }, {}, cfg);
      const int n = dim_pk(k);
      const Eigen::MatrixXd Ma = lb.A.block(0, 0, n, n);
      CHECK((Ma - Ma.transpose()).norm() <= 1e-13);
      CHECK(Ma.llt().info() == Eigen::Success);
      // -D_c in the q rows, D_c^T in the u rows.
      CHECK((lb.A.block(0, 2 * n, n, n) + lb.A.block(2 * n, 0, n, n).transpose()).norm() <= 1e-13);
      CHECK((lb.A.block(n, 2 * n, n, n) + lb.A.block(2 * n, n, n, n).transpose()).norm() <= 1e-13);
      // The constant test function annihilates div q: row of D^T for phi_0 times q
      // equals the boundary flux of q, i.e. sum_l C_l-rows of the constant trace mode.
      for (int l = 0; l < 3; ++l) CHECK(lb.edge_mass[l] == doctest::Approx(0.5 * mesh.edges[mesh.elements[0].edges[l]].length));
    }
  }

  SUBCASE("against direct quadrature") {
    HdgConfig cfg;
    cfg.k = 2;
    cfg.tau = 3.0;
    const ScalarField a = [](const Point& x) { return 1.0 + x.y() * x.y(); };
    const ScalarField f = [](const Point& x) { return x.x() - 2.0 * x.y(); };
    const LocalBlocks lb = assemble_local(mesh, 0, a, f, cfg);
    const int n = dim_pk(2);
    const AffineMap map = element_map(mesh, 0);
    const ElementBasis basis(reference_basis(2), map);
    const Rule2D& rule = triangle_rule(6);
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n), Dx = M;
    Eigen::VectorXd load = Eigen::VectorXd::Zero(n);
    std::vector<double> v(n), gx(n), gy(n);
    for (std::size_t p = 0; p < rule.points.size(); ++p) {
      const Point x = map.to_physical(rule.points[p]);
      const double w = rule.weights[p] * map.det;
      basis.eval_grad(x, v.data(), gx.data(), gy.data());
      for (int i = 0; i < n; ++i) {
        load[i] += w * f(x) * v[i];
        for (int j = 0; j < n; ++j) {
          M(i, j) += w * v[i] * v[j] / a(x);
          Dx(i, j) += w * gx[i] * v[j];
        }
      }
    }
    CHECK((lb.A.block(0, 0, n, n) - M).norm() <= 1e-14 * M.norm() * 10);
    CHECK((lb.A.block(0, 2 * n, n, n) + Dx).norm() <= 1e-13);
    CHECK((lb.load - load).norm() <= 1e-14);
  }
}

TEST_CASE("condensed solve matches the monolithic system") {
  SUBCASE("fitted square, Dirichlet") {
    for (int k = 1; k <= 2; ++k) {
      HdgConfig cfg;
      cfg.k = k;
      const Discretization d = discretize({{0, 0}, {1, 1}}, 2, square(0, 1), cfg);
      REQUIRE(d.mesh->elements.size() == 8);
      check_against_monolithic(d, cfg, std::vector<EdgeCondition>(d.transfer.edges.size(), EdgeCondition::Dirichlet));
    }
  }
  SUBCASE("unfitted square with transfer paths") {
    for (int k = 1; k <= 3; ++k) {
      HdgConfig cfg;
      cfg.k = k;
      cfg.tau = 2.0;
      const Discretization d = discretize({{-0.1, -0.1}, {1.1, 1.1}}, 4, square(-0.05, 1.05), cfg);
      REQUIRE(d.mesh->elements.size() == 8);
      double longest = 0.0;
      for (const auto& et : d.transfer.edges)
        for (const auto& node : et.nodes) longest = std::max(longest, node.length);
      REQUIRE(longest > 0.2);
      check_against_monolithic(d, cfg, std::vector<EdgeCondition>(d.transfer.edges.size(), EdgeCondition::Dirichlet));
    }
  }
  SUBCASE("mixed Dirichlet and Neumann rows") {
    HdgConfig cfg;
    cfg.k = 2;
    const Discretization d = discretize({{-0.1, -0.1}, {1.1, 1.1}}, 4, square(-0.05, 1.05), cfg);
    std::vector<EdgeCondition> cond(d.transfer.edges.size(), EdgeCondition::Dirichlet);
    for (std::size_t s = 0; s < cond.size(); s += 2) cond[s] = EdgeCondition::Neumann;
    check_against_monolithic(d, cfg, cond);
  }
}

TEST_CASE("polynomial solutions are reproduced exactly") {
  for (int k = 1; k <= 2; ++k) {
    CAPTURE(k);
    // u of degree k, a = 2: q = -2 grad u, f = div q.
    ProblemData data;
    data.a = [](const Point&) { return 2.0; };
    if (k == 1) {
      data.g = [](const Point& x) { return 1.0 + 2.0 * x.x() - 3.0 * x.y(); };
      data.f = [](const Point&) { return 0.0; };
    } else {
      data.g = [](const Point& x) { return 1.0 + 2.0 * x.x() - 3.0 * x.y() + x.x() * x.x() + 0.5 * x.x() * x.y(); };
      data.f = [](const Point&) { return -4.0; };
    }
    const ScalarField u = data.g;
    const VectorField q = [k](const Point& x) {
      Point gr(2.0, -3.0);
      if (k == 2) gr += Point(2.0 * x.x() + 0.5 * x.y(), 0.5 * x.x());
      return Point(-2.0 * gr);
    };
    // Adjoint: z of degree k with div r = y - target.
    data.adjoint_dirichlet = [](const Point& x) { return 0.5 - x.x() + x.y(); };
    data.target = u;

    HdgConfig cfg;
    cfg.k = k;
    for (int fitted = 0; fitted < 2; ++fitted) {
      CAPTURE(fitted);
      const Discretization d = fitted ? discretize({{0, 0}, {1, 1}}, 6, square(0, 1), cfg)
                                      : discretize({{-0.25, -0.25}, {0.25, 0.25}}, 16, annulus(), cfg);
      const DiffusionSolver solver(d, data, cfg);
      const ScalarHdgSolution y = solver.state();
      const ErrorNorms err = compute_error_norms(d, y, u, q);
      CHECK(err.primal <= 1e-9);
      CHECK(err.flux <= 1e-9);
      CHECK(err.trace <= 1e-9);
      const ScalarHdgSolution z = solver.adjoint(y);
      const ErrorNorms ez = compute_error_norms(d, z, data.adjoint_dirichlet,
                                                [](const Point&) { return Point(2.0, -2.0); });
      CHECK(ez.primal <= 1e-9);
      CHECK(ez.flux <= 1e-9);
    }
  }
}

TEST_CASE("deformation reproduces a polynomial field on a fitted domain") {
  // Outer square movable (Neumann), inner square hole fixed (Dirichlet).
  const DomainShape shape({{Polyline{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}}, false, true},
                           {Polyline{{{0.25, 0.25}, {0.25, 0.75}, {0.75, 0.75}, {0.75, 0.25}}}, true, false}});
  for (int k = 2; k <= 3; ++k) {
    HdgConfig cfg;
    cfg.k = k;
    const Discretization d = discretize({{0, 0}, {1, 1}}, 8, shape, cfg);
    REQUIRE(d.mesh->elements.size() == 128 - 32);
    // V = (x^2 - y, x y): sigma = -grad V, source -Lap V = (-2, 0).
    const VectorField V = [](const Point& x) { return Point(x.x() * x.x() - x.y(), x.x() * x.y()); };
    auto sigma = [](const Point& x) {
      Eigen::Matrix2d s;
      s << -2.0 * x.x(), 1.0, -x.y(), -x.x();
      return s;
    };
    std::vector<std::vector<Point>> neumann(d.transfer.edges.size());
    for (std::size_t s = 0; s < d.transfer.edges.size(); ++s)
      for (const auto& node : d.transfer.edges[s].nodes)
        neumann[s].push_back(sigma(node.xbar) * node.normal);
    const VectorField source = [](const Point&) { return Point(-2.0, 0.0); };
    const TensorHdgSolution sol = solve_deformation(d, neumann, cfg, V, source);
    for (int i = 0; i < 2; ++i) {
      const ErrorNorms err = compute_error_norms(
          d, sol.comp[i], [&](const Point& x) { return V(x)[i]; },
          [&](const Point& x) { return Point(sigma(x).row(i).transpose()); });
      CHECK(err.primal <= 1e-9);
      CHECK(err.flux <= 1e-9);
    }
  }
}

TEST_CASE("zero data gives the zero solution") {
  HdgConfig cfg;
  const Discretization d = discretize({{-0.25, -0.25}, {0.25, 0.25}}, 16, annulus(), cfg);
  ProblemData data;
  data.g = [](const Point&) { return 0.0; };
  const ScalarHdgSolution y = solve_state(d, data, cfg);
  CHECK(y.primal.cwiseAbs().maxCoeff() == 0.0);
  CHECK(y.flux_x.cwiseAbs().maxCoeff() == 0.0);
  CHECK(y.trace.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("numerical flux is single valued") {
  for (int k = 1; k <= 3; ++k) {
    HdgConfig cfg;
    cfg.k = k;
    const Discretization d = discretize({{-0.25, -0.25}, {0.25, 0.25}}, 32, annulus(), cfg);
    ProblemData data;
    data.a = [](const Point& x) { return 1.0 + x.squaredNorm(); };
    data.f = [](const Point& x) { return 5.0 * std::sin(7 * x.x()) * std::cos(3 * x.y()); };
    data.g = [](const Point& x) { return std::exp(x.x()) - x.y(); };
    const ScalarHdgSolution y = solve_state(d, data, cfg);
    const FluxJump fj = flux_jump_residual(d, y, cfg);
    CHECK(fj.scale > 0.0);
    CHECK(fj.max_jump <= 1e-9 * std::max(fj.scale, 1.0));
  }
}

TEST_CASE("deformation energy identity") {
  for (int k = 1; k <= 2; ++k) {
    HdgConfig cfg;
    cfg.k = k;
    const Discretization d = discretize({{-0.5, -0.5}, {0.5, 0.5}}, 24, disk_with_hole(true), cfg);
    std::vector<std::vector<Point>> neumann(d.transfer.edges.size());
    int movable = 0;
    for (std::size_t s = 0; s < d.transfer.edges.size(); ++s) {
      if (d.transfer.edges[s].dirichlet) continue;
      ++movable;
      for (const auto& node : d.transfer.edges[s].nodes)
        neumann[s].push_back((std::cos(3 * node.xbar.x()) + node.xbar.y()) * node.normal);
    }
    REQUIRE(movable > 0);
    const TensorHdgSolution sol = solve_deformation(d, neumann, cfg);
    const DeformationEnergy en = deformation_energy(d, sol, neumann, cfg);
    const double lhs = en.sigma + en.jump + en.dirichlet;
    CHECK(en.sigma > 0.0);
    CHECK(std::abs(lhs + en.neumann) <= 1e-8 * std::max(1.0, std::abs(en.neumann)));
    CHECK(en.neumann < 0.0);
  }
}

TEST_CASE("deformation without a fixed boundary is rejected") {
  HdgConfig cfg;
  const Discretization d = discretize({{-0.5, -0.5}, {0.5, 0.5}}, 12,
                                      DomainShape({{Circle{{0, 0}, 0.4}, false, true}}), cfg);
  std::vector<std::vector<Point>> neumann(d.transfer.edges.size());
  CHECK_THROWS_AS(solve_deformation(d, neumann, cfg), SolverError);
}

TEST_CASE("thread count does not change the solution") {
  HdgConfig cfg;
  cfg.k = 2;
  const Discretization d = discretize({{-0.25, -0.25}, {0.25, 0.25}}, 24, annulus(), cfg);
  ProblemData data;
  data.f = [](const Point& x) { return std::sin(x.x()) * std::sin(x.y()); };
  data.g = data.f;
  cfg.threads = 1;
  const ScalarHdgSolution a = solve_state(d, data, cfg);
  cfg.threads = 4;
  const ScalarHdgSolution b = solve_state(d, data, cfg);
  CHECK(max_abs_diff(a.primal, b.primal) == 0.0);
  CHECK(max_abs_diff(a.trace, b.trace) == 0.0);
}

TEST_CASE("smooth solution converges on the annulus") {
  // y = sin x sin y with a = 1: f = 2 sin x sin y.
  ProblemData data;
  data.g = [](const Point& x) { return std::sin(x.x()) * std::sin(x.y()); };
  data.f = [](const Point& x) { return 2.0 * std::sin(x.x()) * std::sin(x.y()); };
  const VectorField q = [](const Point& x) {
    return Point(-std::cos(x.x()) * std::sin(x.y()), -std::sin(x.x()) * std::cos(x.y()));
  };
  for (int k = 1; k <= 2; ++k) {
    HdgConfig cfg;
    cfg.k = k;
    std::vector<double> e;
    for (int n : {16, 32}) {
      const Discretization d = discretize({{-0.25, -0.25}, {0.25, 0.25}}, n, annulus(), cfg);
      e.push_back(compute_error_norms(d, solve_state(d, data, cfg), data.g, q).primal);
    }
    const double rate = std::log2(e[0] / e[1]);
    CAPTURE(k);
    CAPTURE(rate);
    CHECK(rate >= k + 1 - 0.4);
  }
}

TEST_CASE("fitted square converges at exactly k + 1") {
  // Reference for the annulus rates: no transfer paths, same smooth solution.
  ProblemData data;
  data.g = [](const Point& x) { return std::sin(x.x()) * std::sin(x.y()); };
  data.f = [](const Point& x) { return 2.0 * std::sin(x.x()) * std::sin(x.y()); };
  const VectorField q = [](const Point& x) {
    return Point(-std::cos(x.x()) * std::sin(x.y()), -std::sin(x.x()) * std::cos(x.y()));
  };
  for (int k = 1; k <= 2; ++k) {
    HdgConfig cfg;
    cfg.k = k;
    std::vector<double> e;
    for (int n : {20, 40, 80}) {
      const Discretization d = discretize({{-0.25, -0.25}, {0.25, 0.25}}, n, square(-0.2, 0.2), cfg);
      REQUIRE(d.transfer.R == 0.0);
      e.push_back(compute_error_norms(d, solve_state(d, data, cfg), data.g, q).primal);
    }
    CAPTURE(k);
    CHECK(std::log2(e[0] / e[1]) == doctest::Approx(k + 1).epsilon(0.01));
    CHECK(std::log2(e[1] / e[2]) == doctest::Approx(k + 1).epsilon(0.01));
  }
}
