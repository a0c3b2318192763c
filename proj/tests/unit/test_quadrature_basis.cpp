#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "hdgshape/basis.hpp"
#include "hdgshape/quadrature.hpp"

using namespace hdgshape;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// Exact integral of x^a y^b over the reference triangle.
double triangle_monomial(int a, int b) { return factorial(a) * factorial(b) / factorial(a + b + 2); }

}  // namespace

TEST_CASE("gauss-legendre exactness") {
  for (int n = 1; n <= 10; ++n) {
    const Rule1D& r = gauss_legendre(n);
    for (int p = 0; p <= 2 * n - 1; ++p) {
      double s = 0.0;
      for (std::size_t i = 0; i < r.points.size(); ++i) s += r.weights[i] * std::pow(r.points[i], p);
      const double exact = p % 2 == 1 ? 0.0 : 2.0 / (p + 1);
      CHECK(std::abs(s - exact) <= 1e-14);
    }
  }
  const Rule1D u = gauss_legendre_unit(3);
  double s = 0.0;
  for (std::size_t i = 0; i < 3; ++i) s += u.weights[i] * std::pow(u.points[i], 5);
  CHECK(s == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("triangle rule integrates monomials up to its degree") {
  for (int deg = 0; deg <= 14; ++deg) {
    const Rule2D& r = triangle_rule(deg);
    for (int a = 0; a <= deg; ++a) {
      for (int b = 0; a + b <= deg; ++b) {
        double s = 0.0;
        for (std::size_t q = 0; q < r.points.size(); ++q) {
          s += r.weights[q] * std::pow(r.points[q].x(), a) * std::pow(r.points[q].y(), b);
        }
        CHECK(std::abs(s - triangle_monomial(a, b)) <= 1e-13);
      }
    }
  }
}

TEST_CASE("k = 0 basis is the constant sqrt(2)") {
  const ReferenceBasis& b = reference_basis(0);
  REQUIRE(b.size() == 1);
  CHECK(b.eval(Point(0.2, 0.3))(0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("reference basis is orthonormal") {
  for (int k = 0; k <= 5; ++k) {
    const ReferenceBasis& b = reference_basis(k);
    CHECK(b.size() == dim_pk(k));
    const Rule2D& r = triangle_rule(2 * k + 2);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(b.size(), b.size());
    for (std::size_t q = 0; q < r.points.size(); ++q) {
      const Eigen::VectorXd v = b.eval(r.points[q]);
      gram += r.weights[q] * v * v.transpose();
    }
    CHECK((gram - Eigen::MatrixXd::Identity(b.size(), b.size())).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("reference gradients match central differences") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double step = 1e-6;
  for (int k = 1; k <= 4; ++k) {
    const ReferenceBasis& b = reference_basis(k);
    const int n = b.size();
    std::vector<double> v(n), gx(n), gy(n), vp(n), vm(n);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      double s = u(rng), t = u(rng);
      if (s + t > 1.0) s = 1.0 - s, t = 1.0 - t;
      const Point xi(s, t);
      b.eval_grad(xi, v.data(), gx.data(), gy.data());
      b.eval(xi + Point(step, 0), vp.data());
      b.eval(xi - Point(step, 0), vm.data());
      for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs((vp[i] - vm[i]) / (2 * step) - gx[i]));
      b.eval(xi + Point(0, step), vp.data());
      b.eval(xi - Point(0, step), vm.data());
      for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs((vp[i] - vm[i]) / (2 * step) - gy[i]));
    }
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("legendre edge basis is orthonormal on [-1, 1]") {
  const int k = 5;
  const Rule1D& r = gauss_legendre(k + 1);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(k + 1, k + 1);
  std::vector<double> v(k + 1);
  for (std::size_t q = 0; q < r.points.size(); ++q) {
    legendre_basis(k, r.points[q], v.data());
    const Eigen::Map<Eigen::VectorXd> vv(v.data(), k + 1);
    gram += r.weights[q] * vv * vv.transpose();
  }
  CHECK((gram - Eigen::MatrixXd::Identity(k + 1, k + 1)).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("element basis: mass matrix 2|K| I and physical gradients") {
  const Point a(0.1, 0.2), b(0.35, 0.25), c(0.15, 0.6);
  const AffineMap map(a, b, c);
  const double area = 0.5 * cross(b - a, c - a);
  const int k = 3;
  const ElementBasis eb(reference_basis(k), map);
  const Rule2D& r = triangle_rule(2 * k);
  const int n = eb.size();
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd v(n);
  for (std::size_t q = 0; q < r.points.size(); ++q) {
    eb.eval(map.to_physical(r.points[q]), v.data());
    mass += r.weights[q] * map.det * v * v.transpose();
  }
  CHECK((mass - 2.0 * area * Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-13);

  std::vector<double> val(n), dx(n), dy(n), vp(n), vm(n);
  const Point x(0.2, 0.33);
  const double h = 1e-6;
  eb.eval_grad(x, val.data(), dx.data(), dy.data());
  eb.eval(x + Point(h, 0), vp.data());
  eb.eval(x - Point(h, 0), vm.data());
  for (int i = 0; i < n; ++i) CHECK(std::abs((vp[i] - vm[i]) / (2 * h) - dx[i]) <= 1e-6);
  eb.eval(x + Point(0, h), vp.data());
  eb.eval(x - Point(0, h), vm.data());
  for (int i = 0; i < n; ++i) CHECK(std::abs((vp[i] - vm[i]) / (2 * h) - dy[i]) <= 1e-6);
}
