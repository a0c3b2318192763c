#include "hdgshape/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace hdgshape {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre_with_derivative(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int m = 2; m <= n; ++m) {
    const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

Rule1D compute_gauss_legendre(int n) {
  Rule1D r;
  r.points.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre_with_derivative(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre_with_derivative(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.points[static_cast<std::size_t>(i)] = -x;
    r.points[static_cast<std::size_t>(n - 1 - i)] = x;
    r.weights[static_cast<std::size_t>(i)] = w;
    r.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) r.points[static_cast<std::size_t>(n / 2)] = 0.0;
  return r;
}

Rule2D compute_triangle_rule(int degree) {
  const int n = std::max(1, (degree + 3) / 2);  // ceil((degree + 2) / 2)
  const Rule1D& g = gauss_legendre(n);
  Rule2D r;
  r.degree = degree;
  for (int i = 0; i < n; ++i) {
    const double u = 0.5 * (g.points[static_cast<std::size_t>(i)] + 1.0);
    const double wu = 0.5 * g.weights[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) {
      const double v = 0.5 * (g.points[static_cast<std::size_t>(j)] + 1.0);
      const double wv = 0.5 * g.weights[static_cast<std::size_t>(j)];
      r.points.emplace_back(u, v * (1.0 - u));
      r.weights.push_back(wu * wv * (1.0 - u));
    }
  }
  return r;
}

template <class Rule, class Make>
const Rule& cached(std::map<int, std::unique_ptr<Rule>>& cache, std::mutex& mtx, int key, Make make) {
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<Rule>(make(key))).first;
  return *it->second;
}

}  // namespace

const Rule1D& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  static std::map<int, std::unique_ptr<Rule1D>> cache;
  static std::mutex mtx;
  return cached(cache, mtx, n, compute_gauss_legendre);
}

Rule1D gauss_legendre_unit(int n) {
  Rule1D r = gauss_legendre(n);
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    r.points[i] = 0.5 * (r.points[i] + 1.0);
    r.weights[i] *= 0.5;
  }
  return r;
}

const Rule2D& triangle_rule(int degree) {
  if (degree < 0) throw std::invalid_argument("triangle_rule: negative degree");
  static std::map<int, std::unique_ptr<Rule2D>> cache;
  static std::mutex mtx;
  return cached(cache, mtx, degree, compute_triangle_rule);
}

}  // namespace hdgshape
