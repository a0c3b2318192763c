#include "hdgshape/basis.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "hdgshape/quadrature.hpp"

namespace hdgshape {

namespace {
constexpr double kCentre = 1.0 / 3.0;
constexpr int kMaxStack = 64;
}  // namespace

ReferenceBasis::ReferenceBasis(int k) : k_(k), dim_(dim_pk(k)) {
  if (k < 0) throw std::invalid_argument("reference basis: negative degree");
  if (dim_ > kMaxStack) throw std::invalid_argument("reference basis: degree too large");
  for (int d = 0; d <= k; ++d) {
    for (int b = 0; b <= d; ++b) exps_.emplace_back(d - b, b);
  }
  const Rule2D& rule = triangle_rule(2 * k);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(dim_, dim_);
  std::vector<double> m(static_cast<std::size_t>(dim_));
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    monomials(rule.points[q], m.data(), nullptr, nullptr);
    const Eigen::Map<const Eigen::VectorXd> mv(m.data(), dim_);
    gram.noalias() += rule.weights[q] * mv * mv.transpose();
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(gram);
  const Eigen::MatrixXd L = llt.matrixL();
  coef_ = L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(dim_, dim_));
}

void ReferenceBasis::monomials(const Point& xi, double* m, double* mx, double* my) const {
  double px[kMaxStack / 4 + 2], py[kMaxStack / 4 + 2];
  const double u = xi.x() - kCentre, v = xi.y() - kCentre;
  px[0] = py[0] = 1.0;
  for (int i = 1; i <= k_; ++i) {
    px[i] = px[i - 1] * u;
    py[i] = py[i - 1] * v;
  }
  for (int i = 0; i < dim_; ++i) {
    const auto [a, b] = exps_[static_cast<std::size_t>(i)];
    m[i] = px[a] * py[b];
    if (mx) {
      mx[i] = a > 0 ? a * px[a - 1] * py[b] : 0.0;
      my[i] = b > 0 ? b * px[a] * py[b - 1] : 0.0;
    }
  }
}

void ReferenceBasis::eval(const Point& xi, double* values) const {
  double m[kMaxStack];
  monomials(xi, m, nullptr, nullptr);
  for (int i = 0; i < dim_; ++i) {
    double s = 0.0;
    for (int j = 0; j <= i; ++j) s += coef_(i, j) * m[j];
    values[i] = s;
  }
}

void ReferenceBasis::eval_grad(const Point& xi, double* values, double* dxi, double* deta) const {
  double m[kMaxStack], mx[kMaxStack], my[kMaxStack];
  monomials(xi, m, mx, my);
  for (int i = 0; i < dim_; ++i) {
    double s = 0.0, sx = 0.0, sy = 0.0;
    for (int j = 0; j <= i; ++j) {
      s += coef_(i, j) * m[j];
      sx += coef_(i, j) * mx[j];
      sy += coef_(i, j) * my[j];
    }
    values[i] = s;
    dxi[i] = sx;
    deta[i] = sy;
  }
}

Eigen::VectorXd ReferenceBasis::eval(const Point& xi) const {
  Eigen::VectorXd v(dim_);
  eval(xi, v.data());
  return v;
}

const ReferenceBasis& reference_basis(int k) {
  static std::map<int, std::unique_ptr<ReferenceBasis>> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(k);
  if (it == cache.end()) it = cache.emplace(k, std::make_unique<ReferenceBasis>(k)).first;
  return *it->second;
}

void legendre_basis(int k, double s, double* values) {
  double p0 = 1.0, p1 = s;
  values[0] = std::sqrt(0.5);
  if (k >= 1) values[1] = std::sqrt(1.5) * s;
  for (int n = 2; n <= k; ++n) {
    const double p2 = ((2.0 * n - 1.0) * s * p1 - (n - 1.0) * p0) / n;
    p0 = p1;
    p1 = p2;
    values[n] = std::sqrt((2.0 * n + 1.0) / 2.0) * p2;
  }
}

AffineMap::AffineMap(const Point& v0, const Point& v1, const Point& v2) : x0(v0) {
  B.col(0) = v1 - v0;
  B.col(1) = v2 - v0;
  det = B.determinant();
  Binv = B.inverse();
}

void ElementBasis::eval_grad(const Point& x, double* values, double* dx, double* dy) const {
  double gx[kMaxStack], gy[kMaxStack];
  ref_->eval_grad(map_.to_reference(x), values, gx, gy);
  // grad_x = B^{-T} grad_xi
  const Eigen::Matrix2d& J = map_.Binv;
  for (int i = 0; i < ref_->size(); ++i) {
    dx[i] = J(0, 0) * gx[i] + J(1, 0) * gy[i];
    dy[i] = J(0, 1) * gx[i] + J(1, 1) * gy[i];
  }
}

double ElementBasis::evaluate(const double* c, const Point& x) const {
  double v[kMaxStack];
  eval(x, v);
  double s = 0.0;
  for (int i = 0; i < ref_->size(); ++i) s += c[i] * v[i];
  return s;
}

}  // namespace hdgshape
