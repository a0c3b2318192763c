#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hdgshape/geometry.hpp"

namespace hdgshape {

inline int dim_pk(int k) { return (k + 1) * (k + 2) / 2; }

/// Orthonormal basis of P_k on the reference triangle (0,0), (1,0), (0,1):
/// monomials centred at the barycentre, orthonormalized through the Cholesky
/// factor of their Gram matrix.
class ReferenceBasis {
 public:
  explicit ReferenceBasis(int k);

  int degree() const { return k_; }
  int size() const { return dim_; }

  /// values[i] = phi_i(xi)
  void eval(const Point& xi, double* values) const;
  /// values plus reference gradients.
  void eval_grad(const Point& xi, double* values, double* dxi, double* deta) const;

  Eigen::VectorXd eval(const Point& xi) const;

  /// Coefficients of phi_i in the centred monomials (row i).
  const Eigen::MatrixXd& monomial_coefficients() const { return coef_; }
  const std::vector<std::pair<int, int>>& exponents() const { return exps_; }

 private:
  void monomials(const Point& xi, double* m, double* mx, double* my) const;

  int k_;
  int dim_;
  std::vector<std::pair<int, int>> exps_;
  Eigen::MatrixXd coef_;
};

/// Cached instance per degree; safe for concurrent use.
const ReferenceBasis& reference_basis(int k);

/// Orthonormal Legendre polynomials on [-1, 1]: sqrt((2n+1)/2) P_n(s).
void legendre_basis(int k, double s, double* values);

/// x = x0 + B xi for a triangle with vertices (v0, v1, v2).
struct AffineMap {
  Point x0{0.0, 0.0};
  Eigen::Matrix2d B = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d Binv = Eigen::Matrix2d::Identity();
  double det = 1.0;

  AffineMap() = default;
  AffineMap(const Point& v0, const Point& v1, const Point& v2);

  Point to_physical(const Point& xi) const { return x0 + B * xi; }
  Point to_reference(const Point& x) const { return Binv * (x - x0); }
};

/// Physical-coordinate basis phi_i(B^{-1}(x - x0)).  Evaluating it outside the
/// element is exactly polynomial extrapolation.
class ElementBasis {
 public:
  ElementBasis(const ReferenceBasis& ref, const AffineMap& map) : ref_(&ref), map_(map) {}

  int size() const { return ref_->size(); }
  const AffineMap& map() const { return map_; }

  void eval(const Point& x, double* values) const { ref_->eval(map_.to_reference(x), values); }
  /// values plus physical gradients.
  void eval_grad(const Point& x, double* values, double* dx, double* dy) const;

  /// sum_i c[i] phi_i(x)
  double evaluate(const double* c, const Point& x) const;

 private:
  const ReferenceBasis* ref_;
  AffineMap map_;
};

}  // namespace hdgshape
