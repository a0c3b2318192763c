#pragma once

#include <vector>

#include "hdgshape/geometry.hpp"

namespace hdgshape {

struct Rule1D {
  std::vector<double> points;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1], exact to degree 2n-1.  Cached.
const Rule1D& gauss_legendre(int n);

/// Same rule mapped to [0, 1].
Rule1D gauss_legendre_unit(int n);

/// Rule on the reference triangle (0,0), (1,0), (0,1); weights sum to 1/2.
struct Rule2D {
  std::vector<Point> points;
  std::vector<double> weights;
  int degree = 0;
};

/// Collapsed tensor Gauss rule exact for polynomials of total degree <= degree.  Cached.
const Rule2D& triangle_rule(int degree);

}  // namespace hdgshape
