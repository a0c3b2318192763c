#pragma once

#include <vector>

#include "hdgshape/basis.hpp"
#include "hdgshape/quadrature.hpp"

namespace hdgshape::detail {

// Reference basis sampled at the points of a triangle rule.  Row-major with
// one row per basis function, so rows feed the dense kernels directly.
struct VolumeTable {
  int n = 0;
  std::size_t nq = 0;
  const Rule2D* rule = nullptr;
  std::vector<double> phi;
  std::vector<double> dxi;
  std::vector<double> deta;
};

const VolumeTable& volume_table(int k, int degree);

}  // namespace hdgshape::detail
