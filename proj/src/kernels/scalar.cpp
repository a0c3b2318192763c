#include "hdgshape/kernels.hpp"

namespace hdgshape::kernels {
namespace {

void weighted_gram_scalar(const double* a, std::size_t na, const double* b, std::size_t nb,
                          const double* w, std::size_t nq, double* out) {
  for (std::size_t i = 0; i < na; ++i) {
    const double* ai = a + i * nq;
    for (std::size_t j = 0; j < nb; ++j) {
      const double* bj = b + j * nq;
      double sum = 0.0;
      for (std::size_t q = 0; q < nq; ++q) sum += w[q] * ai[q] * bj[q];
      out[i * nb + j] += sum;
    }
  }
}

void combine_rows_scalar(const double* c, const double* table, std::size_t rows, std::size_t nq,
                         double* out) {
  for (std::size_t q = 0; q < nq; ++q) out[q] = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    const double ci = c[i];
    const double* row = table + i * nq;
    for (std::size_t q = 0; q < nq; ++q) out[q] += ci * row[q];
  }
}

double weighted_dot_scalar(const double* a, const double* b, const double* w, std::size_t n) {
  double sum = 0.0;
  for (std::size_t q = 0; q < n; ++q) sum += w[q] * a[q] * b[q];
  return sum;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{weighted_gram_scalar, combine_rows_scalar, weighted_dot_scalar};
  return t;
}

}  // namespace hdgshape::kernels
