#pragma once

#include <cstddef>
#include <string_view>

// Dense inner loops of local assembly and field evaluation.  Every kernel has
// a portable scalar reference and, where the build and CPU allow it, an AVX2+FMA
// variant.  The active variant is chosen once at first use.
namespace hdgshape::kernels {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  // out[i*nb + j] += sum_q w[q] * a[i*nq + q] * b[j*nq + q]
  void (*weighted_gram)(const double* a, std::size_t na, const double* b, std::size_t nb,
                        const double* w, std::size_t nq, double* out);
  // out[q] = sum_i c[i] * table[i*nq + q]
  void (*combine_rows)(const double* c, const double* table, std::size_t rows, std::size_t nq,
                       double* out);
  // sum_q w[q] * a[q] * b[q]
  double (*weighted_dot)(const double* a, const double* b, const double* w, std::size_t n);
};

const KernelTable& scalar_table();
#if defined(HDGSHAPE_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

bool available(Isa isa);
const KernelTable& table(Isa isa);

/// Variant used by the library.  AVX2 when compiled in and supported by the
/// running CPU, unless HDG_SHAPEOPT_SIMD=scalar is set in the environment.
Isa active_isa();
const KernelTable& active();

std::string_view name(Isa isa);

inline void weighted_gram(const double* a, std::size_t na, const double* b, std::size_t nb,
                          const double* w, std::size_t nq, double* out) {
  active().weighted_gram(a, na, b, nb, w, nq, out);
}

inline void combine_rows(const double* c, const double* table, std::size_t rows, std::size_t nq,
                         double* out) {
  active().combine_rows(c, table, rows, nq, out);
}

inline double weighted_dot(const double* a, const double* b, const double* w, std::size_t n) {
  return active().weighted_dot(a, b, w, n);
}

}  // namespace hdgshape::kernels
