#include "hdgshape/kernels.hpp"

#include <cstdlib>
#include <string>

namespace hdgshape::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(HDGSHAPE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa select_isa() {
  if (const char* env = std::getenv("HDG_SHAPEOPT_SIMD")) {
    if (std::string(env) == "scalar") return Isa::Scalar;
  }
  return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

}  // namespace

bool available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
      return cpu_has_avx2();
  }
  return false;
}

const KernelTable& table(Isa isa) {
#if defined(HDGSHAPE_HAVE_AVX2)
  if (isa == Isa::Avx2 && available(Isa::Avx2)) return avx2_table();
#endif
  (void)isa;
  return scalar_table();
}

Isa active_isa() {
  static const Isa isa = select_isa();
  return isa;
}

const KernelTable& active() {
  static const KernelTable& t = table(active_isa());
  return t;
}

std::string_view name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

}  // namespace hdgshape::kernels
