#include <cstdlib>
#include <cstring>

#include "kernels_impl.hpp"

namespace nilspace::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable* table = cpu_has_avx2() ? avx2_table_unchecked() : nullptr;
  return table;
}

const KernelTable& active() {
  static const KernelTable& table = [] () -> const KernelTable& {
    const char* force = std::getenv("NILSPACE_LAB_KERNELS");
    if (force && std::strcmp(force, "scalar") == 0) return scalar_table();
    if (const KernelTable* t = avx2_table()) return *t;
    return scalar_table();
  }();
  return table;
}

}  // namespace nilspace::kernels
