#pragma once

#include "nilspace/kernels.hpp"

namespace nilspace::kernels {

namespace scalar {
void mobius_mod_batch(std::int32_t* data, int n, std::size_t lanes, std::int32_t mod);
void phase_shift_sub(const std::int32_t* in, const std::uint32_t* idx, std::int32_t* out,
                     std::size_t len, std::int32_t mod);
void complex_delta(const double* re, const double* im, const std::uint32_t* idx, double* out_re,
                   double* out_im, std::size_t len);
std::complex<double> complex_sum(const double* re, const double* im, std::size_t len);
std::complex<double> complex_inner(const double* a_re, const double* a_im, const double* b_re,
                                   const double* b_im, std::size_t len);
bool all_zero(const std::int32_t* data, std::size_t len);
}  // namespace scalar

/// Compiled-in AVX2 table, without the CPUID check. nullptr off x86-64.
const KernelTable* avx2_table_unchecked();

}  // namespace nilspace::kernels
