#pragma once
// Data-parallel inner loops. Every kernel has a scalar reference
// implementation and, on x86-64, an AVX2 variant; the variant is picked
// once at startup from CPUID. Both variants follow the same reduction
// order, so results are bit-identical and tests compare them exactly.
//
// NILSPACE_LAB_KERNELS=scalar forces the reference path.

#include <complex>
#include <cstddef>
#include <cstdint>

namespace nilspace::kernels {

/// Lanes in a fixed-order floating reduction. Partial sums are kept in
/// kReduceLanes strided accumulators and combined as (l0+l1)+(l2+l3).
inline constexpr std::size_t kReduceLanes = 4;

struct KernelTable {
  const char* name;

  /// In-place Moebius (subset-difference) transform over {0,1}^n modulo
  /// `mod`, batched across `lanes` maps. Layout data[vertex * lanes + lane],
  /// entries in [0, mod). After the call entry (S, lane) holds the
  /// coefficient of prod_{i in S} v_i in the multilinear expansion.
  void (*mobius_mod_batch)(std::int32_t* data, int n, std::size_t lanes, std::int32_t mod);

  /// out[x] = (in[x] - in[idx[x]]) mod `mod`; entries in [0, mod).
  void (*phase_shift_sub)(const std::int32_t* in, const std::uint32_t* idx, std::int32_t* out,
                          std::size_t len, std::int32_t mod);

  /// out[x] = f(x) * conj(f(idx[x])) on split real/imaginary arrays.
  void (*complex_delta)(const double* re, const double* im, const std::uint32_t* idx,
                        double* out_re, double* out_im, std::size_t len);

  /// Fixed-order sum of a split complex array.
  std::complex<double> (*complex_sum)(const double* re, const double* im, std::size_t len);

  /// Fixed-order sum of a[x] * conj(b[x]).
  std::complex<double> (*complex_inner)(const double* a_re, const double* a_im, const double* b_re,
                                        const double* b_im, std::size_t len);

  /// True iff every entry is zero.
  bool (*all_zero)(const std::int32_t* data, std::size_t len);
};

const KernelTable& scalar_table();
/// nullptr when the build target or the running CPU lacks AVX2.
const KernelTable* avx2_table();
/// The table selected for this process.
const KernelTable& active();

}  // namespace nilspace::kernels
