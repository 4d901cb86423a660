#include "kernels_impl.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define NILSPACE_HAVE_X86 1
#include <immintrin.h>
#else
#define NILSPACE_HAVE_X86 0
#endif

#if NILSPACE_HAVE_X86

#define NILSPACE_AVX2 __attribute__((target("avx2")))

namespace nilspace::kernels::avx2 {
namespace {

NILSPACE_AVX2 inline __m256i sub_mod(__m256i a, __m256i b, __m256i mod) {
  const __m256i d = _mm256_sub_epi32(a, b);
  const __m256i neg = _mm256_cmpgt_epi32(_mm256_setzero_si256(), d);
  return _mm256_add_epi32(d, _mm256_and_si256(neg, mod));
}

}  // namespace

// Rows are contiguous, so each butterfly stage subtracts one contiguous
// span of bit*lanes entries from the span right after it.
NILSPACE_AVX2 void mobius_mod_batch(std::int32_t* data, int n, std::size_t lanes,
                                    std::int32_t mod) {
  const std::size_t size = std::size_t{1} << n;
  const __m256i vmod = _mm256_set1_epi32(mod);
  for (int b = 0; b < n; ++b) {
    const std::size_t bit = std::size_t{1} << b;
    const std::size_t span = bit * lanes;
    for (std::size_t base = 0; base < size; base += 2 * bit) {
      std::int32_t* lo = data + base * lanes;
      std::int32_t* hi = lo + span;
      std::size_t x = 0;
      for (; x + 8 <= span; x += 8) {
        const __m256i h = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(hi + x));
        const __m256i l = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(lo + x));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(hi + x), sub_mod(h, l, vmod));
      }
      for (; x < span; ++x) {
        const std::int32_t d = hi[x] - lo[x];
        hi[x] = d < 0 ? d + mod : d;
      }
    }
  }
}

NILSPACE_AVX2 void phase_shift_sub(const std::int32_t* in, const std::uint32_t* idx,
                                   std::int32_t* out, std::size_t len, std::int32_t mod) {
  const __m256i vmod = _mm256_set1_epi32(mod);
  std::size_t x = 0;
  for (; x + 8 <= len; x += 8) {
    const __m256i vi = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(idx + x));
    const __m256i shifted = _mm256_i32gather_epi32(in, vi, 4);
    const __m256i here = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(in + x));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + x), sub_mod(here, shifted, vmod));
  }
  for (; x < len; ++x) {
    const std::int32_t d = in[x] - in[idx[x]];
    out[x] = d < 0 ? d + mod : d;
  }
}

NILSPACE_AVX2 void complex_delta(const double* re, const double* im, const std::uint32_t* idx,
                                 double* out_re, double* out_im, std::size_t len) {
  std::size_t x = 0;
  for (; x + 4 <= len; x += 4) {
    const __m128i vi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + x));
    const __m256d a = _mm256_loadu_pd(re + x);
    const __m256d b = _mm256_loadu_pd(im + x);
    const __m256d c = _mm256_i32gather_pd(re, vi, 8);
    const __m256d d = _mm256_i32gather_pd(im, vi, 8);
    _mm256_storeu_pd(out_re + x, _mm256_add_pd(_mm256_mul_pd(a, c), _mm256_mul_pd(b, d)));
    _mm256_storeu_pd(out_im + x, _mm256_sub_pd(_mm256_mul_pd(b, c), _mm256_mul_pd(a, d)));
  }
  for (; x < len; ++x) {
    const double a = re[x], b = im[x];
    const double c = re[idx[x]], d = im[idx[x]];
    out_re[x] = a * c + b * d;
    out_im[x] = b * c - a * d;
  }
}

NILSPACE_AVX2 std::complex<double> complex_sum(const double* re, const double* im,
                                               std::size_t len) {
  __m256d ar = _mm256_setzero_pd(), ai = _mm256_setzero_pd();
  std::size_t x = 0;
  for (; x + 4 <= len; x += 4) {
    ar = _mm256_add_pd(ar, _mm256_loadu_pd(re + x));
    ai = _mm256_add_pd(ai, _mm256_loadu_pd(im + x));
  }
  alignas(32) double r[4], i[4];
  _mm256_store_pd(r, ar);
  _mm256_store_pd(i, ai);
  for (std::size_t l = 0; x < len; ++x, ++l) {
    r[l] += re[x];
    i[l] += im[x];
  }
  return {(r[0] + r[1]) + (r[2] + r[3]), (i[0] + i[1]) + (i[2] + i[3])};
}

NILSPACE_AVX2 std::complex<double> complex_inner(const double* a_re, const double* a_im,
                                                 const double* b_re, const double* b_im,
                                                 std::size_t len) {
  __m256d ar = _mm256_setzero_pd(), ai = _mm256_setzero_pd();
  std::size_t x = 0;
  for (; x + 4 <= len; x += 4) {
    const __m256d p = _mm256_loadu_pd(a_re + x), q = _mm256_loadu_pd(a_im + x);
    const __m256d s = _mm256_loadu_pd(b_re + x), t = _mm256_loadu_pd(b_im + x);
    ar = _mm256_add_pd(ar, _mm256_add_pd(_mm256_mul_pd(p, s), _mm256_mul_pd(q, t)));
    ai = _mm256_add_pd(ai, _mm256_sub_pd(_mm256_mul_pd(q, s), _mm256_mul_pd(p, t)));
  }
  alignas(32) double r[4], i[4];
  _mm256_store_pd(r, ar);
  _mm256_store_pd(i, ai);
  for (std::size_t l = 0; x < len; ++x, ++l) {
    r[l] += a_re[x] * b_re[x] + a_im[x] * b_im[x];
    i[l] += a_im[x] * b_re[x] - a_re[x] * b_im[x];
  }
  return {(r[0] + r[1]) + (r[2] + r[3]), (i[0] + i[1]) + (i[2] + i[3])};
}

NILSPACE_AVX2 bool all_zero(const std::int32_t* data, std::size_t len) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t x = 0;
  for (; x + 8 <= len; x += 8)
    acc = _mm256_or_si256(acc, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(data + x)));
  if (!_mm256_testz_si256(acc, acc)) return false;
  for (; x < len; ++x)
    if (data[x] != 0) return false;
  return true;
}

}  // namespace nilspace::kernels::avx2

namespace nilspace::kernels {

const KernelTable* avx2_table_unchecked() {
  static const KernelTable table{"avx2",           avx2::mobius_mod_batch, avx2::phase_shift_sub,
                                 avx2::complex_delta, avx2::complex_sum,  avx2::complex_inner,
                                 avx2::all_zero};
  return &table;
}

}  // namespace nilspace::kernels

#else

namespace nilspace::kernels {
const KernelTable* avx2_table_unchecked() { return nullptr; }
}  // namespace nilspace::kernels

#endif
