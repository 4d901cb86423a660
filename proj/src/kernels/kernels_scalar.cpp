#include "kernels_impl.hpp"

namespace nilspace::kernels::scalar {

void mobius_mod_batch(std::int32_t* data, int n, std::size_t lanes, std::int32_t mod) {
  const std::size_t size = std::size_t{1} << n;
  for (int b = 0; b < n; ++b) {
    const std::size_t bit = std::size_t{1} << b;
    for (std::size_t v = 0; v < size; ++v) {
      if (!(v & bit)) continue;
      std::int32_t* hi = data + v * lanes;
      const std::int32_t* lo = data + (v ^ bit) * lanes;
      for (std::size_t l = 0; l < lanes; ++l) {
        std::int32_t d = hi[l] - lo[l];
        hi[l] = d < 0 ? d + mod : d;
      }
    }
  }
}

void phase_shift_sub(const std::int32_t* in, const std::uint32_t* idx, std::int32_t* out,
                     std::size_t len, std::int32_t mod) {
  for (std::size_t x = 0; x < len; ++x) {
    std::int32_t d = in[x] - in[idx[x]];
    out[x] = d < 0 ? d + mod : d;
  }
}

void complex_delta(const double* re, const double* im, const std::uint32_t* idx, double* out_re,
                   double* out_im, std::size_t len) {
  for (std::size_t x = 0; x < len; ++x) {
    const double a = re[x], b = im[x];
    const double c = re[idx[x]], d = im[idx[x]];
    out_re[x] = a * c + b * d;
    out_im[x] = b * c - a * d;
  }
}

std::complex<double> complex_sum(const double* re, const double* im, std::size_t len) {
  double r[kReduceLanes] = {}, i[kReduceLanes] = {};
  std::size_t x = 0;
  for (; x + kReduceLanes <= len; x += kReduceLanes) {
    for (std::size_t l = 0; l < kReduceLanes; ++l) {
      r[l] += re[x + l];
      i[l] += im[x + l];
    }
  }
  for (std::size_t l = 0; x < len; ++x, ++l) {
    r[l] += re[x];
    i[l] += im[x];
  }
  return {(r[0] + r[1]) + (r[2] + r[3]), (i[0] + i[1]) + (i[2] + i[3])};
}

std::complex<double> complex_inner(const double* a_re, const double* a_im, const double* b_re,
                                   const double* b_im, std::size_t len) {
  double r[kReduceLanes] = {}, i[kReduceLanes] = {};
  std::size_t x = 0;
  for (; x + kReduceLanes <= len; x += kReduceLanes) {
    for (std::size_t l = 0; l < kReduceLanes; ++l) {
      const double pr = a_re[x + l] * b_re[x + l] + a_im[x + l] * b_im[x + l];
      const double pi = a_im[x + l] * b_re[x + l] - a_re[x + l] * b_im[x + l];
      r[l] += pr;
      i[l] += pi;
    }
  }
  for (std::size_t l = 0; x < len; ++x, ++l) {
    r[l] += a_re[x] * b_re[x] + a_im[x] * b_im[x];
    i[l] += a_im[x] * b_re[x] - a_re[x] * b_im[x];
  }
  return {(r[0] + r[1]) + (r[2] + r[3]), (i[0] + i[1]) + (i[2] + i[3])};
}

bool all_zero(const std::int32_t* data, std::size_t len) {
  for (std::size_t x = 0; x < len; ++x)
    if (data[x] != 0) return false;
  return true;
}

}  // namespace nilspace::kernels::scalar

namespace nilspace::kernels {

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar",           scalar::mobius_mod_batch,
                                 scalar::phase_shift_sub, scalar::complex_delta,
                                 scalar::complex_sum,     scalar::complex_inner,
                                 scalar::all_zero};
  return table;
}

}  // namespace nilspace::kernels
