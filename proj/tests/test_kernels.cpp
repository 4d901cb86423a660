#include <doctest.h>

#include <random>
#include <vector>

#include "nilspace/kernels.hpp"

using namespace nilspace;

namespace {

// Plain subset-difference transform, one lane at a time.
std::vector<std::int32_t> mobius_reference(std::vector<std::int32_t> d, int n, std::size_t lanes, int mod) {
  for (int b = 0; b < n; ++b)
    for (std::size_t v = 0; v < (std::size_t{1} << n); ++v)
      if (v >> b & 1)
        for (std::size_t l = 0; l < lanes; ++l) {
          auto& x = d[v * lanes + l];
          x = ((x - d[(v ^ (std::size_t{1} << b)) * lanes + l]) % mod + mod) % mod;
        }
  return d;
}

}  // namespace

TEST_CASE("scalar Moebius transform matches the reference") {
  std::mt19937_64 rng(7);
  for (int n = 0; n <= 6; ++n)
    for (std::size_t lanes : {1u, 3u, 8u, 13u}) {
      for (int mod : {2, 3, 4, 5, 12}) {
        std::vector<std::int32_t> d((std::size_t{1} << n) * lanes);
        for (auto& x : d) x = static_cast<std::int32_t>(rng() % mod);
        auto want = mobius_reference(d, n, lanes, mod);
        kernels::scalar_table().mobius_mod_batch(d.data(), n, lanes, mod);
        CHECK(d == want);
      }
    }
}

TEST_CASE("AVX2 kernels are bit-identical to the scalar ones") {
  const auto* v = kernels::avx2_table();
  if (!v) {
    MESSAGE("AVX2 unavailable; vector path not exercised");
    return;
  }
  const auto& s = kernels::scalar_table();
  std::mt19937_64 rng(11);
  for (int n = 0; n <= 7; ++n)
    for (std::size_t lanes : {1u, 4u, 8u, 9u, 16u, 33u}) {
      const int mod = 2 + static_cast<int>(rng() % 15);
      std::vector<std::int32_t> a((std::size_t{1} << n) * lanes);
      for (auto& x : a) x = static_cast<std::int32_t>(rng() % mod);
      auto b = a;
      s.mobius_mod_batch(a.data(), n, lanes, mod);
      v->mobius_mod_batch(b.data(), n, lanes, mod);
      CHECK(a == b);
      CHECK(s.all_zero(a.data(), a.size()) == v->all_zero(b.data(), b.size()));
    }
  for (std::size_t len : {1u, 5u, 8u, 31u, 64u, 257u}) {
    const int mod = 97;
    std::vector<std::int32_t> in(len), o1(len), o2(len);
    std::vector<std::uint32_t> idx(len);
    std::vector<double> re(len), im(len), r1(len), i1(len), r2(len), i2(len);
    std::uniform_real_distribution<double> u(-1, 1);
    for (std::size_t x = 0; x < len; ++x) {
      in[x] = static_cast<std::int32_t>(rng() % mod);
      idx[x] = static_cast<std::uint32_t>(rng() % len);
      re[x] = u(rng);
      im[x] = u(rng);
    }
    s.phase_shift_sub(in.data(), idx.data(), o1.data(), len, mod);
    v->phase_shift_sub(in.data(), idx.data(), o2.data(), len, mod);
    CHECK(o1 == o2);
    s.complex_delta(re.data(), im.data(), idx.data(), r1.data(), i1.data(), len);
    v->complex_delta(re.data(), im.data(), idx.data(), r2.data(), i2.data(), len);
    CHECK(r1 == r2);
    CHECK(i1 == i2);
    const auto z1 = s.complex_sum(re.data(), im.data(), len);
    const auto z2 = v->complex_sum(re.data(), im.data(), len);
    CHECK(z1.real() == z2.real());
    CHECK(z1.imag() == z2.imag());
    const auto w1 = s.complex_inner(re.data(), im.data(), r1.data(), i1.data(), len);
    const auto w2 = v->complex_inner(re.data(), im.data(), r1.data(), i1.data(), len);
    CHECK(w1.real() == w2.real());
    CHECK(w1.imag() == w2.imag());
  }
}

TEST_CASE("zero detection and phase differences") {
  const auto& s = kernels::scalar_table();
  std::vector<std::int32_t> z(37, 0);
  CHECK(s.all_zero(z.data(), z.size()));
  z[36] = 1;
  CHECK_FALSE(s.all_zero(z.data(), z.size()));
  std::vector<std::int32_t> in{0, 1, 2, 3}, out(4);
  std::vector<std::uint32_t> idx{1, 2, 3, 0};
  s.phase_shift_sub(in.data(), idx.data(), out.data(), 4, 4);
  CHECK(out == std::vector<std::int32_t>{3, 3, 3, 3});
}
