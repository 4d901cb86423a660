#include <doctest.h>

#include <cmath>
#include <random>

#include "nilspace/error.hpp"
#include "nilspace/gowers.hpp"

using namespace nilspace;

namespace {

// Direct U_d norm on Z_n: sum over x, t_1..t_d of the conjugated products.
double naive_cyclic_norm(const std::vector<Complex>& f, int d) {
  const Int n = static_cast<Int>(f.size());
  std::vector<Int> t(d + 1, 0);
  Complex sum = 0.0;
  std::uint64_t total = 1;
  for (int j = 0; j <= d; ++j) total *= static_cast<std::uint64_t>(n);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t r = idx;
    for (int j = 0; j <= d; ++j) t[j] = static_cast<Int>(r % n), r /= n;
    Complex prod = 1.0;
    for (std::uint32_t v = 0; v < (1u << d); ++v) {
      Int x = t[0];
      for (int j = 0; j < d; ++j)
        if (v >> j & 1) x += t[j + 1];
      const Complex val = f[static_cast<std::size_t>(mod(x, n))];
      prod *= (std::popcount(v) % 2) ? std::conj(val) : val;
    }
    sum += prod;
  }
  return std::pow(sum.real() / static_cast<double>(total), 1.0 / (1 << d));
}

std::vector<Complex> random_disk(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Complex> v(n);
  for (auto& z : v) z = std::polar(std::sqrt(u(rng)), 2 * M_PI * u(rng));
  return v;
}

GroupFunction quadratic_z4() {
  return GroupFunction::from_phases(FinAbGroup({4}), {Phase(0, 4), Phase(1, 4), Phase(0, 4), Phase(1, 4)});
}

}  // namespace

TEST_CASE("constant and Dirac functions") {
  for (Int m : {2, 3, 4}) {
    const FinAbGroup g({m});
    CHECK(gowers_norm(GroupFunction::constant(g), 2) == doctest::Approx(1.0).epsilon(1e-12));
    std::vector<Complex> v(m, 0.0);
    v[0] = 1.0;
    const GroupFunction dirac(g, v);
    const double expect = std::pow(static_cast<double>(m), -0.75);
    CHECK(gowers_norm(dirac, 2) == doctest::Approx(expect).epsilon(1e-9));
    CHECK(gowers_u2_fourier(dirac) == doctest::Approx(expect).epsilon(1e-9));
    // U_3: one of m^4 parallelepipeds survives.
    CHECK(gowers_norm(dirac, 3) == doctest::Approx(std::pow(static_cast<double>(m), -0.5)).epsilon(1e-9));
  }
}

TEST_CASE("norms agree with the direct sum and the Fourier identity") {
  std::mt19937_64 rng(7);
  for (Int n : {3, 5, 6}) {
    for (int rep = 0; rep < 5; ++rep) {
      const auto v = random_disk(static_cast<std::size_t>(n), rng);
      const GroupFunction f(FinAbGroup({n}), v);
      const double u2 = gowers_norm(f, 2);
      CHECK(u2 == doctest::Approx(naive_cyclic_norm(v, 2)).epsilon(1e-9));
      CHECK(u2 == doctest::Approx(gowers_u2_fourier(f)).epsilon(1e-9));
      const double u3 = gowers_norm(f, 3);
      CHECK(u3 == doctest::Approx(naive_cyclic_norm(v, 3)).epsilon(1e-9));
      CHECK(u2 <= u3 + 1e-12);
      CHECK(u3 <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("U_1 is the modulus of the mean") {
  const GroupFunction f(FinAbGroup({4}), {1.0, 0.5, Complex(0, 1), -0.25});
  const Complex mean = (1.0 + 0.5 + Complex(0, 1) - 0.25) / 4.0;
  CHECK(gowers_norm(f, 1) == doctest::Approx(std::abs(mean)).epsilon(1e-12));
}

TEST_CASE("values outside the disk are rejected") {
  CHECK_THROWS_AS(GroupFunction(FinAbGroup({2}), {1.0, 1.5}), InvalidArgument);
  CHECK_THROWS_AS(GroupFunction(FinAbGroup({2}), {1.0}), InvalidArgument);
}

TEST_CASE("phase polynomials") {
  const GroupFunction q = quadratic_z4();
  CHECK(is_phase_polynomial(q, 2).ok);
  CHECK_FALSE(is_phase_polynomial(q, 1).ok);
  CHECK(gowers_norm(q, 3) == doctest::Approx(1.0).epsilon(1e-12));
  SearchBudget b;
  CHECK(certify_phase_polynomial(q, 3, b).degree == 2);
  // Products of degree-2 phases on Z_4 stay degree 2. Odd multiples of
  // binom(x, 2) are not 4-periodic mod 4.
  const auto chi = characters(FinAbGroup({4}))[1];
  for (Int a = 0; a < 4; ++a)
    for (Int c = 0; c < 4; c += 2) {
      const PolyMap p(1, FinAbGroup({4}), {{{1}, Element({a})}, {{2}, Element({c})}});
      const PhasePolynomial pp = phase_poly_from_coeffs(FinAbGroup({4}), p, chi);
      std::vector<Phase> prod(4);
      for (std::size_t x = 0; x < 4; ++x) prod[x] = (*pp.f.phases())[x] + (*q.phases())[x];
      CHECK(is_phase_polynomial(GroupFunction::from_phases(FinAbGroup({4}), prod), 2).ok);
    }
  CHECK_THROWS_AS(is_phase_polynomial(GroupFunction(FinAbGroup({2}), {1.0, 0.5}), 1), InvalidArgument);
}

TEST_CASE("lifting along a height extension preserves norms") {
  std::mt19937_64 rng(11);
  for (int h = 1; h <= 2; ++h) {
    const GroupExtension ext = height_extension(FinAbGroup({2}), h);
    const GroupFunction f(FinAbGroup({2}), random_disk(2, rng));
    const GroupFunction lf = lift_function(f, ext);
    for (int d = 1; d <= 3; ++d)
      CHECK(gowers_norm(lf, d) == doctest::Approx(gowers_norm(f, d)).epsilon(1e-9));
    // Projecting the lift recovers f.
    const GroupFunction back = project_phase(lf, ext);
    for (std::size_t x = 0; x < 2; ++x) CHECK(std::abs(back[x] - f[x]) < 1e-12);
  }
}

TEST_CASE("decomposition of a degree-2 phase on Z_4") {
  const PolyMap p(1, FinAbGroup({4}), {{{1}, Element({1})}, {{2}, Element({2})}});
  const PhasePolynomial pp = phase_poly_from_coeffs(FinAbGroup({4}), p, characters(FinAbGroup({4}))[1]);
  const PhaseDecomposition dec = decompose_phase(pp, 2);
  REQUIRE(dec.found);
  REQUIRE(dec.phi1);
  REQUIRE(dec.phi2);
  CHECK(dec.phi1->degree <= 1);
  for (std::size_t x = 0; x < 4; ++x) {
    const Phase two = (*dec.phi2->f.phases())[x] * 2;
    CHECK(two.is_zero());
    CHECK((*dec.phi1->f.phases())[x] + (*dec.phi2->f.phases())[x] == (*pp.f.phases())[x]);
  }
}

TEST_CASE("inverse search finds the quadratic phase behind its projection") {
  const PolyMap p(1, FinAbGroup({4}), {{{1}, Element({1})}, {{2}, Element({2})}});
  const PhasePolynomial pp = phase_poly_from_coeffs(FinAbGroup({4}), p, characters(FinAbGroup({4}))[1]);
  const GroupFunction f = project_phase(pp.f, height_extension(FinAbGroup({2}), 2));
  InverseSearchOptions o;
  o.k = 2;
  o.q = 2;
  o.ext_cap = 2;
  SearchBudget b;
  const CorrelationReport r = inverse_search(f, o, b);
  CHECK(r.height == 2);
  CHECK(r.magnitude == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.recomputed == doctest::Approx(r.magnitude).epsilon(1e-9));
  CHECK(r.clears_delta);
  REQUIRE(r.heights.size() >= 1);
  CHECK(r.heights[0].best == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
}

TEST_CASE("residue invariance check") {
  const TzResult bad = tz_residue_check(BinomialPhase{1, {{{2}, Phase(1, 2)}}}, 2, 2);
  CHECK_FALSE(bad.passes);
  CHECK_FALSE(bad.precondition);
  const TzResult good = tz_residue_check(BinomialPhase{2, {{{1, 1}, Phase(1, 3)}}}, 3, 2);
  CHECK(good.passes);
  CHECK(good.precondition);
}
