#include <doctest.h>

#include "nilspace/axioms.hpp"
#include "nilspace/bundle.hpp"
#include "nilspace/error.hpp"
#include "nilspace/free_nilspace.hpp"
#include "oracles.hpp"

using namespace nilspace;

namespace {

Cubespace d(std::vector<Int> orders, int k) { return dk_structure(FinAbGroup(std::move(orders)), k); }

PolyMap poly1(FinAbGroup target, std::map<int, Int> coeffs) {
  std::map<PolyMap::MultiIndex, Element> c;
  for (auto [r, v] : coeffs) c[{r}] = target.reduce({v});
  return PolyMap(1, std::move(target), std::move(c));
}

// Least L > 0 with f(x + L) = f(x) on a window covering two candidate periods.
Int brute_period(const PolyMap& p, Int bound) {
  for (Int l = 1; l <= bound; ++l) {
    bool ok = true;
    for (Int x = -bound; x <= 2 * bound && ok; ++x) ok = p({x}) == p({x + l});
    if (ok) return l;
  }
  return 0;
}

}  // namespace

TEST_CASE("binomials") {
  CHECK(binom(5, 2) == 10);
  CHECK(binom(-1, 2) == 1);
  CHECK(binom(-3, 3) == -10);
  CHECK(binom(7, 0) == 1);
  CHECK(binom(2, 3) == 0);
  for (Int x = -6; x <= 6; ++x)
    for (int r = 1; r <= 4; ++r) CHECK(binom(x + 1, r) == binom(x, r) + binom(x, r - 1));
}

TEST_CASE("modulo-n free nilspaces") {
  const Cubespace f = mod_free_nilspace(2, {1, 1});
  CHECK(f.size() == 4);
  const AxiomReport r = check_axioms(f, 3);
  CHECK(r.all_ok());
  CHECK(r.kstep == 2);
  CHECK(mod_free_nilspace(3, {0, 0}).size() == 1);
  CHECK(mod_free_nilspace(4, {0, 2}).size() == 16);
  CHECK(check_axioms(mod_free_nilspace(4, {0, 1}), 3).kstep == 2);
  CHECK(free_coordinate_heights({1, 0, 2}) == std::vector<int>{1, 3, 3});
  CHECK(free_coords(3, 2, 5) == std::vector<Int>{1, 2});
  CHECK(free_index(3, {1, 2}) == 5);
  CHECK(FreeRank{{0, 1}, 4}.str() == "F_4(0,1)");
}

TEST_CASE("reduction from the free nilspace") {
  SearchBudget b;
  const ModReduction red = reduce_mod({1, 1}, 2);
  CHECK(red.apply({3, -1}) == 3);
  CHECK(verify_reduce_mod(red, 1, 3, b));
  // Composite with the coordinate projection onto D_1(Z_2).
  const PointMap first{0, 0, 1, 1};
  const Cubespace target = d({2}, 1);
  CHECK(verify_reduce_mod(red, 1, 3, b, &first, &target));
}

TEST_CASE("periods of binomial polynomials") {
  CHECK(period_of_polymap(poly1(FinAbGroup({2}), {{2, 1}})) == 4);
  CHECK(period_of_polymap(poly1(FinAbGroup({2}), {{1, 1}})) == 2);
  CHECK(period_of_polymap(poly1(FinAbGroup({3}), {{3, 1}})) == 9);
  CHECK(period_of_polymap(poly1(FinAbGroup({2}), {})) == 1);
  for (Int n : {2, 3})
    for (int deg = 1; deg <= 3; ++deg)
      for (Int c = 1; c < n; ++c) {
        const PolyMap p = poly1(FinAbGroup({n}), {{deg, c}});
        CHECK(period_of_polymap(p) == brute_period(p, static_cast<Int>(oracle::ipow(n, deg))));
      }
}

TEST_CASE("polynomial maps as morphisms") {
  const PolyMap q = poly1(FinAbGroup({2}), {{2, 1}});
  CHECK(q.degree() == 2);
  CHECK(poly_is_morphism(q, 1, 2));
  CHECK_FALSE(poly_is_morphism(q, 1, 1));
  CHECK_FALSE(poly_is_morphism(q, 2, 2));  // degree times height must stay <= k
  const PolyMap lin = poly1(FinAbGroup({2}), {{1, 1}});
  CHECK(poly_is_morphism(lin, 2, 2));
  CHECK_FALSE(poly_is_morphism(lin, 2, 1));
  const auto mi = multi_indices(2, 2);
  CHECK(mi.size() == 6);
  CHECK(mi.front() == std::vector<int>{0, 0});
}

TEST_CASE("finite free factors") {
  for (auto n : {d({2}, 1), d({3}, 1), d({4}, 2), product(d({2}, 1), d({2}, 2))}) {
    SearchBudget b;
    const int k = *check_axioms(n, 4).kstep;
    const FreeFactor ff = factor_to_finite(n, k, 3, b);
    CHECK(is_factor_map(ff.h, ff.space, n, k));
    CHECK(check_axioms(ff.space, k + 1).all_ok());
  }
  // A relabelled copy still gets a factor map.
  const Cubespace r = relabel(d({2}, 1), {1, 0});
  const FreeFactor ff = factor_to_finite(r, 1);
  CHECK(is_factor_map(ff.h, ff.space, r, 1));
}

TEST_CASE("morphism lifts") {
  SearchBudget b;
  const Cubespace n = d({2}, 2);
  const MorphismLift l = lift_morphism(FinAbGroup({2}), PointMap{0, 1}, n, 2, 2, 3, b);
  REQUIRE(l.ext);
  const GroupExtension& ext = *l.ext;
  for (std::uint64_t x = 0; x < ext.total.order(); ++x) {
    const Element bx = ext.total.element_at(x);
    const auto tau = ext.base.index_of(ext.proj.apply(bx));
    CHECK(l.beta[l.psi[x]] == PointMap{0, 1}[tau]);
  }
  CHECK(is_morphism(l.psi, dk_structure(ext.total, 1), l.fprime, 3));
}
