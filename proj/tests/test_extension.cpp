#include <doctest.h>

#include "nilspace/axioms.hpp"
#include "nilspace/error.hpp"
#include "nilspace/extension.hpp"
#include "nilspace/translation.hpp"

using namespace nilspace;

namespace {

Cubespace d(std::vector<Int> orders, int k) { return dk_structure(FinAbGroup(std::move(orders)), k); }

PointMap mod_map(std::size_t size, Int m) {
  PointMap p(size);
  for (std::size_t x = 0; x < size; ++x) p[x] = static_cast<Point>(x % m);
  return p;
}

void check_section(const Extension& ext, const PointMap& s) {
  REQUIRE(s.size() == ext.base.size());
  for (Point x = 0; x < s.size(); ++x) CHECK(ext.proj[s[x]] == x);
  CHECK(is_morphism(s, ext.base, ext.total, ext.checked_upto));
}

}  // namespace

TEST_CASE("D_1(Z_4) over D_1(Z_2) is a degree-1 extension without a section") {
  SearchBudget b;
  const Extension e = verify_extension(d({4}, 1), d({2}, 1), FinAbGroup({2}), mod_map(4, 2), 1, 0, b);
  CHECK(e.action.group.order() == 2);
  CHECK(e.action.act[1] == PointMap{2, 3, 0, 1});
  const SectionResult s = find_section(e, b);
  CHECK_FALSE(s.section);
  CHECK(s.method == "exhaustive");
  CHECK(s.candidates == 4);
  CHECK(s.rejected == 4);
}

TEST_CASE("the same pair is not a degree-0 or wrong-group extension") {
  SearchBudget b;
  CHECK_THROWS_AS(verify_extension(d({4}, 1), d({2}, 1), FinAbGroup({3}), mod_map(4, 2), 1, 0, b),
                  std::exception);
  // Z_2 x Z_2 over Z_2 by projection is an extension, Z_4 is not isomorphic to it.
  const Extension e = verify_extension(d({2, 2}, 1), d({2}, 1), FinAbGroup({2}),
                                       PointMap{0, 0, 1, 1}, 1, 0, b);
  CHECK(find_section(e, b).section.has_value());
}

TEST_CASE("trivial extensions split") {
  SearchBudget b;
  for (auto base : {d({2}, 1), d({3}, 1), d({4}, 2), d({2, 2}, 1)})
    for (auto g : {FinAbGroup({2}), FinAbGroup({3}), FinAbGroup({4})}) {
      if (base.size() * g.order() > 16) continue;
      for (int k = 1; k <= 2; ++k) {
        INFO(base.describe(), " x D_", k, "(", g.str(), ")");
        const Extension e = trivial_extension(base, g, k, b);
        const SectionResult s = find_section(e, b);
        REQUIRE(s.section);
        check_section(e, *s.section);
      }
    }
}

TEST_CASE("trivial extensions pass the extension check") {
  SearchBudget b;
  const Extension e = trivial_extension(d({2}, 1), FinAbGroup({3}), 2, b, 0, true);
  CHECK(e.checked_upto == 3);
  CHECK(trivial_extension(product(d({2}, 1), d({2}, 2)), FinAbGroup({2}), 1, b, 0, true).checked_upto == 3);
}

TEST_CASE("group extension spaces") {
  SearchBudget b;
  const GroupExtension ge = height_extension(FinAbGroup({2}), 2);
  CHECK(ge.total.invariant_factors() == std::vector<Int>{4});
  const Extension e = group_extension_space(ge, 1, b);
  CHECK(e.total.size() == 4);
  CHECK_FALSE(find_section(e, b).section);
  // As a degree-2 extension of D_2(Z_2) it still does not split: a 3-cube
  // of D_2(Z_2) with two 1s on even vertices maps to alternating sum 2 mod 4.
  const Extension e2 = group_extension_space(ge, 2, b);
  CHECK_FALSE(find_section(e2, b).section);
}

TEST_CASE("pullback of D_2(Z_4) over D_1(Z_2)") {
  SearchBudget b;
  const Cubespace pb = pullback_space(d({4}, 2), d({2}, 1), mod_map(4, 2));
  const Extension e = verify_extension(pb, d({2}, 1), FinAbGroup({2}), mod_map(4, 2), 2, 0, b);
  const SectionResult s = find_section(e, b);
  REQUIRE(s.section);
  CHECK(*s.section == PointMap{0, 1});
  check_section(e, *s.section);
}

TEST_CASE("lifting a translation along Z_4 -> Z_2") {
  SearchBudget b;
  const TranslationLift l = lift_translation(PointMap{1, 0}, d({4}, 1), mod_map(4, 2), 2, 1, 2, b);
  REQUIRE(l.beta);
  CHECK(*l.beta == PointMap{1, 2, 3, 0});
  CHECK(l.method == "search");
}

TEST_CASE("translation bundles and section lifts") {
  SearchBudget b;
  const Cubespace n = product(d({2}, 1), d({2}, 2));
  const TranslationBundle tb = translation_bundle(PointMap{1, 0}, n, 1, 2, b);
  CHECK(tb.ext.degree == 1);
  CHECK(tb.ext.action.group.order() == 2);
  const TranslationLift l = lift_translation(PointMap{1, 0}, n, 1, 2, b);
  REQUIRE(l.beta);
  CHECK(is_translation(*l.beta, n, 1, 3));
  for (Point x = 0; x < 4; ++x) CHECK((*l.beta)[x] / 2 == 1 - x / 2);
}

TEST_CASE("translation bundles need k >= i+1") {
  SearchBudget b;
  CHECK_THROWS_AS(translation_bundle(PointMap{0}, product(d({2}, 1), d({2}, 2)), 2, 2, b), UnsupportedCase);
}

TEST_CASE("split free extensions") {
  SearchBudget b;
  const Extension e = trivial_extension(d({2}, 1), FinAbGroup({2}), 1, b);
  const SectionResult s = split_free_extension(e, 2, {1}, b);
  REQUIRE(s.section);
  check_section(e, *s.section);
  // Degree 2 over F_2(1), and the pullback extension of the same base.
  const Extension e3 = trivial_extension(d({2}, 1), FinAbGroup({3}), 2, b);
  const SectionResult s3 = split_free_extension(e3, 2, {1}, b);
  REQUIRE(s3.section);
  check_section(e3, *s3.section);
  const Cubespace pb = pullback_space(d({4}, 2), d({2}, 1), PointMap{0, 1, 0, 1});
  const Extension e4 = verify_extension(pb, d({2}, 1), FinAbGroup({2}), PointMap{0, 1, 0, 1}, 2, 0, b);
  const SectionResult s4 = split_free_extension(e4, 2, {1}, b);
  REQUIRE(s4.section);
  check_section(e4, *s4.section);
  const Extension e2 = trivial_extension(product(d({2}, 1), d({2}, 2)), FinAbGroup({2}), 2, b);
  const SectionResult s2 = split_free_extension(e2, 2, {1, 1}, b);
  REQUIRE(s2.section);
  check_section(e2, *s2.section);
}
