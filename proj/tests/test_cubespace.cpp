#include <doctest.h>

#include <random>

#include "nilspace/cubespace.hpp"
#include "nilspace/enumerate.hpp"
#include "nilspace/error.hpp"
#include "nilspace/kernels.hpp"
#include "nilspace/runtime.hpp"
#include "oracles.hpp"

using namespace nilspace;

namespace {

std::vector<Element> as_elements(const FinAbGroup& g, CubeView c) {
  std::vector<Element> out;
  for (Point p : c) out.push_back(g.element_at(p));
  return out;
}

}  // namespace

TEST_CASE("D_k membership agrees with alternating sums over all morphisms") {
  MESSAGE("kernels: " << kernels::active().name);
  std::mt19937_64 rng(3);
  for (auto orders : std::vector<std::vector<Int>>{{2}, {3}, {4}, {2, 2}, {6}})
    for (int k = 1; k <= 3; ++k) {
      const FinAbGroup g(orders);
      const Cubespace s = dk_structure(g, k);
      for (int n = 0; n <= 4; ++n)
        for (int trial = 0; trial < 60; ++trial) {
          std::vector<Point> c(num_vertices(n));
          for (auto& p : c) p = static_cast<Point>(rng() % g.order());
          const bool want = oracle::dk_member(g, k, as_elements(g, c));
          CHECK(s.member(c) == want);
          CHECK(dk_member_by_morphisms(g, k, as_elements(g, c)) == want);
        }
    }
}

TEST_CASE("batched membership matches single queries") {
  std::mt19937_64 rng(5);
  const FinAbGroup g({4});
  const Cubespace s = dk_structure(g, 2);
  const int n = 3;
  std::vector<Point> cubes(8 * 50);
  for (auto& p : cubes) p = static_cast<Point>(rng() % 4);
  // Make some of them genuine cubes.
  for (int c = 0; c < 50; c += 3)
    for (Vertex v = 0; v < 8; ++v) cubes[c * 8 + v] = static_cast<Point>((v & 1) + 2 * ((v >> 1) & (v >> 2) & 1));
  std::vector<std::uint8_t> out(50);
  s.member_batch(n, cubes, out);
  for (int c = 0; c < 50; ++c)
    CHECK(static_cast<bool>(out[c]) == s.member(CubeView(cubes.data() + c * 8, 8)));
}

TEST_CASE("cube counts of D_k(A)") {
  for (auto orders : std::vector<std::vector<Int>>{{2}, {3}, {2, 2}})
    for (int k = 1; k <= 2; ++k)
      for (int n = 0; n <= 3; ++n) {
        const FinAbGroup g(orders);
        SearchBudget b;
        CHECK(count_cubes(dk_structure(g, k), n, b) ==
              oracle::dk_cube_count(g.order(), static_cast<unsigned>(n), static_cast<unsigned>(k)));
      }
}

TEST_CASE("raw and face-pruned enumeration agree") {
  const Cubespace s = dk_structure(FinAbGroup({3}), 2);
  for (int n = 1; n <= 3; ++n) {
    SearchBudget b;
    const auto raw = enumerate_cubes(s, n, b, EnumMode::Raw);
    const auto pruned = enumerate_cubes(s, n, b, EnumMode::Pruned);
    CHECK(raw == pruned);
  }
}

TEST_CASE("completions") {
  const Cubespace d1 = dk_structure(FinAbGroup({5}), 1);
  const std::vector<Point> corner{1, 3, 4};
  CHECK(completions(d1, corner) == std::vector<Point>{1});  // 3 + 4 - 1
  const Cubespace d2 = dk_structure(FinAbGroup({5}), 2);
  CHECK(completion_count(d2, corner) == 5);
  // The face (0, 1, 1, 0) through 0^3 is not affine.
  CHECK_THROWS_AS(completions(d1, std::vector<Point>{0, 1, 1, 0, 0, 0, 0}), InvalidCorner);
}

TEST_CASE("membership validation") {
  const Cubespace s = dk_structure(FinAbGroup({2}), 1);
  CHECK_THROWS_AS(s.member(std::vector<Point>{0, 1, 0}), InvalidArgument);
  CHECK_THROWS_AS(s.member(std::vector<Point>{0, 2}), InvalidArgument);
  CHECK(s.member(std::vector<Point>{1}));
}

TEST_CASE("linear structure, products and relabeling") {
  const FinAbGroup z4({4});
  const Cubespace lin = linear_structure(z4);
  CHECK(lin.member(std::vector<Point>{0, 1, 2, 3}));
  CHECK_FALSE(lin.member(std::vector<Point>{0, 1, 2, 0}));
  CHECK(lin.full_dimension() == 1);

  const Cubespace p = product(dk_structure(FinAbGroup({2}), 1), dk_structure(FinAbGroup({2}), 2));
  CHECK(p.size() == 4);
  CHECK(p.step_hint() == 2);
  // (a, b) = 2a + b. First coordinate affine, second arbitrary on 2-cubes.
  CHECK(p.member(std::vector<Point>{0, 2, 1, 3}));
  CHECK_FALSE(p.member(std::vector<Point>{0, 2, 2, 2}));

  const Cubespace r = relabel(dk_structure(FinAbGroup({3}), 1), {2, 0, 1});
  // New point p is old perm[p]: (0,0,0,1) here is (2,2,2,0) in Z_3.
  CHECK(r.member(std::vector<Point>{1, 2, 0, 1}));
  CHECK_FALSE(r.member(std::vector<Point>{0, 0, 0, 1}));

  const Cubespace pt = point_space();
  CHECK(pt.size() == 1);
  CHECK(pt.member(std::vector<Point>(16, 0)));
}

TEST_CASE("map utilities") {
  CHECK(identity_map(3) == PointMap{0, 1, 2});
  CHECK(compose(PointMap{1, 2, 0}, PointMap{0, 0, 1}) == PointMap{0, 1, 0});
  CHECK(is_surjective(PointMap{1, 0, 1}, 2));
  CHECK_FALSE(is_surjective(PointMap{1, 1}, 2));
}
