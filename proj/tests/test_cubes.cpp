#include <doctest.h>

#include <set>

#include "nilspace/cubes.hpp"
#include "nilspace/error.hpp"
#include "nilspace/runtime.hpp"
#include "oracles.hpp"

using namespace nilspace;

TEST_CASE("vertex helpers") {
  CHECK(num_vertices(3) == 8);
  CHECK(h_parity(0b101) == 1);
  CHECK(h_parity(0b111) == -1);
  CHECK(corner_vertices(2) == std::vector<Vertex>{0, 1, 2});
  CHECK(cube_dim(16) == 4);
  CHECK_THROWS_AS(cube_dim(6), InvalidArgument);
  CHECK_THROWS_AS(corner_vertices(0), InvalidArgument);
}

TEST_CASE("faces") {
  CHECK(faces(3, 1).size() == 12);
  CHECK(faces(3, 2).size() == 6);
  CHECK(faces(4, 0).size() == 16);
  for (const auto& f : faces(4, 2)) {
    const auto vs = f.vertices();
    CHECK(vs.size() == 4);
    for (Vertex v : vs) CHECK(f.contains(v));
  }
}

TEST_CASE("morphism enumeration agrees with the affine-form oracle") {
  for (int n = 0; n <= 3; ++n) {
    CHECK(oracle::boolean_affine_coordinates(n).size() == static_cast<std::size_t>(2 * n + 2));
    for (int m = 0; m <= 3; ++m) {
      SearchBudget budget;
      const auto ms = enumerate_cube_morphisms(n, m, budget);
      std::set<std::vector<Vertex>> lib;
      for (const auto& phi : ms) {
        CHECK(has_affine_extension(n, m, phi.table()));
        lib.insert(phi.table());
      }
      std::set<std::vector<Vertex>> ref;
      oracle::for_each_morphism(n, m, [&](const std::vector<int>& t) { ref.insert(std::vector<Vertex>(t.begin(), t.end())); });
      CHECK(lib == ref);
    }
  }
}

TEST_CASE("affine extension oracle rejects non-morphisms") {
  // x -> x1 AND x2 is not affine.
  std::vector<Vertex> table_and{0, 0, 0, 1};
  CHECK_FALSE(has_affine_extension(2, 1, table_and));
  std::vector<Vertex> table_xor{0, 1, 1, 0};
  CHECK_FALSE(has_affine_extension(2, 1, table_xor));
  std::vector<Vertex> swap{0, 2, 1, 3};
  CHECK(has_affine_extension(2, 2, swap));
}

TEST_CASE("composition of morphisms") {
  SearchBudget budget;
  const auto a = enumerate_cube_morphisms(2, 3, budget);
  const auto b = enumerate_cube_morphisms(3, 2, budget);
  for (std::size_t i = 0; i < a.size(); i += 7)
    for (std::size_t j = 0; j < b.size(); j += 5) {
      const auto c = a[i].then(b[j]);
      for (Vertex v = 0; v < 4; ++v) CHECK(c.apply(v) == b[j].apply(a[i].apply(v)));
    }
  CHECK(CubeMorphism::identity(3).table() == std::vector<Vertex>{0, 1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("generating morphisms compose to every morphism") {
  // Closure of the generators under composition, restricted to dimensions <= 3.
  const int top = 3;
  const auto gens = generating_morphisms(top);
  std::set<std::pair<std::pair<int, int>, std::vector<Vertex>>> seen;
  std::vector<CubeMorphism> frontier;
  for (int n = 0; n <= top; ++n) {
    frontier.push_back(CubeMorphism::identity(n));
    seen.insert({{n, n}, CubeMorphism::identity(n).table()});
  }
  while (!frontier.empty()) {
    std::vector<CubeMorphism> next;
    for (const auto& f : frontier)
      for (const auto& g : gens) {
        if (g.source_dim() != f.target_dim()) continue;
        const auto h = f.then(g);
        if (seen.insert({{h.source_dim(), h.target_dim()}, h.table()}).second) next.push_back(h);
      }
    frontier = std::move(next);
  }
  for (int n = 0; n <= top; ++n)
    for (int m = 0; m <= top; ++m) {
      std::size_t count = 0;
      for (const auto& s : seen)
        if (s.first == std::make_pair(n, m)) ++count;
      CHECK(count == oracle::ipow(2 * n + 2, m));
    }
}
