#pragma once
// Test-side reference implementations. These deliberately avoid the
// library's fast paths: they enumerate cube morphisms coordinate by
// coordinate and take alternating sums directly.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include "nilspace/abelian.hpp"

namespace oracle {

using nilspace::Element;
using nilspace::FinAbGroup;
using nilspace::Int;

// A coordinate of a cube morphism {0,1}^n -> {0,1}: 0, 1, v_j or 1 - v_j.
// Found by brute force over integer affine forms c + sum a_j v_j with
// small coefficients whose values on the cube stay in {0,1}.
inline std::vector<std::vector<int>> boolean_affine_coordinates(int n) {
  std::vector<std::vector<int>> out;  // truth tables
  const int verts = 1 << n;
  std::vector<int> a(n + 1, -2);
  while (true) {
    std::vector<int> table(verts);
    bool ok = true;
    for (int v = 0; v < verts && ok; ++v) {
      int s = a[n];
      for (int j = 0; j < n; ++j) s += a[j] * ((v >> j) & 1);
      ok = s == 0 || s == 1;
      table[v] = s;
    }
    if (ok && std::find(out.begin(), out.end(), table) == out.end()) out.push_back(table);
    int j = 0;
    while (j <= n && ++a[j] > 2) a[j++] = -2;
    if (j > n) break;
  }
  return out;
}

// Calls fn(table) for every cube morphism {0,1}^m -> {0,1}^n, given as the
// vertex image table of length 2^m.
inline void for_each_morphism(int m, int n, const std::function<void(const std::vector<int>&)>& fn) {
  const auto coords = boolean_affine_coordinates(m);
  std::vector<std::size_t> pick(n, 0);
  std::vector<int> table(1 << m);
  while (true) {
    for (int v = 0; v < (1 << m); ++v) {
      int w = 0;
      for (int j = 0; j < n; ++j) w |= coords[pick[j]][v] << j;
      table[v] = w;
    }
    fn(table);
    int j = 0;
    while (j < n && ++pick[j] == coords.size()) pick[j++] = 0;
    if (j == n) break;
  }
}

// c in C^n(D_k(A)) iff every (k+1)-dimensional morphic image has zero
// alternating sum.
inline bool dk_member(const FinAbGroup& g, int k, const std::vector<Element>& cube) {
  int n = 0;
  while ((std::size_t{1} << n) < cube.size()) ++n;
  bool ok = true;
  for_each_morphism(k + 1, n, [&](const std::vector<int>& t) {
    if (!ok) return;
    Element s = g.zero();
    for (std::size_t v = 0; v < t.size(); ++v)
      s = (__builtin_popcount(static_cast<unsigned>(v)) & 1) ? g.sub(s, cube[t[v]]) : g.add(s, cube[t[v]]);
    ok = s == g.zero();
  });
  return ok;
}

inline std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

inline std::uint64_t choose(unsigned n, unsigned r) {
  if (r > n) return 0;
  std::uint64_t c = 1;
  for (unsigned j = 1; j <= r; ++j) c = c * (n - r + j) / j;
  return c;
}

// |C^n(D_k(A))| = |A|^(number of monomials of degree <= k in n variables).
inline std::uint64_t dk_cube_count(std::uint64_t order, unsigned n, unsigned k) {
  unsigned mon = 0;
  for (unsigned j = 0; j <= k && j <= n; ++j) mon += static_cast<unsigned>(choose(n, j));
  return ipow(order, mon);
}

}  // namespace oracle
