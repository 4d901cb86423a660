#include "nilspace/free_nilspace.hpp"

#include <algorithm>
#include <numeric>

#include "nilspace/axioms.hpp"
#include "nilspace/bundle.hpp"
#include "nilspace/enumerate.hpp"
#include "nilspace/error.hpp"

namespace nilspace {

std::size_t FreeRank::dims() const { return std::accumulate(ranks.begin(), ranks.end(), std::size_t{0}); }

std::string FreeRank::str() const {
  std::string s = modulus ? "F_" + std::to_string(*modulus) + "(" : "F(";
  for (std::size_t i = 0; i < ranks.size(); ++i) s += (i ? "," : "") + std::to_string(ranks[i]);
  return s + ")";
}

Cubespace mod_free_nilspace(Int n, const std::vector<int>& ranks, int n_max) {
  if (n < 1) throw InvalidArgument("modulus must be >= 1");
  std::vector<Cubespace> parts;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (ranks[i] < 0) throw InvalidArgument("ranks must be nonnegative");
    if (ranks[i] == 0) continue;
    const std::uint64_t part = checked_pow(n, ranks[i]);
    if (part == UINT64_MAX || total > (std::uint64_t{1} << 26) / std::max<std::uint64_t>(part, 1))
      throw ResourceLimit("free nilspace ground set too large");
    total *= part;
    parts.push_back(dk_structure(FinAbGroup(std::vector<Int>(ranks[i], n)), static_cast<int>(i) + 1, n_max));
  }
  if (parts.empty()) return point_space();
  if (parts.size() == 1) return parts[0];
  return product(std::move(parts));
}

std::vector<int> free_coordinate_heights(const std::vector<int>& ranks) {
  std::vector<int> out;
  for (std::size_t i = 0; i < ranks.size(); ++i)
    for (int j = 0; j < ranks[i]; ++j) out.push_back(static_cast<int>(i) + 1);
  return out;
}

std::vector<Int> free_coords(Int n, std::size_t dims, Point p) {
  std::vector<Int> c(dims);
  for (std::size_t t = dims; t-- > 0;) {
    c[t] = p % n;
    p = static_cast<Point>(p / n);
  }
  return c;
}

Point free_index(Int n, const std::vector<Int>& coords) {
  Point p = 0;
  for (Int x : coords) p = static_cast<Point>(p * n + mod(x, n));
  return p;
}

Int binom(Int x, int r) {
  if (r < 0) return 0;
  __int128 acc = 1;
  for (int j = 1; j <= r; ++j) acc = acc * (x - j + 1) / j;  // exact at every step
  return static_cast<Int>(acc);
}

Point ModReduction::apply(const std::vector<Int>& z) const { return free_index(modulus, z); }

ModReduction reduce_mod(const std::vector<int>& ranks, Int modulus) {
  if (modulus < 1) throw InvalidArgument("modulus must be >= 1");
  return ModReduction{ranks, modulus};
}

bool verify_reduce_mod(const ModReduction& red, int window, int n_upto, SearchBudget& budget,
                       const PointMap* then, const Cubespace* target) {
  const Cubespace finite = mod_free_nilspace(red.modulus, red.ranks);
  if ((then == nullptr) != (target == nullptr)) throw InvalidArgument("map and target go together");
  if (then && then->size() != finite.size()) throw InvalidArgument("map size mismatch");
  const auto heights = free_coordinate_heights(red.ranks);
  const std::size_t dims = heights.size();
  n_upto = std::min(n_upto, finite.n_max());
  if (target) n_upto = std::min(n_upto, target->n_max());
  for (int n = 1; n <= n_upto; ++n) {
    const std::size_t verts = num_vertices(n);
    // Per coordinate: the subsets S with |S| <= height carry a coefficient.
    std::vector<std::vector<Vertex>> monomials(dims);
    std::size_t slots = 0;
    for (std::size_t t = 0; t < dims; ++t) {
      for (Vertex s = 0; s < verts; ++s)
        if (std::popcount(s) <= heights[t]) monomials[t].push_back(s);
      slots += monomials[t].size();
    }
    const std::uint64_t count = checked_pow(2 * window + 1, slots);
    budget.charge(count, "reduce_mod window", n);
    std::vector<int> digits(slots, -window);
    std::vector<Point> cube(verts), image(verts);
    std::vector<Int> z(dims);
    for (std::uint64_t iter = 0; iter < count; ++iter) {
      for (Vertex v = 0; v < verts; ++v) {
        std::size_t slot = 0;
        for (std::size_t t = 0; t < dims; ++t) {
          Int val = 0;
          for (Vertex s : monomials[t]) {
            if ((v & s) == s) val += digits[slot];
            ++slot;
          }
          z[t] = val;
        }
        cube[v] = red.apply(z);
      }
      if (!finite.member_unchecked(cube)) return false;
      if (then) {
        for (Vertex v = 0; v < verts; ++v) image[v] = (*then)[cube[v]];
        if (!target->member_unchecked(image)) return false;
      }
      for (std::size_t s = 0; s < slots; ++s) {
        if (++digits[s] <= window) break;
        digits[s] = -window;
      }
    }
  }
  return true;
}

PolyMap::PolyMap(int arity, FinAbGroup target, std::map<MultiIndex, Element> coeffs)
    : arity_(arity), target_(std::move(target)) {
  if (arity < 0) throw InvalidArgument("arity must be nonnegative");
  for (auto& [r, c] : coeffs) {
    if (static_cast<int>(r.size()) != arity_) throw InvalidArgument("multi-index length differs from arity");
    for (int x : r)
      if (x < 0) throw InvalidArgument("multi-index entries must be nonnegative");
    if (c.size() != target_.num_factors()) throw InvalidArgument("coefficient outside the target group");
    Element red = target_.reduce(c.coords);
    if (red != target_.zero()) coeffs_.emplace(r, std::move(red));
  }
}

int PolyMap::degree() const {
  int d = -1;
  for (const auto& [r, c] : coeffs_) d = std::max(d, std::accumulate(r.begin(), r.end(), 0));
  return d;
}

Element PolyMap::operator()(const std::vector<Int>& x) const {
  if (static_cast<int>(x.size()) != arity_) throw InvalidArgument("argument length differs from arity");
  std::vector<Int> acc(target_.num_factors(), 0);
  for (const auto& [r, c] : coeffs_) {
    Int w = 1;
    for (int j = 0; j < arity_; ++j) {
      w = static_cast<Int>(static_cast<__int128>(w) * binom(x[j], r[j]) % target_.exponent());
    }
    for (std::size_t f = 0; f < acc.size(); ++f)
      acc[f] = mod(acc[f] + static_cast<Int>(static_cast<__int128>(w) * c[f] % target_.cyclic_orders()[f]),
                   target_.cyclic_orders()[f]);
  }
  return Element(std::move(acc));
}

std::string PolyMap::str() const {
  if (coeffs_.empty()) return "0";
  std::string s;
  for (const auto& [r, c] : coeffs_) {
    if (!s.empty()) s += " + ";
    s += c.str();
    for (int j = 0; j < arity_; ++j)
      if (r[j]) s += "*C(x" + std::to_string(j) + "," + std::to_string(r[j]) + ")";
  }
  return s;
}

std::vector<PolyMap::MultiIndex> multi_indices(int arity, int degree) {
  std::vector<PolyMap::MultiIndex> out;
  for (int w = 0; w <= degree; ++w) {
    std::vector<int> r(arity, 0);
    auto rec = [&](auto&& self, int j, int left) -> void {
      if (j == arity - 1 || arity == 0) {
        if (arity == 0) {
          if (left == 0) out.push_back(r);
          return;
        }
        r[j] = left;
        out.push_back(r);
        return;
      }
      for (int x = left; x >= 0; --x) {
        r[j] = x;
        self(self, j + 1, left - x);
      }
    };
    rec(rec, 0, w);
  }
  return out;
}

namespace {

Int window_length(const PolyMap& p) {
  const std::uint64_t l = checked_pow(p.target().order(), std::max(1, p.degree()));
  if (l > (std::uint64_t{1} << 24)) throw ResourceLimit("period window too large");
  return static_cast<Int>(l);
}

}  // namespace

Int period_of_polymap(const PolyMap& p, SearchBudget& budget) {
  if (p.arity() != 1) throw InvalidArgument("period_of_polymap needs an arity-1 map");
  const Int l = window_length(p);
  budget.charge(static_cast<std::uint64_t>(2 * l), "period window");
  std::vector<Element> values;
  for (Int x = 0; x < 2 * l; ++x) values.push_back(p({x}));
  for (Int x = 0; x < l; ++x)
    if (values[x] != values[x + l])
      throw StructuralFailure("polynomial map is not |A|^degree periodic", "x=" + std::to_string(x));
  for (Int t = 1; t <= l; ++t) {
    if (l % t) continue;
    bool ok = true;
    for (Int x = 0; x < l && ok; ++x) ok = values[x] == values[x + t];
    if (ok) return t;
  }
  return l;
}

Int period_of_polymap(const PolyMap& p) {
  SearchBudget budget;
  return period_of_polymap(p, budget);
}

bool poly_is_morphism(const PolyMap& p, int i, int k, SearchBudget& budget) {
  if (i < 1 || k < 1) throw InvalidArgument("degrees must be >= 1");
  if (p.degree() <= 0) return true;
  const Int l = window_length(p);
  const int d = p.arity();
  const FinAbGroup box(std::vector<Int>(d, l));
  if (box.order() > (std::uint64_t{1} << 20)) throw ResourceLimit("quotient window too large");
  budget.charge(box.order() * (d + 1), "polynomial window");
  PointMap f(box.order());
  for (std::uint64_t idx = 0; idx < box.order(); ++idx) {
    const auto x = box.element_at(idx).coords;
    const Element y = p(x);
    for (int j = 0; j < d; ++j) {
      auto shifted = x;
      shifted[j] += l;
      if (p(shifted) != y) throw StructuralFailure("polynomial map is not periodic on the window");
    }
    f[idx] = static_cast<Point>(p.target().index_of(y));
  }
  // Shrink each side of the window to the least period along that axis:
  // cubes of D_i(Z_l) all lift to D_i(Z), so the check stays exact.
  std::vector<Int> sides(d, l);
  for (int j = 0; j < d; ++j)
    for (Int t = 1; t < l; ++t) {
      if (l % t) continue;
      bool ok = true;
      for (std::uint64_t idx = 0; idx < box.order() && ok; ++idx) {
        auto x = box.element_at(idx).coords;
        x[j] = (x[j] + t) % l;
        ok = f[idx] == f[box.index_of(Element(x))];
      }
      if (ok) {
        sides[j] = t;
        break;
      }
    }
  const FinAbGroup small(sides);
  PointMap g(small.order());
  for (std::uint64_t idx = 0; idx < small.order(); ++idx) g[idx] = f[box.index_of(small.element_at(idx))];
  const int dim = morphism_check_dim(k, kDefaultNMax);
  return is_morphism(g, dk_structure(small, i, std::max(dim, kDefaultNMax)), dk_structure(p.target(), k),
                     dim, budget);
}

bool poly_is_morphism(const PolyMap& p, int i, int k) {
  SearchBudget budget;
  return poly_is_morphism(p, i, k, budget);
}

std::optional<PointMap> search_morphism(const Cubespace& from, const Cubespace& to,
                                        const std::vector<std::vector<Point>>& allowed, int n_upto,
                                        SearchBudget& budget) {
  if (allowed.size() != from.size()) throw InvalidArgument("one candidate list per source point");
  n_upto = std::min({n_upto, from.n_max(), to.n_max()});
  std::vector<std::vector<std::vector<Point>>> by_top(from.size());
  for (int n = to.full_dimension() + 1; n <= n_upto; ++n) {
    for_each_cube(from, n, budget, [&](CubeView c) {
      by_top[*std::max_element(c.begin(), c.end())].emplace_back(c.begin(), c.end());
      return true;
    });
  }
  PointMap m(from.size(), 0);
  std::vector<Point> image;
  std::uint64_t pending = 0;
  std::optional<PointMap> found;
  auto dfs = [&](auto&& self, Point p) -> bool {
    if (p == m.size()) {
      found = m;
      return true;
    }
    for (Point y : allowed[p]) {
      if (++pending == 4096) {
        budget.charge(pending, "morphism search");
        pending = 0;
      }
      m[p] = y;
      bool ok = true;
      for (const auto& cube : by_top[p]) {
        image.resize(cube.size());
        for (std::size_t v = 0; v < cube.size(); ++v) image[v] = m[cube[v]];
        if (!to.member_unchecked(image)) {
          ok = false;
          break;
        }
      }
      if (ok && self(self, p + 1)) return true;
    }
    return false;
  };
  dfs(dfs, 0);
  if (pending) budget.charge(pending, "morphism search");
  return found;
}

namespace {

Int structure_exponent(const BundleDecomposition& bd) {
  Int e = 1;
  for (const auto& g : bd.groups) e = lcm(e, g.group.exponent());
  return e;
}

std::vector<int> structure_ranks(const BundleDecomposition& bd) {
  std::vector<int> r;
  for (const auto& g : bd.groups) r.push_back(static_cast<int>(g.group.rank()));
  return r;
}

struct Level {
  Cubespace space;  // free part built so far
  PointMap h;       // space -> X_j ground
};

// One step of the tower: given h: free -> X_(j-1), a section of the subdirect
// product with X_j. Returns the chosen point of X_j over every free point.
std::optional<PointMap> section_over(const BundleDecomposition& bd, int j, const Level& prev,
                                     Int modulus, const std::vector<int>& prefix, SearchBudget& budget,
                                     std::vector<std::string>& diag) {
  const Cubespace& xj = bd.factors[j].space;
  const Cubespace& xjm1 = bd.factors[j - 1].space;
  const int dim = std::min({j + 1, xj.n_max(), prev.space.n_max()});
  const SubdirectProduct q = subdirect_product(prev.space, xj, xjm1, prev.h, bd.down[j], dim);
  PointMap proj(q.pairs.size());
  for (Point c = 0; c < proj.size(); ++c) proj[c] = q.pairs[c].first;
  const FinAbGroup& aj = bd.groups[j - 1].group;
  Extension ext;
  try {
    ext = verify_extension(q.space, prev.space, aj, proj, j, dim, budget);
  } catch (const StructuralFailure& e) {
    diag.push_back("level " + std::to_string(j) + ": subdirect product is not an extension: " + e.what());
    return std::nullopt;
  }
  const SectionResult sec = split_free_extension(ext, modulus, prefix, budget);
  if (!sec.section) {
    diag.push_back("level " + std::to_string(j) + ", modulus " + std::to_string(modulus) +
                   ": no section (" + sec.method + ", " + std::to_string(sec.candidates) + " candidates)");
    return std::nullopt;
  }
  diag.push_back("level " + std::to_string(j) + ": section via " + sec.method);
  PointMap s(prev.space.size());
  for (Point x = 0; x < s.size(); ++x) s[x] = q.pairs[(*sec.section)[x]].second;
  return s;
}

// Builds the free tower up to level `top`. With last_as_group the top level
// uses D_top(A_top) itself instead of the free cover of A_top.
std::optional<Level> build_tower(const BundleDecomposition& bd, int top, Int modulus, bool last_as_group,
                                 SearchBudget& budget, std::vector<std::string>& diag) {
  const auto ranks = structure_ranks(bd);
  Level cur{point_space(), PointMap{0}};
  std::vector<int> prefix;
  for (int j = 1; j <= top; ++j) {
    auto s = section_over(bd, j, cur, modulus, prefix, budget, diag);
    if (!s) return std::nullopt;
    const StructureGroup& sg = bd.groups[j - 1];
    const FinAbGroup& aj = sg.group;
    const bool as_group = last_as_group && j == top;
    const std::uint64_t fsize = as_group ? aj.order() : checked_pow(modulus, ranks[j - 1]);
    std::vector<int> next_prefix = prefix;
    next_prefix.push_back(ranks[j - 1]);
    Level next;
    if (as_group) {
      const Cubespace fiber = dk_structure(aj, j);
      next.space = cur.space.size() == 1 ? fiber : product(cur.space, fiber);
    } else {
      next.space = mod_free_nilspace(modulus, next_prefix);
    }
    next.h.resize(next.space.size());
    for (Point p = 0; p < next.space.size(); ++p) {
      const Point x = static_cast<Point>(p / fsize);
      const Point z = static_cast<Point>(p % fsize);
      std::uint64_t g;
      if (as_group) {
        g = z;
      } else {
        // Canonical surjection: the t-th free generator goes to the t-th
        // invariant-factor generator of A_j.
        g = aj.index_of(aj.reduce(free_coords(modulus, ranks[j - 1], z)));
      }
      next.h[p] = sg.action.apply(g, (*s)[x]);
    }
    cur = std::move(next);
    prefix = std::move(next_prefix);
  }
  return cur;
}

PointMap to_ground(const BundleDecomposition& bd, const PointMap& h) {
  const PointMap& proj = bd.factors.back().proj;
  PointMap inv(proj.size());
  for (Point p = 0; p < proj.size(); ++p) inv[proj[p]] = p;
  PointMap out(h.size());
  for (Point x = 0; x < h.size(); ++x) out[x] = inv[h[x]];
  return out;
}

}  // namespace

FreeFactor factor_to_finite(const Cubespace& n, int k, int alpha_cap, SearchBudget& budget) {
  if (k < 1) throw InvalidArgument("step must be >= 1");
  const BundleDecomposition bd = verify_degree_bundle(n, k, std::min(k + 1, n.n_max()), budget);
  const Int e = structure_exponent(bd);
  FreeFactor out;
  out.exponent = e;
  out.rank.ranks = structure_ranks(bd);
  for (int alpha = 1; alpha <= std::max(alpha_cap, 1); ++alpha) {
    const std::uint64_t m = checked_pow(e, alpha);
    if (checked_pow(m, out.rank.dims()) > (std::uint64_t{1} << 16)) {
      out.diagnostics.push_back("alpha " + std::to_string(alpha) + ": free nilspace too large, stopping");
      break;
    }
    const auto level = build_tower(bd, k, static_cast<Int>(m), false, budget, out.diagnostics);
    if (!level) continue;
    PointMap h = to_ground(bd, level->h);
    if (!is_factor_map(h, level->space, n, k)) {
      out.diagnostics.push_back("alpha " + std::to_string(alpha) + ": assembled map is not a factor map");
      continue;
    }
    out.alpha = alpha;
    out.rank.modulus = static_cast<Int>(m);
    out.space = level->space;
    out.h = std::move(h);
    out.diagnostics.push_back("factor map certified with alpha " + std::to_string(alpha));
    return out;
  }
  std::string all;
  for (const auto& d : out.diagnostics) all += d + "; ";
  throw StructuralFailure("no free factor found up to alpha " + std::to_string(alpha_cap), all);
}

FreeFactor factor_to_finite(const Cubespace& n, int k, int alpha_cap) {
  SearchBudget budget;
  return factor_to_finite(n, k, alpha_cap, budget);
}

MorphismLift lift_morphism(const FinAbGroup& a, const PointMap& phi, const Cubespace& n, int k, int ext_cap,
                           int alpha_cap, SearchBudget& budget) {
  if (!a.is_normal_form()) throw InvalidArgument("the source group must be given by its invariant factors");
  if (phi.size() != a.order()) throw InvalidArgument("phi must have one image per group element");
  const Cubespace lin = linear_structure(a);
  if (!is_morphism(phi, lin, n, morphism_check_dim(k, std::min(lin.n_max(), n.n_max())), budget))
    throw InvalidArgument("phi is not a morphism from the linear structure of A");
  const BundleDecomposition bd = verify_degree_bundle(n, k, std::min(k + 1, n.n_max()), budget);
  const Int e = structure_exponent(bd);
  MorphismLift out;
  out.lower_ranks = structure_ranks(bd);
  out.lower_ranks.pop_back();
  out.diagnostics.push_back("reading: beta(psi(b)) = phi(tau(b)), i.e. psi first, then beta");

  std::optional<Level> level;
  for (int alpha = 1; alpha <= std::max(alpha_cap, 1) && !level; ++alpha) {
    out.modulus = static_cast<Int>(checked_pow(e, alpha));
    level = build_tower(bd, k, out.modulus, true, budget, out.diagnostics);
  }
  if (!level) throw StructuralFailure("no free model F' of N found within the alpha cap");
  out.fprime = level->space;
  out.beta = to_ground(bd, level->h);
  if (!is_factor_map(out.beta, out.fprime, n, k)) throw StructuralFailure("beta is not a factor map");

  std::vector<std::vector<Point>> preimage(n.size());
  for (Point x = 0; x < out.beta.size(); ++x) preimage[out.beta[x]].push_back(x);
  for (int i = 1; i <= ext_cap; ++i) {
    GroupExtension ext = height_extension(a, i);
    const FinAbGroup& b = ext.total;
    if (b.order() > 4096) break;
    std::vector<std::vector<Point>> allowed(b.order());
    for (std::uint64_t x = 0; x < b.order(); ++x)
      allowed[x] = preimage[phi[a.index_of(ext.proj.apply(b.element_at(x)))]];
    const Cubespace lb = linear_structure(b);
    auto psi = search_morphism(lb, out.fprime, allowed, std::min(k + 1, lb.n_max()), budget);
    if (!psi) {
      out.diagnostics.push_back("height " + std::to_string(i) + " (B = " + b.str() + "): no lift");
      continue;
    }
    out.diagnostics.push_back("height " + std::to_string(i) + " (B = " + b.str() + "): lift found");
    out.height = i;
    out.ext.emplace(std::move(ext));
    out.psi = std::move(*psi);
    return out;
  }
  throw StructuralFailure("no lift within the extension cap");
}

}  // namespace nilspace
