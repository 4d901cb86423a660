#include "nilspace/extension.hpp"

#include <algorithm>
#include <set>

#include "nilspace/axioms.hpp"
#include "nilspace/enumerate.hpp"
#include "nilspace/error.hpp"
#include "nilspace/translation.hpp"

namespace nilspace {

namespace {

std::vector<std::vector<Point>> fibers_of(const PointMap& proj, std::size_t base_size) {
  std::vector<std::vector<Point>> fibers(base_size);
  for (Point x = 0; x < proj.size(); ++x) {
    if (proj[x] >= base_size) throw InvalidArgument("projection value outside the base");
    fibers[proj[x]].push_back(x);
  }
  return fibers;
}

}  // namespace

int default_extension_check_dim(const Cubespace& total, const Cubespace& base, int k) {
  const int step = std::max(k, base.step_hint().value_or(k));
  return std::min({step + 1, total.n_max(), base.n_max()});
}

Extension verify_extension(const Cubespace& total, const Cubespace& base, const FinAbGroup& group,
                           const PointMap& proj, int k, int n_check, SearchBudget& budget,
                           const FiberAction* action) {
  if (k < 1) throw InvalidArgument("extension degree must be >= 1");
  if (proj.size() != total.size()) throw InvalidArgument("projection size mismatch");
  const auto fibers = fibers_of(proj, base.size());
  for (const auto& f : fibers)
    if (f.size() != group.order())
      throw InvalidArgument("projection must be onto with fibers of size |A|");
  if (n_check <= 0) n_check = default_extension_check_dim(total, base, k);
  n_check = std::min({n_check, total.n_max(), base.n_max()});

  Extension ext;
  ext.total = total;
  ext.base = base;
  ext.proj = proj;
  ext.degree = k;
  ext.checked_upto = n_check;
  if (action) {
    if (!action->group.isomorphic_to(group) || action->act.size() != group.order())
      throw InvalidArgument("action group does not match the extension group");
    for (const auto& p : action->act)
      if (p.size() != total.size() || !is_permutation(p))
        throw InvalidArgument("action elements must be permutations of the total space");
    ext.action = *action;
  } else {
    ext.action = fiber_translation_action(total, proj, base.size(), k,
                                          std::min(std::max(n_check, k + 1), total.n_max()), budget);
    if (!ext.action.group.isomorphic_to(group))
      throw StructuralFailure("fiber group is " + ext.action.group.str() + ", expected " + group.str());
  }
  if (auto w = check_lift_conditions(total, base, proj, ext.action, k, n_check, budget))
    throw StructuralFailure("extension condition fails", *w);
  return ext;
}

Extension verify_extension(const Cubespace& total, const Cubespace& base, const FinAbGroup& group,
                           const PointMap& proj, int k) {
  SearchBudget budget;
  return verify_extension(total, base, group, proj, k, default_extension_check_dim(total, base, k),
                          budget);
}

Extension trivial_extension(const Cubespace& base, const FinAbGroup& group, int k,
                            SearchBudget& budget, int n_check, bool certify) {
  const Cubespace fiber = dk_structure(group, k);
  const Cubespace total = product(base, fiber);
  const std::size_t a = group.order();
  PointMap proj(total.size());
  for (Point p = 0; p < total.size(); ++p) proj[p] = static_cast<Point>(p / a);
  FiberAction action;
  action.group = group;
  const auto elems = group.elements();
  for (std::size_t b = 0; b < a; ++b) {
    PointMap m(total.size());
    for (Point p = 0; p < total.size(); ++p) {
      const Element sum = group.add(elems[p % a], elems[b]);
      m[p] = static_cast<Point>((p / a) * a + group.index_of(sum));
    }
    action.act.push_back(std::move(m));
  }
  if (n_check <= 0) n_check = default_extension_check_dim(total, base, k);
  if (certify) return verify_extension(total, base, group, proj, k, n_check, budget, &action);
  // Lifts of a base cube c are the pairs (c, g) with g a cube of D_k(A).
  Extension ext;
  ext.total = total;
  ext.base = base;
  ext.proj = std::move(proj);
  ext.degree = k;
  ext.action = std::move(action);
  ext.checked_upto = std::min({n_check, total.n_max(), base.n_max()});
  return ext;
}

Extension group_extension_space(const GroupExtension& ge, int k, SearchBudget& budget, int n_check) {
  const Cubespace total = dk_structure(ge.total, k);
  const Cubespace base = dk_structure(ge.base, k);
  PointMap proj(total.size());
  for (Point p = 0; p < total.size(); ++p)
    proj[p] = static_cast<Point>(ge.base.index_of(ge.proj.apply(ge.total.element_at(p))));
  std::vector<Int> orders;
  for (const auto& c : ge.proj.kernel()) orders.push_back(ge.total.element_order(c));
  const FinAbGroup kernel(invariant_factors_from_orders(orders));
  if (n_check <= 0) n_check = default_extension_check_dim(total, base, k);
  return verify_extension(total, base, kernel, proj, k, n_check, budget);
}

Cubespace pullback_space(const Cubespace& total, const Cubespace& base, const PointMap& proj) {
  if (proj.size() != total.size()) throw InvalidArgument("projection size mismatch");
  return make_space<LambdaSpace>(
      total.size(),
      [total, base, proj](CubeView c) {
        if (!total.member_unchecked(c)) return false;
        std::vector<Point> image(c.size());
        for (std::size_t v = 0; v < c.size(); ++v) image[v] = proj[c[v]];
        return base.member_unchecked(image);
      },
      "pullback(" + total.describe() + " -> " + base.describe() + ")",
      std::min(total.n_max(), base.n_max()), std::min(total.full_dimension(), base.full_dimension()));
}

SectionResult find_section(const Extension& ext, SearchBudget& budget) {
  const auto fibers = fibers_of(ext.proj, ext.base.size());
  const int n_check = ext.checked_upto;
  // Base cubes of every checked dimension, bucketed by their largest point.
  std::vector<std::vector<std::vector<Point>>> by_top(ext.base.size());
  std::vector<std::vector<Point>> all_cubes;
  for (int n = 1; n <= n_check; ++n) {
    for_each_cube(ext.base, n, budget, [&](CubeView c) {
      const Point top = *std::max_element(c.begin(), c.end());
      by_top[top].emplace_back(c.begin(), c.end());
      return true;
    });
  }
  std::vector<Point> image;
  auto cube_ok = [&](const std::vector<Point>& c, const PointMap& m) {
    image.resize(c.size());
    for (std::size_t v = 0; v < c.size(); ++v) image[v] = m[c[v]];
    return ext.total.member_unchecked(image);
  };

  SectionResult r;
  const std::uint64_t total = checked_pow(ext.action.group.order(), ext.base.size());
  if (total <= kExhaustiveSectionLimit) {
    r.method = "exhaustive";
    budget.charge(total, "section search");
    PointMap m(ext.base.size());
    const std::size_t a = ext.action.group.order();
    for (std::uint64_t code = 0; code < total; ++code) {
      std::uint64_t c = code;
      for (std::size_t p = m.size(); p-- > 0;) {
        m[p] = fibers[p][c % a];
        c /= a;
      }
      ++r.candidates;
      bool ok = true;
      for (const auto& bucket : by_top) {
        for (const auto& cube : bucket)
          if (!cube_ok(cube, m)) {
            ok = false;
            break;
          }
        if (!ok) break;
      }
      if (ok) {
        r.section = m;
        return r;
      }
      ++r.rejected;
    }
    return r;
  }

  r.method = "pruned";
  PointMap m(ext.base.size(), 0);
  std::uint64_t pending = 0;
  auto dfs = [&](auto&& self, Point p) -> bool {
    if (p == m.size()) {
      r.section = m;
      return true;
    }
    const std::vector<Point> first_only{fibers[0][0]};
    const auto& cand = p == 0 ? first_only : fibers[p];
    for (Point x : cand) {
      ++r.candidates;
      if (++pending == 4096) {
        budget.charge(pending, "section search");
        pending = 0;
      }
      m[p] = x;
      bool ok = true;
      for (const auto& cube : by_top[p])
        if (!cube_ok(cube, m)) {
          ok = false;
          break;
        }
      if (!ok) {
        ++r.rejected;
        continue;
      }
      if (self(self, p + 1)) return true;
    }
    return false;
  };
  dfs(dfs, 0);
  if (pending) budget.charge(pending, "section search");
  return r;
}

SectionResult find_section(const Extension& ext) {
  SearchBudget budget;
  return find_section(ext, budget);
}

TranslationBundle translation_bundle(const PointMap& alpha, const Cubespace& space, int i, int k,
                                     SearchBudget& budget) {
  if (i < 1) throw InvalidArgument("translation height must be >= 1");
  if (k < i + 1) throw UnsupportedCase("translation bundles need k >= i+1");
  const Factor lower = factor_nilspace(space, k - 1);
  const std::size_t m = lower.partition.classes.size();
  if (alpha.size() != m || !is_permutation(alpha))
    throw InvalidArgument("alpha must be a permutation of F_(k-1)(N)");
  {
    const int dim = std::min(translation_check_dim(k - 1, i), lower.space.n_max());
    if (!TranslationChecker(lower.space, i, dim, budget).check(alpha))
      throw InvalidArgument("alpha is not a height-i translation of F_(k-1)(N)");
  }
  TranslationBundle tb;
  const std::size_t s = space.size();
  std::vector<Point> points;
  for (Point x = 0; x < s; ++x)
    for (Point y = 0; y < s; ++y)
      if (alpha[lower.proj[x]] == lower.proj[y]) {
        tb.pairs.emplace_back(x, y);
        points.push_back(static_cast<Point>(x * s + y));
      }
  tb.t = induced_subspace(make_space<ArrowSpace>(space, i), std::move(points), "T");
  for (Point a = 0; a < tb.pairs.size(); ++a)
    for (Point b = 0; b < tb.pairs.size(); ++b) {
      const Point edge[2] = {a, b};
      if (!tb.t.member_unchecked(edge))
        throw StructuralFailure("T is not ergodic", "pair " + std::to_string(a) + "," + std::to_string(b));
    }
  tb.tstar = factor_nilspace(tb.t, k - 1);
  PointMap tproj(tb.tstar.partition.classes.size());
  for (Point c = 0; c < tproj.size(); ++c) {
    const auto& members = tb.tstar.partition.classes[c];
    tproj[c] = lower.proj[tb.pairs[members[0]].first];
    for (Point q : members)
      if (lower.proj[tb.pairs[q].first] != tproj[c])
        throw StructuralFailure("T* does not project to F_(k-1)(N)");
  }
  const FinAbGroup ak = structure_group(space, k, budget).group;
  const int n_check = std::min({k, tb.tstar.space.n_max(), lower.space.n_max()});
  tb.ext = verify_extension(tb.tstar.space, lower.space, ak, tproj, k - i, n_check, budget);
  return tb;
}

TranslationLift lift_translation(const PointMap& alpha, const Cubespace& total, const PointMap& proj,
                                 std::size_t base_size, int i, int check_dim, SearchBudget& budget) {
  if (alpha.size() != base_size || !is_permutation(alpha))
    throw InvalidArgument("alpha must be a permutation of the base");
  const auto fibers = fibers_of(proj, base_size);
  std::vector<std::vector<Point>> allowed(total.size());
  for (Point x = 0; x < total.size(); ++x) allowed[x] = fibers[alpha[proj[x]]];
  TranslationLift out;
  out.method = "search";
  const TranslationChecker checker(total, i, std::min(check_dim, total.n_max()), budget);
  auto hits = checker.search(budget, &allowed, 1);
  if (hits.empty()) {
    out.certificate = "no fiber-compatible bijection is a height-" + std::to_string(i) + " translation";
    return out;
  }
  for (Point x = 0; x < total.size(); ++x)
    if (proj[hits[0][x]] != alpha[proj[x]]) throw StructuralFailure("lift does not cover alpha");
  out.beta = std::move(hits[0]);
  out.certificate = "height-" + std::to_string(i) + " translation checked up to n=" +
                    std::to_string(checker.check_dim());
  return out;
}

TranslationLift lift_translation(const PointMap& alpha, const Cubespace& space, int i, int k,
                                 SearchBudget& budget) {
  const Factor lower = factor_nilspace(space, k - 1);
  const int check_dim = std::min(translation_check_dim(k, i), space.n_max());
  std::string note;
  if (k >= i + 1) {
    try {
      const TranslationBundle tb = translation_bundle(alpha, space, i, k, budget);
      const SectionResult sec = find_section(tb.ext, budget);
      if (sec.section) {
        // The chosen class over u pairs each x above u with one y above alpha(u).
        PointMap beta(space.size(), UINT32_MAX);
        bool ok = true;
        for (Point u = 0; u < sec.section->size() && ok; ++u) {
          for (Point q : tb.tstar.partition.classes[(*sec.section)[u]]) {
            const auto [x, y] = tb.pairs[q];
            if (beta[x] != UINT32_MAX && beta[x] != y) ok = false;
            beta[x] = y;
          }
        }
        ok = ok && is_permutation(beta);
        if (ok && TranslationChecker(space, i, check_dim, budget).check(beta)) {
          TranslationLift out;
          out.beta = beta;
          out.method = "section";
          out.certificate = "section of T* (" + sec.method + "), height-" + std::to_string(i) +
                            " translation checked up to n=" + std::to_string(check_dim);
          return out;
        }
        note = "section of T* did not give a translation; ";
      } else {
        note = "T* has no section at this scale; ";
      }
    } catch (const StructuralFailure& e) {
      note = std::string("T* route failed: ") + e.what() + "; ";
    }
  }
  TranslationLift out =
      lift_translation(alpha, space, lower.proj, lower.partition.classes.size(), i, check_dim, budget);
  out.certificate = note + out.certificate;
  return out;
}

SectionResult split_free_extension(const Extension& ext, Int modulus, const std::vector<int>& ranks,
                                   SearchBudget& budget) {
  std::vector<int> height_of;  // per free coordinate
  for (std::size_t i = 0; i < ranks.size(); ++i)
    for (int j = 0; j < ranks[i]; ++j) height_of.push_back(static_cast<int>(i) + 1);
  const std::size_t dims = height_of.size();
  if (checked_pow(modulus, dims) != ext.base.size())
    throw InvalidArgument("extension base is not the modulo-n free nilspace of these ranks");
  const auto fibers = fibers_of(ext.proj, ext.base.size());
  auto coords = [&](Point p) {
    std::vector<Int> c(dims);
    for (std::size_t t = dims; t-- > 0;) {
      c[t] = p % modulus;
      p /= static_cast<Point>(modulus);
    }
    return c;
  };
  auto index = [&](const std::vector<Int>& c) {
    Point p = 0;
    for (Int x : c) p = static_cast<Point>(p * modulus + x);
    return p;
  };

  // Lift every generator shift of the base.
  std::vector<PointMap> lifts;
  bool lifted = true;
  for (std::size_t t = 0; t < dims && lifted; ++t) {
    PointMap shift(ext.base.size());
    for (Point p = 0; p < shift.size(); ++p) {
      auto c = coords(p);
      c[t] = mod(c[t] + 1, modulus);
      shift[p] = index(c);
    }
    const int check_dim = std::min(std::max(ext.checked_upto, height_of[t] + 1), ext.total.n_max());
    auto l = lift_translation(shift, ext.total, ext.proj, ext.base.size(), height_of[t], check_dim, budget);
    if (!l.beta) lifted = false;
    else lifts.push_back(std::move(*l.beta));
  }

  if (lifted) {
    const Point origin = fibers[0][0];
    for (int order = 0; order < 2; ++order) {
      PointMap h(ext.base.size());
      for (Point p = 0; p < h.size(); ++p) {
        const auto c = coords(p);
        Point x = origin;
        for (std::size_t s = 0; s < dims; ++s) {
          const std::size_t t = order == 0 ? dims - 1 - s : s;
          for (Int e = 0; e < c[t]; ++e) x = lifts[t][x];
        }
        h[p] = x;
      }
      bool ok = true;
      for (Point p = 0; p < h.size(); ++p) ok = ok && ext.proj[h[p]] == p;
      if (ok && is_morphism(h, ext.base, ext.total, ext.checked_upto, budget)) {
        SectionResult r;
        r.section = h;
        r.method = "translation-lift";
        r.candidates = order + 1;
        r.rejected = order;
        return r;
      }
    }
  }
  SectionResult r = find_section(ext, budget);
  r.method += " (fallback)";
  return r;
}

}  // namespace nilspace
