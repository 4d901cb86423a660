// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nilspace/axioms.hpp"
#include "nilspace/enumerate.hpp"
#include "nilspace/error.hpp"
#include "nilspace/extension.hpp"
#include "nilspace/free_nilspace.hpp"
#include "nilspace/gowers.hpp"
#include "nilspace/harness.hpp"
#include "nilspace/translation.hpp"
#include "oracles.hpp"

using namespace nilspace;

namespace {

constexpr double kTol = 1e-9;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (pass) detail.str("");
    if (!pass) detail << "; ";
    pass = false;
    detail << why;
  }
};

using Seconds = std::chrono::duration<double>;
double since(std::chrono::steady_clock::time_point t0) {
  return Seconds(std::chrono::steady_clock::now() - t0).count();
}

const std::vector<std::vector<Int>> kAxiomGroups{{2}, {3}, {4}, {2, 2}};

std::string gname(const FinAbGroup& g) { return g.str(); }

std::vector<Complex> random_disk(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Complex> v(n);
  for (auto& z : v) z = std::polar(std::sqrt(u(rng)), 2 * M_PI * u(rng));
  return v;
}

// ---------------------------------------------------------------------------

void axioms(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& orders : kAxiomGroups)
    for (int k = 1; k <= 2; ++k) {
      const FinAbGroup g(orders);
      const AxiomReport r = check_axioms(dk_structure(g, k), k + 2);
      const std::string tag = "D_" + std::to_string(k) + "(" + gname(g) + ")";
      if (!r.all_ok()) o.fail(tag + " axioms");
      if (r.kstep != k) o.fail(tag + " step");
      const auto& at_k = r.dims[k];
      const auto& at_k1 = r.dims[k + 1];
      if (at_k.min_completions != g.order() || at_k.max_completions != g.order())
        o.fail(tag + " completions at k");
      if (at_k1.min_completions != 1 || at_k1.max_completions != 1) o.fail(tag + " completions at k+1");
    }
  const double secs = since(t0);
  if (secs > 300.0) o.fail("took " + std::to_string(secs) + "s");
  if (o.pass) o.detail << "8 structures, " << secs << "s";
}

void fullness(Outcome& o) {
  std::uint64_t checked = 0;
  for (const auto& orders : kAxiomGroups)
    for (int k = 1; k <= 2; ++k) {
      const FinAbGroup g(orders);
      const Cubespace s = dk_structure(g, k);
      for (int n = 0; n <= k; ++n) {
        const std::size_t verts = std::size_t{1} << n;
        const std::uint64_t total = oracle::ipow(g.order(), static_cast<unsigned>(verts));
        std::vector<Point> c(verts);
        for (std::uint64_t idx = 0; idx < total; ++idx) {
          std::uint64_t r = idx;
          for (auto& p : c) p = static_cast<Point>(r % g.order()), r /= g.order();
          ++checked;
          if (!s.member(c)) {
            o.fail("D_" + std::to_string(k) + "(" + gname(g) + ") misses a map at n=" + std::to_string(n));
            break;
          }
        }
        SearchBudget b;
        if (enumerate_cubes(s, n, b).size() != total * verts) o.fail("enumeration count");
      }
    }
  if (o.pass) o.detail << checked << " maps, zero exceptions";
}

void gowers_oracle(Outcome& o) {
  std::mt19937_64 rng(20240601);
  double worst = 0.0;
  for (const auto& orders : std::vector<std::vector<Int>>{{2}, {3}, {5}, {2, 2}}) {
    const FinAbGroup g(orders);
    for (int rep = 0; rep < 50; ++rep) {
      const GroupFunction f(g, random_disk(g.order(), rng));
      worst = std::max(worst, std::abs(gowers_norm(f, 2) - gowers_u2_fourier(f)));
    }
  }
  if (worst > kTol) o.fail("random U2 mismatch " + std::to_string(worst));
  for (Int m : {2, 3, 4}) {
    // Parallelepipeds (x, x+a, x+b, x+a+b) lying entirely at 0.
    std::uint64_t solutions = 0;
    for (Int x = 0; x < m; ++x)
      for (Int a = 0; a < m; ++a)
        for (Int b = 0; b < m; ++b) solutions += x == 0 && a == 0 && b == 0;
    const double oracle_value = std::pow(static_cast<double>(solutions) / std::pow(m, 3.0), 0.25);
    std::vector<Complex> v(m, 0.0);
    v[0] = 1.0;
    const GroupFunction dirac(FinAbGroup({m}), v);
    const double got = gowers_norm(dirac, 2);
    if (std::abs(got - oracle_value) > kTol || std::abs(got - std::pow(m, -0.75)) > kTol)
      o.fail("Dirac on Z_" + std::to_string(m));
  }
  if (o.pass) o.detail << "200 random functions, max diff " << worst << "; Dirac m=2,3,4";
}

std::vector<FinAbGroup> groups_upto(std::uint64_t n) {
  std::vector<std::vector<Int>> all{{1}, {2}, {3}, {4}, {5}, {6}, {7}, {8}, {2, 2}, {2, 4}, {2, 2, 2},
                                    {9}, {3, 3}, {10}, {11}, {12}, {2, 6}, {13}, {14}, {15}, {16},
                                    {2, 8}, {4, 4}, {2, 2, 4}, {2, 2, 2, 2}};
  std::vector<FinAbGroup> out;
  for (auto& o : all)
    if (FinAbGroup(o).order() <= n) out.emplace_back(o);
  return out;
}

void phase_norm(Outcome& o) {
  std::mt19937_64 rng(4);
  std::uint64_t certified = 0, tried = 0;
  double worst = 0.0;
  for (const FinAbGroup& g : groups_upto(8)) {
    const Int e = g.exponent();
    const auto idx = multi_indices(static_cast<int>(g.num_factors()), 2);
    const Int den = e * e * 2;
    for (int rep = 0; rep < 60; ++rep) {
      BinomialPhase form{static_cast<int>(g.num_factors()), {}};
      for (const auto& r : idx) form.terms[r] = Phase(static_cast<Int>(rng() % den), den);
      const GroupFunction f = PhaseCoeffs{g, form}.evaluate();
      for (int k = 1; k <= 2; ++k) {
        ++tried;
        if (!is_phase_polynomial(f, k).ok) continue;
        ++certified;
        worst = std::max(worst, std::abs(gowers_norm(f, k + 1) - 1.0));
      }
    }
    // Every function with phases in (1/e)Z on the small groups.
    if (g.order() <= 4) {
      const std::uint64_t total = oracle::ipow(e, static_cast<unsigned>(g.order()));
      for (std::uint64_t idx2 = 0; idx2 < total; ++idx2) {
        std::vector<Phase> ph(g.order());
        std::uint64_t r = idx2;
        for (auto& p : ph) p = Phase(static_cast<Int>(r % e), e), r /= e;
        const GroupFunction f = GroupFunction::from_phases(g, ph);
        for (int k = 1; k <= 2; ++k) {
          ++tried;
          if (!is_phase_polynomial(f, k).ok) continue;
          ++certified;
          worst = std::max(worst, std::abs(gowers_norm(f, k + 1) - 1.0));
        }
      }
    }
  }
  if (worst > kTol) o.fail("norm off by " + std::to_string(worst));
  if (certified == 0) o.fail("nothing certified");
  const FinAbGroup z4({4});
  const GroupFunction sq =
      GroupFunction::from_phases(z4, {Phase(0, 4), Phase(1, 4), Phase(4, 4), Phase(9, 4)});
  if (!is_phase_polynomial(sq, 2).ok) o.fail("i^{x^2} not degree 2");
  if (is_phase_polynomial(sq, 1).ok) o.fail("i^{x^2} certified degree 1");
  if (o.pass) o.detail << certified << "/" << tried << " certified, max |norm-1| " << worst;
}

void lift_invariance(Outcome& o) {
  std::mt19937_64 rng(5);
  std::uint64_t pairs = 0;
  double worst = 0.0;
  for (const FinAbGroup& a : groups_upto(16)) {
    if (a.order() < 2 || !a.is_normal_form()) continue;
    for (int h = 1; h <= 4; ++h) {
      const GroupExtension ext = height_extension(a, h);
      if (ext.total.order() > 16) break;
      ++pairs;
      const GroupFunction f(a, random_disk(a.order(), rng));
      const GroupFunction lf = lift_function(f, ext);
      for (int d = 1; d <= 3; ++d) worst = std::max(worst, std::abs(gowers_norm(lf, d) - gowers_norm(f, d)));
    }
  }
  if (worst > kTol) o.fail("difference " + std::to_string(worst));
  if (o.pass) o.detail << pairs << " extensions, d=1..3, max diff " << worst;
}

// Test-side morphism count through the alternating-sum oracle, for
// target step j <= 2 (cubes of dimension <= 3 suffice).
std::uint64_t oracle_morphism_count(const FinAbGroup& a, int i, const FinAbGroup& b, int j) {
  const auto ea = a.elements();
  const auto eb = b.elements();
  std::vector<std::vector<std::vector<std::uint32_t>>> cubes(j + 2);
  for (int n = 1; n <= j + 1; ++n) {
    const std::size_t verts = std::size_t{1} << n;
    const std::uint64_t total = oracle::ipow(a.order(), static_cast<unsigned>(verts));
    std::vector<std::uint32_t> c(verts);
    std::vector<Element> ce(verts);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      std::uint64_t r = idx;
      for (std::size_t v = 0; v < verts; ++v) {
        c[v] = static_cast<std::uint32_t>(r % a.order());
        r /= a.order();
        ce[v] = ea[c[v]];
      }
      if (oracle::dk_member(a, i, ce)) cubes[n].push_back(c);
    }
  }
  std::map<std::vector<std::uint32_t>, bool> memo;
  std::uint64_t count = 0;
  const std::uint64_t maps = oracle::ipow(b.order(), static_cast<unsigned>(a.order()));
  std::vector<std::uint32_t> f(a.order());
  for (std::uint64_t idx = 0; idx < maps; ++idx) {
    std::uint64_t r = idx;
    for (auto& x : f) x = static_cast<std::uint32_t>(r % b.order()), r /= b.order();
    bool ok = true;
    for (int n = 1; n <= j + 1 && ok; ++n)
      for (const auto& c : cubes[n]) {
        std::vector<std::uint32_t> img(c.size());
        for (std::size_t v = 0; v < c.size(); ++v) img[v] = f[c[v]];
        auto it = memo.find(img);
        if (it == memo.end()) {
          std::vector<Element> ie(img.size());
          for (std::size_t v = 0; v < img.size(); ++v) ie[v] = eb[img[v]];
          it = memo.emplace(img, oracle::dk_member(b, j, ie)).first;
        }
        if (!it->second) {
          ok = false;
          break;
        }
      }
    count += ok;
  }
  return count;
}

void derivmorph(Outcome& o) {
  std::uint64_t cases = 0, morphisms = 0, crosschecked = 0;
  for (Int na : {1, 2, 3})
    for (Int nb : {1, 2, 3})
      for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) {
          const FinAbGroup a({na}), b({nb});
          SearchBudget budget;
          const DerivmorphReport r = check_derivmorph(a, b, i, j, budget);
          ++cases;
          morphisms += r.morphisms;
          const std::string tag = "Hom(D_" + std::to_string(i) + "(Z_" + std::to_string(na) + "),D_" +
                                  std::to_string(j) + "(Z_" + std::to_string(nb) + "))";
          if (!r.holds()) o.fail(tag + " has " + std::to_string(r.exceptions.size()) + " exceptions");
          if (j <= 2) {
            ++crosschecked;
            if (oracle_morphism_count(a, i, b, j) != r.morphisms) o.fail(tag + " count differs from oracle");
          }
        }
  if (o.pass)
    o.detail << cases << " cases, " << morphisms << " morphisms, " << crosschecked
             << " counts matched by the alternating-sum oracle, zero exceptions";
}

Cubespace d(std::vector<Int> orders, int k) { return dk_structure(FinAbGroup(std::move(orders)), k); }

void extensions(Outcome& o) {
  SearchBudget b;
  PointMap mod2{0, 1, 0, 1};
  const Extension e = verify_extension(d({4}, 1), d({2}, 1), FinAbGroup({2}), mod2, 1, 0, b);
  const SectionResult none = find_section(e, b);
  if (none.section) o.fail("section found for Z_4 over Z_2");
  if (none.candidates != 4 || none.rejected != 4) o.fail("expected 4/4 rejected candidates");
  const std::vector<Cubespace> bases{point_space(), d({2}, 1), d({2}, 2), d({3}, 1), d({3}, 2),
                                     d({4}, 1), d({4}, 2), d({2, 2}, 1), d({2, 2}, 2),
                                     product(d({2}, 1), d({2}, 2)), d({5}, 1), d({8}, 1)};
  std::uint64_t split = 0;
  for (const auto& base : bases)
    for (const FinAbGroup& g : groups_upto(16)) {
      if (g.order() < 2 || base.size() * g.order() > 16) continue;
      for (int k = 1; k <= 2; ++k) {
        const Extension t = trivial_extension(base, g, k, b);
        const SectionResult s = find_section(t, b);
        bool ok = s.section.has_value();
        if (ok) {
          for (Point x = 0; x < base.size(); ++x) ok = ok && t.proj[(*s.section)[x]] == x;
          ok = ok && is_morphism(*s.section, t.base, t.total, t.checked_upto);
        }
        if (!ok) o.fail("no section for " + base.describe() + " x D_" + std::to_string(k) + "(" + g.str() + ")");
        split += ok;
      }
    }
  if (o.pass) o.detail << "Z_4/Z_2 certified, 4/4 rejected; " << split << " trivial extensions split";
}

void translations(Outcome& o) {
  const Cubespace z3 = d({3}, 1);
  PointMap p{0, 1, 2};
  std::vector<PointMap> brute;
  do {
    // Definition: moving a codimension-1 face of any cube of dim <= 2 by p stays a cube.
    bool ok = true;
    for (int n = 1; n <= 2 && ok; ++n) {
      SearchBudget b;
      const auto cubes = enumerate_cubes(z3, n, b);
      const std::size_t verts = std::size_t{1} << n;
      for (std::size_t c = 0; c < cubes.size() && ok; c += verts)
        for (const Face& f : faces(n, n - 1)) {
          std::vector<Point> moved(cubes.begin() + c, cubes.begin() + c + verts);
          for (Vertex v = 0; v < verts; ++v)
            if (f.contains(v)) moved[v] = p[moved[v]];
          if (!z3.member(moved)) {
            ok = false;
            break;
          }
        }
    }
    if (ok) brute.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  SearchBudget b;
  const TransGroup t = trans_group(z3, 1, 2, b);
  const std::vector<PointMap> shifts{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  if (brute != shifts) o.fail("brute force did not give the 3 shifts");
  if (t.elements != shifts) o.fail("trans_group did not give the 3 shifts");
  for (const auto& orders : kAxiomGroups)
    for (int k = 1; k <= 2; ++k) {
      const Cubespace s = d(orders, k);
      SearchBudget bb;
      const TransGroup top = trans_group(s, k + 1, translation_check_dim(k, k + 1), bb);
      if (top.elements.size() != 1 || top.elements[0] != identity_map(s.size()))
        o.fail("Trans_" + std::to_string(k + 1) + " of " + s.describe() + " not trivial");
    }
  const TranslationLift l = lift_translation(PointMap{1, 0}, d({4}, 1), PointMap{0, 1, 0, 1}, 2, 1, 2, b);
  if (!l.beta || *l.beta != PointMap{1, 2, 3, 0}) o.fail("shift lift Z_2 -> Z_4");
  if (o.pass) o.detail << "3/6 bijections, 8 top groups trivial, lift x -> x+1";
}

void periods(Outcome& o) {
  std::uint64_t maps = 0, morphism_pairs = 0;
  for (Int n : {2, 3}) {
    const FinAbGroup g({n});
    // Coefficients of binom(x, r), r = 0..3.
    for (Int idx = 0; idx < n * n * n * n; ++idx) {
      std::map<PolyMap::MultiIndex, Element> c;
      Int r = idx;
      for (int deg = 0; deg <= 3; ++deg, r /= n)
        if (r % n) c[{deg}] = Element({r % n});
      const PolyMap p(1, g, c);
      ++maps;
      const Int per = period_of_polymap(p);
      // A morphism D_i(Z) -> D_k(A) with i <= k is one D_1(Z) -> D_(k-i+1)(A).
      for (int i = 1; i <= 3; ++i)
        for (int k = i; k <= 3; ++k) {
          const int m = k - i + 1;
          if (!poly_is_morphism(p, 1, m)) continue;
          ++morphism_pairs;
          const Int bound = static_cast<Int>(oracle::ipow(n, static_cast<unsigned>(m)));
          if (bound % per != 0) o.fail(p.str() + " period " + std::to_string(per));
        }
      if (p.degree() >= 1 && !poly_is_morphism(p, 1, p.degree())) o.fail(p.str() + " not a D_1 -> D_deg morphism");
      if (p.degree() >= 2 && poly_is_morphism(p, 1, p.degree() - 1)) o.fail(p.str() + " below its degree");
    }
  }
  if (o.pass) o.detail << maps << " maps, " << morphism_pairs << " (i,k) morphism pairs, zero exceptions";
}

void inverse_pipeline(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const FinAbGroup z4({4});
  const PolyMap sq(1, z4, {{{1}, Element({1})}, {{2}, Element({2})}});  // b^2 = b + 2 binom(b, 2)
  const PhasePolynomial phi = phase_poly_from_coeffs(z4, sq, characters(z4)[1]);
  const GroupFunction f = project_phase(phi.f, height_extension(FinAbGroup({2}), 2));
  InverseSearchOptions opts;
  opts.k = 2;
  opts.q = 2;
  opts.ext_cap = 2;
  SearchBudget b;
  const CorrelationReport r = inverse_search(f, opts, b);
  const double secs = since(t0);
  if (r.height != 2) o.fail("height " + std::to_string(r.height));
  if (std::abs(r.magnitude - 1.0) > kTol || std::abs(r.recomputed - 1.0) > kTol) o.fail("correlation not 1");
  if (secs > 10.0) o.fail("took " + std::to_string(secs) + "s");
  const PhaseDecomposition dec = decompose_phase(phi, 2);
  if (!dec.found || !dec.phi1 || !dec.phi2) {
    o.fail("no decomposition");
  } else {
    const auto& p1 = *dec.phi1->f.phases();
    const auto& p2 = *dec.phi2->f.phases();
    for (Int x = 0; x < 4; ++x) {
      if (!(p1[x] == Phase(x, 4))) o.fail("phi1 is not i^b");
      if (!(p2[x] == Phase(binom(x, 2), 2))) o.fail("phi2 is not (-1)^binom(b,2)");
    }
    if (!is_phase_polynomial(dec.phi1->f, 1).ok) o.fail("phi1 not degree 1");
  }
  if (o.pass) o.detail << "correlation 1 at height 2 in " << secs << "s; pair (i^b, (-1)^binom(b,2))";
}

void tz(Outcome& o) {
  std::uint64_t forms = 0;
  for (Int p : {2, 3})
    for (int k = 1; k <= p - 1; ++k)
      for (int arity = 1; arity <= 2; ++arity) {
        std::vector<PolyMap::MultiIndex> idx;
        for (const auto& r : multi_indices(arity, k)) {
          int w = 0;
          for (int x : r) w += x;
          if (w >= 1) idx.push_back(r);
        }
        const std::uint64_t total = oracle::ipow(p, static_cast<unsigned>(idx.size()));
        for (std::uint64_t c = 0; c < total; ++c) {
          BinomialPhase phi{arity, {}};
          std::uint64_t r = c;
          for (const auto& m : idx) {
            if (r % p) phi.terms[m] = Phase(static_cast<Int>(r % p), p);
            r /= p;
          }
          ++forms;
          const TzResult t = tz_residue_check(phi, p, k);
          if (!t.precondition || !t.passes) o.fail("p=" + std::to_string(p) + " " + phi.str());
        }
      }
  const TzResult bad = tz_residue_check(BinomialPhase{1, {{{2}, Phase(1, 2)}}}, 2, 2);
  if (bad.passes) o.fail("counterexample passed");
  if (o.pass) o.detail << forms << " forms pass; binom(x,2)/2 at p=2 fails";
}

void reproducibility(Outcome& o) {
  using harness::Json;
  const std::vector<std::string> configs{
      R"({"command": "gowers-norm", "function": {"group": [3, 3], "random": "disk"}, "d": 3})",
      R"({"command": "gowers-norm", "function": {"group": [8], "random": "unimodular"}, "d": 2})",
      R"({"command": "inverse-search", "function": {"group": [2, 2], "random": "unimodular", "denominator": 4}, "k": 1, "q": 2, "ext_cap": 1})",
      R"({"command": "verify-axioms", "space": {"type": "dk", "group": [3], "k": 1}, "n_upto": 3})",
  };
  for (const auto& text : configs) {
    harness::RunOptions opts;
    opts.seed = 31337;
    auto a = harness::run(Json::parse(text), opts).report;
    auto b = harness::run(Json::parse(text), opts).report;
    a.erase("timing");
    b.erase("timing");
    if (a != b) o.fail("payload differs: " + text.substr(0, 40));
    if (a["status"] != "ok") o.fail("status " + a["status"].dump());
  }
  if (o.pass) o.detail << configs.size() << " configs re-run identically";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"axiom suite", axioms},
      {"fullness below critical dimension", fullness},
      {"gowers oracle equivalence", gowers_oracle},
      {"phase-polynomial norm", phase_norm},
      {"lift invariance", lift_invariance},
      {"derivmorph suite", derivmorph},
      {"extension suite", extensions},
      {"translation suite", translations},
      {"periodicity suite", periods},
      {"inverse pipeline", inverse_pipeline},
      {"residue step", tz},
      {"reproducibility", reproducibility},
  };
  int failed = 0;
  int n = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << ++n << "] " << name << ": " << o.detail.str() << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
