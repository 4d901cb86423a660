#include "nilspace/gowers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nilspace/axioms.hpp"
#include "nilspace/error.hpp"
#include "nilspace/kernels.hpp"

namespace nilspace {

namespace {

constexpr double kModulusSlack = 1e-12;
constexpr std::size_t kMaxGroup = 4096;

void check_group_size(const FinAbGroup& g) {
  if (g.order() > kMaxGroup) throw ResourceLimit("group too large for dense function tables");
}

std::vector<std::vector<std::uint32_t>> all_shifts(const FinAbGroup& g) {
  check_group_size(g);
  std::vector<std::vector<std::uint32_t>> out;
  out.reserve(g.order());
  for (const auto& t : g.elements()) out.push_back(shift_table(g, t));
  return out;
}

void split(const std::vector<Complex>& v, std::vector<double>& re, std::vector<double>& im) {
  re.resize(v.size());
  im.resize(v.size());
  for (std::size_t x = 0; x < v.size(); ++x) {
    re[x] = v[x].real();
    im[x] = v[x].imag();
  }
}

}  // namespace

GroupFunction::GroupFunction(FinAbGroup group, std::vector<Complex> values)
    : group_(std::move(group)), values_(std::move(values)) {
  if (values_.size() != group_.order()) throw InvalidArgument("one value per group element required");
  for (const auto& v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || std::abs(v) > 1.0 + kModulusSlack)
      throw InvalidArgument("function values must satisfy |f| <= 1");
}

GroupFunction GroupFunction::from_phases(FinAbGroup group, std::vector<Phase> phases) {
  if (phases.size() != group.order()) throw InvalidArgument("one phase per group element required");
  GroupFunction f;
  f.group_ = std::move(group);
  f.values_.reserve(phases.size());
  for (const auto& p : phases) f.values_.push_back(p.value());
  f.phases_ = std::move(phases);
  return f;
}

GroupFunction GroupFunction::constant(FinAbGroup group, Complex c) {
  if (c == Complex(1.0, 0.0)) {
    std::vector<Phase> zero(group.order());
    return from_phases(std::move(group), std::move(zero));
  }
  std::vector<Complex> v(group.order(), c);
  return GroupFunction(std::move(group), std::move(v));
}

std::vector<std::uint32_t> shift_table(const FinAbGroup& g, const Element& t) {
  if (!g.contains(t)) throw InvalidArgument("shift outside the group");
  std::vector<std::uint32_t> out(g.order());
  // Odometer over the mixed radix keeps this linear in |G|.
  std::vector<Int> x(g.num_factors(), 0);
  for (std::uint64_t idx = 0; idx < g.order(); ++idx) {
    std::uint64_t y = 0;
    for (std::size_t j = 0; j < x.size(); ++j)
      y = y * g.cyclic_orders()[j] + static_cast<std::uint64_t>(mod(x[j] + t[j], g.cyclic_orders()[j]));
    out[idx] = static_cast<std::uint32_t>(y);
    for (std::size_t j = x.size(); j-- > 0;) {
      if (++x[j] < g.cyclic_orders()[j]) break;
      x[j] = 0;
    }
  }
  return out;
}

GroupFunction delta(const GroupFunction& f, const Element& t) {
  const auto sh = shift_table(f.group(), t);
  if (f.phases()) {
    std::vector<Phase> out(f.size());
    for (std::size_t x = 0; x < f.size(); ++x) out[x] = (*f.phases())[x] - (*f.phases())[sh[x]];
    return GroupFunction::from_phases(f.group(), std::move(out));
  }
  std::vector<Complex> out(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) out[x] = f[x] * std::conj(f[sh[x]]);
  return GroupFunction(f.group(), std::move(out));
}

double gowers_norm(const GroupFunction& f, int d, SearchBudget& budget) {
  if (d < 1) throw InvalidArgument("Gowers norm order must be >= 1");
  const std::size_t g = f.size();
  const std::uint64_t work = checked_pow(g, d + 1);
  if (work == UINT64_MAX) throw ResourceLimit("Gowers norm evaluation count overflows");
  budget.charge(work, "gowers_norm evaluations");
  const auto shifts = all_shifts(f.group());
  const auto& k = kernels::active();
  std::vector<double> re0, im0;
  split(f.values(), re0, im0);

  // One partial sum per t_1, reduced afterwards in index order, so the
  // result does not depend on the thread count.
  std::vector<Complex> partial(g);
  parallel_for(g, [&](std::size_t t1) {
    std::vector<std::vector<double>> re(d + 1, std::vector<double>(g)), im(d + 1, std::vector<double>(g));
    re[0] = re0;
    im[0] = im0;
    Complex acc{0.0, 0.0};
    auto rec = [&](auto&& self, int level) -> void {
      if (level == d) {
        acc += k.complex_sum(re[d].data(), im[d].data(), g);
        return;
      }
      for (std::size_t t = 0; t < g; ++t) {
        if (level == 0 && t != t1) continue;
        k.complex_delta(re[level].data(), im[level].data(), shifts[t].data(), re[level + 1].data(),
                        im[level + 1].data(), g);
        self(self, level + 1);
      }
    };
    rec(rec, 0);
    partial[t1] = acc;
  });
  Complex total{0.0, 0.0};
  for (const auto& p : partial) total += p;
  double avg = total.real() / static_cast<double>(work);
  if (avg < -kModulusSlack) throw StructuralFailure("negative Gowers average", std::to_string(avg));
  avg = std::max(avg, 0.0);
  return std::pow(avg, 1.0 / static_cast<double>(1u << d));
}

double gowers_norm(const GroupFunction& f, int d) {
  SearchBudget budget;
  return gowers_norm(f, d, budget);
}

double gowers_u2_fourier(const GroupFunction& f) {
  check_group_size(f.group());
  const auto elems = f.group().elements();
  double sum = 0.0;
  for (const auto& chi : characters(f.group())) {
    Complex hat{0.0, 0.0};
    for (std::size_t x = 0; x < elems.size(); ++x) hat += f[x] * std::conj(chi(elems[x]));
    hat /= static_cast<double>(elems.size());
    sum += std::norm(hat) * std::norm(hat);
  }
  return std::pow(sum, 0.25);
}

PhaseCertificate is_phase_polynomial(const GroupFunction& f, int k, SearchBudget& budget) {
  if (k < 0) throw InvalidArgument("degree must be >= 0");
  if (!f.phases()) throw InvalidArgument("phase-polynomial certificates need exact unimodular phases");
  const auto& ph = *f.phases();
  Int den = 1;
  for (const auto& p : ph) den = lcm(den, p.den());
  if (den > (Int{1} << 30)) throw ResourceLimit("common phase denominator too large");
  const std::size_t g = f.size();
  const auto shifts = all_shifts(f.group());
  const auto& kt = kernels::active();
  std::vector<std::vector<std::int32_t>> level(k + 2, std::vector<std::int32_t>(g));
  for (std::size_t x = 0; x < g; ++x) level[0][x] = static_cast<std::int32_t>(ph[x].num() * (den / ph[x].den()));

  PhaseCertificate cert;
  cert.k = k;
  // Derivatives commute and Delta_0 of a unimodular function is 1, so
  // nondecreasing tuples of nonzero shifts suffice.
  std::vector<std::size_t> tuple(k + 1);
  std::uint64_t pending = 0;
  auto rec = [&](auto&& self, int depth, std::size_t from) -> bool {
    if (depth == k + 1) {
      ++cert.tuples;
      if (++pending == 4096) {
        budget.charge(pending, "phase-polynomial tuples");
        pending = 0;
      }
      if (kt.all_zero(level[depth].data(), g)) return true;
      std::size_t x = 0;
      while (level[depth][x] == 0) ++x;
      std::string s = "derivative along (";
      for (int j = 0; j <= k; ++j) s += (j ? "; " : "") + f.group().element_at(tuple[j]).str();
      s += ") at " + f.group().element_at(x).str() + " is " + Phase(level[depth][x], den).str();
      cert.transcript = s;
      return false;
    }
    for (std::size_t t = std::max<std::size_t>(from, 1); t < g; ++t) {
      tuple[depth] = t;
      kt.phase_shift_sub(level[depth].data(), shifts[t].data(), level[depth + 1].data(), g,
                         static_cast<std::int32_t>(den));
      if (!self(self, depth + 1, t)) return false;
    }
    return true;
  };
  cert.ok = rec(rec, 0, 1);
  if (pending) budget.charge(pending, "phase-polynomial tuples");
  if (cert.ok)
    cert.transcript = "all " + std::to_string(cert.tuples) + " sorted nonzero shift tuples of length " +
                      std::to_string(k + 1) + " trivialize";
  return cert;
}

PhaseCertificate is_phase_polynomial(const GroupFunction& f, int k) {
  SearchBudget budget;
  return is_phase_polynomial(f, k, budget);
}

Phase BinomialPhase::operator()(const std::vector<Int>& x) const {
  if (static_cast<int>(x.size()) != arity) throw InvalidArgument("argument length differs from arity");
  Phase acc;
  for (const auto& [r, theta] : terms) {
    Int w = 1;
    for (int j = 0; j < arity; ++j) {
      w = static_cast<Int>(static_cast<__int128>(w) * mod(binom(x[j], r[j]), theta.den()) % theta.den());
    }
    acc = acc + theta * w;
  }
  return acc;
}

int BinomialPhase::degree() const {
  int d = 0;
  for (const auto& [r, theta] : terms)
    if (!theta.is_zero()) d = std::max(d, std::accumulate(r.begin(), r.end(), 0));
  return d;
}

std::string BinomialPhase::str() const {
  std::string s;
  for (const auto& [r, theta] : terms) {
    if (theta.is_zero()) continue;
    if (!s.empty()) s += " + ";
    s += theta.str();
    for (int j = 0; j < arity; ++j)
      if (r[j]) s += "*C(x" + std::to_string(j) + "," + std::to_string(r[j]) + ")";
  }
  return s.empty() ? "0" : s;
}

GroupFunction PhaseCoeffs::evaluate() const {
  if (form.arity != static_cast<int>(group.num_factors()))
    throw InvalidArgument("coefficient form arity differs from the number of cyclic factors");
  check_group_size(group);
  std::vector<Phase> out(group.order());
  for (std::uint64_t x = 0; x < group.order(); ++x) out[x] = form(group.element_at(x).coords);
  return GroupFunction::from_phases(group, std::move(out));
}

PhasePolynomial certify_phase_polynomial(const GroupFunction& f, int max_degree, SearchBudget& budget) {
  for (int k = 0; k <= max_degree; ++k) {
    auto cert = is_phase_polynomial(f, k, budget);
    if (cert.ok) return PhasePolynomial{f, k, cert.transcript, std::nullopt};
    if (k == max_degree)
      throw StructuralFailure("not a phase polynomial of degree <= " + std::to_string(max_degree),
                              cert.transcript);
  }
  throw InvalidArgument("degree must be >= 0");
}

PhasePolynomial phase_poly_from_form(const PhaseCoeffs& c, int max_degree, SearchBudget& budget) {
  PhasePolynomial p = certify_phase_polynomial(c.evaluate(), max_degree, budget);
  p.coeffs = c;
  return p;
}

PhasePolynomial phase_poly_from_coeffs(const FinAbGroup& domain, const PolyMap& p, const Character& chi) {
  if (p.arity() != static_cast<int>(domain.num_factors()))
    throw InvalidArgument("polynomial arity differs from the number of cyclic factors");
  if (!(p.target() == chi.group())) throw InvalidArgument("character lives on a different group");
  PhaseCoeffs c{domain, BinomialPhase{p.arity(), {}}};
  for (const auto& [r, coeff] : p.coeffs()) {
    const Phase theta = chi.phase(coeff);
    if (!theta.is_zero()) c.form.terms[r] = theta;
  }
  SearchBudget budget;
  return phase_poly_from_form(c, std::max(p.degree(), 0), budget);
}

GroupFunction project_phase(const GroupFunction& phi, const GroupExtension& ext) {
  if (!(phi.group() == ext.total)) throw InvalidArgument("phi must live on the extension group");
  const std::size_t a = ext.base.order();
  std::vector<std::vector<std::size_t>> fibers(a);
  for (std::uint64_t b = 0; b < ext.total.order(); ++b)
    fibers[ext.base.index_of(ext.proj.apply(ext.total.element_at(b)))].push_back(b);
  std::vector<Complex> out(a);
  bool exact = static_cast<bool>(phi.phases());
  std::vector<Phase> phases(a);
  for (std::size_t x = 0; x < a; ++x) {
    Complex s{0.0, 0.0};
    for (auto b : fibers[x]) s += phi[b];
    out[x] = s / static_cast<double>(fibers[x].size());
    if (exact) {
      phases[x] = (*phi.phases())[fibers[x][0]];
      for (auto b : fibers[x]) exact = exact && (*phi.phases())[b] == phases[x];
    }
  }
  if (exact) return GroupFunction::from_phases(ext.base, std::move(phases));
  for (auto& v : out)
    if (std::abs(v) > 1.0) v /= std::abs(v);  // rounding only
  return GroupFunction(ext.base, std::move(out));
}

GroupFunction lift_function(const GroupFunction& f, const GroupExtension& ext) {
  if (!(f.group() == ext.base)) throw InvalidArgument("f must live on the extension base");
  std::vector<std::uint64_t> tau(ext.total.order());
  for (std::uint64_t b = 0; b < tau.size(); ++b)
    tau[b] = ext.base.index_of(ext.proj.apply(ext.total.element_at(b)));
  if (f.phases()) {
    std::vector<Phase> out(tau.size());
    for (std::size_t b = 0; b < tau.size(); ++b) out[b] = (*f.phases())[tau[b]];
    return GroupFunction::from_phases(ext.total, std::move(out));
  }
  std::vector<Complex> out(tau.size());
  for (std::size_t b = 0; b < tau.size(); ++b) out[b] = f[tau[b]];
  return GroupFunction(ext.total, std::move(out));
}

Complex correlation(const GroupFunction& f, const GroupFunction& g) {
  if (!(f.group() == g.group())) throw InvalidArgument("correlation needs functions on the same group");
  std::vector<double> ar, ai, br, bi;
  split(f.values(), ar, ai);
  split(g.values(), br, bi);
  return kernels::active().complex_inner(ar.data(), ai.data(), br.data(), bi.data(), f.size()) /
         static_cast<double>(f.size());
}

GroupFunction nilspace_polynomial(const FinAbGroup& a, const PointMap& phi, const Cubespace& n, int step,
                                  const std::vector<Complex>& g,
                                  const std::optional<std::vector<Phase>>& g_phases) {
  if (phi.size() != a.order()) throw InvalidArgument("phi must have one image per group element");
  if (g.size() != n.size()) throw InvalidArgument("g must have one value per point of N");
  for (Point y : phi)
    if (y >= n.size()) throw InvalidArgument("phi leaves N");
  const Cubespace lin = linear_structure(a);
  if (!is_morphism(phi, lin, n, morphism_check_dim(step, std::min(lin.n_max(), n.n_max()))))
    throw InvalidArgument("phi is not a morphism from the linear structure of A");
  if (g_phases) {
    if (g_phases->size() != n.size()) throw InvalidArgument("g phases must cover N");
    std::vector<Phase> out(a.order());
    for (std::size_t x = 0; x < out.size(); ++x) out[x] = (*g_phases)[phi[x]];
    return GroupFunction::from_phases(a, std::move(out));
  }
  std::vector<Complex> out(a.order());
  for (std::size_t x = 0; x < out.size(); ++x) out[x] = g[phi[x]];
  return GroupFunction(a, std::move(out));
}

namespace {

bool q_torsion(const GroupFunction& f, Int q) {
  for (const auto& p : *f.phases())
    if (!(p * q).is_zero()) return false;
  return true;
}

GroupFunction quotient(const GroupFunction& f, const GroupFunction& g) {
  std::vector<Phase> out(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) out[x] = (*f.phases())[x] - (*g.phases())[x];
  return GroupFunction::from_phases(f.group(), std::move(out));
}

// Both factors re-certified from scratch; phi1 * phi2 = phi checked exactly.
std::optional<std::pair<PhasePolynomial, PhasePolynomial>> certify_split(const PhasePolynomial& phi,
                                                                         const GroupFunction& f1,
                                                                         const GroupFunction& f2, Int q,
                                                                         SearchBudget& budget) {
  if (!q_torsion(f2, q)) return std::nullopt;
  for (std::size_t x = 0; x < phi.f.size(); ++x)
    if (!((*f1.phases())[x] + (*f2.phases())[x] == (*phi.f.phases())[x])) return std::nullopt;
  const int low = std::max(phi.degree - 1, 0);
  if (!is_phase_polynomial(f1, low, budget).ok) return std::nullopt;
  if (!is_phase_polynomial(f2, phi.degree, budget).ok) return std::nullopt;
  auto p1 = certify_phase_polynomial(f1, low, budget);
  auto p2 = certify_phase_polynomial(f2, phi.degree, budget);
  return std::make_pair(std::move(p1), std::move(p2));
}

}  // namespace

PhaseDecomposition decompose_phase(const PhasePolynomial& phi, Int q, SearchBudget& budget) {
  if (q < 1) throw InvalidArgument("q must be >= 1");
  if (!phi.f.phases()) throw InvalidArgument("decompose_phase needs exact phases");
  PhaseDecomposition out;
  const FinAbGroup& g = phi.f.group();
  auto accept = [&](std::optional<std::pair<PhasePolynomial, PhasePolynomial>> r, const char* how) {
    if (!r) return false;
    out.found = true;
    out.method = how;
    out.phi1 = std::move(r->first);
    out.phi2 = std::move(r->second);
    return true;
  };

  ++out.candidates;
  if (q_torsion(phi.f, q) &&
      accept(certify_split(phi, GroupFunction::constant(g), phi.f, q, budget), "already q-torsion"))
    return out;

  if (phi.coeffs && phi.coeffs->form.degree() <= phi.degree) {
    PhaseCoeffs top{g, {phi.coeffs->form.arity, {}}}, rest{g, {phi.coeffs->form.arity, {}}};
    for (const auto& [r, theta] : phi.coeffs->form.terms) {
      const int w = std::accumulate(r.begin(), r.end(), 0);
      (w == phi.degree ? top : rest).form.terms[r] = theta;
    }
    ++out.candidates;
    if (accept(certify_split(phi, rest.evaluate(), top.evaluate(), q, budget), "top-degree split")) {
      out.phi1->coeffs = rest;
      out.phi2->coeffs = top;
      return out;
    }
  }

  // Search phi2 among q-torsion binomial forms of degree <= k, by number of
  // nonzero coefficients and then lexicographically.
  const auto idx = multi_indices(static_cast<int>(g.num_factors()), phi.degree);
  const std::size_t m = idx.size();
  for (std::size_t nz = 1; nz <= m; ++nz) {
    std::vector<bool> pick(m, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(nz), true);
    do {
      std::vector<std::size_t> pos;
      for (std::size_t j = 0; j < m; ++j)
        if (pick[j]) pos.push_back(j);
      std::vector<Int> val(nz, 1);
      while (true) {
        budget.charge(1, "decomposition candidates");
        ++out.candidates;
        PhaseCoeffs c{g, {static_cast<int>(g.num_factors()), {}}};
        for (std::size_t j = 0; j < nz; ++j) c.form.terms[idx[pos[j]]] = Phase(val[j], q);
        const GroupFunction f2 = c.evaluate();
        if (accept(certify_split(phi, quotient(phi.f, f2), f2, q, budget), "search")) {
          out.phi2->coeffs = c;
          return out;
        }
        std::size_t j = nz;
        while (j-- > 0) {
          if (++val[j] < q) break;
          val[j] = 1;
        }
        if (j == static_cast<std::size_t>(-1)) break;
      }
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  out.method = "search exhausted";
  return out;
}

PhaseDecomposition decompose_phase(const PhasePolynomial& phi, Int q) {
  SearchBudget budget;
  return decompose_phase(phi, q, budget);
}

}  // namespace nilspace
