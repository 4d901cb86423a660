#include <algorithm>
#include <cmath>
#include <random>

#include "nilspace/error.hpp"
#include "nilspace/gowers.hpp"
#include "nilspace/kernels.hpp"

namespace nilspace {

namespace {

constexpr double kPerfect = 1.0 - 1e-12;

bool is_prime(Int p) {
  if (p < 2) return false;
  for (Int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// Candidate phase polynomials on one group B: coefficient vectors c over
// the nonconstant multi-indices of weight <= k, theta_r = c_r / D.
// A constant term only rotates the correlation, so it is left out.
class CandidateScan {
 public:
  CandidateScan(const GroupFunction& g, int k, Int d) : g_(g), d_(d) {
    const FinAbGroup& b = g.group();
    for (const auto& r : multi_indices(static_cast<int>(b.num_factors()), k))
      if (std::any_of(r.begin(), r.end(), [](int x) { return x > 0; })) idx_.push_back(r);
    weights_.assign(b.order() * idx_.size(), 0);
    for (std::uint64_t x = 0; x < b.order(); ++x) {
      const auto c = b.element_at(x).coords;
      for (std::size_t j = 0; j < idx_.size(); ++j) {
        Int w = 1;
        for (std::size_t f = 0; f < c.size(); ++f) w = mod(w * mod(binom(c[f], idx_[j][f]), d), d);
        weights_[x * idx_.size() + j] = w;
      }
    }
    roots_re_.resize(d);
    roots_im_.resize(d);
    for (Int j = 0; j < d; ++j) {
      const Complex z = Phase(j, d).value();
      roots_re_[j] = z.real();
      roots_im_[j] = z.imag();
    }
    split_re_.resize(b.order());
    split_im_.resize(b.order());
    for (std::size_t x = 0; x < b.order(); ++x) {
      split_re_[x] = g[x].real();
      split_im_[x] = g[x].imag();
    }
    phi_re_.resize(b.order());
    phi_im_.resize(b.order());
  }

  std::size_t slots() const { return idx_.size(); }

  double magnitude(const std::vector<Int>& c) {
    const std::size_t m = idx_.size();
    for (std::size_t x = 0; x < phi_re_.size(); ++x) {
      Int s = 0;
      for (std::size_t j = 0; j < m; ++j) s += c[j] * weights_[x * m + j];
      s = mod(s, d_);
      phi_re_[x] = roots_re_[s];
      phi_im_[x] = roots_im_[s];
    }
    const Complex z = kernels::active().complex_inner(split_re_.data(), split_im_.data(), phi_re_.data(),
                                                      phi_im_.data(), phi_re_.size());
    return std::abs(z) / static_cast<double>(phi_re_.size());
  }

  PhaseCoeffs form(const std::vector<Int>& c) const {
    PhaseCoeffs out{g_.group(), {static_cast<int>(g_.group().num_factors()), {}}};
    for (std::size_t j = 0; j < idx_.size(); ++j)
      if (c[j]) out.form.terms[idx_[j]] = Phase(c[j], d_);
    return out;
  }

 private:
  const GroupFunction& g_;
  Int d_;
  std::vector<PolyMap::MultiIndex> idx_;
  std::vector<Int> weights_;
  std::vector<double> roots_re_, roots_im_, split_re_, split_im_, phi_re_, phi_im_;
};

}  // namespace

CorrelationReport inverse_search(const GroupFunction& f, const InverseSearchOptions& opts,
                                 SearchBudget& budget) {
  if (opts.k < 1) throw InvalidArgument("k must be >= 1");
  if (opts.q < 1 || opts.ext_cap < 1) throw InvalidArgument("q and ext_cap must be >= 1");
  const FinAbGroup& a = f.group();
  if (!a.is_normal_form()) throw InvalidArgument("the group must be given by its invariant factors");
  if (opts.q % a.exponent() != 0 && a.order() > 1)
    throw InvalidArgument("the exponent of A must divide q");

  CorrelationReport rep;
  rep.norm = gowers_norm(f, opts.k + 1, budget);
  if (rep.norm < opts.norm_floor) {
    rep.gated = true;
    return rep;
  }
  std::mt19937_64 rng(opts.seed);
  std::vector<Int> best_c;
  std::optional<GroupExtension> best_ext;
  for (int i = 1; i <= opts.ext_cap && rep.magnitude < kPerfect; ++i) {
    GroupExtension ext = height_extension(a, i);
    const GroupFunction g = lift_function(f, ext);
    const Int d = static_cast<Int>(checked_pow(opts.q, i));
    CandidateScan scan(g, opts.k, d);
    const std::size_t m = scan.slots();
    HeightStats st;
    st.height = i;
    st.group = ext.total.str();
    const std::uint64_t space = checked_pow(d, m);
    st.mode = space <= opts.candidate_limit ? "exhaustive" : "random";
    if (space > opts.candidate_limit) rep.complete = false;

    double best_here = -1.0;
    std::vector<Int> best_here_c;
    auto consider = [&](const std::vector<Int>& c) {
      budget.charge(1, "inverse-search candidates");
      ++st.candidates;
      const double mag = scan.magnitude(c);
      if (mag <= best_here + 1e-15) return false;
      const GroupFunction phi = scan.form(c).evaluate();
      if (!is_phase_polynomial(phi, opts.k, budget).ok) {
        ++st.uncertified;
        return false;
      }
      best_here = mag;
      best_here_c = c;
      return mag >= kPerfect;
    };

    if (st.mode == "exhaustive") {
      bool done = consider(std::vector<Int>(m, 0));
      for (std::size_t nz = 1; nz <= m && !done; ++nz) {
        std::vector<bool> pick(m, false);
        std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(nz), true);
        do {
          std::vector<std::size_t> pos;
          for (std::size_t j = 0; j < m; ++j)
            if (pick[j]) pos.push_back(j);
          std::vector<Int> val(nz, 1);
          while (!done) {
            std::vector<Int> c(m, 0);
            for (std::size_t j = 0; j < nz; ++j) c[pos[j]] = val[j];
            done = consider(c);
            std::size_t j = nz;
            while (j-- > 0) {
              if (++val[j] < d) break;
              val[j] = 1;
            }
            if (j == static_cast<std::size_t>(-1)) break;
          }
        } while (!done && std::prev_permutation(pick.begin(), pick.end()));
      }
    } else {
      std::uniform_int_distribution<Int> coeff(0, d - 1);
      for (std::uint64_t s = 0; s < opts.candidate_limit; ++s) {
        std::vector<Int> c(m);
        for (auto& x : c) x = coeff(rng);
        if (consider(c)) break;
      }
    }
    st.best = std::max(best_here, 0.0);
    rep.heights.push_back(st);
    if (best_here > rep.magnitude + 1e-15 || (!best_ext && best_here >= 0.0)) {
      rep.magnitude = best_here;
      rep.height = i;
      rep.group = st.group;
      rep.phi = scan.form(best_here_c);
      best_ext.emplace(std::move(ext));
    }
  }
  if (rep.phi) {
    // Independent recomputation through the public API.
    const GroupFunction phi = rep.phi->evaluate();
    rep.phi_values = *phi.phases();
    rep.corr = correlation(lift_function(f, *best_ext), phi);
    rep.recomputed = std::abs(rep.corr);
    if (std::abs(rep.recomputed - rep.magnitude) > 1e-9)
      throw StructuralFailure("correlation recomputation disagrees");
  }
  rep.clears_delta = rep.magnitude >= opts.delta;
  return rep;
}

TzResult tz_residue_check(const BinomialPhase& phi, Int p, int k) {
  if (!is_prime(p)) throw InvalidArgument("p must be prime");
  if (phi.arity < 1) throw InvalidArgument("arity must be >= 1");
  TzResult out;
  out.precondition = k >= 0 && k <= p - 1 && phi.degree() <= k;
  for (const auto& [r, theta] : phi.terms) out.precondition = out.precondition && (theta * p).is_zero();
  const Int radius = 2 * p;
  std::vector<Int> x(phi.arity, -radius);
  while (true) {
    const Phase here = phi(x);
    ++out.points;
    for (int j = 0; j < phi.arity; ++j) {
      auto y = x;
      y[j] += p;
      const Phase there = phi(y);
      if (!(there == here)) {
        std::string s = "x=(";
        for (int t = 0; t < phi.arity; ++t) s += (t ? "," : "") + std::to_string(x[t]);
        out.transcript = s + "), coordinate " + std::to_string(j) + ": " + here.str() + " vs " + there.str();
        return out;
      }
    }
    int j = phi.arity;
    while (j-- > 0) {
      if (++x[j] <= radius) break;
      x[j] = -radius;
    }
    if (j < 0) break;
  }
  out.passes = true;
  out.transcript = "invariant under p-shifts on " + std::to_string(out.points) + " window points";
  return out;
}

}  // namespace nilspace
