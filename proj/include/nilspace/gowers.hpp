#pragma once
// Functions on finite abelian groups, Gowers norms, exact phase-polynomial
// certificates and the correlation search against phase polynomials on
// height extensions.

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nilspace/abelian.hpp"
#include "nilspace/cubespace.hpp"
#include "nilspace/free_nilspace.hpp"
#include "nilspace/runtime.hpp"

namespace nilspace {

using Complex = std::complex<double>;

class GroupFunction {
 public:
  /// Throws InvalidArgument if a value has modulus > 1 (+1e-12) or the size is wrong.
  GroupFunction(FinAbGroup group, std::vector<Complex> values);
  /// Unimodular function with exact phases.
  static GroupFunction from_phases(FinAbGroup group, std::vector<Phase> phases);
  static GroupFunction constant(FinAbGroup group, Complex c = 1.0);

  const FinAbGroup& group() const noexcept { return group_; }
  const std::vector<Complex>& values() const noexcept { return values_; }
  const std::optional<std::vector<Phase>>& phases() const noexcept { return phases_; }
  std::size_t size() const noexcept { return values_.size(); }
  Complex operator[](std::size_t x) const { return values_[x]; }

 private:
  GroupFunction() = default;
  FinAbGroup group_;
  std::vector<Complex> values_;
  std::optional<std::vector<Phase>> phases_;
};

/// shift[x] = index of x + t.
std::vector<std::uint32_t> shift_table(const FinAbGroup& g, const Element& t);

/// x -> f(x) conj(f(x + t)).
GroupFunction delta(const GroupFunction& f, const Element& t);

/// 2^d-th root of the average of the d-fold derivative over x, t_1..t_d.
double gowers_norm(const GroupFunction& f, int d, SearchBudget& budget);
double gowers_norm(const GroupFunction& f, int d);

/// (sum over characters of |f^(chi)|^4)^(1/4).
double gowers_u2_fourier(const GroupFunction& f);

struct PhaseCertificate {
  bool ok = false;
  int k = 0;
  std::uint64_t tuples = 0;
  std::string transcript;
};

/// Exact check that every (k+1)-fold derivative is identically 1.
/// Throws InvalidArgument without exact phases.
PhaseCertificate is_phase_polynomial(const GroupFunction& f, int k, SearchBudget& budget);
PhaseCertificate is_phase_polynomial(const GroupFunction& f, int k);

/// x -> sum_r theta_r prod_j binom(x_j, r_j) in Q/Z, on Z^arity.
struct BinomialPhase {
  int arity = 0;
  std::map<PolyMap::MultiIndex, Phase> terms;

  Phase operator()(const std::vector<Int>& x) const;
  int degree() const;  // 0 for constants, including the zero form
  std::string str() const;
};

/// A binomial phase read on the representatives [0, n_j) of a group.
struct PhaseCoeffs {
  FinAbGroup group;
  BinomialPhase form;

  GroupFunction evaluate() const;
};

struct PhasePolynomial {
  GroupFunction f;
  int degree = 0;  // smallest certified degree
  std::string transcript;
  std::optional<PhaseCoeffs> coeffs;
};

/// Certifies f with the least degree <= max_degree; StructuralFailure if none.
PhasePolynomial certify_phase_polynomial(const GroupFunction& f, int max_degree, SearchBudget& budget);
PhasePolynomial phase_poly_from_form(const PhaseCoeffs& c, int max_degree, SearchBudget& budget);

/// x -> chi(p(x)) on `domain`; p.arity() must equal the number of cyclic factors.
PhasePolynomial phase_poly_from_coeffs(const FinAbGroup& domain, const PolyMap& p, const Character& chi);

/// Fiber average over ext.proj.
GroupFunction project_phase(const GroupFunction& phi, const GroupExtension& ext);
/// f o proj.
GroupFunction lift_function(const GroupFunction& f, const GroupExtension& ext);
/// Average of f conj(g).
Complex correlation(const GroupFunction& f, const GroupFunction& g);

/// x -> g(phi(x)) for a morphism phi: D_1(A) -> N (N is `step`-step).
GroupFunction nilspace_polynomial(const FinAbGroup& a, const PointMap& phi, const Cubespace& n, int step,
                                  const std::vector<Complex>& g,
                                  const std::optional<std::vector<Phase>>& g_phases = std::nullopt);

struct PhaseDecomposition {
  bool found = false;
  std::string method;
  std::uint64_t candidates = 0;
  std::optional<PhasePolynomial> phi1;  // degree <= k-1
  std::optional<PhasePolynomial> phi2;  // phi2^q = 1
};

PhaseDecomposition decompose_phase(const PhasePolynomial& phi, Int q, SearchBudget& budget);
PhaseDecomposition decompose_phase(const PhasePolynomial& phi, Int q);

struct InverseSearchOptions {
  int k = 1;
  Int q = 2;
  int ext_cap = 2;
  double delta = 0.5;
  double norm_floor = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t candidate_limit = 1 << 16;  // per height; above this, random sampling
};

struct HeightStats {
  int height = 0;
  std::string group;
  std::string mode;  // "exhaustive" or "random"
  std::uint64_t candidates = 0;
  std::uint64_t uncertified = 0;
  double best = 0.0;
};

struct CorrelationReport {
  double norm = 0.0;  // ||f||_{U_{k+1}}
  bool gated = false;
  bool complete = true;
  int height = 0;
  std::string group;
  std::optional<PhaseCoeffs> phi;
  std::vector<Phase> phi_values;
  Complex corr{0.0, 0.0};
  double magnitude = 0.0;
  double recomputed = 0.0;
  bool clears_delta = false;
  std::vector<HeightStats> heights;
};

CorrelationReport inverse_search(const GroupFunction& f, const InverseSearchOptions& opts,
                                 SearchBudget& budget);

struct TzResult {
  bool passes = false;
  bool precondition = false;  // phi^p = 1 and every term weight <= k <= p-1
  std::uint64_t points = 0;
  std::string transcript;
};

/// Invariance of phi under x_j -> x_j + p on the window [-2p, 2p]^arity.
TzResult tz_residue_check(const BinomialPhase& phi, Int p, int k);

}  // namespace nilspace
