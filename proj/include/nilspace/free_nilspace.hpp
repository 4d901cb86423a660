#pragma once
// Free and modulo-n free nilspaces, integer polynomial maps in the binomial
// basis, and the finite free factors / morphism lifts built from them.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nilspace/abelian.hpp"
#include "nilspace/cubespace.hpp"
#include "nilspace/extension.hpp"
#include "nilspace/runtime.hpp"

namespace nilspace {

struct FreeRank {
  std::vector<int> ranks;      // a_1 .. a_k
  std::optional<Int> modulus;  // absent: the free nilspace over Z

  std::size_t dims() const;
  std::string str() const;  // "F(1,2)" or "F_4(1,2)"
};

/// Product of D_i(Z_n^{a_i}); components with a_i = 0 are dropped and the
/// all-zero rank is the one-point space. Points are coordinate vectors in
/// mixed radix, coordinate 0 most significant.
Cubespace mod_free_nilspace(Int n, const std::vector<int>& ranks, int n_max = kDefaultNMax);

/// Degree (component index) of each free coordinate.
std::vector<int> free_coordinate_heights(const std::vector<int>& ranks);
std::vector<Int> free_coords(Int n, std::size_t dims, Point p);
Point free_index(Int n, const std::vector<Int>& coords);

/// Generalized binomial coefficient, valid for negative x.
Int binom(Int x, int r);

/// Coordinatewise reduction F(ranks) -> F_m(ranks).
struct ModReduction {
  std::vector<int> ranks;
  Int modulus;
  Point apply(const std::vector<Int>& z) const;
};

ModReduction reduce_mod(const std::vector<int>& ranks, Int modulus);

/// Checks that reduction sends every cube of F(ranks) with Moebius
/// coefficients in [-window, window] and dimension <= n_upto to a cube.
/// With `then`, the composite with then: F_m(ranks) -> target is checked.
bool verify_reduce_mod(const ModReduction& red, int window, int n_upto, SearchBudget& budget,
                       const PointMap* then = nullptr, const Cubespace* target = nullptr);

/// x -> sum_r coeffs[r] * prod_j binom(x_j, r_j).
class PolyMap {
 public:
  using MultiIndex = std::vector<int>;

  PolyMap(int arity, FinAbGroup target, std::map<MultiIndex, Element> coeffs = {});

  int arity() const noexcept { return arity_; }
  const FinAbGroup& target() const noexcept { return target_; }
  const std::map<MultiIndex, Element>& coeffs() const noexcept { return coeffs_; }
  int degree() const;  // -1 for the zero map
  Element operator()(const std::vector<Int>& x) const;
  std::string str() const;

 private:
  int arity_;
  FinAbGroup target_;
  std::map<MultiIndex, Element> coeffs_;
};

/// Multi-indices of total weight <= degree, ordered by weight then lexicographically.
std::vector<PolyMap::MultiIndex> multi_indices(int arity, int degree);

/// Minimal period of an arity-1 map. Throws ResourceLimit if the search
/// window |A|^max(1, degree) exceeds the budget.
Int period_of_polymap(const PolyMap& p, SearchBudget& budget);
Int period_of_polymap(const PolyMap& p);

/// p as a map D_i(Z^d) -> D_k(A), checked on the finite quotient Z_L^d,
/// L = |A|^max(1, degree), after confirming that p is L-periodic.
bool poly_is_morphism(const PolyMap& p, int i, int k, SearchBudget& budget);
bool poly_is_morphism(const PolyMap& p, int i, int k);

struct FreeFactor {
  FreeRank rank;
  int alpha = 0;
  Int exponent = 1;
  Cubespace space;
  PointMap h;  // space -> N
  std::vector<std::string> diagnostics;
};

/// A modulo-e^alpha free nilspace with a factor map onto N, built level by
/// level: subdirect product with the next factor, a section of it, and the
/// canonical surjection onto the structure group. alpha runs 1..alpha_cap.
/// Throws StructuralFailure with diagnostics if no alpha <= cap works.
FreeFactor factor_to_finite(const Cubespace& n, int k, int alpha_cap, SearchBudget& budget);
FreeFactor factor_to_finite(const Cubespace& n, int k, int alpha_cap = 3);

struct MorphismLift {
  int height = 0;
  std::optional<GroupExtension> ext;
  Cubespace fprime;  // F_{e^alpha}(a_1..a_(k-1)) x D_k(A_k)
  std::vector<int> lower_ranks;
  Int modulus = 1;
  PointMap psi;   // ext.total -> fprime
  PointMap beta;  // fprime -> N
  std::vector<std::string> diagnostics;
};

/// phi: D_1(A) -> N (a morphism), lifted through a height-i extension B of A:
/// beta(psi(b)) = phi(tau(b)) for every b. Heights 1..ext_cap are tried.
/// Throws StructuralFailure if none works.
MorphismLift lift_morphism(const FinAbGroup& a, const PointMap& phi, const Cubespace& n, int k,
                           int ext_cap, int alpha_cap, SearchBudget& budget);

/// First (lexicographic) map with f(x) in allowed[x] that is a morphism
/// from -> to, checked in dimensions 1..n_upto.
std::optional<PointMap> search_morphism(const Cubespace& from, const Cubespace& to,
                                        const std::vector<std::vector<Point>>& allowed, int n_upto,
                                        SearchBudget& budget);

}  // namespace nilspace
