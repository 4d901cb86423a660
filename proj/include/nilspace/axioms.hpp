#pragma once
// Exhaustive nilspace axiom checks, morphism checks, subdirect products and
// the exhaustive morphism census between degree-k structures.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nilspace/cubespace.hpp"
#include "nilspace/enumerate.hpp"

namespace nilspace {

struct Counterexample {
  std::string axiom;  // "composition", "ergodicity", "gluing"
  int n = 0;
  std::vector<Point> map;
  std::string morphism;  // composition only
};

struct DimensionReport {
  int n = 0;
  std::string mode;  // enumeration mode of the cube pass
  std::uint64_t cubes = 0;
  std::uint64_t corners = 0;
  bool composition_ok = true;
  bool gluing_ok = true;  // n >= 1
  std::uint64_t min_completions = 0;
  std::uint64_t max_completions = 0;
};

struct AxiomReport {
  bool ergodic_ok = true;
  std::vector<DimensionReport> dims;  // n = 0 .. n_upto
  std::optional<int> kstep;
  std::optional<Counterexample> counterexample;

  bool composition_ok() const;
  bool gluing_ok() const;
  bool all_ok() const { return ergodic_ok && composition_ok() && gluing_ok(); }
};

/// Composition through a generating set of cube morphisms, ergodicity
/// C^1 = N^{0,1}, and gluing with completion counts for n = 1..n_upto.
/// kstep is the least k whose (k+1)-corners all complete uniquely.
AxiomReport check_axioms(const Cubespace& space, int n_upto, SearchBudget& budget,
                         EnumMode mode = EnumMode::Auto);
AxiomReport check_axioms(const Cubespace& space, int n_upto);

/// First cube of `from` (dimension <= n_upto) whose image is not a cube of `to`.
std::optional<std::vector<Point>> morphism_witness(const PointMap& f, const Cubespace& from,
                                                   const Cubespace& to, int n_upto,
                                                   SearchBudget& budget);
bool is_morphism(const PointMap& f, const Cubespace& from, const Cubespace& to, int n_upto,
                 SearchBudget& budget);
bool is_morphism(const PointMap& f, const Cubespace& from, const Cubespace& to, int n_upto);

/// Checking dimension sufficient for morphisms into a certified k-step
/// space: images are cubes once all their (k+1)-faces are.
inline int morphism_check_dim(int target_step, int n_max) { return std::min(target_step + 1, n_max); }

struct SubdirectProduct {
  Cubespace space;
  std::vector<std::pair<Point, Point>> pairs;  // lexicographic
};

/// Pairs (a, b) with p1(a) = p2(b). Both projections must be surjective
/// morphisms onto `factor`, checked up to n_upto.
SubdirectProduct subdirect_product(const Cubespace& n, const Cubespace& k, const Cubespace& factor,
                                   const PointMap& p1, const PointMap& p2, int n_upto);

/// All morphisms D_i(A) -> D_j(B), as point maps in mixed-radix order.
std::vector<PointMap> dk_morphisms(const FinAbGroup& a, int i, const FinAbGroup& b, int j,
                                   SearchBudget& budget);

struct DerivmorphReport {
  int i = 0, j = 0;
  std::uint64_t maps = 0;
  std::uint64_t morphisms = 0;
  std::uint64_t constant = 0;
  std::uint64_t rechecked = 0;  // i <= j: also morphisms D_1(A) -> D_(j-i+1)(B)
  std::vector<PointMap> exceptions;
  bool holds() const { return exceptions.empty(); }
};

/// i > j: every morphism is constant; i <= j: every morphism is also one
/// D_1(A) -> D_(j-i+1)(B).
DerivmorphReport check_derivmorph(const FinAbGroup& a, const FinAbGroup& b, int i, int j,
                                  SearchBudget& budget);

}  // namespace nilspace
