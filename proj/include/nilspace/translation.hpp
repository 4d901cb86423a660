#pragma once
// Translations of height i: bijections whose action on any codimension-i
// face of any cube gives a cube.

#include <optional>
#include <string>
#include <vector>

#include "nilspace/cubespace.hpp"
#include "nilspace/runtime.hpp"

namespace nilspace {

/// Dimension up to which translation conditions are checked when the space
/// is known to be k-step: max(k+1, i).
inline int translation_check_dim(int k, int i) { return std::max(k + 1, i); }

/// Precomputes cubes of dimensions i..check_dim and their codimension-i faces.
class TranslationChecker {
 public:
  TranslationChecker(Cubespace space, int i, int check_dim, SearchBudget& budget);

  int height() const { return i_; }
  int check_dim() const { return check_dim_; }
  const Cubespace& space() const { return space_; }

  /// Does alpha (a map of the ground set) pass every face condition?
  bool check(const PointMap& alpha, std::string* witness = nullptr) const;

  /// Bijections passing the check, lexicographic in (alpha(0), alpha(1), ..).
  /// allowed[p], when given, restricts alpha(p). Stops after `limit` hits.
  std::vector<PointMap> search(SearchBudget& budget,
                               const std::vector<std::vector<Point>>* allowed = nullptr,
                               std::size_t limit = SIZE_MAX) const;

 private:
  struct Constraint {
    std::uint32_t dim_slot;
    std::uint32_t cube;
    std::uint32_t face;
  };
  struct DimData {
    int n;
    std::vector<Point> cubes;               // concatenated
    std::vector<std::vector<Vertex>> faces;  // vertex lists of codim-i faces
  };
  bool constraint_ok(const Constraint& c, const PointMap& alpha, std::vector<Point>& scratch) const;

  Cubespace space_;
  int i_;
  int check_dim_;
  std::vector<DimData> dims_;
};

bool is_translation(const PointMap& alpha, const Cubespace& space, int i, int check_dim);

/// Trans_i(N) by constrained search over bijections.
struct TransGroup {
  int height = 0;
  int check_dim = 0;
  std::vector<PointMap> elements;  // lexicographic
  bool closed = false;             // composition and inverses stay inside
  bool contains_next = false;      // Trans_(i+1) is a subset
};
TransGroup trans_group(const Cubespace& space, int i, int check_dim, SearchBudget& budget);

PointMap inverse_permutation(const PointMap& p);
bool is_permutation(const PointMap& p);
/// p applied e times (e may be negative).
PointMap permutation_power(const PointMap& p, Int e);

/// The map v -> alpha^(c(v)) (f(v)). c must be a cube of D_i(Z), checked by
/// integer Moebius coefficients; throws StructuralFailure if the result is
/// not a cube of the space.
std::vector<Point> cube_action(const Cubespace& space, CubeView f, std::span<const Int> c,
                               const PointMap& alpha, int i);
/// Integer Moebius test for membership in C^n(D_i(Z)).
bool dz_member(std::span<const Int> c, int i);

}  // namespace nilspace
