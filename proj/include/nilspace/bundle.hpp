#pragma once
// The ~_i relations, factors F_i(N), structure groups and bundle checks.

#include <optional>
#include <string>
#include <vector>

#include "nilspace/abelian.hpp"
#include "nilspace/cubespace.hpp"
#include "nilspace/runtime.hpp"

namespace nilspace {

struct Partition {
  std::vector<Point> class_of;  // classes numbered by smallest member
  std::vector<std::vector<Point>> classes;
};

/// Classes of x ~_i y (the one-corner (i+1)-cube is a cube). Throws
/// StructuralFailure if the relation is not an equivalence.
Partition sim_classes(const Cubespace& space, int i);

struct Factor {
  Cubespace space;
  PointMap proj;  // ground -> factor ground
  Partition partition;
};

/// F_i(N). i = 0 gives the one-point factor.
Factor factor_nilspace(const Cubespace& space, int i);

/// Free action of a finite abelian group: act[a][x], a in group index order.
struct FiberAction {
  FinAbGroup group;
  std::vector<PointMap> act;

  Point apply(std::uint64_t a, Point x) const { return act[a][x]; }
  /// The unique a with y + a = x; throws if x, y lie in different orbits.
  std::uint64_t difference(Point x, Point y) const;
};

/// Discovers the action of the structure group on the fibers of
/// proj: total -> base by searching for fiber-preserving height-`height`
/// translations. The group comes back in invariant-factor form.
FiberAction fiber_translation_action(const Cubespace& total, const PointMap& proj,
                                     std::size_t base_size, int height, int check_dim,
                                     SearchBudget& budget);

/// Conditions shared by bundles and extensions, checked for n = 1..n_check:
/// every base cube lifts, and the lifts of a base cube are exactly
/// {c + g : g in C^n(D_degree(A))}. Returns a witness description on failure.
std::optional<std::string> check_lift_conditions(const Cubespace& total, const Cubespace& base,
                                                 const PointMap& proj, const FiberAction& action,
                                                 int degree, int n_check, SearchBudget& budget);

struct StructureGroup {
  int level = 0;
  FinAbGroup group;
  FiberAction action;  // on the ground of F_level(N)
};

/// A_i with its action on F_i(N) over F_(i-1)(N).
StructureGroup structure_group(const Cubespace& space, int i, SearchBudget& budget);
StructureGroup structure_group(const Cubespace& space, int i);

struct BundleDecomposition {
  int k = 0;
  std::vector<Factor> factors;       // X_0 .. X_k as factors of N
  std::vector<PointMap> down;        // down[i]: X_i -> X_(i-1), i >= 1
  std::vector<StructureGroup> groups;  // groups[i-1] = A_i
  int checked_upto = 0;
};

/// Builds factors and structure groups and checks the degree-bundle
/// conditions level by level for n = 1..n_check (default k+1).
BundleDecomposition verify_degree_bundle(const Cubespace& space, int k, int n_check,
                                         SearchBudget& budget);
BundleDecomposition verify_degree_bundle(const Cubespace& space, int k);

/// phi: N -> M is a morphism and, for i = 0..k, maps every ~_i class of N
/// onto a ~_i class of M. i = 0 is surjectivity.
bool is_factor_map(const PointMap& phi, const Cubespace& from, const Cubespace& to, int k);

}  // namespace nilspace
