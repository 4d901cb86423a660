#pragma once
// Degree-k extensions, sections, translation bundles and translation lifts.

#include <optional>
#include <string>
#include <vector>

#include "nilspace/bundle.hpp"
#include "nilspace/cubespace.hpp"
#include "nilspace/runtime.hpp"

namespace nilspace {

struct Extension {
  Cubespace total;  // M
  Cubespace base;   // N
  PointMap proj;    // M -> N
  int degree = 0;
  FiberAction action;
  int checked_upto = 0;
};

/// Default dimension for extension checks: one past the larger of the
/// degree and the base step (when known).
int default_extension_check_dim(const Cubespace& total, const Cubespace& base, int k);

/// Certifies M as a degree-k extension of N by A: proj is a morphism, every
/// base cube lifts to a cube of M, and lifts of one base cube differ exactly
/// by cubes of D_k(A). Without an explicit action the action is discovered
/// as fiber-preserving height-k translations. n_check <= 0 picks the
/// default dimension. Throws StructuralFailure.
Extension verify_extension(const Cubespace& total, const Cubespace& base, const FinAbGroup& group,
                           const PointMap& proj, int k, int n_check, SearchBudget& budget,
                           const FiberAction* action = nullptr);
Extension verify_extension(const Cubespace& total, const Cubespace& base, const FinAbGroup& group,
                           const PointMap& proj, int k);

/// N x D_k(A) over N; point (x, a) is x * |A| + a. An extension by
/// construction; `certify` runs verify_extension on it anyway.
Extension trivial_extension(const Cubespace& base, const FinAbGroup& group, int k,
                            SearchBudget& budget, int n_check = 0, bool certify = false);
/// D_k(B) over D_k(A) along ext.proj, acted on by the kernel.
Extension group_extension_space(const GroupExtension& ext, int k, SearchBudget& budget,
                                int n_check = 0);
/// Cubes of M whose projection is a cube of N.
Cubespace pullback_space(const Cubespace& total, const Cubespace& base, const PointMap& proj);

struct SectionResult {
  std::optional<PointMap> section;  // N -> M
  std::string method;               // "exhaustive", "pruned", "translation-lift"
  std::uint64_t candidates = 0;     // candidate maps examined
  std::uint64_t rejected = 0;
};

/// Exhaustive lexicographic search when |A|^|N| is small, otherwise a
/// pruned search with the value at point 0 fixed (any section can be
/// shifted by the action). Morphism checks run up to ext.checked_upto.
SectionResult find_section(const Extension& ext, SearchBudget& budget);
SectionResult find_section(const Extension& ext);
inline constexpr std::uint64_t kExhaustiveSectionLimit = 1 << 16;

struct TranslationBundle {
  Cubespace t;                                  // inside the i-th arrow space
  std::vector<std::pair<Point, Point>> pairs;   // ground of t
  Factor tstar;                                 // F_(k-1)(t)
  Extension ext;                                // tstar over F_(k-1)(N)
};

/// T(alpha, N, i) and T* = F_(k-1)(T), certified as a degree k-i extension
/// of F_(k-1)(N) by A_k. alpha acts on F_(k-1)(N). Needs k >= i+1.
TranslationBundle translation_bundle(const PointMap& alpha, const Cubespace& space, int i, int k,
                                     SearchBudget& budget);

struct TranslationLift {
  std::optional<PointMap> beta;
  std::string method;  // "section" or "search"
  std::string certificate;
};

/// Lift of alpha along proj: total -> base to a height-i translation beta
/// with proj(beta(x)) = alpha(proj(x)). Lexicographic search.
TranslationLift lift_translation(const PointMap& alpha, const Cubespace& total, const PointMap& proj,
                                 std::size_t base_size, int i, int check_dim, SearchBudget& budget);
/// Lift of alpha in Trans_i(F_(k-1)(N)) to Trans_i(N): through a section of
/// T* when k >= i+1, with the direct search as fallback.
TranslationLift lift_translation(const PointMap& alpha, const Cubespace& space, int i, int k,
                                 SearchBudget& budget);

/// Builds a section of an extension of the modulo-n free nilspace
/// F_n(ranks) by lifting the generator shifts and applying their ordered
/// product to a base point; falls back to find_section.
SectionResult split_free_extension(const Extension& ext, Int modulus, const std::vector<int>& ranks,
                                   SearchBudget& budget);

}  // namespace nilspace
