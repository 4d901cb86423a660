#pragma once
// Exact arithmetic in finite abelian groups given as products of cyclic
// groups, plus characters, homomorphisms and same-rank group extensions.

#include <complex>
#include <initializer_list>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace nilspace {

using Int = std::int64_t;

Int gcd(Int a, Int b);
Int lcm(Int a, Int b);
/// Representative of a mod m in [0, m).
inline Int mod(Int a, Int m) {
  const Int r = a % m;
  return r < 0 ? r + m : r;
}

/// A rational number modulo 1, kept reduced: 0 <= num < den, gcd = 1.
class Phase {
 public:
  Phase() = default;
  Phase(Int num, Int den);

  Int num() const noexcept { return num_; }
  Int den() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_ == 0; }

  Phase operator+(const Phase& o) const;
  Phase operator-(const Phase& o) const;
  Phase operator-() const;
  Phase operator*(Int k) const;
  bool operator==(const Phase& o) const = default;

  /// exp(2 pi i * this)
  std::complex<double> value() const;
  /// "p/q"
  std::string str() const;
  /// Accepts "p/q" or an integer literal.
  static Phase parse(std::string_view text);

 private:
  Int num_ = 0;
  Int den_ = 1;
};

/// Residue vector; coords[j] lies in [0, cyclic_orders[j]).
struct Element {
  std::vector<Int> coords;

  Element() = default;
  explicit Element(std::vector<Int> c) : coords(std::move(c)) {}
  std::size_t size() const noexcept { return coords.size(); }
  Int operator[](std::size_t j) const { return coords[j]; }
  bool operator==(const Element&) const = default;
  auto operator<=>(const Element&) const = default;
  std::string str() const;
};

class FinAbGroup {
 public:
  /// Throws InvalidArgument on any order < 1. An empty list is the trivial group.
  explicit FinAbGroup(std::vector<Int> cyclic_orders = {});
  FinAbGroup(std::initializer_list<Int> cyclic_orders) : FinAbGroup(std::vector<Int>(cyclic_orders)) {}

  const std::vector<Int>& cyclic_orders() const noexcept { return orders_; }
  /// d_1 | d_2 | ... | d_r with every d_j > 1.
  const std::vector<Int>& invariant_factors() const noexcept { return invariants_; }
  std::size_t rank() const noexcept { return invariants_.size(); }
  Int exponent() const noexcept { return invariants_.empty() ? 1 : invariants_.back(); }
  std::uint64_t order() const noexcept { return order_; }
  std::size_t num_factors() const noexcept { return orders_.size(); }
  bool is_normal_form() const { return orders_ == invariants_; }
  FinAbGroup normal_form() const { return FinAbGroup(invariants_); }
  bool isomorphic_to(const FinAbGroup& o) const { return invariants_ == o.invariants_; }
  bool operator==(const FinAbGroup& o) const { return orders_ == o.orders_; }

  Element zero() const;
  Element reduce(std::vector<Int> raw) const;
  Element add(const Element& a, const Element& b) const;
  Element sub(const Element& a, const Element& b) const;
  Element neg(const Element& a) const;
  Element scale(const Element& a, Int k) const;
  bool contains(const Element& a) const;
  Int element_order(const Element& a) const;

  /// Mixed-radix index, coordinate 0 most significant.
  std::uint64_t index_of(const Element& a) const;
  Element element_at(std::uint64_t index) const;
  std::vector<Element> elements() const;

  /// "Z_2 x Z_4", or "0" for the trivial group.
  std::string str() const;

 private:
  std::vector<Int> orders_;
  std::vector<Int> invariants_;
  std::uint64_t order_ = 1;
};

/// make_group in the operation catalogue.
inline FinAbGroup make_group(std::vector<Int> orders) { return FinAbGroup(std::move(orders)); }

/// Invariant factors of an abstract finite abelian group given the number of
/// elements of each order (orders listed per element). Used to identify groups
/// that are only known through a multiplication table.
std::vector<Int> invariant_factors_from_orders(const std::vector<Int>& element_orders);

class Homomorphism {
 public:
  /// images[j] is the image of the j-th cyclic generator of `source`.
  /// Throws InvalidArgument unless order(images[j]) divides cyclic_orders[j].
  Homomorphism(FinAbGroup source, FinAbGroup target, std::vector<Element> images);

  const FinAbGroup& source() const noexcept { return source_; }
  const FinAbGroup& target() const noexcept { return target_; }
  const std::vector<Element>& images() const noexcept { return images_; }

  Element apply(const Element& x) const;
  bool is_surjective() const;
  std::vector<Element> kernel() const;

 private:
  FinAbGroup source_;
  FinAbGroup target_;
  std::vector<Element> images_;
};

class Character {
 public:
  /// One phase per cyclic factor; coeffs[j] * cyclic_orders[j] must be 0 mod 1.
  Character(FinAbGroup group, std::vector<Phase> coeffs);

  const FinAbGroup& group() const noexcept { return group_; }
  const std::vector<Phase>& coeffs() const noexcept { return coeffs_; }
  Phase phase(const Element& x) const;
  std::complex<double> operator()(const Element& x) const { return phase(x).value(); }
  Int order() const;
  bool is_trivial() const;

 private:
  FinAbGroup group_;
  std::vector<Phase> coeffs_;
};

/// All |G| characters, in mixed-radix order of their coefficient numerators.
std::vector<Character> characters(const FinAbGroup& g);

/// 0 -> C -> B --proj--> A -> 0 with |B| = |A| |C|.
struct GroupExtension {
  FinAbGroup total;
  FinAbGroup base;
  Homomorphism proj;
  std::uint64_t kernel_order;
};

/// Canonical height-i extension: every invariant factor d_j of A is replaced
/// by e^(i-1) d_j (e = exponent(A)) and proj reduces componentwise. The base
/// of the result is A in invariant-factor form.
GroupExtension height_extension(const FinAbGroup& a, int i);

/// Elements of ext.total over `a`, in index order.
std::vector<Element> fiber(const GroupExtension& ext, const Element& a);

}  // namespace nilspace
