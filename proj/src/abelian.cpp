#include "nilspace/abelian.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "nilspace/error.hpp"

namespace nilspace {

Int gcd(Int a, Int b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    const Int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Int lcm(Int a, Int b) {
  if (a == 0 || b == 0) return 0;
  return a / gcd(a, b) * b;
}

// ---------------------------------------------------------------- Phase

Phase::Phase(Int num, Int den) {
  if (den <= 0) throw InvalidArgument("phase denominator must be positive");
  num = mod(num, den);
  const Int g = gcd(num, den);
  num_ = g == 0 ? 0 : num / g;
  den_ = g == 0 ? 1 : den / g;
  if (num_ == 0) den_ = 1;
}

Phase Phase::operator+(const Phase& o) const {
  const Int l = lcm(den_, o.den_);
  return Phase(num_ * (l / den_) + o.num_ * (l / o.den_), l);
}

Phase Phase::operator-(const Phase& o) const { return *this + (-o); }

Phase Phase::operator-() const { return Phase(-num_, den_); }

Phase Phase::operator*(Int k) const { return Phase(mod(num_ * mod(k, den_), den_), den_); }

std::complex<double> Phase::value() const {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(num_) / static_cast<double>(den_);
  return std::polar(1.0, angle);
}

std::string Phase::str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

Phase Phase::parse(std::string_view text) {
  auto to_int = [&](std::string_view s) -> Int {
    if (s.empty()) throw InvalidArgument("empty phase component in '" + std::string(text) + "'");
    std::size_t pos = 0;
    Int v = 0;
    try {
      v = std::stoll(std::string(s), &pos);
    } catch (const std::exception&) {
      throw InvalidArgument("malformed phase '" + std::string(text) + "'");
    }
    if (pos != s.size()) throw InvalidArgument("malformed phase '" + std::string(text) + "'");
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Phase(to_int(text), 1);
  return Phase(to_int(text.substr(0, slash)), to_int(text.substr(slash + 1)));
}

std::string Element::str() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t j = 0; j < coords.size(); ++j) os << (j ? "," : "") << coords[j];
  os << ')';
  return os.str();
}

// ---------------------------------------------------------------- FinAbGroup

namespace {

std::map<Int, int> factorize(Int n) {
  std::map<Int, int> out;
  for (Int p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      ++out[p];
      n /= p;
    }
  }
  if (n > 1) ++out[n];
  return out;
}

Int ipow(Int b, int e) {
  Int r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// Invariant factors from the prime-power exponents of every prime.
std::vector<Int> assemble_invariants(const std::map<Int, std::vector<int>>& partitions) {
  std::size_t length = 0;
  for (const auto& [p, parts] : partitions) length = std::max(length, parts.size());
  std::vector<Int> out(length, 1);
  for (const auto& [p, parts] : partitions) {
    std::vector<int> sorted = parts;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    for (std::size_t t = 0; t < sorted.size(); ++t) out[length - 1 - t] *= ipow(p, sorted[t]);
  }
  return out;
}

}  // namespace

FinAbGroup::FinAbGroup(std::vector<Int> cyclic_orders) : orders_(std::move(cyclic_orders)) {
  std::map<Int, std::vector<int>> partitions;
  for (Int d : orders_) {
    if (d < 1) throw InvalidArgument("cyclic order must be >= 1, got " + std::to_string(d));
    if (order_ > (std::uint64_t{1} << 40) / static_cast<std::uint64_t>(d))
      throw InvalidArgument("group order too large");
    order_ *= static_cast<std::uint64_t>(d);
    for (const auto& [p, e] : factorize(d)) partitions[p].push_back(e);
  }
  invariants_ = assemble_invariants(partitions);
}

std::vector<Int> invariant_factors_from_orders(const std::vector<Int>& element_orders) {
  std::map<Int, std::vector<int>> partitions;
  const double total = static_cast<double>(element_orders.size());
  std::map<Int, int> primes;
  for (Int o : element_orders)
    for (const auto& [p, e] : factorize(o)) primes[p] = std::max(primes[p], e);
  for (const auto& [p, top] : primes) {
    // s_j = log_p #{x : p^j x = 0 in the p-part}. Elements whose order's
    // p-valuation is <= j, times the p'-part, give |G[p^j]| * |G_p'|.
    std::vector<int> s(top + 1, 0);
    Int pprime_part = 0;
    for (Int o : element_orders)
      if (o % p != 0) ++pprime_part;
    for (int j = 0; j <= top; ++j) {
      Int count = 0;
      for (Int o : element_orders) {
        Int v = 0, t = o;
        while (t % p == 0) {
          t /= p;
          ++v;
        }
        if (v <= j) ++count;
      }
      s[j] = static_cast<int>(std::lround(std::log(static_cast<double>(count) /
                                                   static_cast<double>(pprime_part)) /
                                          std::log(static_cast<double>(p))));
    }
    // #{t : lambda_t >= j} = s_j - s_{j-1}
    std::vector<int> at_least(top + 2, 0);
    for (int j = 1; j <= top; ++j) at_least[j] = s[j] - s[j - 1];
    std::vector<int> parts;
    for (int j = 1; j <= top; ++j) {
      const int exactly = at_least[j] - at_least[j + 1];
      for (int c = 0; c < exactly; ++c) parts.push_back(j);
    }
    partitions[p] = parts;
  }
  (void)total;
  return assemble_invariants(partitions);
}

Element FinAbGroup::zero() const { return Element(std::vector<Int>(orders_.size(), 0)); }

Element FinAbGroup::reduce(std::vector<Int> raw) const {
  if (raw.size() != orders_.size()) throw InvalidArgument("element arity mismatch for " + str());
  for (std::size_t j = 0; j < raw.size(); ++j) raw[j] = mod(raw[j], orders_[j]);
  return Element(std::move(raw));
}

Element FinAbGroup::add(const Element& a, const Element& b) const {
  std::vector<Int> c(orders_.size());
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = mod(a[j] + b[j], orders_[j]);
  return Element(std::move(c));
}

Element FinAbGroup::sub(const Element& a, const Element& b) const {
  std::vector<Int> c(orders_.size());
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = mod(a[j] - b[j], orders_[j]);
  return Element(std::move(c));
}

Element FinAbGroup::neg(const Element& a) const {
  std::vector<Int> c(orders_.size());
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = mod(-a[j], orders_[j]);
  return Element(std::move(c));
}

Element FinAbGroup::scale(const Element& a, Int k) const {
  std::vector<Int> c(orders_.size());
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = mod(a[j] * mod(k, orders_[j]), orders_[j]);
  return Element(std::move(c));
}

bool FinAbGroup::contains(const Element& a) const {
  if (a.size() != orders_.size()) return false;
  for (std::size_t j = 0; j < a.size(); ++j)
    if (a[j] < 0 || a[j] >= orders_[j]) return false;
  return true;
}

Int FinAbGroup::element_order(const Element& a) const {
  Int o = 1;
  for (std::size_t j = 0; j < a.size(); ++j) o = lcm(o, orders_[j] / gcd(a[j], orders_[j]));
  return o;
}

std::uint64_t FinAbGroup::index_of(const Element& a) const {
  std::uint64_t idx = 0;
  for (std::size_t j = 0; j < orders_.size(); ++j)
    idx = idx * static_cast<std::uint64_t>(orders_[j]) + static_cast<std::uint64_t>(a[j]);
  return idx;
}

Element FinAbGroup::element_at(std::uint64_t index) const {
  std::vector<Int> c(orders_.size());
  for (std::size_t j = orders_.size(); j-- > 0;) {
    c[j] = static_cast<Int>(index % static_cast<std::uint64_t>(orders_[j]));
    index /= static_cast<std::uint64_t>(orders_[j]);
  }
  return Element(std::move(c));
}

std::vector<Element> FinAbGroup::elements() const {
  std::vector<Element> out;
  out.reserve(order_);
  for (std::uint64_t i = 0; i < order_; ++i) out.push_back(element_at(i));
  return out;
}

std::string FinAbGroup::str() const {
  if (orders_.empty()) return "0";
  std::string s;
  for (std::size_t j = 0; j < orders_.size(); ++j)
    s += (j ? " x Z_" : "Z_") + std::to_string(orders_[j]);
  return s;
}

// ---------------------------------------------------------------- Homomorphism

Homomorphism::Homomorphism(FinAbGroup source, FinAbGroup target, std::vector<Element> images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
  if (images_.size() != source_.num_factors())
    throw InvalidArgument("homomorphism needs one image per cyclic generator");
  for (std::size_t j = 0; j < images_.size(); ++j) {
    if (!target_.contains(images_[j]))
      throw InvalidArgument("generator image " + images_[j].str() + " not in " + target_.str());
    if (source_.cyclic_orders()[j] % target_.element_order(images_[j]) != 0)
      throw InvalidArgument("generator image order does not divide the generator order");
  }
}

Element Homomorphism::apply(const Element& x) const {
  Element y = target_.zero();
  for (std::size_t j = 0; j < images_.size(); ++j) y = target_.add(y, target_.scale(images_[j], x[j]));
  return y;
}

bool Homomorphism::is_surjective() const {
  std::vector<char> hit(target_.order(), 0);
  std::uint64_t count = 0;
  for (std::uint64_t i = 0; i < source_.order(); ++i) {
    const auto t = target_.index_of(apply(source_.element_at(i)));
    if (!hit[t]) {
      hit[t] = 1;
      ++count;
    }
  }
  return count == target_.order();
}

std::vector<Element> Homomorphism::kernel() const {
  std::vector<Element> out;
  const Element z = target_.zero();
  for (std::uint64_t i = 0; i < source_.order(); ++i) {
    Element x = source_.element_at(i);
    if (apply(x) == z) out.push_back(std::move(x));
  }
  return out;
}

// ---------------------------------------------------------------- Character

Character::Character(FinAbGroup group, std::vector<Phase> coeffs)
    : group_(std::move(group)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != group_.num_factors())
    throw InvalidArgument("character needs one phase per cyclic factor");
  for (std::size_t j = 0; j < coeffs_.size(); ++j)
    if (!(coeffs_[j] * group_.cyclic_orders()[j]).is_zero())
      throw InvalidArgument("character phase " + coeffs_[j].str() + " is not a " +
                            std::to_string(group_.cyclic_orders()[j]) + "-th root phase");
}

Phase Character::phase(const Element& x) const {
  Phase p;
  for (std::size_t j = 0; j < coeffs_.size(); ++j) p = p + coeffs_[j] * x[j];
  return p;
}

Int Character::order() const {
  Int o = 1;
  for (const auto& c : coeffs_) o = lcm(o, c.den());
  return o;
}

bool Character::is_trivial() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Phase& p) { return p.is_zero(); });
}

std::vector<Character> characters(const FinAbGroup& g) {
  std::vector<Character> out;
  out.reserve(g.order());
  for (std::uint64_t i = 0; i < g.order(); ++i) {
    const Element t = g.element_at(i);
    std::vector<Phase> coeffs;
    for (std::size_t j = 0; j < t.size(); ++j) coeffs.emplace_back(t[j], g.cyclic_orders()[j]);
    out.emplace_back(g, std::move(coeffs));
  }
  return out;
}

// ---------------------------------------------------------------- extensions

GroupExtension height_extension(const FinAbGroup& a, int i) {
  if (i < 1) throw InvalidArgument("extension height must be >= 1");
  const FinAbGroup base = a.normal_form();
  const Int e = base.exponent();
  Int lift = 1;
  for (int t = 1; t < i; ++t) {
    if (lift > (Int{1} << 30) / e) throw InvalidArgument("extension height too large");
    lift *= e;
  }
  std::vector<Int> total_orders;
  for (Int d : base.invariant_factors()) total_orders.push_back(lift * d);
  FinAbGroup total(total_orders);
  std::vector<Element> images;
  for (std::size_t j = 0; j < total_orders.size(); ++j) {
    std::vector<Int> c(total_orders.size(), 0);
    c[j] = 1;
    images.emplace_back(std::move(c));
  }
  Homomorphism proj(total, base, std::move(images));
  const std::uint64_t kernel = total.order() / base.order();
  return GroupExtension{std::move(total), base, std::move(proj), kernel};
}

std::vector<Element> fiber(const GroupExtension& ext, const Element& a) {
  if (!ext.base.contains(a)) throw InvalidArgument("fiber point " + a.str() + " not in base");
  std::vector<Element> out;
  for (std::uint64_t i = 0; i < ext.total.order(); ++i) {
    Element b = ext.total.element_at(i);
    if (ext.proj.apply(b) == a) out.push_back(std::move(b));
  }
  return out;
}

}  // namespace nilspace
