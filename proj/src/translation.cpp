#include "nilspace/translation.hpp"

#include <bit>
#include <set>
#include <sstream>

#include "nilspace/enumerate.hpp"
#include "nilspace/error.hpp"

namespace nilspace {

TranslationChecker::TranslationChecker(Cubespace space, int i, int check_dim, SearchBudget& budget)
    : space_(std::move(space)), i_(i), check_dim_(check_dim) {
  if (i < 1) throw InvalidArgument("translation height must be >= 1");
  if (check_dim > space_.n_max())
    throw InvalidArgument("translation check dimension exceeds n_max");
  for (int n = std::max(i, 1); n <= check_dim; ++n) {
    DimData d;
    d.n = n;
    d.cubes = enumerate_cubes(space_, n, budget);
    for (const auto& f : faces(n, n - i)) d.faces.push_back(f.vertices());
    dims_.push_back(std::move(d));
  }
}

bool TranslationChecker::constraint_ok(const Constraint& c, const PointMap& alpha,
                                       std::vector<Point>& scratch) const {
  const DimData& d = dims_[c.dim_slot];
  const std::size_t len = num_vertices(d.n);
  const Point* cube = d.cubes.data() + std::size_t{c.cube} * len;
  scratch.assign(cube, cube + len);
  bool changed = false;
  for (Vertex v : d.faces[c.face]) {
    const Point moved = alpha[cube[v]];
    changed |= moved != cube[v];
    scratch[v] = moved;
  }
  return !changed || space_.member_unchecked(scratch);
}

bool TranslationChecker::check(const PointMap& alpha, std::string* witness) const {
  if (alpha.size() != space_.size()) throw InvalidArgument("map size does not match the ground set");
  std::vector<Point> scratch;
  for (std::uint32_t s = 0; s < dims_.size(); ++s) {
    const DimData& d = dims_[s];
    const std::size_t len = num_vertices(d.n);
    const std::size_t count = d.cubes.size() / len;
    for (std::uint32_t c = 0; c < count; ++c) {
      for (std::uint32_t f = 0; f < d.faces.size(); ++f) {
        if (constraint_ok({s, c, f}, alpha, scratch)) continue;
        if (witness) {
          std::ostringstream os;
          os << "n=" << d.n << " cube=[";
          for (std::size_t v = 0; v < len; ++v) os << (v ? "," : "") << d.cubes[c * len + v];
          os << "] face=[";
          for (std::size_t t = 0; t < d.faces[f].size(); ++t) os << (t ? "," : "") << d.faces[f][t];
          os << "]";
          *witness = os.str();
        }
        return false;
      }
    }
  }
  return true;
}

std::vector<PointMap> TranslationChecker::search(SearchBudget& budget,
                                                 const std::vector<std::vector<Point>>* allowed,
                                                 std::size_t limit) const {
  const std::size_t size = space_.size();
  if (allowed && allowed->size() != size) throw InvalidArgument("allowed list size mismatch");
  // Bucket every (cube, face) condition by the largest point it reads.
  std::vector<std::vector<Constraint>> bucket(size);
  for (std::uint32_t s = 0; s < dims_.size(); ++s) {
    const DimData& d = dims_[s];
    const std::size_t len = num_vertices(d.n);
    const std::size_t count = d.cubes.size() / len;
    for (std::uint32_t c = 0; c < count; ++c) {
      for (std::uint32_t f = 0; f < d.faces.size(); ++f) {
        Point top = 0;
        for (Vertex v : d.faces[f]) top = std::max(top, d.cubes[c * len + v]);
        bucket[top].push_back({s, c, f});
      }
    }
  }
  std::vector<Point> all(size);
  for (Point p = 0; p < size; ++p) all[p] = p;
  std::vector<PointMap> found;
  PointMap alpha(size, 0);
  std::vector<bool> used(size, false);
  std::vector<Point> scratch;
  std::uint64_t pending = 0;
  auto dfs = [&](auto&& self, Point p) -> bool {
    if (p == size) {
      found.push_back(alpha);
      return found.size() < limit;
    }
    const auto& cand = allowed ? (*allowed)[p] : all;
    for (Point x : cand) {
      if (x >= size || used[x]) continue;
      if (++pending == 4096) {
        budget.charge(pending, "translation search");
        pending = 0;
      }
      alpha[p] = x;
      bool ok = true;
      for (const auto& c : bucket[p]) {
        if (!constraint_ok(c, alpha, scratch)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      used[x] = true;
      const bool more = self(self, p + 1);
      used[x] = false;
      if (!more) return false;
    }
    return true;
  };
  if (size > 0) dfs(dfs, 0);
  if (pending) budget.charge(pending, "translation search");
  return found;
}

bool is_translation(const PointMap& alpha, const Cubespace& space, int i, int check_dim) {
  if (!is_permutation(alpha) || alpha.size() != space.size()) return false;
  SearchBudget budget;
  return TranslationChecker(space, i, check_dim, budget).check(alpha);
}

PointMap inverse_permutation(const PointMap& p) {
  if (!is_permutation(p)) throw InvalidArgument("not a permutation");
  PointMap inv(p.size());
  for (Point x = 0; x < p.size(); ++x) inv[p[x]] = x;
  return inv;
}

bool is_permutation(const PointMap& p) {
  std::vector<bool> seen(p.size());
  for (Point x : p) {
    if (x >= p.size() || seen[x]) return false;
    seen[x] = true;
  }
  return true;
}

namespace {

Int permutation_order(const PointMap& p) {
  Int order = 1;
  std::vector<bool> seen(p.size());
  for (Point x = 0; x < p.size(); ++x) {
    if (seen[x]) continue;
    Int len = 0;
    for (Point y = x; !seen[y]; y = p[y]) {
      seen[y] = true;
      ++len;
    }
    order = lcm(order, len);
  }
  return order;
}

}  // namespace

PointMap permutation_power(const PointMap& p, Int e) {
  if (!is_permutation(p)) throw InvalidArgument("not a permutation");
  const Int r = mod(e, permutation_order(p));
  PointMap out = identity_map(p.size());
  for (Int t = 0; t < r; ++t)
    for (auto& x : out) x = p[x];
  return out;
}

TransGroup trans_group(const Cubespace& space, int i, int check_dim, SearchBudget& budget) {
  TransGroup g;
  g.height = i;
  g.check_dim = std::max(check_dim, i);
  g.elements = TranslationChecker(space, i, g.check_dim, budget).search(budget);
  const std::set<PointMap> members(g.elements.begin(), g.elements.end());
  g.closed = true;
  for (const auto& a : g.elements) {
    if (!members.count(inverse_permutation(a))) g.closed = false;
    for (const auto& b : g.elements)
      if (!members.count(compose(a, b))) g.closed = false;
  }
  const int next_dim = std::max(g.check_dim, i + 1);
  g.contains_next = true;
  if (next_dim <= space.n_max()) {
    for (const auto& a : TranslationChecker(space, i + 1, next_dim, budget).search(budget))
      if (!members.count(a)) g.contains_next = false;
  }
  return g;
}

bool dz_member(std::span<const Int> c, int i) {
  const int n = cube_dim(c.size());
  std::vector<Int> a(c.begin(), c.end());
  for (int b = 0; b < n; ++b)
    for (Vertex v = 0; v < a.size(); ++v)
      if (v & (Vertex{1} << b)) a[v] -= a[v ^ (Vertex{1} << b)];
  for (Vertex s = 0; s < a.size(); ++s)
    if (std::popcount(s) > i && a[s] != 0) return false;
  return true;
}

std::vector<Point> cube_action(const Cubespace& space, CubeView f, std::span<const Int> c,
                               const PointMap& alpha, int i) {
  if (f.size() != c.size()) throw InvalidArgument("cube and coefficient map differ in dimension");
  if (alpha.size() != space.size() || !is_permutation(alpha))
    throw InvalidArgument("alpha must be a permutation of the ground set");
  if (!dz_member(c, i)) throw InvalidArgument("coefficient map is not a cube of D_i(Z)");
  std::vector<Point> out(f.size());
  for (std::size_t v = 0; v < f.size(); ++v) out[v] = permutation_power(alpha, c[v])[f[v]];
  if (!space.member(out)) throw StructuralFailure("acted map is not a cube", "cube_action");
  return out;
}

}  // namespace nilspace
