#include "nilspace/bundle.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "nilspace/axioms.hpp"
#include "nilspace/enumerate.hpp"
#include "nilspace/error.hpp"
#include "nilspace/translation.hpp"

namespace nilspace {

namespace {

std::string list_str(CubeView c) {
  std::ostringstream os;
  os << '[';
  for (std::size_t v = 0; v < c.size(); ++v) os << (v ? "," : "") << c[v];
  os << ']';
  return os.str();
}

Partition partition_from_labels(const std::vector<Point>& raw) {
  // Renumber classes by their smallest member.
  Partition p;
  std::vector<Point> rename(raw.size(), UINT32_MAX);
  p.class_of.resize(raw.size());
  for (Point x = 0; x < raw.size(); ++x) {
    if (rename[raw[x]] == UINT32_MAX) {
      rename[raw[x]] = static_cast<Point>(p.classes.size());
      p.classes.emplace_back();
    }
    p.class_of[x] = rename[raw[x]];
    p.classes[p.class_of[x]].push_back(x);
  }
  return p;
}

}  // namespace

Partition sim_classes(const Cubespace& space, int i) {
  if (i < 0) throw InvalidArgument("~_i needs i >= 0");
  if (i + 1 > space.n_max()) throw InvalidArgument("~_i needs dimension i+1 <= n_max");
  const Point size = static_cast<Point>(space.size());
  std::vector<std::vector<bool>> rel(size, std::vector<bool>(size));
  std::vector<Point> cube(num_vertices(i + 1));
  for (Point x = 0; x < size; ++x) {
    for (Point y = 0; y < size; ++y) {
      std::fill(cube.begin(), cube.end(), y);
      cube[0] = x;
      rel[x][y] = space.member_unchecked(cube);
    }
  }
  for (Point x = 0; x < size; ++x) {
    if (!rel[x][x])
      throw StructuralFailure("~_" + std::to_string(i) + " is not reflexive", "x=" + std::to_string(x));
    for (Point y = 0; y < size; ++y) {
      if (rel[x][y] != rel[y][x])
        throw StructuralFailure("~_" + std::to_string(i) + " is not symmetric",
                                "x=" + std::to_string(x) + " y=" + std::to_string(y));
    }
  }
  for (Point x = 0; x < size; ++x)
    for (Point y = 0; y < size; ++y) {
      if (!rel[x][y]) continue;
      for (Point z = 0; z < size; ++z)
        if (rel[y][z] && !rel[x][z])
          throw StructuralFailure("~_" + std::to_string(i) + " is not transitive",
                                  "x=" + std::to_string(x) + " y=" + std::to_string(y) +
                                      " z=" + std::to_string(z));
    }
  std::vector<Point> raw(size);
  for (Point x = 0; x < size; ++x) {
    raw[x] = x;
    for (Point y = 0; y < x; ++y)
      if (rel[x][y]) {
        raw[x] = raw[y];
        break;
      }
  }
  return partition_from_labels(raw);
}

Factor factor_nilspace(const Cubespace& space, int i) {
  Factor f;
  if (i == 0) {
    f.partition = partition_from_labels(std::vector<Point>(space.size(), 0));
  } else {
    f.partition = sim_classes(space, i);
  }
  f.proj = f.partition.class_of;
  if (f.partition.classes.size() == space.size()) {
    f.space = space;
  } else {
    f.space = make_space<FactorSpace>(space, f.partition.class_of,
                                      "F_" + std::to_string(i) + "(" + space.describe() + ")");
  }
  return f;
}

std::uint64_t FiberAction::difference(Point x, Point y) const {
  for (std::uint64_t a = 0; a < act.size(); ++a)
    if (act[a][y] == x) return a;
  throw InvalidArgument("points lie in different orbits");
}

FiberAction fiber_translation_action(const Cubespace& total, const PointMap& proj,
                                     std::size_t base_size, int height, int check_dim,
                                     SearchBudget& budget) {
  if (proj.size() != total.size()) throw InvalidArgument("projection size mismatch");
  std::vector<std::vector<Point>> fibers(base_size);
  for (Point x = 0; x < proj.size(); ++x) {
    if (proj[x] >= base_size) throw InvalidArgument("projection value outside the base");
    fibers[proj[x]].push_back(x);
  }
  const std::size_t s = fibers[0].size();
  for (const auto& f : fibers)
    if (f.size() != s || f.empty()) throw StructuralFailure("fibers have different sizes");

  const std::vector<Point>& phi = fibers[0];
  const Cubespace fiber_space = induced_subspace(total, phi, "fiber");
  const auto local = TranslationChecker(fiber_space, height, check_dim, budget).search(budget);
  if (local.size() != s)
    throw StructuralFailure("fiber translations do not act simply transitively",
                            std::to_string(local.size()) + " translations on a fiber of size " +
                                std::to_string(s));
  std::set<Point> images;
  for (const auto& t : local) images.insert(t[0]);
  if (images.size() != s) throw StructuralFailure("fiber translation action is not free");

  std::set<PointMap> members(local.begin(), local.end());
  std::vector<Int> orders;
  for (const auto& t : local) {
    for (const auto& u : local) {
      const PointMap tu = compose(t, u);
      if (tu != compose(u, t)) throw StructuralFailure("fiber translations do not commute");
      if (!members.count(tu)) throw StructuralFailure("fiber translations are not closed");
    }
    Int ord = 1;
    for (PointMap p = t; p != identity_map(s); p = compose(p, t)) ++ord;
    orders.push_back(ord);
  }
  const FinAbGroup group(invariant_factors_from_orders(orders));
  const auto& d = group.cyclic_orders();

  // Generators with the invariant-factor orders that produce every translation.
  std::vector<PointMap> gens;
  auto element = [&](const std::vector<PointMap>& g, const Element& a) {
    PointMap p = identity_map(s);
    for (std::size_t j = 0; j < g.size(); ++j)
      for (Int t = 0; t < a[j]; ++t) p = compose(p, g[j]);
    return p;
  };
  auto pick = [&](auto&& self, std::size_t j) -> bool {
    if (j == d.size()) {
      std::set<PointMap> seen;
      for (const auto& a : group.elements()) seen.insert(element(gens, a));
      return seen.size() == s;
    }
    for (std::size_t t = 0; t < local.size(); ++t) {
      if (orders[t] != d[j]) continue;
      gens.push_back(local[t]);
      if (self(self, j + 1)) return true;
      gens.pop_back();
    }
    return false;
  };
  if (!pick(pick, 0)) throw StructuralFailure("no generating set for the fiber translations");

  // Extend each generator to a fiber-preserving translation of the whole space.
  const TranslationChecker global(total, height, check_dim, budget);
  std::vector<PointMap> lifted;
  for (const auto& g : gens) {
    std::vector<std::vector<Point>> allowed(total.size());
    for (Point x = 0; x < total.size(); ++x) allowed[x] = fibers[proj[x]];
    for (std::size_t t = 0; t < s; ++t) allowed[phi[t]] = {phi[g[t]]};
    auto hit = global.search(budget, &allowed, 1);
    if (hit.empty())
      throw StructuralFailure("a fiber translation does not extend to the whole space",
                              "height " + std::to_string(height));
    lifted.push_back(std::move(hit.front()));
  }
  for (std::size_t j = 0; j < lifted.size(); ++j) {
    if (permutation_power(lifted[j], d[j]) != identity_map(total.size()))
      throw StructuralFailure("lifted generator has the wrong order");
    for (std::size_t l = 0; l < j; ++l)
      if (compose(lifted[j], lifted[l]) != compose(lifted[l], lifted[j]))
        throw StructuralFailure("lifted generators do not commute");
  }

  FiberAction action;
  action.group = group;
  for (const auto& a : group.elements()) {
    PointMap p = identity_map(total.size());
    for (std::size_t j = 0; j < lifted.size(); ++j) p = compose(p, permutation_power(lifted[j], a[j]));
    action.act.push_back(std::move(p));
  }
  for (Point x = 0; x < total.size(); ++x) {
    std::set<Point> orbit;
    for (const auto& p : action.act) orbit.insert(p[x]);
    if (orbit != std::set<Point>(fibers[proj[x]].begin(), fibers[proj[x]].end()))
      throw StructuralFailure("group orbits are not the fibers", "x=" + std::to_string(x));
  }
  return action;
}

std::optional<std::string> check_lift_conditions(const Cubespace& total, const Cubespace& base,
                                                 const PointMap& proj, const FiberAction& action,
                                                 int degree, int n_check, SearchBudget& budget) {
  if (auto w = morphism_witness(proj, total, base, n_check, budget))
    return "projection is not a morphism: cube " + list_str(*w);
  std::vector<std::vector<Point>> fibers(base.size());
  for (Point x = 0; x < proj.size(); ++x) fibers[proj[x]].push_back(x);

  for (int n = 1; n <= n_check; ++n) {
    const Cubespace dk = dk_structure(action.group, degree, std::max(kDefaultNMax, n));
    const std::vector<Point> g_cubes = enumerate_cubes(dk, n, budget);
    const std::size_t len = num_vertices(n);
    const std::size_t g_count = g_cubes.size() / len;
    const std::vector<Point> base_cubes = enumerate_cubes(base, n, budget);
    const std::size_t b_count = base_cubes.size() / len;
    budget.charge(b_count * g_count, "lift condition check", n);
    const FaceTable& table = pruning_faces(n, total.full_dimension());

    std::vector<std::optional<std::string>> failure(b_count);
    parallel_for(b_count, [&](std::size_t bi) {
      CubeView b(base_cubes.data() + bi * len, len);
      auto cand = [&](Vertex v) -> const std::vector<Point>& { return fibers[b[v]]; };
      std::vector<Point> map(len), scratch, first;
      std::uint64_t lifts = 0;
      auto leaf = [&](CubeView m) {
        if (lifts++ == 0) first.assign(m.begin(), m.end());
        return lifts <= g_count;
      };
      face_dfs(total, table, static_cast<Vertex>(len), map, 0, cand, leaf, scratch);
      if (lifts == 0) {
        failure[bi] = "base cube " + list_str(b) + " has no lift";
        return;
      }
      std::vector<Point> moved(len);
      for (std::size_t gi = 0; gi < g_count; ++gi) {
        for (std::size_t v = 0; v < len; ++v) moved[v] = action.apply(g_cubes[gi * len + v], first[v]);
        if (!total.member_unchecked(moved)) {
          failure[bi] = "lift " + list_str(first) + " shifted by D_" + std::to_string(degree) +
                        " cube " + list_str(CubeView(g_cubes.data() + gi * len, len)) +
                        " is not a cube";
          return;
        }
      }
      if (lifts != g_count)
        failure[bi] = "base cube " + list_str(b) + " has more lifts than C^" + std::to_string(n) +
                      "(D_" + std::to_string(degree) + "(" + action.group.str() + "))";
    });
    for (auto& f : failure)
      if (f) return "n=" + std::to_string(n) + ": " + *f;
  }
  return std::nullopt;
}

StructureGroup structure_group(const Cubespace& space, int i, SearchBudget& budget) {
  if (i < 1) throw InvalidArgument("structure groups are indexed from 1");
  const Factor upper = factor_nilspace(space, i);
  const Factor lower = factor_nilspace(space, i - 1);
  PointMap down(upper.partition.classes.size());
  for (Point c = 0; c < down.size(); ++c) down[c] = lower.proj[upper.partition.classes[c][0]];
  const int check_dim = std::min(i + 1, upper.space.n_max());
  StructureGroup sg;
  sg.level = i;
  sg.action = fiber_translation_action(upper.space, down, lower.partition.classes.size(), i,
                                       check_dim, budget);
  sg.group = sg.action.group;
  return sg;
}

StructureGroup structure_group(const Cubespace& space, int i) {
  SearchBudget budget;
  return structure_group(space, i, budget);
}

BundleDecomposition verify_degree_bundle(const Cubespace& space, int k, int n_check,
                                         SearchBudget& budget) {
  if (k < 1) throw InvalidArgument("bundle degree must be >= 1");
  BundleDecomposition out;
  out.k = k;
  out.checked_upto = n_check;
  for (int i = 0; i <= k; ++i) out.factors.push_back(factor_nilspace(space, i));
  if (out.factors[k].partition.classes.size() != space.size())
    throw StructuralFailure("~_k is not discrete, so the space is not k-step",
                            "k=" + std::to_string(k));
  out.down.emplace_back();
  for (int i = 1; i <= k; ++i) {
    const Factor& upper = out.factors[i];
    const Factor& lower = out.factors[i - 1];
    PointMap down(upper.partition.classes.size());
    for (Point c = 0; c < down.size(); ++c) down[c] = lower.proj[upper.partition.classes[c][0]];
    const int n_here = std::min(n_check, upper.space.n_max());
    StructureGroup sg;
    sg.level = i;
    sg.action = fiber_translation_action(upper.space, down, lower.partition.classes.size(), i,
                                         std::min(i + 1, upper.space.n_max()), budget);
    sg.group = sg.action.group;
    if (auto w = check_lift_conditions(upper.space, lower.space, down, sg.action, i, n_here, budget))
      throw StructuralFailure("degree-bundle condition fails at level " + std::to_string(i), *w);
    out.down.push_back(std::move(down));
    out.groups.push_back(std::move(sg));
  }
  return out;
}

BundleDecomposition verify_degree_bundle(const Cubespace& space, int k) {
  SearchBudget budget;
  return verify_degree_bundle(space, k, std::min(k + 1, space.n_max()), budget);
}

bool is_factor_map(const PointMap& phi, const Cubespace& from, const Cubespace& to, int k) {
  if (phi.size() != from.size()) throw InvalidArgument("map size does not match the source");
  const int dim = morphism_check_dim(k, std::min(from.n_max(), to.n_max()));
  if (!is_morphism(phi, from, to, dim)) throw InvalidArgument("map is not a morphism");
  for (int i = 0; i <= k; ++i) {
    const Partition p = i == 0 ? factor_nilspace(from, 0).partition : sim_classes(from, i);
    const Partition q = i == 0 ? factor_nilspace(to, 0).partition : sim_classes(to, i);
    for (const auto& cls : p.classes) {
      std::set<Point> image;
      for (Point x : cls) image.insert(phi[x]);
      const auto& target = q.classes[q.class_of[phi[cls[0]]]];
      if (image != std::set<Point>(target.begin(), target.end())) return false;
    }
  }
  return true;
}

}  // namespace nilspace
