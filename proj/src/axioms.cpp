#include "nilspace/axioms.hpp"

#include <algorithm>
#include <set>

#include "nilspace/error.hpp"
#include "nilspace/runtime.hpp"

namespace nilspace {

bool AxiomReport::composition_ok() const {
  return std::all_of(dims.begin(), dims.end(), [](const auto& d) { return d.composition_ok; });
}

bool AxiomReport::gluing_ok() const {
  return std::all_of(dims.begin(), dims.end(), [](const auto& d) { return d.gluing_ok; });
}

namespace {

struct Pullback {
  int source_dim;
  std::vector<Vertex> table;
  std::string name;
  bool pins;  // restriction to a face
};

std::vector<std::vector<Pullback>> pullbacks_by_target(int n_upto) {
  std::vector<std::vector<Pullback>> out(n_upto + 1);
  for (const auto& g : generating_morphisms(n_upto)) {
    const bool pins = std::any_of(g.forms().begin(), g.forms().end(),
                                  [](const CoordForm& f) { return f.kind == CoordKind::Zero; });
    out[g.target_dim()].push_back({g.source_dim(), g.table(), g.str(), pins});
  }
  return out;
}

struct BranchResult {
  std::uint64_t count = 0;
  std::uint64_t min_completions = UINT64_MAX;
  std::uint64_t max_completions = 0;
  std::optional<Counterexample> failure;
};

}  // namespace

AxiomReport check_axioms(const Cubespace& space, int n_upto, SearchBudget& budget, EnumMode mode) {
  if (n_upto < 1 || n_upto > space.n_max())
    throw InvalidArgument("n_upto must lie in [1, n_max]");
  AxiomReport report;
  const Point size = static_cast<Point>(space.size());

  for (Point x = 0; x < size && report.ergodic_ok; ++x) {
    for (Point y = 0; y < size; ++y) {
      const Point pair[2] = {x, y};
      if (!space.member_unchecked(pair)) {
        report.ergodic_ok = false;
        report.counterexample = Counterexample{"ergodicity", 1, {x, y}, {}};
        break;
      }
    }
  }

  const auto pullbacks = pullbacks_by_target(n_upto);
  std::optional<Counterexample> first_failure;

  for (int m = 0; m <= n_upto; ++m) {
    DimensionReport dim;
    dim.n = m;
    const EnumMode cube_mode = resolve_mode(space, m, false, mode);
    dim.mode = enum_mode_name(cube_mode);
    const bool pruned = cube_mode == EnumMode::Pruned;

    // Pullbacks grouped by source dimension, so each group is one batch.
    std::vector<std::vector<const Pullback*>> by_source(n_upto + 1);
    for (const auto& pb : pullbacks[m]) {
      if (pruned && (pb.pins || pb.source_dim <= space.full_dimension())) continue;
      by_source[pb.source_dim].push_back(&pb);
    }

    std::vector<BranchResult> branches(size);
    parallel_for(size, [&](std::size_t first) {
      BranchResult& br = branches[first];
      std::vector<Point> batch;
      std::vector<std::uint8_t> ok;
      for_each_cube_from(space, m, static_cast<Point>(first), budget, [&](CubeView cube) {
        ++br.count;
        for (int s = 0; s <= n_upto; ++s) {
          const auto& group = by_source[s];
          if (group.empty()) continue;
          const std::size_t len = num_vertices(s);
          batch.resize(group.size() * len);
          for (std::size_t g = 0; g < group.size(); ++g)
            for (std::size_t v = 0; v < len; ++v) batch[g * len + v] = cube[group[g]->table[v]];
          ok.assign(group.size(), 0);
          space.member_batch(s, batch, ok);
          for (std::size_t g = 0; g < group.size(); ++g) {
            if (!ok[g]) {
              br.failure = Counterexample{"composition", m, {cube.begin(), cube.end()}, group[g]->name};
              return false;
            }
          }
        }
        return true;
      }, cube_mode);
    });
    for (const auto& br : branches) {
      dim.cubes += br.count;
      if (br.failure && dim.composition_ok) {
        dim.composition_ok = false;
        if (!first_failure) first_failure = br.failure;
      }
    }

    if (m >= 1) {
      const EnumMode corner_mode = resolve_mode(space, m, true, mode);
      std::vector<BranchResult> cb(size);
      parallel_for(size, [&](std::size_t first) {
        BranchResult& br = cb[first];
        const std::size_t len = num_vertices(m);
        std::vector<Point> batch(len * size);
        std::vector<std::uint8_t> ok(size);
        for_each_corner_from(space, m, static_cast<Point>(first), budget, [&](CubeView corner) {
          ++br.count;
          for (Point x = 0; x < size; ++x) {
            std::copy(corner.begin(), corner.end(), batch.begin() + x * len);
            batch[x * len + len - 1] = x;
          }
          space.member_batch(m, batch, ok);
          std::uint64_t c = 0;
          for (auto b : ok) c += b;
          br.min_completions = std::min(br.min_completions, c);
          br.max_completions = std::max(br.max_completions, c);
          if (c == 0) {
            std::vector<Point> map(corner.begin(), corner.end() - 1);
            br.failure = Counterexample{"gluing", m, std::move(map), {}};
            return false;
          }
          return true;
        }, corner_mode);
      });
      std::uint64_t lo = UINT64_MAX, hi = 0;
      for (const auto& br : cb) {
        dim.corners += br.count;
        lo = std::min(lo, br.min_completions);
        hi = std::max(hi, br.max_completions);
        if (br.failure && dim.gluing_ok) {
          dim.gluing_ok = false;
          if (!first_failure) first_failure = br.failure;
        }
      }
      dim.min_completions = dim.corners ? lo : 0;
      dim.max_completions = hi;
    }
    report.dims.push_back(std::move(dim));
  }

  if (!report.counterexample) report.counterexample = first_failure;
  if (report.all_ok()) {
    for (const auto& d : report.dims) {
      if (d.n >= 1 && d.corners > 0 && d.max_completions == 1) {
        report.kstep = d.n - 1;
        break;
      }
    }
  }
  return report;
}

AxiomReport check_axioms(const Cubespace& space, int n_upto) {
  SearchBudget budget;
  return check_axioms(space, n_upto, budget);
}

std::optional<std::vector<Point>> morphism_witness(const PointMap& f, const Cubespace& from,
                                                   const Cubespace& to, int n_upto,
                                                   SearchBudget& budget) {
  if (f.size() != from.size()) throw InvalidArgument("map size does not match the source ground set");
  for (Point p : f)
    if (p >= to.size()) throw InvalidArgument("map value outside the target ground set");
  if (n_upto > from.n_max() || n_upto > to.n_max())
    throw InvalidArgument("n_upto exceeds a space's n_max");
  const Point size = static_cast<Point>(from.size());
  for (int n = std::max(1, to.full_dimension() + 1); n <= n_upto; ++n) {
    std::vector<std::optional<std::vector<Point>>> found(size);
    parallel_for(size, [&](std::size_t first) {
      std::vector<Point> image(num_vertices(n));
      for_each_cube_from(from, n, static_cast<Point>(first), budget, [&](CubeView c) {
        for (std::size_t v = 0; v < c.size(); ++v) image[v] = f[c[v]];
        if (to.member_unchecked(image)) return true;
        found[first].emplace(c.begin(), c.end());
        return false;
      });
    });
    for (auto& w : found)
      if (w) return w;
  }
  return std::nullopt;
}

bool is_morphism(const PointMap& f, const Cubespace& from, const Cubespace& to, int n_upto,
                 SearchBudget& budget) {
  return !morphism_witness(f, from, to, n_upto, budget).has_value();
}

bool is_morphism(const PointMap& f, const Cubespace& from, const Cubespace& to, int n_upto) {
  SearchBudget budget;
  return is_morphism(f, from, to, n_upto, budget);
}

SubdirectProduct subdirect_product(const Cubespace& n, const Cubespace& k, const Cubespace& factor,
                                   const PointMap& p1, const PointMap& p2, int n_upto) {
  SearchBudget budget;
  n_upto = std::min({n_upto, n.n_max(), k.n_max(), factor.n_max()});
  if (!is_morphism(p1, n, factor, n_upto, budget))
    throw InvalidArgument("first projection is not a morphism onto the factor");
  if (!is_morphism(p2, k, factor, n_upto, budget))
    throw InvalidArgument("second projection is not a morphism onto the factor");
  if (!is_surjective(p1, factor.size()) || !is_surjective(p2, factor.size()))
    throw InvalidArgument("projections must be onto the common factor");
  SubdirectProduct out;
  std::vector<Point> points;
  for (Point a = 0; a < n.size(); ++a) {
    for (Point b = 0; b < k.size(); ++b) {
      if (p1[a] != p2[b]) continue;
      out.pairs.emplace_back(a, b);
      points.push_back(static_cast<Point>(a * k.size() + b));
    }
  }
  out.space = induced_subspace(product(n, k), std::move(points),
                               "subdirect(" + n.describe() + ", " + k.describe() + ")");
  return out;
}

std::vector<PointMap> dk_morphisms(const FinAbGroup& a, int i, const FinAbGroup& b, int j,
                                   SearchBudget& budget) {
  if (i < 1 || j < 1) throw InvalidArgument("degrees must be >= 1");
  // The target is j-step, so images are cubes once their (j+1)-faces are,
  // and at dimension j+1 the only condition is the top alternating sum.
  // That sum depends on a cube only through its signed value counts.
  const int n = j + 1;
  const Cubespace src = dk_structure(a, i, std::max(kDefaultNMax, n));
  std::set<std::vector<int>> signatures;
  for_each_cube(src, n, budget, [&](CubeView c) {
    std::vector<int> sig(a.order(), 0);
    for (Vertex v = 0; v < c.size(); ++v) sig[c[v]] += h_parity(v);
    signatures.insert(std::move(sig));
    return true;
  });
  const std::uint64_t maps = checked_pow(b.order(), a.order());
  if (maps == UINT64_MAX) throw ResourceLimit("map count overflows");
  budget.charge(maps, "morphism census", n);
  const auto belems = b.elements();
  std::vector<PointMap> out;
  PointMap phi(a.order(), 0);
  for (std::uint64_t code = 0; code < maps; ++code) {
    std::uint64_t c = code;
    for (std::size_t p = a.order(); p-- > 0;) {
      phi[p] = static_cast<Point>(c % b.order());
      c /= b.order();
    }
    bool ok = true;
    for (const auto& sig : signatures) {
      Element sum = b.zero();
      for (std::size_t p = 0; p < sig.size(); ++p)
        if (sig[p] != 0) sum = b.add(sum, b.scale(belems[phi[p]], sig[p]));
      if (sum != b.zero()) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(phi);
  }
  return out;
}

DerivmorphReport check_derivmorph(const FinAbGroup& a, const FinAbGroup& b, int i, int j,
                                  SearchBudget& budget) {
  DerivmorphReport r;
  r.i = i;
  r.j = j;
  r.maps = checked_pow(b.order(), a.order());
  const auto morphisms = dk_morphisms(a, i, b, j, budget);
  r.morphisms = morphisms.size();
  std::set<PointMap> lower;
  if (i <= j) {
    for (auto& m : dk_morphisms(a, 1, b, j - i + 1, budget)) lower.insert(std::move(m));
  }
  for (const auto& phi : morphisms) {
    const bool constant = std::all_of(phi.begin(), phi.end(), [&](Point p) { return p == phi[0]; });
    if (constant) ++r.constant;
    if (i > j) {
      if (!constant) r.exceptions.push_back(phi);
    } else if (lower.count(phi)) {
      ++r.rechecked;
    } else {
      r.exceptions.push_back(phi);
    }
  }
  return r;
}

}  // namespace nilspace
