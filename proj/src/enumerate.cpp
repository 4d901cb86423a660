#include "nilspace/enumerate.hpp"

#include <bit>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

#include "nilspace/error.hpp"

namespace nilspace {
namespace {

std::mutex g_table_mutex;
std::map<std::pair<int, int>, std::unique_ptr<FaceTable>> g_tables;

FaceTable build_pruning(int n, int skip_dim) {
  FaceTable t;
  t.n = n;
  t.at.resize(num_vertices(n));
  for (Vertex v = 0; v < num_vertices(n); ++v) {
    // faces whose largest vertex is v: free coordinates S within bits(v)
    for (Vertex s = v;; s = (s - 1) & v) {
      if (s != 0 && std::popcount(s) > skip_dim) t.at[v].push_back(Face{n, s, v & ~s}.vertices());
      if (s == 0) break;
    }
  }
  return t;
}

const FaceTable& cached(int n, int tag, FaceTable (*build)(int, int), int arg) {
  if (n < 0 || n > kMaxCubeDim) throw InvalidArgument("cube dimension out of range");
  std::lock_guard<std::mutex> lock(g_table_mutex);
  auto& slot = g_tables[{n, tag}];
  if (!slot) slot = std::make_unique<FaceTable>(build(n, arg));
  return *slot;
}

constexpr int kCornerTag = -1;
constexpr int kTopTag = -2;

}  // namespace

const FaceTable& pruning_faces(int n, int skip_dim) {
  skip_dim = std::max(skip_dim, 0);
  return cached(n, skip_dim, build_pruning, skip_dim);
}

const FaceTable& corner_faces(int n) {
  return cached(n, kCornerTag, [](int n, int) {
    FaceTable t;
    t.n = n;
    t.at.resize(num_vertices(n));
    const Vertex all = num_vertices(n) - 1;
    for (int j = 0; j < n; ++j) {
      const Vertex free = all & ~(Vertex{1} << j);
      if (free == 0) continue;  // n = 1: the 0-face is a point
      t.at[free].push_back(Face{n, free, 0}.vertices());
    }
    return t;
  }, 0);
}

const FaceTable& top_face(int n) {
  return cached(n, kTopTag, [](int n, int) {
    FaceTable t;
    t.n = n;
    t.at.resize(num_vertices(n));
    if (n > 0) t.at.back().push_back(Face{n, num_vertices(n) - 1, 0}.vertices());
    return t;
  }, 0);
}

bool faces_ok(const Cubespace& space, const std::vector<std::vector<Vertex>>& faces, const Point* map,
              std::vector<Point>& scratch) {
  for (const auto& face : faces) {
    scratch.resize(face.size());
    for (std::size_t t = 0; t < face.size(); ++t) scratch[t] = map[face[t]];
    if (!space.member_unchecked(scratch)) return false;
  }
  return true;
}

const char* enum_mode_name(EnumMode mode) {
  switch (mode) {
    case EnumMode::Raw: return "raw";
    case EnumMode::Pruned: return "face-pruned";
    case EnumMode::Auto: return "auto";
  }
  return "?";
}

EnumMode resolve_mode(const Cubespace& space, int n, bool corner, EnumMode requested) {
  if (requested != EnumMode::Auto) return requested;
  const std::uint64_t verts = num_vertices(n) - (corner ? 1 : 0);
  const std::uint64_t total = checked_pow(space.size(), verts);
  return total <= kRawLimit ? EnumMode::Raw : EnumMode::Pruned;
}

namespace {

bool run_dfs(const Cubespace& space, int n, Point first, SearchBudget& budget, const CubeVisitor& fn,
             EnumMode mode, bool corner) {
  if (n < 0 || n > space.n_max())
    throw InvalidArgument("dimension " + std::to_string(n) + " outside [0, n_max]");
  if (corner && n < 1) throw InvalidArgument("corners need n >= 1");
  if (first >= space.size()) return true;
  mode = resolve_mode(space, n, corner, mode);
  const FaceTable& table = mode == EnumMode::Raw ? (corner ? corner_faces(n) : top_face(n))
                                                 : pruning_faces(n, space.full_dimension());
  const Vertex stop = num_vertices(n) - (corner ? 1 : 0);
  std::vector<Point> all(space.size());
  std::iota(all.begin(), all.end(), Point{0});
  const std::vector<Point> only_first{first};
  auto cand = [&](Vertex v) -> const std::vector<Point>& { return v == 0 ? only_first : all; };
  std::uint64_t pending = 0;
  auto leaf = [&](CubeView m) {
    if (++pending == 4096) {
      budget.charge(pending, corner ? "corner enumeration" : "cube enumeration", n);
      pending = 0;
    }
    return fn(m);
  };
  std::vector<Point> map(num_vertices(n), 0), scratch;
  const bool done = face_dfs(space, table, stop, map, 0, cand, leaf, scratch);
  if (pending) budget.charge(pending, corner ? "corner enumeration" : "cube enumeration", n);
  return done;
}

}  // namespace

bool for_each_cube_from(const Cubespace& space, int n, Point first, SearchBudget& budget,
                        const CubeVisitor& fn, EnumMode mode) {
  return run_dfs(space, n, first, budget, fn, mode, false);
}

bool for_each_cube(const Cubespace& space, int n, SearchBudget& budget, const CubeVisitor& fn,
                   EnumMode mode) {
  for (Point x = 0; x < space.size(); ++x)
    if (!run_dfs(space, n, x, budget, fn, mode, false)) return false;
  return true;
}

bool for_each_corner_from(const Cubespace& space, int n, Point first, SearchBudget& budget,
                          const CubeVisitor& fn, EnumMode mode) {
  return run_dfs(space, n, first, budget, fn, mode, true);
}

bool for_each_corner(const Cubespace& space, int n, SearchBudget& budget, const CubeVisitor& fn,
                     EnumMode mode) {
  for (Point x = 0; x < space.size(); ++x)
    if (!run_dfs(space, n, x, budget, fn, mode, true)) return false;
  return true;
}

std::vector<Point> enumerate_cubes(const Cubespace& space, int n, SearchBudget& budget, EnumMode mode) {
  std::vector<Point> out;
  for_each_cube(space, n, budget, [&](CubeView c) {
    out.insert(out.end(), c.begin(), c.end());
    return true;
  }, mode);
  return out;
}

std::uint64_t count_cubes(const Cubespace& space, int n, SearchBudget& budget, EnumMode mode) {
  std::uint64_t count = 0;
  for_each_cube(space, n, budget, [&](CubeView) {
    ++count;
    return true;
  }, mode);
  return count;
}

std::vector<Point> completions(const Cubespace& space, CubeView corner) {
  std::size_t len = corner.size() + 1;
  if (std::has_single_bit(corner.size()) && corner.size() > 1) len = corner.size();
  const int n = cube_dim(len);
  if (n < 1) throw InvalidArgument("corner needs n >= 1");
  if (n > space.n_max()) throw InvalidArgument("corner dimension exceeds n_max");
  std::vector<Point> map(len, 0), scratch;
  for (std::size_t v = 0; v + 1 < len; ++v) {
    if (corner[v] >= space.size()) throw InvalidArgument("corner entry outside the ground set");
    map[v] = corner[v];
  }
  const FaceTable& hyp = corner_faces(n);
  for (Vertex v = 0; v + 1 < len; ++v)
    if (!faces_ok(space, hyp.at[v], map.data(), scratch))
      throw InvalidCorner("corner restricted to an (n-1)-face through 0 is not a cube");
  std::vector<Point> out;
  for (Point x = 0; x < space.size(); ++x) {
    map.back() = x;
    if (space.member_unchecked(map)) out.push_back(x);
  }
  return out;
}

std::uint64_t completion_count(const Cubespace& space, CubeView corner) {
  return completions(space, corner).size();
}

}  // namespace nilspace
