#pragma once
// Streaming enumeration of cubes and corners by depth-first search over
// vertices in index order. At vertex v every face whose largest vertex is v
// is checked, so partial maps are pruned as soon as a face fails.

#include <functional>
#include <span>
#include <vector>

#include "nilspace/cubespace.hpp"
#include "nilspace/runtime.hpp"

namespace nilspace {

/// at[v] lists faces (as vertex lists in compressed order) checked at vertex v.
struct FaceTable {
  int n = 0;
  std::vector<std::vector<std::vector<Vertex>>> at;
};

/// Faces of dimension > skip_dim, indexed by their largest vertex.
const FaceTable& pruning_faces(int n, int skip_dim);
/// Only the (n-1)-faces through 0^n: the literal gluing hypothesis.
const FaceTable& corner_faces(int n);
/// Only the whole cube.
const FaceTable& top_face(int n);

/// Checks every face listed for one vertex. scratch is reused.
bool faces_ok(const Cubespace& space, const std::vector<std::vector<Vertex>>& faces,
              const Point* map, std::vector<Point>& scratch);

/// Fills map[v..stop) from cand(v) (any range of Point), checking table.at[v]
/// after each choice; calls leaf(map) on completion. leaf returns false to stop.
template <class CandFn, class LeafFn>
bool face_dfs(const Cubespace& space, const FaceTable& table, Vertex stop, std::vector<Point>& map,
              Vertex v, CandFn& cand, LeafFn& leaf, std::vector<Point>& scratch) {
  if (v == stop) return leaf(std::span<const Point>(map));
  for (Point x : cand(v)) {
    map[v] = x;
    if (!faces_ok(space, table.at[v], map.data(), scratch)) continue;
    if (!face_dfs(space, table, stop, map, v + 1, cand, leaf, scratch)) return false;
  }
  return true;
}

/// Raw mode tests only the defining condition on every map and is exact for
/// any oracle; pruned mode trusts that faces of cubes are cubes.
enum class EnumMode { Auto, Pruned, Raw };
const char* enum_mode_name(EnumMode mode);

/// Auto picks Raw when |N|^(vertices) <= kRawLimit.
inline constexpr std::uint64_t kRawLimit = 1 << 16;
EnumMode resolve_mode(const Cubespace& space, int n, bool corner, EnumMode requested);

using CubeVisitor = std::function<bool(CubeView)>;

/// Visits every n-cube whose vertex 0 carries `first`. Returns false if the
/// visitor stopped early. Charges one budget unit per visited map.
bool for_each_cube_from(const Cubespace& space, int n, Point first, SearchBudget& budget,
                        const CubeVisitor& fn, EnumMode mode = EnumMode::Auto);
bool for_each_cube(const Cubespace& space, int n, SearchBudget& budget, const CubeVisitor& fn,
                   EnumMode mode = EnumMode::Auto);

/// Corners are maps on {0,1}^n minus 1^n passing the gluing hypothesis; the
/// visitor sees 2^n entries with the last one set to 0.
bool for_each_corner_from(const Cubespace& space, int n, Point first, SearchBudget& budget,
                          const CubeVisitor& fn, EnumMode mode = EnumMode::Auto);
bool for_each_corner(const Cubespace& space, int n, SearchBudget& budget, const CubeVisitor& fn,
                     EnumMode mode = EnumMode::Auto);

/// All n-cubes, concatenated.
std::vector<Point> enumerate_cubes(const Cubespace& space, int n, SearchBudget& budget,
                                   EnumMode mode = EnumMode::Auto);
std::uint64_t count_cubes(const Cubespace& space, int n, SearchBudget& budget,
                          EnumMode mode = EnumMode::Auto);

/// Number of values at 1^n completing the corner to a cube. The corner holds
/// 2^n - 1 (or 2^n, last ignored) entries. Throws InvalidCorner when some
/// (n-1)-face through 0^n is not a cube.
std::uint64_t completion_count(const Cubespace& space, CubeView corner);
/// The completing values themselves, ascending.
std::vector<Point> completions(const Cubespace& space, CubeView corner);

}  // namespace nilspace
