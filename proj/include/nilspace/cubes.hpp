#pragma once
// Abstract cubes {0,1}^n. A vertex is a bitmask: bit j is coordinate j.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace nilspace {

class SearchBudget;

using Vertex = std::uint32_t;

inline constexpr int kMaxCubeDim = 12;

inline std::uint32_t num_vertices(int n) { return std::uint32_t{1} << n; }

/// (-1)^(sum of bits)
int h_parity(Vertex v);

/// {0,1}^n minus 1^n, in increasing order.
std::vector<Vertex> corner_vertices(int n);

/// Dimension of a cube given its vertex count; throws unless a power of two.
int cube_dim(std::size_t vertex_count);

/// A face: coordinates outside free_mask are pinned to the bits of fixed.
struct Face {
  int n = 0;
  Vertex free_mask = 0;
  Vertex fixed = 0;

  int dim() const;
  bool contains(Vertex v) const { return (v & ~free_mask) == fixed; }
  /// Face vertices listed in the order of the compressed free coordinates,
  /// i.e. entry t corresponds to the t-th vertex of {0,1}^dim.
  std::vector<Vertex> vertices() const;
};

/// All faces of {0,1}^n of the given dimension.
std::vector<Face> faces(int n, int dim);

enum class CoordKind : std::uint8_t { Zero, One, Var, NegVar };

struct CoordForm {
  CoordKind kind = CoordKind::Zero;
  int index = 0;  // input coordinate for Var / NegVar
  bool operator==(const CoordForm&) const = default;
};

/// A map {0,1}^n -> {0,1}^m given coordinatewise by 0, 1, v_j or 1 - v_j.
/// Pulling a cube f on {0,1}^m back along it gives the n-cube f(phi(.)).
class CubeMorphism {
 public:
  CubeMorphism(int n, int m, std::vector<CoordForm> forms);
  static CubeMorphism identity(int n);

  int source_dim() const noexcept { return n_; }
  int target_dim() const noexcept { return m_; }
  const std::vector<CoordForm>& forms() const noexcept { return forms_; }

  Vertex apply(Vertex v) const;
  /// Value table over all 2^n inputs.
  std::vector<Vertex> table() const;
  /// next(this(v)): {0,1}^n -> {0,1}^p.
  CubeMorphism then(const CubeMorphism& next) const;
  /// f(phi(v)) for a cube f on {0,1}^m.
  template <class T>
  std::vector<T> pull_back(std::span<const T> f) const {
    std::vector<T> out(num_vertices(n_));
    for (Vertex v = 0; v < out.size(); ++v) out[v] = f[apply(v)];
    return out;
  }

  bool operator==(const CubeMorphism&) const = default;
  std::string str() const;

 private:
  int n_;
  int m_;
  std::vector<CoordForm> forms_;
};

/// Every coordinate-form morphism {0,1}^n -> {0,1}^m: (2n+2)^m of them.
/// Throws ResourceLimit if that count exceeds the budget.
std::vector<CubeMorphism> enumerate_cube_morphisms(int n, int m, SearchBudget& budget);

/// Independent oracle: does the map given by its table extend to an affine
/// homomorphism Z^n -> Z^m? Solves for the integer coefficients coordinatewise.
bool has_affine_extension(int n, int m, std::span<const Vertex> table);

/// Morphisms that generate all cube morphisms between dimensions <= n_upto
/// under composition: adjacent transpositions, single reflections, pinning a
/// coordinate to 0, merging two coordinates, and adding an ignored coordinate.
std::vector<CubeMorphism> generating_morphisms(int n_upto);

}  // namespace nilspace
