#include "nilspace/cubes.hpp"

#include <bit>
#include <sstream>

#include "nilspace/error.hpp"
#include "nilspace/runtime.hpp"

namespace nilspace {

int h_parity(Vertex v) { return (std::popcount(v) & 1) ? -1 : 1; }

std::vector<Vertex> corner_vertices(int n) {
  if (n < 1) throw InvalidArgument("corner needs n >= 1");
  std::vector<Vertex> out;
  for (Vertex v = 0; v + 1 < num_vertices(n); ++v) out.push_back(v);
  return out;
}

int cube_dim(std::size_t vertex_count) {
  if (vertex_count == 0 || !std::has_single_bit(vertex_count))
    throw InvalidArgument("cube size " + std::to_string(vertex_count) + " is not a power of two");
  const int n = std::countr_zero(vertex_count);
  if (n > kMaxCubeDim) throw InvalidArgument("cube dimension exceeds supported maximum");
  return n;
}

int Face::dim() const { return std::popcount(free_mask); }

std::vector<Vertex> Face::vertices() const {
  const int d = dim();
  std::vector<Vertex> out(num_vertices(d));
  for (Vertex t = 0; t < out.size(); ++t) {
    Vertex v = fixed;
    int bit = 0;
    for (int j = 0; j < n; ++j) {
      if (free_mask & (Vertex{1} << j)) {
        if (t & (Vertex{1} << bit)) v |= Vertex{1} << j;
        ++bit;
      }
    }
    out[t] = v;
  }
  return out;
}

std::vector<Face> faces(int n, int dim) {
  std::vector<Face> out;
  if (dim < 0 || dim > n) return out;
  for (Vertex mask = 0; mask < num_vertices(n); ++mask) {
    if (std::popcount(mask) != dim) continue;
    for (Vertex fixed = 0; fixed < num_vertices(n); ++fixed) {
      if (fixed & mask) continue;
      out.push_back(Face{n, mask, fixed});
    }
  }
  return out;
}

CubeMorphism::CubeMorphism(int n, int m, std::vector<CoordForm> forms)
    : n_(n), m_(m), forms_(std::move(forms)) {
  if (n < 0 || m < 0 || n > kMaxCubeDim || m > kMaxCubeDim)
    throw InvalidArgument("cube morphism dimensions out of range");
  if (static_cast<int>(forms_.size()) != m) throw InvalidArgument("need one form per output coordinate");
  for (const auto& f : forms_) {
    if ((f.kind == CoordKind::Var || f.kind == CoordKind::NegVar) && (f.index < 0 || f.index >= n))
      throw InvalidArgument("coordinate form references a missing input");
  }
}

CubeMorphism CubeMorphism::identity(int n) {
  std::vector<CoordForm> forms;
  for (int j = 0; j < n; ++j) forms.push_back({CoordKind::Var, j});
  return CubeMorphism(n, n, std::move(forms));
}

Vertex CubeMorphism::apply(Vertex v) const {
  Vertex out = 0;
  for (int i = 0; i < m_; ++i) {
    const auto& f = forms_[i];
    bool bit = false;
    switch (f.kind) {
      case CoordKind::Zero: bit = false; break;
      case CoordKind::One: bit = true; break;
      case CoordKind::Var: bit = (v >> f.index) & 1U; break;
      case CoordKind::NegVar: bit = !((v >> f.index) & 1U); break;
    }
    if (bit) out |= Vertex{1} << i;
  }
  return out;
}

std::vector<Vertex> CubeMorphism::table() const {
  std::vector<Vertex> out(num_vertices(n_));
  for (Vertex v = 0; v < out.size(); ++v) out[v] = apply(v);
  return out;
}

CubeMorphism CubeMorphism::then(const CubeMorphism& next) const {
  if (next.n_ != m_) throw InvalidArgument("cube morphism composition dimension mismatch");
  std::vector<CoordForm> forms;
  for (const auto& g : next.forms_) {
    if (g.kind == CoordKind::Zero || g.kind == CoordKind::One) {
      forms.push_back(g);
      continue;
    }
    CoordForm f = forms_[g.index];
    if (g.kind == CoordKind::NegVar) {
      switch (f.kind) {
        case CoordKind::Zero: f.kind = CoordKind::One; break;
        case CoordKind::One: f.kind = CoordKind::Zero; break;
        case CoordKind::Var: f.kind = CoordKind::NegVar; break;
        case CoordKind::NegVar: f.kind = CoordKind::Var; break;
      }
    }
    forms.push_back(f);
  }
  return CubeMorphism(n_, next.m_, std::move(forms));
}

std::string CubeMorphism::str() const {
  std::ostringstream os;
  os << '{' << n_ << "->" << m_ << ":";
  for (int i = 0; i < m_; ++i) {
    const auto& f = forms_[i];
    os << (i ? "," : "");
    switch (f.kind) {
      case CoordKind::Zero: os << '0'; break;
      case CoordKind::One: os << '1'; break;
      case CoordKind::Var: os << 'v' << f.index; break;
      case CoordKind::NegVar: os << "~v" << f.index; break;
    }
  }
  os << '}';
  return os.str();
}

std::vector<CubeMorphism> enumerate_cube_morphisms(int n, int m, SearchBudget& budget) {
  if (n < 0 || m < 0) throw InvalidArgument("cube dimensions must be nonnegative");
  const std::uint64_t per_coord = 2 * static_cast<std::uint64_t>(n) + 2;
  const std::uint64_t total = checked_pow(per_coord, static_cast<std::uint64_t>(m));
  if (total == UINT64_MAX || budget.would_exceed(total))
    throw ResourceLimit("cube morphism enumeration exceeds budget", m);
  budget.charge(total, "cube morphism enumeration", m);
  std::vector<CubeMorphism> out;
  out.reserve(total);
  std::vector<CoordForm> choices;
  choices.push_back({CoordKind::Zero, 0});
  choices.push_back({CoordKind::One, 0});
  for (int j = 0; j < n; ++j) {
    choices.push_back({CoordKind::Var, j});
    choices.push_back({CoordKind::NegVar, j});
  }
  std::vector<CoordForm> forms(m);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    for (int i = m - 1; i >= 0; --i) {
      forms[i] = choices[c % per_coord];
      c /= per_coord;
    }
    out.emplace_back(n, m, forms);
  }
  return out;
}

bool has_affine_extension(int n, int m, std::span<const Vertex> table) {
  if (table.size() != num_vertices(n)) throw InvalidArgument("table size mismatch");
  for (int i = 0; i < m; ++i) {
    auto bit = [&](Vertex v) -> long { return (table[v] >> i) & 1U; };
    const long c = bit(0);
    std::vector<long> a(n);
    for (int j = 0; j < n; ++j) a[j] = bit(Vertex{1} << j) - c;
    for (Vertex v = 0; v < table.size(); ++v) {
      long value = c;
      for (int j = 0; j < n; ++j)
        if (v & (Vertex{1} << j)) value += a[j];
      if (value != bit(v)) return false;
    }
  }
  return true;
}

std::vector<CubeMorphism> generating_morphisms(int n_upto) {
  std::vector<CubeMorphism> out;
  auto vars = [](int n) {
    std::vector<CoordForm> f;
    for (int j = 0; j < n; ++j) f.push_back({CoordKind::Var, j});
    return f;
  };
  for (int m = 0; m <= n_upto; ++m) {
    for (int j = 0; j + 1 < m; ++j) {  // swap j, j+1
      auto f = vars(m);
      std::swap(f[j], f[j + 1]);
      out.emplace_back(m, m, f);
    }
    for (int j = 0; j < m; ++j) {  // reflect j
      auto f = vars(m);
      f[j].kind = CoordKind::NegVar;
      out.emplace_back(m, m, f);
    }
    if (m >= 1) {
      for (int j = 0; j < m; ++j) {  // pin output coordinate j to 0
        std::vector<CoordForm> f;
        int next = 0;
        for (int i = 0; i < m; ++i) {
          if (i == j) f.push_back({CoordKind::Zero, 0});
          else f.push_back({CoordKind::Var, next++});
        }
        out.emplace_back(m - 1, m, f);
      }
      for (int j = 0; j < m; ++j) {  // merge: output coordinate j' copies j
        for (int jp = j + 1; jp < m; ++jp) {
          std::vector<CoordForm> f;
          int next = 0;
          std::vector<int> slot(m, -1);
          for (int i = 0; i < m; ++i) {
            if (i == jp) continue;
            slot[i] = next++;
          }
          for (int i = 0; i < m; ++i) f.push_back({CoordKind::Var, i == jp ? slot[j] : slot[i]});
          out.emplace_back(m - 1, m, f);
        }
      }
    }
    if (m + 1 <= n_upto) out.emplace_back(m + 1, m, vars(m));  // ignore last input
  }
  return out;
}

}  // namespace nilspace
