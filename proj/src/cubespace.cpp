#include "nilspace/cubespace.hpp"

#include <bit>
#include <sstream>

#include "nilspace/enumerate.hpp"
#include "nilspace/error.hpp"
#include "nilspace/kernels.hpp"
#include "nilspace/runtime.hpp"

namespace nilspace {

void CubespaceImpl::member_batch(int n, CubeView cubes, std::span<std::uint8_t> out) const {
  const std::size_t len = num_vertices(n);
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = member(cubes.subspan(c * len, len)) ? 1 : 0;
}

bool Cubespace::member(CubeView cube) const {
  const int n = cube_dim(cube.size());
  if (n > n_max())
    throw InvalidArgument("dimension " + std::to_string(n) + " exceeds n_max " + std::to_string(n_max()));
  for (Point p : cube)
    if (p >= size()) throw InvalidArgument("cube entry outside the ground set");
  return impl_->member(cube);
}

// ---- D_k(A) ---------------------------------------------------------------

DkSpace::DkSpace(FinAbGroup a, int k, int n_max) : group_(std::move(a)), k_(k), n_max_(n_max) {
  if (k < 1) throw InvalidArgument("D_k needs k >= 1");
  if (n_max < 1 || n_max > kMaxCubeDim) throw InvalidArgument("n_max out of range");
  const std::size_t f = group_.num_factors();
  for (Int d : group_.cyclic_orders()) moduli_.push_back(static_cast<std::int32_t>(d));
  coord_.resize(group_.order() * f);
  for (std::uint64_t p = 0; p < group_.order(); ++p) {
    const Element e = group_.element_at(p);
    for (std::size_t j = 0; j < f; ++j) coord_[p * f + j] = static_cast<std::int32_t>(e[j]);
  }
}

bool DkSpace::member(CubeView cube) const {
  const int n = cube_dim(cube.size());
  if (n <= k_) return true;
  const std::size_t len = cube.size();
  const std::size_t f = moduli_.size();
  thread_local std::vector<std::int32_t> buf;
  buf.resize(len);
  const auto& kt = kernels::active();
  for (std::size_t j = 0; j < f; ++j) {
    if (moduli_[j] == 1) continue;
    for (std::size_t v = 0; v < len; ++v) buf[v] = coord_[cube[v] * f + j];
    kt.mobius_mod_batch(buf.data(), n, 1, moduli_[j]);
    for (std::size_t s = 0; s < len; ++s)
      if (buf[s] != 0 && std::popcount(s) > k_) return false;
  }
  return true;
}

void DkSpace::member_batch(int n, CubeView cubes, std::span<std::uint8_t> out) const {
  const std::size_t lanes = out.size();
  if (n <= k_) {
    std::fill(out.begin(), out.end(), 1);
    return;
  }
  const std::size_t len = num_vertices(n);
  const std::size_t f = moduli_.size();
  std::fill(out.begin(), out.end(), 1);
  thread_local std::vector<std::int32_t> buf;
  buf.resize(len * lanes);
  const auto& kt = kernels::active();
  for (std::size_t j = 0; j < f; ++j) {
    if (moduli_[j] == 1) continue;
    for (std::size_t c = 0; c < lanes; ++c)
      for (std::size_t v = 0; v < len; ++v) buf[v * lanes + c] = coord_[cubes[c * len + v] * f + j];
    kt.mobius_mod_batch(buf.data(), n, lanes, moduli_[j]);
    for (std::size_t s = 0; s < len; ++s) {
      if (std::popcount(s) <= k_) continue;
      const std::int32_t* row = buf.data() + s * lanes;
      for (std::size_t c = 0; c < lanes; ++c)
        if (row[c] != 0) out[c] = 0;
    }
  }
}

std::string DkSpace::describe() const {
  return "D_" + std::to_string(k_) + "(" + group_.str() + ")";
}

bool dk_member_by_morphisms(const FinAbGroup& a, int k, std::span<const Element> cube) {
  const int n = cube_dim(cube.size());
  SearchBudget budget(UINT64_MAX);
  for (const auto& phi : enumerate_cube_morphisms(k + 1, n, budget)) {
    Element sum = a.zero();
    for (Vertex v = 0; v < num_vertices(k + 1); ++v) {
      const Element& x = cube[phi.apply(v)];
      sum = h_parity(v) > 0 ? a.add(sum, x) : a.sub(sum, x);
    }
    if (sum != a.zero()) return false;
  }
  return true;
}

// ---- linear structure ------------------------------------------------------

LinearSpace::LinearSpace(FinAbGroup a, int n_max) : group_(std::move(a)), n_max_(n_max) {
  elems_ = group_.elements();
}

bool LinearSpace::member(CubeView cube) const {
  const int n = cube_dim(cube.size());
  const Element& base = elems_[cube[0]];
  std::vector<Element> step;
  for (int j = 0; j < n; ++j) step.push_back(group_.sub(elems_[cube[Vertex{1} << j]], base));
  for (Vertex v = 0; v < cube.size(); ++v) {
    Element e = base;
    for (int j = 0; j < n; ++j)
      if (v & (Vertex{1} << j)) e = group_.add(e, step[j]);
    if (e != elems_[cube[v]]) return false;
  }
  return true;
}

// ---- products ----------------------------------------------------------------

ProductSpace::ProductSpace(std::vector<Cubespace> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw InvalidArgument("product of no spaces");
  strides_.resize(parts_.size());
  for (std::size_t j = parts_.size(); j-- > 0;) {
    strides_[j] = size_;
    size_ *= parts_[j].size();
    if (size_ > (std::size_t{1} << 31)) throw ResourceLimit("product ground set too large");
  }
}

int ProductSpace::n_max() const {
  int m = kMaxCubeDim;
  for (const auto& p : parts_) m = std::min(m, p.n_max());
  return m;
}

int ProductSpace::full_dimension() const {
  int m = kMaxCubeDim;
  for (const auto& p : parts_) m = std::min(m, p.full_dimension());
  return m;
}

std::optional<int> ProductSpace::step_hint() const {
  int m = 0;
  for (const auto& p : parts_) {
    const auto s = p.step_hint();
    if (!s) return std::nullopt;
    m = std::max(m, *s);
  }
  return m;
}

std::string ProductSpace::describe() const {
  std::string s;
  for (std::size_t j = 0; j < parts_.size(); ++j) s += (j ? " x " : "") + parts_[j].describe();
  return s;
}

std::vector<Point> ProductSpace::split(Point p) const {
  std::vector<Point> out(parts_.size());
  for (std::size_t j = 0; j < parts_.size(); ++j) out[j] = static_cast<Point>((p / strides_[j]) % parts_[j].size());
  return out;
}

Point ProductSpace::join(std::span<const Point> coords) const {
  std::size_t p = 0;
  for (std::size_t j = 0; j < parts_.size(); ++j) p += coords[j] * strides_[j];
  return static_cast<Point>(p);
}

bool ProductSpace::member(CubeView cube) const {
  std::vector<Point> part(cube.size());
  for (std::size_t j = 0; j < parts_.size(); ++j) {
    for (std::size_t v = 0; v < cube.size(); ++v)
      part[v] = static_cast<Point>((cube[v] / strides_[j]) % parts_[j].size());
    if (!parts_[j].member_unchecked(part)) return false;
  }
  return true;
}

// ---- subsets, relabelings --------------------------------------------------

SubsetSpace::SubsetSpace(Cubespace base, std::vector<Point> points, std::string name)
    : base_(std::move(base)), points_(std::move(points)), name_(std::move(name)) {
  if (points_.empty()) throw InvalidArgument("empty ground set");
  for (Point p : points_)
    if (p >= base_.size()) throw InvalidArgument("subset point outside base");
  if (name_.empty()) name_ = "subset(" + base_.describe() + ")";
}

bool SubsetSpace::member(CubeView cube) const {
  std::vector<Point> mapped(cube.size());
  for (std::size_t v = 0; v < cube.size(); ++v) mapped[v] = points_[cube[v]];
  return base_.member_unchecked(mapped);
}

RelabeledSpace::RelabeledSpace(Cubespace base, std::vector<Point> perm)
    : base_(std::move(base)), perm_(std::move(perm)) {
  if (perm_.size() != base_.size()) throw InvalidArgument("relabeling must be a bijection");
  std::vector<bool> seen(perm_.size());
  for (Point p : perm_) {
    if (p >= perm_.size() || seen[p]) throw InvalidArgument("relabeling must be a bijection");
    seen[p] = true;
  }
}

bool RelabeledSpace::member(CubeView cube) const {
  std::vector<Point> mapped(cube.size());
  for (std::size_t v = 0; v < cube.size(); ++v) mapped[v] = perm_[cube[v]];
  return base_.member_unchecked(mapped);
}

// ---- factor spaces ---------------------------------------------------------

FactorSpace::FactorSpace(Cubespace base, std::vector<Point> class_of, std::string name)
    : base_(std::move(base)), class_of_(std::move(class_of)), name_(std::move(name)) {
  if (class_of_.size() != base_.size()) throw InvalidArgument("class map size mismatch");
  Point count = 0;
  for (Point c : class_of_) count = std::max(count, c + 1);
  classes_.resize(count);
  for (Point p = 0; p < class_of_.size(); ++p) classes_[class_of_[p]].push_back(p);
  for (const auto& c : classes_)
    if (c.empty()) throw InvalidArgument("class indices must be contiguous");
}

std::optional<std::vector<Point>> FactorSpace::lift(CubeView cube) const {
  const int n = cube_dim(cube.size());
  const FaceTable& table = pruning_faces(n, base_.full_dimension());
  std::vector<Point> map(cube.size()), scratch;
  std::optional<std::vector<Point>> found;
  auto cand = [&](Vertex v) -> const std::vector<Point>& { return classes_[cube[v]]; };
  auto leaf = [&](CubeView m) {
    found.emplace(m.begin(), m.end());
    return false;
  };
  face_dfs(base_, table, num_vertices(n), map, 0, cand, leaf, scratch);
  return found;
}

bool FactorSpace::member(CubeView cube) const {
  if (cube.size() == 1) return true;
  std::string key(reinterpret_cast<const char*>(cube.data()), cube.size_bytes());
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  const bool ok = lift(cube).has_value();
  std::lock_guard<std::mutex> lock(memo_mutex_);
  memo_.emplace(std::move(key), ok);
  return ok;
}

// ---- arrow spaces ------------------------------------------------------------

ArrowSpace::ArrowSpace(Cubespace base, int i) : base_(std::move(base)), i_(i) {
  if (i < 1) throw InvalidArgument("arrow index must be >= 1");
  if (base_.n_max() - i < 1) throw InvalidArgument("base n_max too small for this arrow index");
}

bool ArrowSpace::member(CubeView cube) const {
  const int n = cube_dim(cube.size());
  const std::size_t s = base_.size();
  const Vertex top = num_vertices(i_) - 1;
  std::vector<Point> g(num_vertices(n + i_));
  for (Vertex w = 0; w <= top; ++w) {
    for (Vertex v = 0; v < cube.size(); ++v) {
      const Point p = cube[v];
      g[v | (w << n)] = static_cast<Point>(w == top ? p % s : p / s);
    }
  }
  return base_.member_unchecked(g);
}

std::string ArrowSpace::describe() const {
  return "arrow_" + std::to_string(i_) + "(" + base_.describe() + ")";
}

LambdaSpace::LambdaSpace(std::size_t size, std::function<bool(CubeView)> fn, std::string name,
                         int n_max, int full_dim)
    : size_(size), fn_(std::move(fn)), name_(std::move(name)), n_max_(n_max), full_dim_(full_dim) {
  if (size_ == 0) throw InvalidArgument("empty ground set");
}

// ---- constructors --------------------------------------------------------------

Cubespace dk_structure(const FinAbGroup& a, int k, int n_max) {
  return make_space<DkSpace>(a, k, n_max);
}

Cubespace linear_structure(const FinAbGroup& a, int n_max) {
  return make_space<LinearSpace>(a, n_max);
}

Cubespace point_space() {
  return make_space<LambdaSpace>(1, [](CubeView) { return true; }, "point", kMaxCubeDim, kMaxCubeDim);
}

Cubespace product(const Cubespace& a, const Cubespace& b) { return product(std::vector<Cubespace>{a, b}); }

Cubespace product(std::vector<Cubespace> parts) { return make_space<ProductSpace>(std::move(parts)); }

Cubespace relabel(const Cubespace& base, std::vector<Point> perm) {
  return make_space<RelabeledSpace>(base, std::move(perm));
}

Cubespace induced_subspace(const Cubespace& base, std::vector<Point> points, std::string name) {
  return make_space<SubsetSpace>(base, std::move(points), std::move(name));
}

PointMap identity_map(std::size_t size) {
  PointMap out(size);
  for (std::size_t p = 0; p < size; ++p) out[p] = static_cast<Point>(p);
  return out;
}

PointMap compose(const PointMap& f, const PointMap& g) {
  PointMap out(f.size());
  for (std::size_t p = 0; p < f.size(); ++p) {
    if (f[p] >= g.size()) throw InvalidArgument("maps do not compose");
    out[p] = g[f[p]];
  }
  return out;
}

bool is_surjective(const PointMap& f, std::size_t target_size) {
  std::vector<bool> hit(target_size);
  for (Point p : f)
    if (p < target_size) hit[p] = true;
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

std::vector<Point> apply_map(const PointMap& f, CubeView cube) {
  std::vector<Point> out(cube.size());
  for (std::size_t v = 0; v < cube.size(); ++v) {
    if (cube[v] >= f.size()) throw InvalidArgument("map does not cover the ground set");
    out[v] = f[cube[v]];
  }
  return out;
}

}  // namespace nilspace
