#pragma once
// Cubespaces as membership oracles over a finite ground set {0, .., size-1}.

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "nilspace/abelian.hpp"
#include "nilspace/cubes.hpp"

namespace nilspace {

using Point = std::uint32_t;
using CubeView = std::span<const Point>;
/// A map between ground sets: image of every point.
using PointMap = std::vector<Point>;

inline constexpr int kDefaultNMax = 6;

class CubespaceImpl {
 public:
  virtual ~CubespaceImpl() = default;
  virtual std::size_t size() const = 0;
  virtual int n_max() const { return kDefaultNMax; }
  /// cube.size() is 2^n with n <= n_max and every entry < size().
  virtual bool member(CubeView cube) const = 0;
  /// `cubes` holds out.size() consecutive n-cubes.
  virtual void member_batch(int n, CubeView cubes, std::span<std::uint8_t> out) const;
  /// Every map of dimension <= this is a cube (by construction).
  virtual int full_dimension() const { return 0; }
  virtual std::optional<int> step_hint() const { return std::nullopt; }
  virtual std::string describe() const = 0;
};

/// Cheap value handle around a shared immutable oracle.
class Cubespace {
 public:
  Cubespace() = default;
  explicit Cubespace(std::shared_ptr<const CubespaceImpl> impl) : impl_(std::move(impl)) {}

  std::size_t size() const { return impl_->size(); }
  int n_max() const { return impl_->n_max(); }
  int full_dimension() const { return impl_->full_dimension(); }
  std::optional<int> step_hint() const { return impl_->step_hint(); }
  std::string describe() const { return impl_->describe(); }

  /// Validating membership query.
  bool member(CubeView cube) const;
  bool member_unchecked(CubeView cube) const { return impl_->member(cube); }
  void member_batch(int n, CubeView cubes, std::span<std::uint8_t> out) const {
    impl_->member_batch(n, cubes, out);
  }

  const CubespaceImpl& impl() const { return *impl_; }
  explicit operator bool() const { return static_cast<bool>(impl_); }

 private:
  std::shared_ptr<const CubespaceImpl> impl_;
};

/// D_k(A). Point p is the group element A.element_at(p).
class DkSpace final : public CubespaceImpl {
 public:
  DkSpace(FinAbGroup a, int k, int n_max = kDefaultNMax);
  std::size_t size() const override { return group_.order(); }
  int n_max() const override { return n_max_; }
  bool member(CubeView cube) const override;
  void member_batch(int n, CubeView cubes, std::span<std::uint8_t> out) const override;
  int full_dimension() const override { return k_; }
  std::optional<int> step_hint() const override { return k_; }
  std::string describe() const override;

  const FinAbGroup& group() const { return group_; }
  int k() const { return k_; }

 private:
  FinAbGroup group_;
  int k_;
  int n_max_;
  std::vector<std::int32_t> coord_;  // coord_[p * factors + j]
  std::vector<std::int32_t> moduli_;
};

/// Linear structure: cubes extend to affine homomorphisms Z^n -> A.
class LinearSpace final : public CubespaceImpl {
 public:
  explicit LinearSpace(FinAbGroup a, int n_max = kDefaultNMax);
  std::size_t size() const override { return group_.order(); }
  int n_max() const override { return n_max_; }
  bool member(CubeView cube) const override;
  int full_dimension() const override { return 1; }
  std::optional<int> step_hint() const override { return 1; }
  std::string describe() const override { return "linear(" + group_.str() + ")"; }
  const FinAbGroup& group() const { return group_; }

 private:
  FinAbGroup group_;
  int n_max_;
  std::vector<Element> elems_;
};

/// Finite product; point index is mixed radix with component 0 most significant.
class ProductSpace final : public CubespaceImpl {
 public:
  explicit ProductSpace(std::vector<Cubespace> parts);
  std::size_t size() const override { return size_; }
  int n_max() const override;
  bool member(CubeView cube) const override;
  int full_dimension() const override;
  std::optional<int> step_hint() const override;
  std::string describe() const override;

  const std::vector<Cubespace>& parts() const { return parts_; }
  std::vector<Point> split(Point p) const;
  Point join(std::span<const Point> coords) const;

 private:
  std::vector<Cubespace> parts_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
};

/// Subset of a base space with the inherited cubes. Point p is base point points[p].
class SubsetSpace final : public CubespaceImpl {
 public:
  SubsetSpace(Cubespace base, std::vector<Point> points, std::string name);
  std::size_t size() const override { return points_.size(); }
  int n_max() const override { return base_.n_max(); }
  bool member(CubeView cube) const override;
  std::string describe() const override { return name_; }
  const Cubespace& base() const { return base_; }
  const std::vector<Point>& points() const { return points_; }

 private:
  Cubespace base_;
  std::vector<Point> points_;
  std::string name_;
};

/// Same cubes, renamed points: new point p is base point perm[p].
class RelabeledSpace final : public CubespaceImpl {
 public:
  RelabeledSpace(Cubespace base, std::vector<Point> perm);
  std::size_t size() const override { return perm_.size(); }
  int n_max() const override { return base_.n_max(); }
  bool member(CubeView cube) const override;
  int full_dimension() const override { return base_.full_dimension(); }
  std::optional<int> step_hint() const override { return base_.step_hint(); }
  std::string describe() const override { return "relabel(" + base_.describe() + ")"; }
  const std::vector<Point>& perm() const { return perm_; }
  const Cubespace& base() const { return base_; }

 private:
  Cubespace base_;
  std::vector<Point> perm_;
};

/// Quotient by a partition; a map is a cube iff it lifts to a cube of the base.
class FactorSpace final : public CubespaceImpl {
 public:
  FactorSpace(Cubespace base, std::vector<Point> class_of, std::string name);
  std::size_t size() const override { return classes_.size(); }
  int n_max() const override { return base_.n_max(); }
  bool member(CubeView cube) const override;
  int full_dimension() const override { return base_.full_dimension(); }
  std::string describe() const override { return name_; }

  const Cubespace& base() const { return base_; }
  const std::vector<Point>& class_of() const { return class_of_; }
  const std::vector<std::vector<Point>>& classes() const { return classes_; }
  /// A base cube projecting onto `cube`, if any.
  std::optional<std::vector<Point>> lift(CubeView cube) const;

 private:
  Cubespace base_;
  std::vector<Point> class_of_;
  std::vector<std::vector<Point>> classes_;
  std::string name_;
  mutable std::mutex memo_mutex_;
  mutable std::unordered_map<std::string, bool> memo_;
};

/// i-th arrow space: f = (f1, f2) on N x N is a cube iff (f1, f2)_i is a cube of N.
/// Point (x, y) has index x * |N| + y.
class ArrowSpace final : public CubespaceImpl {
 public:
  ArrowSpace(Cubespace base, int i);
  std::size_t size() const override { return base_.size() * base_.size(); }
  int n_max() const override { return base_.n_max() - i_; }
  bool member(CubeView cube) const override;
  std::string describe() const override;
  const Cubespace& base() const { return base_; }
  int index() const { return i_; }

 private:
  Cubespace base_;
  int i_;
};

/// Oracle given by a callable; used for hand-built and deliberately broken spaces.
class LambdaSpace final : public CubespaceImpl {
 public:
  LambdaSpace(std::size_t size, std::function<bool(CubeView)> fn, std::string name,
              int n_max = kDefaultNMax, int full_dim = 0);
  std::size_t size() const override { return size_; }
  int n_max() const override { return n_max_; }
  bool member(CubeView cube) const override { return fn_(cube); }
  int full_dimension() const override { return full_dim_; }
  std::string describe() const override { return name_; }

 private:
  std::size_t size_;
  std::function<bool(CubeView)> fn_;
  std::string name_;
  int n_max_;
  int full_dim_;
};

template <class T, class... Args>
Cubespace make_space(Args&&... args) {
  return Cubespace(std::make_shared<const T>(std::forward<Args>(args)...));
}

/// Downcast helper: nullptr when the space is not of type T.
template <class T>
const T* space_as(const Cubespace& s) {
  return dynamic_cast<const T*>(&s.impl());
}

Cubespace dk_structure(const FinAbGroup& a, int k, int n_max = kDefaultNMax);
Cubespace linear_structure(const FinAbGroup& a, int n_max = kDefaultNMax);
Cubespace point_space();
Cubespace product(const Cubespace& a, const Cubespace& b);
Cubespace product(std::vector<Cubespace> parts);
Cubespace relabel(const Cubespace& base, std::vector<Point> perm);
Cubespace induced_subspace(const Cubespace& base, std::vector<Point> points, std::string name = {});

/// D_k alternating-sum condition decided the slow way: every cube morphism
/// {0,1}^(k+1) -> {0,1}^n. Test oracle for DkSpace.
bool dk_member_by_morphisms(const FinAbGroup& a, int k, std::span<const Element> cube);

PointMap identity_map(std::size_t size);
/// g after f.
PointMap compose(const PointMap& f, const PointMap& g);
bool is_surjective(const PointMap& f, std::size_t target_size);

/// Image of a cube under a point map.
std::vector<Point> apply_map(const PointMap& f, CubeView cube);

}  // namespace nilspace
