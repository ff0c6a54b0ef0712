#pragma once

// Finite G-sets: the degree-0 stand-in for a G-manifold.

#include "ellpow/group.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace ellpow {

using Point = std::uint64_t;

class GSetImpl {
 public:
  virtual ~GSetImpl() = default;
  virtual const FiniteGroup& group() const = 0;
  virtual std::uint64_t size() const = 0;
  /// g . p (left action)
  virtual Point act(Elem g, Point p) const = 0;
  virtual json descriptor() const = 0;
};

class GSet {
 public:
  GSet() = default;
  explicit GSet(std::shared_ptr<const GSetImpl> impl) : impl_(std::move(impl)) {}

  const FiniteGroup& group() const { return impl_->group(); }
  std::uint64_t size() const { return impl_->size(); }
  Point act(Elem g, Point p) const { return impl_->act(g, p); }
  json descriptor() const { return impl_->descriptor(); }
  const GSetImpl& impl() const { return *impl_; }

  /// p is fixed by every entry of h, hence by the subgroup they generate.
  bool is_fixed(const Tuple& h, Point p) const {
    for (Elem g : h)
      if (act(g, p) != p) return false;
    return true;
  }

  friend bool operator==(const GSet& a, const GSet& b) {
    return a.impl_ == b.impl_ || (a.group() == b.group() && a.descriptor() == b.descriptor());
  }
  friend bool operator!=(const GSet& a, const GSet& b) { return !(a == b); }

 private:
  std::shared_ptr<const GSetImpl> impl_;
};

/// Action given by a table action[p][g] = g . p, validated on construction.
class TableGSet final : public GSetImpl {
 public:
  TableGSet(FiniteGroup g, std::vector<std::vector<Point>> action, json desc)
      : g_(std::move(g)), action_(std::move(action)), desc_(std::move(desc)) {
    const std::uint64_t m = action_.size();
    for (const auto& row : action_) {
      if (row.size() != g_.size()) throw std::invalid_argument("G-set: action row length differs from |G|");
      for (Point q : row)
        if (q >= m) throw std::invalid_argument("G-set: action entry out of range");
    }
    for (Point p = 0; p < m; ++p) {
      if (act(g_.identity(), p) != p) throw std::invalid_argument("G-set: identity does not act trivially");
      for (Elem a = 0; a < g_.size(); ++a)
        for (Elem b = 0; b < g_.size(); ++b)
          if (act(a, act(b, p)) != act(g_.mul(a, b), p))
            throw std::invalid_argument("G-set: action is not compatible with the group law");
    }
  }
  const FiniteGroup& group() const override { return g_; }
  std::uint64_t size() const override { return action_.size(); }
  Point act(Elem g, Point p) const override { return action_[p][g]; }
  json descriptor() const override { return desc_; }

 private:
  FiniteGroup g_;
  std::vector<std::vector<Point>> action_;
  json desc_;
};

/// G acting on itself by left translation.
class RegularGSet final : public GSetImpl {
 public:
  explicit RegularGSet(FiniteGroup g) : g_(std::move(g)) {}
  const FiniteGroup& group() const override { return g_; }
  std::uint64_t size() const override { return g_.size(); }
  Point act(Elem g, Point p) const override { return g_.mul(g, p); }
  json descriptor() const override { return {{"type", "regular"}}; }

 private:
  FiniteGroup g_;
};

/// k points with trivial action (k = 1 is the default one-point space).
class TrivialGSet final : public GSetImpl {
 public:
  TrivialGSet(FiniteGroup g, std::uint64_t k) : g_(std::move(g)), k_(k) {
    if (k_ == 0) throw std::invalid_argument("G-set: need at least one point");
  }
  const FiniteGroup& group() const override { return g_; }
  std::uint64_t size() const override { return k_; }
  Point act(Elem, Point p) const override { return p; }
  json descriptor() const override {
    if (k_ == 1) return {{"type", "point"}};
    return {{"type", "trivial"}, {"size", k_}};
  }

 private:
  FiniteGroup g_;
  std::uint64_t k_;
};

/// X^n as a (G wr S_n)-set: ((g, s) x)_a = g_a x_{s^-1(a)}; point index sum_a x_a |X|^a.
class PowerGSet final : public GSetImpl {
 public:
  PowerGSet(GSet base, std::size_t n, FiniteGroup wreath_group)
      : x_(std::move(base)), n_(n), w_(std::move(wreath_group)) {
    const WreathGroup& wg = require_wreath(w_);
    if (wg.base_group() != x_.group() || wg.arity() != n_)
      throw std::invalid_argument("power G-set: wreath group does not match base space");
    size_ = 1;
    for (std::size_t a = 0; a < n_; ++a) {
      if (size_ > std::numeric_limits<std::uint64_t>::max() / x_.size())
        throw std::overflow_error("power G-set too large");
      size_ *= x_.size();
    }
  }
  const FiniteGroup& group() const override { return w_; }
  std::uint64_t size() const override { return size_; }
  Point act(Elem g, Point p) const override {
    const WreathElement w = require_wreath(w_).decode(g);
    const std::vector<Point> x = decode(p);
    std::vector<Point> y(n_);
    for (std::size_t a = 0; a < n_; ++a) {
      std::size_t src = 0;
      while (w.perm[src] != a) ++src;
      y[a] = x_.act(w.base[a], x[src]);
    }
    return encode(y);
  }
  json descriptor() const override { return {{"type", "power"}, {"base", x_.descriptor()}, {"n", n_}}; }

  const GSet& base_space() const { return x_; }
  std::size_t arity() const { return n_; }

  std::vector<Point> decode(Point p) const {
    std::vector<Point> x(n_);
    for (std::size_t a = 0; a < n_; ++a) {
      x[a] = p % x_.size();
      p /= x_.size();
    }
    return x;
  }
  Point encode(const std::vector<Point>& x) const {
    if (x.size() != n_) throw std::invalid_argument("power G-set: wrong number of coordinates");
    Point p = 0;
    for (std::size_t a = n_; a-- > 0;) {
      if (x[a] >= x_.size()) throw std::invalid_argument("power G-set: coordinate out of range");
      p = p * x_.size() + x[a];
    }
    return p;
  }

 private:
  GSet x_;
  std::size_t n_;
  FiniteGroup w_;
  std::uint64_t size_ = 1;
};

/// X x Y as a (G x H)-set; point index p * |Y| + q.
class ProductGSet final : public GSetImpl {
 public:
  ProductGSet(GSet x, GSet y, FiniteGroup product_group)
      : x_(std::move(x)), y_(std::move(y)), g_(std::move(product_group)) {
    const ProductGroup& pg = require_product(g_);
    if (pg.first_factor() != x_.group() || pg.second_factor() != y_.group())
      throw std::invalid_argument("product G-set: group factors do not match spaces");
  }
  const FiniteGroup& group() const override { return g_; }
  std::uint64_t size() const override { return x_.size() * y_.size(); }
  Point act(Elem g, Point p) const override {
    const ProductGroup& pg = require_product(g_);
    return pair(x_.act(pg.first(g), first(p)), y_.act(pg.second(g), second(p)));
  }
  json descriptor() const override {
    return {{"type", "product"}, {"factors", json::array({x_.descriptor(), y_.descriptor()})}};
  }
  const GSet& first_space() const { return x_; }
  const GSet& second_space() const { return y_; }
  Point first(Point p) const { return p / y_.size(); }
  Point second(Point p) const { return p % y_.size(); }
  Point pair(Point a, Point b) const { return a * y_.size() + b; }

 private:
  GSet x_;
  GSet y_;
  FiniteGroup g_;
};

inline GSet point_space(const FiniteGroup& g) { return GSet(std::make_shared<TrivialGSet>(g, 1)); }
inline GSet trivial_space(const FiniteGroup& g, std::uint64_t k) { return GSet(std::make_shared<TrivialGSet>(g, k)); }
inline GSet regular_space(const FiniteGroup& g) { return GSet(std::make_shared<RegularGSet>(g)); }

inline GSet table_space(const FiniteGroup& g, std::vector<std::vector<Point>> action) {
  json desc = {{"type", "table"}, {"size", action.size()}, {"action", action}};
  return GSet(std::make_shared<TableGSet>(g, std::move(action), std::move(desc)));
}

/// X^n over G wr S_n (the wreath group is built if not supplied).
inline GSet power_space(const GSet& x, std::size_t n, const FiniteGroup& wreath_group) {
  return GSet(std::make_shared<PowerGSet>(x, n, wreath_group));
}
inline GSet power_space(const GSet& x, std::size_t n) { return power_space(x, n, wreath(x.group(), n)); }

inline GSet product_space(const GSet& x, const GSet& y, const FiniteGroup& product_group) {
  return GSet(std::make_shared<ProductGSet>(x, y, product_group));
}
inline GSet product_space(const GSet& x, const GSet& y) {
  return product_space(x, y, direct_product(x.group(), y.group()));
}

inline const PowerGSet* as_power_space(const GSet& s) { return dynamic_cast<const PowerGSet*>(&s.impl()); }
inline const ProductGSet* as_product_space(const GSet& s) { return dynamic_cast<const ProductGSet*>(&s.impl()); }

/// Build a G-set from JSON. `action` tables list g . p as action[p][g].
inline GSet build_gset(const FiniteGroup& g, const json& desc) {
  if (desc.is_null()) return point_space(g);
  const std::string type = desc.at("type").get<std::string>();
  if (type == "point") return point_space(g);
  if (type == "trivial") return trivial_space(g, desc.at("size").get<std::uint64_t>());
  if (type == "regular") return regular_space(g);
  if (type == "table") {
    auto action = desc.at("action").get<std::vector<std::vector<Point>>>();
    if (desc.contains("size") && desc.at("size").get<std::size_t>() != action.size())
      throw std::invalid_argument("G-set: size does not match action table");
    return table_space(g, std::move(action));
  }
  if (type == "power") {
    const WreathGroup& w = require_wreath(g);
    if (desc.at("n").get<std::size_t>() != w.arity()) throw std::invalid_argument("power G-set: arity mismatch");
    return power_space(build_gset(w.base_group(), desc.at("base")), w.arity(), g);
  }
  if (type == "product") {
    const ProductGroup& p = require_product(g);
    const auto& f = desc.at("factors");
    return product_space(build_gset(p.first_factor(), f.at(0)), build_gset(p.second_factor(), f.at(1)), g);
  }
  throw std::invalid_argument("unknown G-set type: " + type);
}

/// Points fixed by the subgroup generated by the entries of h.
inline std::vector<Point> fixed_points(const GSet& x, const FiniteGroup& g, const Tuple& h) {
  if (x.group() != g) throw std::invalid_argument("fixed_points: tuple and space are over different groups");
  const std::vector<Elem> closure = subgroup_closure(g, h);
  std::vector<Point> out;
  for (Point p = 0; p < x.size(); ++p) {
    bool fixed = true;
    for (Elem z : closure)
      if (x.act(z, p) != p) {
        fixed = false;
        break;
      }
    if (fixed) out.push_back(p);
  }
  return out;
}

}  // namespace ellpow
