#pragma once

// Class functions: GradedValue-valued functions of (commuting d-tuple h, point x
// fixed by h), invariant under simultaneous conjugation. At height 2 with the
// elliptic flag they are also SL_2(Z)-equivariant: f(gamma . h, x) = gamma^* f(h, x),
// with gamma . h as in tuples.hpp and gamma^* the weight slash.
//
// A class function is either tabulated on canonical keys (lexicographically least
// member of the orbit of (h, x)) or given by a rule evaluated directly.

#include "ellpow/coefficients.hpp"
#include "ellpow/structure_maps.hpp"
#include "ellpow/tuples.hpp"

#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ellpow {

using Key = std::pair<Tuple, Point>;

template <class C>
class ClassFunction {
 public:
  using Value = GradedValue<C>;
  using Rule = std::function<Value(const Tuple&, Point)>;

  ClassFunction() = default;

  /// Rule-based class function. The rule sees only validated (h, x).
  static ClassFunction from_rule(FiniteGroup g, GSet x, std::size_t d, bool elliptic, Rule rule) {
    ClassFunction f(std::move(g), std::move(x), d, elliptic);
    f.rule_ = std::make_shared<const Rule>(std::move(rule));
    return f;
  }

  /// Tabulated class function. Keys are canonicalized; unsupplied orbits read as 0
  /// and are listed in warnings().
  static ClassFunction from_table(FiniteGroup g, GSet x, std::size_t d, bool elliptic, const std::map<Key, Value>& values) {
    ClassFunction f(std::move(g), std::move(x), d, elliptic);
    auto table = std::make_shared<std::map<Key, Value>>();
    const CompareContext exact{0.0, default_tau_samples()};
    for (const auto& [key, v] : values) {
      f.validate(key.first, key.second);
      const Key canon = canonical_key(f.group_, f.space_, key.first, key.second);
      auto [it, inserted] = table->emplace(canon, v);
      if (!inserted && max_deviation(it->second, v, exact) != 0.0)
        throw std::invalid_argument("class function: two values supplied for one conjugacy orbit");
    }
    std::vector<std::string> warnings;
    for (const KeyClass& kc : tuple_point_classes(f.group_, f.space_, d))
      if (!table->count({kc.tuple, kc.point}))
        warnings.push_back("no value for " + tuple_str(f.group_, kc.tuple) + " at point " + std::to_string(kc.point) +
                           "; using 0");
    f.table_ = std::move(table);
    f.warnings_ = std::make_shared<const std::vector<std::string>>(std::move(warnings));
    return f;
  }

  static ClassFunction constant(FiniteGroup g, GSet x, std::size_t d, Value v, bool elliptic = false) {
    return from_rule(std::move(g), std::move(x), d, elliptic, [v](const Tuple&, Point) { return v; });
  }

  const FiniteGroup& group() const { return group_; }
  const GSet& space() const { return space_; }
  std::size_t d() const { return d_; }
  bool elliptic() const { return elliptic_; }
  bool tabulated() const { return table_ != nullptr; }
  std::vector<std::string> warnings() const { return warnings_ ? *warnings_ : std::vector<std::string>{}; }

  void validate(const Tuple& h, Point x) const {
    if (h.size() != d_) throw std::invalid_argument("class function: tuple has arity " + std::to_string(h.size()) +
                                                    ", expected " + std::to_string(d_));
    for (Elem e : h)
      if (!group_.contains(e)) throw std::invalid_argument("class function: tuple entry outside the group");
    require_commuting(group_, h);
    if (x >= space_.size()) throw std::invalid_argument("class function: point outside the space");
    if (!space_.is_fixed(h, x)) throw std::invalid_argument("class function: point is not fixed by the tuple");
  }

  Value evaluate(const Tuple& h, Point x = 0) const {
    validate(h, x);
    if (rule_) return (*rule_)(h, x);
    auto it = table_->find(canonical_key(group_, space_, h, x));
    return it == table_->end() ? Value::zero() : it->second;
  }

  /// Values on every orbit of (h, x), by canonical representative.
  std::map<Key, Value> values() const {
    std::map<Key, Value> out;
    for (const KeyClass& kc : tuple_point_classes(group_, space_, d_))
      out.emplace(Key{kc.tuple, kc.point}, evaluate(kc.tuple, kc.point));
    return out;
  }

  ClassFunction tabulate() const {
    if (tabulated()) return *this;
    return from_table(group_, space_, d_, elliptic_, values());
  }

 private:
  ClassFunction(FiniteGroup g, GSet x, std::size_t d, bool elliptic)
      : group_(std::move(g)), space_(std::move(x)), d_(d), elliptic_(elliptic) {
    if (space_.group() != group_) throw std::invalid_argument("class function: space is over a different group");
    if (elliptic_ && d_ != 2) throw std::invalid_argument("class function: the elliptic flag needs d = 2");
  }

  FiniteGroup group_;
  GSet space_;
  std::size_t d_ = 1;
  bool elliptic_ = false;
  std::shared_ptr<const Rule> rule_;
  std::shared_ptr<const std::map<Key, Value>> table_;
  std::shared_ptr<const std::vector<std::string>> warnings_;
};

using HeightOneFunction = ClassFunction<Complex>;
using HeightTwoFunction = ClassFunction<LatFunction>;

template <class C>
GradedValue<C> evaluate(const ClassFunction<C>& f, const Tuple& h, Point x = 0) {
  return f.evaluate(h, x);
}

/// Pairs (h, x) on which to test a property: every orbit for small groups, otherwise
/// random commuting tuples with all their fixed points.
inline std::vector<Key> test_keys(const FiniteGroup& g, const GSet& x, std::size_t d, std::size_t cap = 400,
                                  std::uint64_t seed = 1, std::uint64_t exhaustive_bound = 20000) {
  std::vector<Key> out;
  if (g.size() <= exhaustive_bound) {
    for (const KeyClass& kc : tuple_point_classes(g, x, d)) out.emplace_back(kc.tuple, kc.point);
    return out;
  }
  for (const Tuple& h : test_tuples(g, d, cap, seed, exhaustive_bound))
    for (Point p = 0; p < x.size(); ++p)
      if (x.is_fixed(h, p)) out.emplace_back(h, p);
  return out;
}

struct Violation {
  std::string kind;  ///< "conjugation", "S" or "T"
  Tuple tuple;
  Point point = 0;
  double magnitude = 0;
};

struct InvarianceReport {
  bool ok = true;
  double max_deviation = 0;
  std::size_t checked = 0;
  std::vector<Violation> violations;
};

inline const IntMatrix& sl2_s() {
  static const IntMatrix s{{0, -1}, {1, 0}};
  return s;
}
inline const IntMatrix& sl2_t() {
  static const IntMatrix t{{1, 1}, {0, 1}};
  return t;
}

/// Conjugation invariance under the group generators and, in elliptic mode,
/// f(gamma . h, x) = gamma^* f(h, x) for gamma in {S, T}.
template <class C>
InvarianceReport is_invariant(const ClassFunction<C>& f, const CompareContext& ctx = {},
                              const std::vector<Key>* keys = nullptr) {
  InvarianceReport rep;
  const std::vector<Key> own = keys ? std::vector<Key>{} : test_keys(f.group(), f.space(), f.d());
  const std::vector<Key>& ks = keys ? *keys : own;
  auto record = [&](const std::string& kind, const Key& k, double dev) {
    ++rep.checked;
    rep.max_deviation = std::max(rep.max_deviation, dev);
    if (dev > ctx.tol) {
      rep.ok = false;
      rep.violations.push_back({kind, k.first, k.second, dev});
    }
  };
  for (const Key& k : ks) {
    const auto base = f.evaluate(k.first, k.second);
    for (Elem z : f.group().generators()) {
      const auto moved = f.evaluate(conjugate_tuple(f.group(), z, k.first), f.space().act(z, k.second));
      record("conjugation", k, max_deviation(moved, base, ctx));
    }
    if (f.elliptic()) {
      for (const auto& [name, gamma] : {std::pair<std::string, IntMatrix>{"S", sl2_s()}, {"T", sl2_t()}}) {
        const auto moved = f.evaluate(gl_act_on_tuple(f.group(), gamma, k.first), k.second);
        record(name, k, max_deviation(moved, base.slash(gamma), ctx));
      }
    }
  }
  return rep;
}

/// (phi^* f)(h, x) = f(phi o h, m(x)). The space map must be phi-equivariant.
template <class C>
ClassFunction<C> restrict_along(const ClassFunction<C>& f, const GroupHomomorphism& phi, const SpaceMap& m) {
  if (phi.target != f.group()) throw std::invalid_argument("restrict_along: homomorphism does not land in the group");
  if (m.target != f.space()) throw std::invalid_argument("restrict_along: space map does not land in the space");
  if (!is_equivariant(phi, m)) throw std::invalid_argument("restrict_along: space map is not equivariant");
  return ClassFunction<C>::from_rule(phi.source, m.source, f.d(), f.elliptic(), [f, phi, m](const Tuple& h, Point x) {
    Tuple img(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) img[i] = phi(h[i]);
    return f.evaluate(img, m.map(x));
  });
}

/// Restriction along a homomorphism when both functions live on one-point-like spaces
/// related by the identity on point indices.
template <class C>
ClassFunction<C> restrict_along(const ClassFunction<C>& f, const GroupHomomorphism& phi, const GSet& source_space) {
  return restrict_along(f, phi, SpaceMap{source_space, f.space(), [](Point p) { return p; }});
}

template <class C>
ClassFunction<C> multiply(const ClassFunction<C>& f, const ClassFunction<C>& g) {
  if (f.group() != g.group() || f.space() != g.space() || f.d() != g.d())
    throw std::invalid_argument("multiply: class functions have different shapes");
  return ClassFunction<C>::from_rule(f.group(), f.space(), f.d(), f.elliptic() && g.elliptic(),
                                     [f, g](const Tuple& h, Point x) { return f.evaluate(h, x) * g.evaluate(h, x); });
}

/// f boxtimes g on (G x H, X x Y): ((h, h'), (x, y)) -> f(h, x) g(h', y).
template <class C>
ClassFunction<C> external_product(const ClassFunction<C>& f, const ClassFunction<C>& g) {
  if (f.d() != g.d()) throw std::invalid_argument("external_product: different arities");
  const FiniteGroup gh = direct_product(f.group(), g.group());
  const GSet xy = product_space(f.space(), g.space(), gh);
  return ClassFunction<C>::from_rule(gh, xy, f.d(), f.elliptic() && g.elliptic(), [f, g, gh, xy](const Tuple& h, Point p) {
    const ProductGroup& pg = require_product(gh);
    const ProductGSet& ps = *as_product_space(xy);
    Tuple a(h.size()), b(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
      a[i] = pg.first(h[i]);
      b[i] = pg.second(h[i]);
    }
    return f.evaluate(a, ps.first(p)) * g.evaluate(b, ps.second(p));
  });
}

/// Largest deviation between two class functions on the given keys.
template <class C>
double compare_on(const ClassFunction<C>& f, const ClassFunction<C>& g, const std::vector<Key>& keys,
                  const CompareContext& ctx) {
  double m = 0;
  for (const Key& k : keys) m = std::max(m, max_deviation(f.evaluate(k.first, k.second), g.evaluate(k.first, k.second), ctx));
  return m;
}

}  // namespace ellpow
