#pragma once

// Finite groups on dense element indices.
//
// A FiniteGroup is a cheap handle to an immutable implementation. Small groups
// carry a full multiplication table; symmetric groups, permutation groups and
// wreath products above the table bound multiply lazily through their concrete
// representation (a permutation, or a base tuple plus a permutation).

#include "ellpow/permutation.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ellpow {

using Elem = std::uint64_t;
using Tuple = std::vector<Elem>;
using json = nlohmann::json;

/// Default bound on groups generated by permutations.
inline constexpr std::uint64_t kDefaultPermGroupBound = 5040;
/// Largest group that gets an eager multiplication table by default.
inline constexpr std::uint64_t kEagerTableBound = 2048;

class GroupImpl {
 public:
  virtual ~GroupImpl() = default;
  virtual std::uint64_t size() const = 0;
  virtual Elem mul(Elem a, Elem b) const = 0;
  virtual Elem inv(Elem a) const = 0;
  virtual Elem identity() const { return 0; }
  virtual std::vector<Elem> generators() const = 0;
  virtual std::string label(Elem a) const { return std::to_string(a); }
  virtual json descriptor() const = 0;
  /// Permutation realization, when the group is built from permutations.
  virtual std::optional<PermImage> permutation(Elem) const { return std::nullopt; }
};

class FiniteGroup {
 public:
  FiniteGroup() = default;
  explicit FiniteGroup(std::shared_ptr<const GroupImpl> impl)
      : impl_(std::move(impl)), key_(impl_->descriptor().dump()) {}

  std::uint64_t size() const { return impl_->size(); }
  Elem mul(Elem a, Elem b) const { return impl_->mul(a, b); }
  Elem inv(Elem a) const { return impl_->inv(a); }
  Elem identity() const { return impl_->identity(); }
  std::vector<Elem> generators() const { return impl_->generators(); }
  std::string label(Elem a) const { return impl_->label(a); }
  json descriptor() const { return impl_->descriptor(); }
  std::optional<PermImage> permutation(Elem a) const { return impl_->permutation(a); }
  const GroupImpl& impl() const { return *impl_; }
  bool valid() const { return impl_ != nullptr; }

  bool contains(Elem a) const { return a < size(); }

  Elem conj(Elem z, Elem a) const { return mul(mul(z, a), inv(z)); }

  bool commute(Elem a, Elem b) const { return mul(a, b) == mul(b, a); }

  /// a^k for any integer k, by repeated squaring.
  Elem pow(Elem a, std::int64_t k) const {
    if (k < 0) {
      a = inv(a);
      k = -k;
    }
    Elem result = identity();
    while (k > 0) {
      if (k & 1) result = mul(result, a);
      a = mul(a, a);
      k >>= 1;
    }
    return result;
  }

  std::uint64_t order(Elem a) const {
    std::uint64_t k = 1;
    for (Elem x = a; x != identity(); x = mul(x, a)) ++k;
    return k;
  }

  /// Full multiplication table; only sensible for small groups.
  std::vector<std::vector<Elem>> multiplication_table() const {
    std::vector<std::vector<Elem>> t(size(), std::vector<Elem>(size()));
    for (Elem a = 0; a < size(); ++a)
      for (Elem b = 0; b < size(); ++b) t[a][b] = mul(a, b);
    return t;
  }

  friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) {
    return a.impl_ == b.impl_ || a.key_ == b.key_;
  }
  friend bool operator!=(const FiniteGroup& a, const FiniteGroup& b) { return !(a == b); }

 private:
  std::shared_ptr<const GroupImpl> impl_;
  std::string key_;
};

namespace detail {

/// Greedy generating set: scan elements in order, keep those not yet generated.
inline std::vector<Elem> greedy_generators(std::uint64_t size, const std::function<Elem(Elem, Elem)>& mul,
                                           Elem identity) {
  std::vector<bool> in(size, false);
  std::vector<Elem> members{identity};
  in[identity] = true;
  std::vector<Elem> gens;
  for (Elem g = 0; g < size; ++g) {
    if (in[g]) continue;
    gens.push_back(g);
    // closure of members under right multiplication by all gens
    std::deque<Elem> queue(members.begin(), members.end());
    while (!queue.empty()) {
      Elem x = queue.front();
      queue.pop_front();
      for (Elem s : gens) {
        Elem y = mul(x, s);
        if (!in[y]) {
          in[y] = true;
          members.push_back(y);
          queue.push_back(y);
        }
      }
    }
  }
  return gens;
}

}  // namespace detail

/// Group given by an explicit, validated multiplication table.
class TableGroup final : public GroupImpl {
 public:
  TableGroup(std::vector<std::vector<Elem>> table, json descriptor, std::vector<std::string> labels = {},
             std::vector<Elem> generators = {})
      : n_(table.size()), desc_(std::move(descriptor)), labels_(std::move(labels)) {
    if (n_ == 0) throw std::invalid_argument("table group: empty table");
    flat_.reserve(n_ * n_);
    for (const auto& row : table) {
      if (row.size() != n_) throw std::invalid_argument("table group: table is not square");
      for (Elem v : row) {
        if (v >= n_) throw std::invalid_argument("table group: entry out of range");
        flat_.push_back(v);
      }
    }
    validate();
    gens_ = generators.empty() ? detail::greedy_generators(
                                     n_, [this](Elem a, Elem b) { return mul(a, b); }, id_)
                               : std::move(generators);
  }

  std::uint64_t size() const override { return n_; }
  Elem mul(Elem a, Elem b) const override { return flat_[a * n_ + b]; }
  Elem inv(Elem a) const override { return inverse_[a]; }
  Elem identity() const override { return id_; }
  std::vector<Elem> generators() const override { return gens_; }
  std::string label(Elem a) const override { return a < labels_.size() ? labels_[a] : std::to_string(a); }
  json descriptor() const override { return desc_; }

 private:
  void validate() {
    std::optional<Elem> id;
    for (Elem e = 0; e < n_ && !id; ++e) {
      bool ok = true;
      for (Elem x = 0; x < n_ && ok; ++x) ok = mul(e, x) == x && mul(x, e) == x;
      if (ok) id = e;
    }
    if (!id) throw std::invalid_argument("table group: no identity element");
    id_ = *id;
    inverse_.assign(n_, n_);
    for (Elem a = 0; a < n_; ++a) {
      for (Elem b = 0; b < n_; ++b)
        if (mul(a, b) == id_ && mul(b, a) == id_) {
          inverse_[a] = b;
          break;
        }
      if (inverse_[a] == n_) throw std::invalid_argument("table group: element without inverse");
    }
    auto check = [&](Elem x, Elem y, Elem z) {
      if (mul(mul(x, y), z) != mul(x, mul(y, z)))
        throw std::invalid_argument("table group: multiplication is not associative at (" + std::to_string(x) +
                                    "," + std::to_string(y) + "," + std::to_string(z) + ")");
    };
    if (n_ <= 64) {
      for (Elem x = 0; x < n_; ++x)
        for (Elem y = 0; y < n_; ++y)
          for (Elem z = 0; z < n_; ++z) check(x, y, z);
    } else {
      std::mt19937_64 rng(0x5eed);
      std::uniform_int_distribution<Elem> pick(0, n_ - 1);
      for (int t = 0; t < 200000; ++t) check(pick(rng), pick(rng), pick(rng));
    }
  }

  std::uint64_t n_;
  std::vector<Elem> flat_;
  std::vector<Elem> inverse_;
  Elem id_ = 0;
  json desc_;
  std::vector<std::string> labels_;
  std::vector<Elem> gens_;
};

/// Subgroup of a symmetric group, elements stored as sorted permutations.
class PermGroup final : public GroupImpl {
 public:
  PermGroup(std::vector<PermImage> sorted_elements, std::vector<Elem> generators, json descriptor)
      : elems_(std::move(sorted_elements)), gens_(std::move(generators)), desc_(std::move(descriptor)) {
    for (Elem i = 0; i < elems_.size(); ++i) index_.emplace(perm_rank(elems_[i]), i);
    if (elems_.size() <= kEagerTableBound / 4) {
      table_.resize(elems_.size() * elems_.size());
      for (Elem a = 0; a < elems_.size(); ++a)
        for (Elem b = 0; b < elems_.size(); ++b) table_[a * elems_.size() + b] = lookup(perm_compose(elems_[a], elems_[b]));
    }
    inverse_.resize(elems_.size());
    for (Elem a = 0; a < elems_.size(); ++a) inverse_[a] = lookup(perm_inverse(elems_[a]));
  }

  std::uint64_t size() const override { return elems_.size(); }
  Elem mul(Elem a, Elem b) const override {
    if (!table_.empty()) return table_[a * elems_.size() + b];
    return lookup(perm_compose(elems_[a], elems_[b]));
  }
  Elem inv(Elem a) const override { return inverse_[a]; }
  std::vector<Elem> generators() const override { return gens_; }
  std::string label(Elem a) const override { return perm_str(elems_[a]); }
  json descriptor() const override { return desc_; }
  std::optional<PermImage> permutation(Elem a) const override { return elems_[a]; }

  std::size_t degree() const { return elems_.front().size(); }

  Elem lookup(const PermImage& p) const {
    auto it = index_.find(perm_rank(p));
    if (it == index_.end()) throw std::invalid_argument("permutation not in group: " + perm_str(p));
    return it->second;
  }

 private:
  std::vector<PermImage> elems_;
  std::vector<Elem> gens_;
  json desc_;
  std::unordered_map<std::uint64_t, Elem> index_;
  std::vector<Elem> table_;
  std::vector<Elem> inverse_;
};

/// Elements (g_0..g_{n-1}; sigma) of G wr S_n.
struct WreathElement {
  Tuple base;
  PermImage perm;
  friend bool operator==(const WreathElement& a, const WreathElement& b) {
    return a.base == b.base && a.perm == b.perm;
  }
};

enum class WreathMode { Auto, Eager, Lazy };

/// G wr S_n with product (g, s)(g', s') = (g * (s . g'), s s'), [s . g']_b = g'_{s^-1(b)}.
/// Index of (g, s) is rank(s) * |G|^n + sum_a g_a |G|^a.
class WreathGroup final : public GroupImpl {
 public:
  WreathGroup(FiniteGroup base, std::size_t n, WreathMode mode) : g_(std::move(base)), n_(n) {
    gpow_ = 1;
    const std::uint64_t gs = g_.size();
    for (std::size_t a = 0; a < n_; ++a) {
      if (gpow_ > std::numeric_limits<std::uint64_t>::max() / gs) throw std::overflow_error("wreath: group too large");
      gpow_ *= gs;
    }
    const std::uint64_t nf = factorial(n_);
    if (gpow_ > std::numeric_limits<std::uint64_t>::max() / nf) throw std::overflow_error("wreath: group too large");
    size_ = gpow_ * nf;
    if (n_ <= kFastArity) {
      perm_list_ = all_permutations(n_);
      perm_inv_.resize(perm_list_.size());
      for (std::size_t r = 0; r < perm_list_.size(); ++r) perm_inv_[r] = perm_rank(perm_inverse(perm_list_[r]));
      if (n_ <= 5) {
        perm_mul_.resize(perm_list_.size() * perm_list_.size());
        for (std::size_t r = 0; r < perm_list_.size(); ++r)
          for (std::size_t q = 0; q < perm_list_.size(); ++q)
            perm_mul_[r * perm_list_.size() + q] = perm_rank(perm_compose(perm_list_[r], perm_list_[q]));
      }
    }
    bool eager = false;
    if (mode == WreathMode::Eager) {
      if (size_ > kEagerTableBound) throw std::length_error("wreath: eager table exceeds size bound");
      eager = true;
    } else if (mode == WreathMode::Auto) {
      eager = size_ <= kEagerTableBound && n_ < 4;
    }
    if (eager) {
      table_.resize(size_ * size_);
      for (Elem a = 0; a < size_; ++a)
        for (Elem b = 0; b < size_; ++b) table_[a * size_ + b] = mul_lazy(a, b);
    }
  }

  std::uint64_t size() const override { return size_; }
  Elem mul(Elem a, Elem b) const override {
    if (!table_.empty()) return table_[a * size_ + b];
    return mul_lazy(a, b);
  }
  Elem inv(Elem a) const override {
    WreathElement w = decode(a);
    PermImage si = perm_inverse(w.perm);
    Tuple base(n_);
    for (std::size_t b = 0; b < n_; ++b) base[b] = g_.inv(w.base[w.perm[b]]);
    return encode({std::move(base), std::move(si)});
  }
  Elem identity() const override { return encode({Tuple(n_, g_.identity()), perm_identity(n_)}); }

  std::vector<Elem> generators() const override {
    std::vector<Elem> gens;
    if (n_ == 0) return gens;
    for (Elem s : g_.generators()) {
      Tuple base(n_, g_.identity());
      base[0] = s;
      gens.push_back(encode({base, perm_identity(n_)}));
    }
    if (n_ >= 2) {
      PermImage t = perm_identity(n_);
      std::swap(t[0], t[1]);
      gens.push_back(encode({Tuple(n_, g_.identity()), t}));
    }
    if (n_ >= 3) {
      PermImage c(n_);
      for (std::size_t a = 0; a < n_; ++a) c[a] = (a + 1) % n_;
      gens.push_back(encode({Tuple(n_, g_.identity()), c}));
    }
    return gens;
  }

  std::string label(Elem a) const override {
    WreathElement w = decode(a);
    std::string s = "((";
    for (std::size_t i = 0; i < n_; ++i) s += (i ? "," : "") + g_.label(w.base[i]);
    return s + ")," + perm_str(w.perm) + ")";
  }

  json descriptor() const override { return {{"type", "wreath"}, {"base", g_.descriptor()}, {"n", n_}}; }

  const FiniteGroup& base_group() const { return g_; }
  std::size_t arity() const { return n_; }
  bool has_table() const { return !table_.empty(); }

  WreathElement decode(Elem a) const {
    if (a >= size_) throw std::out_of_range("wreath: element index out of range");
    WreathElement w;
    w.perm = perm_unrank(a / gpow_, n_);
    Elem rest = a % gpow_;
    w.base.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      w.base[i] = rest % g_.size();
      rest /= g_.size();
    }
    return w;
  }

  Elem encode(const WreathElement& w) const {
    if (w.base.size() != n_ || w.perm.size() != n_ || !is_permutation(w.perm))
      throw std::invalid_argument("wreath: malformed element");
    Elem idx = 0;
    for (std::size_t i = n_; i-- > 0;) {
      if (w.base[i] >= g_.size()) throw std::invalid_argument("wreath: base entry out of range");
      idx = idx * g_.size() + w.base[i];
    }
    return perm_rank(w.perm) * gpow_ + idx;
  }

 private:
  static constexpr std::size_t kFastArity = 8;

  Elem mul_lazy(Elem a, Elem b) const {
    if (n_ <= kFastArity) return mul_fast(a, b);
    WreathElement x = decode(a);
    WreathElement y = decode(b);
    PermImage si = perm_inverse(x.perm);
    Tuple base(n_);
    for (std::size_t i = 0; i < n_; ++i) base[i] = g_.mul(x.base[i], y.base[si[i]]);
    return encode({std::move(base), perm_compose(x.perm, y.perm)});
  }

  Elem mul_fast(Elem a, Elem b) const {
    const std::uint64_t pa = a / gpow_, pb = b / gpow_;
    std::uint64_t ra = a % gpow_, rb = b % gpow_;
    const std::uint64_t gs = g_.size();
    std::array<Elem, kFastArity> xa{}, xb{};
    for (std::size_t i = 0; i < n_; ++i) {
      xa[i] = ra % gs;
      ra /= gs;
      xb[i] = rb % gs;
      rb /= gs;
    }
    const PermImage& si = perm_list_[perm_inv_[pa]];
    Elem idx = 0;
    for (std::size_t i = n_; i-- > 0;) idx = idx * gs + g_.mul(xa[i], xb[si[i]]);
    const std::uint64_t pc = perm_mul_.empty() ? perm_rank(perm_compose(perm_list_[pa], perm_list_[pb]))
                                               : perm_mul_[pa * perm_list_.size() + pb];
    return pc * gpow_ + idx;
  }

  FiniteGroup g_;
  std::size_t n_;
  std::vector<PermImage> perm_list_;
  std::vector<std::uint64_t> perm_inv_;
  std::vector<std::uint64_t> perm_mul_;
  std::uint64_t gpow_ = 1;
  std::uint64_t size_ = 1;
  std::vector<Elem> table_;
};

/// Direct product G x H with index a * |H| + b.
class ProductGroup final : public GroupImpl {
 public:
  ProductGroup(FiniteGroup g, FiniteGroup h) : g_(std::move(g)), h_(std::move(h)) {}
  std::uint64_t size() const override { return g_.size() * h_.size(); }
  Elem mul(Elem a, Elem b) const override {
    return pair(g_.mul(first(a), first(b)), h_.mul(second(a), second(b)));
  }
  Elem inv(Elem a) const override { return pair(g_.inv(first(a)), h_.inv(second(a))); }
  Elem identity() const override { return pair(g_.identity(), h_.identity()); }
  std::vector<Elem> generators() const override {
    std::vector<Elem> gens;
    for (Elem s : g_.generators()) gens.push_back(pair(s, h_.identity()));
    for (Elem s : h_.generators()) gens.push_back(pair(g_.identity(), s));
    return gens;
  }
  std::string label(Elem a) const override { return "(" + g_.label(first(a)) + "," + h_.label(second(a)) + ")"; }
  json descriptor() const override {
    return {{"type", "product"}, {"factors", json::array({g_.descriptor(), h_.descriptor()})}};
  }

  const FiniteGroup& first_factor() const { return g_; }
  const FiniteGroup& second_factor() const { return h_; }
  Elem first(Elem a) const { return a / h_.size(); }
  Elem second(Elem a) const { return a % h_.size(); }
  Elem pair(Elem a, Elem b) const { return a * h_.size() + b; }

 private:
  FiniteGroup g_;
  FiniteGroup h_;
};

// ---------------------------------------------------------------------------
// Builders

inline FiniteGroup cyclic_group(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("cyclic group needs n >= 1");
  std::vector<std::vector<Elem>> t(n, std::vector<Elem>(n));
  std::vector<std::string> labels(n);
  for (Elem a = 0; a < n; ++a) {
    labels[a] = a == 0 ? "e" : a == 1 ? "c" : "c^" + std::to_string(a);
    for (Elem b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  }
  std::vector<Elem> gens;
  if (n > 1) gens.push_back(1);
  return FiniteGroup(std::make_shared<TableGroup>(std::move(t), json{{"type", "cyclic"}, {"n", n}},
                                                  std::move(labels), std::move(gens)));
}

inline FiniteGroup trivial_group() { return cyclic_group(1); }

/// Dihedral group of order 2n; index k + n*f stands for r^k s^f.
inline FiniteGroup dihedral_group(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("dihedral group needs n >= 1");
  const std::uint64_t m = 2 * n;
  std::vector<std::vector<Elem>> t(m, std::vector<Elem>(m));
  std::vector<std::string> labels(m);
  for (Elem a = 0; a < m; ++a) {
    const std::uint64_t k = a % n, f = a / n;
    labels[a] = (k == 0 ? std::string(f ? "" : "e") : "r^" + std::to_string(k)) + (f ? "s" : "");
    for (Elem b = 0; b < m; ++b) {
      const std::uint64_t l = b % n, g = b / n;
      const std::uint64_t kk = f ? (k + n - l) % n : (k + l) % n;
      t[a][b] = kk + n * ((f + g) % 2);
    }
  }
  std::vector<Elem> gens;
  if (n > 1) gens.push_back(1);
  gens.push_back(n);
  return FiniteGroup(std::make_shared<TableGroup>(std::move(t), json{{"type", "dihedral"}, {"n", n}},
                                                  std::move(labels), std::move(gens)));
}

/// Quaternion group Q8; indices 0..7 are 1, -1, i, -i, j, -j, k, -k.
inline FiniteGroup quaternion_group() {
  // unit u in {1,i,j,k} = 0..3; product u*v = sign * w
  static const int unit_mul[4][4][2] = {{{1, 0}, {1, 1}, {1, 2}, {1, 3}},
                                        {{1, 1}, {-1, 0}, {1, 3}, {-1, 2}},
                                        {{1, 2}, {-1, 3}, {-1, 0}, {1, 1}},
                                        {{1, 3}, {1, 2}, {-1, 1}, {-1, 0}}};
  std::vector<std::vector<Elem>> t(8, std::vector<Elem>(8));
  for (Elem a = 0; a < 8; ++a)
    for (Elem b = 0; b < 8; ++b) {
      const int sa = a % 2 ? -1 : 1, sb = b % 2 ? -1 : 1;
      const int* r = unit_mul[a / 2][b / 2];
      const int s = sa * sb * r[0];
      t[a][b] = static_cast<Elem>(2 * r[1] + (s < 0 ? 1 : 0));
    }
  std::vector<std::string> labels{"1", "-1", "i", "-i", "j", "-j", "k", "-k"};
  return FiniteGroup(std::make_shared<TableGroup>(std::move(t), json{{"type", "quaternion"}}, std::move(labels),
                                                  std::vector<Elem>{2, 4}));
}

/// Subgroup of S_degree generated by the given permutations, by orbit closure.
inline FiniteGroup permutation_group(std::size_t degree, const std::vector<PermImage>& generators,
                                     std::uint64_t bound = kDefaultPermGroupBound, json descriptor = nullptr) {
  for (const auto& g : generators)
    if (g.size() != degree || !is_permutation(g))
      throw std::invalid_argument("permutation group: generator is not a permutation of degree " +
                                  std::to_string(degree));
  std::map<PermImage, bool> seen;
  std::deque<PermImage> queue{perm_identity(degree)};
  seen[queue.front()] = true;
  while (!queue.empty()) {
    PermImage p = std::move(queue.front());
    queue.pop_front();
    for (const auto& g : generators) {
      PermImage q = perm_compose(p, g);
      if (seen.emplace(q, true).second) {
        if (seen.size() > bound)
          throw std::length_error("permutation group exceeds size bound " + std::to_string(bound));
        queue.push_back(std::move(q));
      }
    }
  }
  std::vector<PermImage> elems;
  elems.reserve(seen.size());
  for (auto& [p, _] : seen) elems.push_back(p);
  std::map<PermImage, Elem> pos;
  for (Elem i = 0; i < elems.size(); ++i) pos[elems[i]] = i;
  std::vector<Elem> gens;
  for (const auto& g : generators)
    if (!perm_is_identity(g)) gens.push_back(pos.at(g));
  if (descriptor.is_null()) {
    json gj = json::array();
    for (const auto& g : generators) gj.push_back(g);
    descriptor = {{"type", "perm"}, {"degree", degree}, {"generators", gj}};
  }
  return FiniteGroup(std::make_shared<PermGroup>(std::move(elems), std::move(gens), std::move(descriptor)));
}

/// Symmetric group S_n; element index = lexicographic rank of the permutation.
inline FiniteGroup symmetric_group(std::size_t n) {
  std::vector<PermImage> gens;
  if (n >= 2) {
    PermImage t = perm_identity(n);
    std::swap(t[0], t[1]);
    gens.push_back(t);
  }
  if (n >= 3) {
    PermImage c(n);
    for (std::size_t a = 0; a < n; ++a) c[a] = (a + 1) % n;
    gens.push_back(c);
  }
  return permutation_group(std::max<std::size_t>(n, 1), gens.empty() ? std::vector<PermImage>{} : gens,
                           factorial(n), json{{"type", "symmetric"}, {"n", n}});
}

/// G wr S_n. Groups built in Auto mode are cached by descriptor, so repeated requests
/// share one multiplication table.
inline FiniteGroup wreath(const FiniteGroup& g, std::size_t n, WreathMode mode = WreathMode::Auto) {
  if (mode != WreathMode::Auto) return FiniteGroup(std::make_shared<WreathGroup>(g, n, mode));
  static std::mutex mutex;
  static std::map<std::string, FiniteGroup> cache;
  const std::string key = g.descriptor().dump() + "|" + std::to_string(n);
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  FiniteGroup w(std::make_shared<WreathGroup>(g, n, mode));
  cache.emplace(key, w);
  return w;
}

inline FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h) {
  return FiniteGroup(std::make_shared<ProductGroup>(g, h));
}

inline const WreathGroup* as_wreath(const FiniteGroup& g) { return dynamic_cast<const WreathGroup*>(&g.impl()); }
inline const ProductGroup* as_product(const FiniteGroup& g) { return dynamic_cast<const ProductGroup*>(&g.impl()); }

inline const WreathGroup& require_wreath(const FiniteGroup& g) {
  const WreathGroup* w = as_wreath(g);
  if (!w) throw std::invalid_argument("expected a wreath product group, got " + g.descriptor().dump());
  return *w;
}

inline const ProductGroup& require_product(const FiniteGroup& g) {
  const ProductGroup* p = as_product(g);
  if (!p) throw std::invalid_argument("expected a direct product group, got " + g.descriptor().dump());
  return *p;
}

/// Build a group from its JSON descriptor.
inline FiniteGroup build_group(const json& desc) {
  if (!desc.is_object() || !desc.contains("type")) throw std::invalid_argument("group descriptor needs a \"type\"");
  const std::string type = desc.at("type").get<std::string>();
  if (type == "cyclic") return cyclic_group(desc.at("n").get<std::uint64_t>());
  if (type == "dihedral") return dihedral_group(desc.at("n").get<std::uint64_t>());
  if (type == "symmetric") return symmetric_group(desc.at("n").get<std::size_t>());
  if (type == "quaternion") return quaternion_group();
  if (type == "trivial") return trivial_group();
  if (type == "table") {
    auto table = desc.at("table").get<std::vector<std::vector<Elem>>>();
    if (desc.contains("size") && desc.at("size").get<std::size_t>() != table.size())
      throw std::invalid_argument("table group: size does not match table");
    std::vector<std::string> labels;
    if (desc.contains("labels")) labels = desc.at("labels").get<std::vector<std::string>>();
    return FiniteGroup(std::make_shared<TableGroup>(std::move(table), desc, std::move(labels)));
  }
  if (type == "perm") {
    const auto degree = desc.at("degree").get<std::size_t>();
    const auto gens = desc.at("generators").get<std::vector<PermImage>>();
    const auto bound = desc.value("bound", kDefaultPermGroupBound);
    return permutation_group(degree, gens, bound);
  }
  if (type == "wreath") {
    const std::string mode = desc.value("mode", std::string("auto"));
    const WreathMode m = mode == "eager" ? WreathMode::Eager : mode == "lazy" ? WreathMode::Lazy : WreathMode::Auto;
    return wreath(build_group(desc.at("base")), desc.at("n").get<std::size_t>(), m);
  }
  if (type == "product") {
    const auto& f = desc.at("factors");
    if (!f.is_array() || f.size() != 2) throw std::invalid_argument("product descriptor needs two factors");
    return direct_product(build_group(f[0]), build_group(f[1]));
  }
  throw std::invalid_argument("unknown group type: " + type);
}

// ---------------------------------------------------------------------------
// Subgroups given as sorted element lists

/// Closure of `gens` in g, sorted.
inline std::vector<Elem> subgroup_closure(const FiniteGroup& g, const std::vector<Elem>& gens) {
  std::unordered_map<Elem, bool> in;
  std::vector<Elem> members{g.identity()};
  in[g.identity()] = true;
  for (std::size_t i = 0; i < members.size(); ++i)
    for (Elem s : gens) {
      Elem y = g.mul(members[i], s);
      if (in.emplace(y, true).second) members.push_back(y);
    }
  std::sort(members.begin(), members.end());
  return members;
}

/// Conjugacy classes of a group (or of a subgroup given by elements and generators),
/// each sorted, ordered by minimal element.
inline std::vector<std::vector<Elem>> conjugacy_classes(const FiniteGroup& g, const std::vector<Elem>& elements,
                                                        const std::vector<Elem>& gens) {
  std::unordered_map<Elem, bool> done;
  std::vector<std::vector<Elem>> classes;
  for (Elem x : elements) {
    if (done.count(x)) continue;
    std::vector<Elem> cls{x};
    done[x] = true;
    for (std::size_t i = 0; i < cls.size(); ++i)
      for (Elem s : gens) {
        Elem y = g.conj(s, cls[i]);
        if (done.emplace(y, true).second) cls.push_back(y);
      }
    std::sort(cls.begin(), cls.end());
    classes.push_back(std::move(cls));
  }
  return classes;
}

inline std::vector<std::vector<Elem>> conjugacy_classes(const FiniteGroup& g) {
  std::vector<Elem> all(g.size());
  std::iota(all.begin(), all.end(), Elem{0});
  return conjugacy_classes(g, all, g.generators());
}

/// A small generating set for a subgroup given by its sorted element list.
inline std::vector<Elem> subgroup_generators(const FiniteGroup& g, const std::vector<Elem>& elements) {
  std::vector<Elem> gens;
  std::unordered_map<Elem, bool> in{{g.identity(), true}};
  std::vector<Elem> members{g.identity()};
  for (Elem x : elements) {
    if (in.count(x)) continue;
    gens.push_back(x);
    for (std::size_t i = 0; i < members.size(); ++i)
      for (Elem s : gens) {
        Elem y = g.mul(members[i], s);
        if (in.emplace(y, true).second) members.push_back(y);
      }
    // members may have grown past i; the loop above walks the whole list
  }
  return gens;
}

}  // namespace ellpow
