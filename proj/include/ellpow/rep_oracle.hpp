#pragma once

// Explicit complex representations and brute-force traces on tensor powers.
// Nothing here goes through orbit reduction: the wreath action on V^{(x)n} is
// built as an honest dim^n x dim^n matrix.

#include "ellpow/class_function.hpp"
#include "ellpow/power_operations.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace ellpow {

/// Dense square complex matrix, row-major.
struct CMatrix {
  std::size_t n = 0;
  std::vector<Complex> a;

  CMatrix() = default;
  explicit CMatrix(std::size_t dim) : n(dim), a(dim * dim) {}
  static CMatrix identity(std::size_t dim) {
    CMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1;
    return m;
  }
  Complex& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
  Complex trace() const {
    Complex t = 0;
    for (std::size_t i = 0; i < n; ++i) t += (*this)(i, i);
    return t;
  }
  friend CMatrix operator*(const CMatrix& x, const CMatrix& y) {
    CMatrix z(x.n);
    for (std::size_t i = 0; i < x.n; ++i)
      for (std::size_t k = 0; k < x.n; ++k) {
        const Complex v = x(i, k);
        if (v == Complex(0)) continue;
        for (std::size_t j = 0; j < x.n; ++j) z(i, j) += v * y(k, j);
      }
    return z;
  }
  friend double max_abs_diff(const CMatrix& x, const CMatrix& y) {
    double m = 0;
    for (std::size_t i = 0; i < x.a.size(); ++i) m = std::max(m, std::abs(x.a[i] - y.a[i]));
    return m;
  }
};

class Representation {
 public:
  Representation(FiniteGroup g, std::string name, std::vector<CMatrix> mats)
      : g_(std::move(g)), name_(std::move(name)), mats_(std::move(mats)) {
    if (mats_.size() != g_.size()) throw std::invalid_argument("representation: need one matrix per group element");
    dim_ = mats_.front().n;
    for (const auto& m : mats_)
      if (m.n != dim_) throw std::invalid_argument("representation: matrices of different sizes");
    if (max_abs_diff(mats_[g_.identity()], CMatrix::identity(dim_)) > 1e-9)
      throw std::invalid_argument("representation: identity does not act as the identity matrix");
    for (Elem x = 0; x < g_.size(); ++x)
      for (Elem y = 0; y < g_.size(); ++y)
        if (max_abs_diff(mats_[g_.mul(x, y)], mats_[x] * mats_[y]) > 1e-9)
          throw std::invalid_argument("representation " + name_ + ": rho(xy) != rho(x) rho(y)");
  }

  const FiniteGroup& group() const { return g_; }
  const std::string& name() const { return name_; }
  std::size_t dim() const { return dim_; }
  const CMatrix& operator()(Elem x) const { return mats_[x]; }

 private:
  FiniteGroup g_;
  std::string name_;
  std::vector<CMatrix> mats_;
  std::size_t dim_ = 0;
};

inline Representation trivial_rep(const FiniteGroup& g) {
  return Representation(g, "trivial", std::vector<CMatrix>(g.size(), CMatrix::identity(1)));
}

/// One-dimensional representation from its values.
inline Representation linear_rep(const FiniteGroup& g, const std::string& name, const std::vector<Complex>& values) {
  std::vector<CMatrix> mats;
  for (Complex v : values) {
    CMatrix m(1);
    m(0, 0) = v;
    mats.push_back(m);
  }
  return Representation(g, name, std::move(mats));
}

/// Characters c^k -> exp(2 pi i m k / n) of the cyclic group of order n.
inline Representation cyclic_character_rep(const FiniteGroup& g, std::int64_t m) {
  const std::uint64_t n = g.size();
  std::vector<Complex> v(n);
  for (Elem k = 0; k < n; ++k) {
    const std::int64_t e = static_cast<std::int64_t>((m * static_cast<std::int64_t>(k)) % static_cast<std::int64_t>(n));
    // exact values at the quarter turns
    const std::int64_t q = (4 * e) % static_cast<std::int64_t>(n) == 0 ? 4 * e / static_cast<std::int64_t>(n) : -1;
    static const Complex quarter[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    v[k] = q >= 0 ? quarter[((q % 4) + 4) % 4] : std::polar(1.0, 2 * M_PI * static_cast<double>(e) / static_cast<double>(n));
  }
  return linear_rep(g, "chi^" + std::to_string(m), v);
}

/// Sign representation of a symmetric group (permutation sign) or dihedral group (r^k s^f -> (-1)^f).
inline Representation sign_rep(const FiniteGroup& g) {
  const json desc = g.descriptor();
  std::vector<Complex> v(g.size());
  if (desc.at("type") == "dihedral") {
    const auto n = desc.at("n").get<std::uint64_t>();
    for (Elem x = 0; x < g.size(); ++x) v[x] = x / n ? -1.0 : 1.0;
  } else if (g.permutation(g.identity())) {
    for (Elem x = 0; x < g.size(); ++x) v[x] = perm_sign(*g.permutation(x));
  } else {
    throw std::invalid_argument("sign representation needs a symmetric, permutation or dihedral group");
  }
  return linear_rep(g, "sign", v);
}

/// Permutation representation of a finite G-set.
inline Representation permutation_rep(const GSet& x, const std::string& name = "permutation") {
  const FiniteGroup& g = x.group();
  std::vector<CMatrix> mats;
  for (Elem e = 0; e < g.size(); ++e) {
    CMatrix m(x.size());
    for (Point p = 0; p < x.size(); ++p) m(x.act(e, p), p) = 1;
    mats.push_back(m);
  }
  return Representation(g, name, std::move(mats));
}

inline Representation regular_rep(const FiniteGroup& g) { return permutation_rep(regular_space(g), "regular"); }

/// The natural action of a permutation group on its points, as a G-set.
inline GSet natural_space(const FiniteGroup& g) {
  const std::size_t k = g.permutation(g.identity()).value().size();
  std::vector<std::vector<Point>> action(k, std::vector<Point>(g.size()));
  for (Elem e = 0; e < g.size(); ++e)
    for (Point p = 0; p < k; ++p) action[p][e] = (*g.permutation(e))[p];
  return table_space(g, std::move(action));
}

/// Standard (k-1)-dimensional representation of a permutation group on k points, in the
/// basis f_i = e_i - e_{k-1}: sigma f_i = f_{sigma(i)} - f_{sigma(k-1)}, with f_{k-1} = 0.
inline Representation standard_rep(const FiniteGroup& g) {
  if (!g.permutation(g.identity())) throw std::invalid_argument("standard representation needs a permutation group");
  const std::size_t k = g.permutation(g.identity())->size();
  if (k < 2) throw std::invalid_argument("standard representation needs degree >= 2");
  std::vector<CMatrix> mats;
  for (Elem e = 0; e < g.size(); ++e) {
    const PermImage s = *g.permutation(e);
    CMatrix m(k - 1);
    for (std::size_t i = 0; i + 1 < k; ++i) {
      if (s[i] != k - 1) m(s[i], i) += 1;
      if (s[k - 1] != k - 1) m(s[k - 1], i) -= 1;
    }
    mats.push_back(m);
  }
  return Representation(g, "standard", std::move(mats));
}

/// Two-dimensional irreducible representation of Q8: i -> diag(i, -i), j -> [[0,1],[-1,0]].
inline Representation quaternion_rep(const FiniteGroup& q) {
  if (q.descriptor() != json{{"type", "quaternion"}}) throw std::invalid_argument("quaternion_rep needs Q8");
  const Complex I(0, 1);
  CMatrix units[4];
  units[0] = CMatrix::identity(2);
  units[1] = CMatrix(2);
  units[1](0, 0) = I;
  units[1](1, 1) = -I;
  units[2] = CMatrix(2);
  units[2](0, 1) = 1;
  units[2](1, 0) = -1;
  units[3] = units[1] * units[2];
  std::vector<CMatrix> mats;
  for (Elem x = 0; x < 8; ++x) {
    CMatrix m = units[x / 2];
    if (x % 2)
      for (auto& v : m.a) v = -v;
    mats.push_back(m);
  }
  return Representation(q, "quaternion-2d", std::move(mats));
}

/// The built-in representations of a group with dimension at most max_dim.
inline std::vector<Representation> builtin_reps(const FiniteGroup& g, std::size_t max_dim = 3) {
  std::vector<Representation> out{trivial_rep(g)};
  const std::string type = g.descriptor().at("type").get<std::string>();
  if (type == "cyclic") {
    for (std::int64_t m = 1; m < static_cast<std::int64_t>(g.size()); ++m) out.push_back(cyclic_character_rep(g, m));
  }
  if (type == "symmetric" || type == "dihedral" || type == "perm") {
    if (g.size() > 1) out.push_back(sign_rep(g));
  }
  if (type == "symmetric" || type == "perm") {
    if (g.permutation(g.identity())->size() >= 2) out.push_back(standard_rep(g));
    out.push_back(permutation_rep(natural_space(g), "natural"));
  }
  if (type == "quaternion") {
    out.push_back(quaternion_rep(g));
    // the three linear characters through Q8 / {+-1}
    for (int u = 1; u <= 3; ++u) {
      std::vector<Complex> v(8);
      for (Elem x = 0; x < 8; ++x) v[x] = (x / 2 == 0 || static_cast<int>(x / 2) == u) ? 1.0 : -1.0;
      out.push_back(linear_rep(g, "linear-" + std::to_string(u), v));
    }
  }
  if (g.size() > 1) out.push_back(regular_rep(g));
  std::vector<Representation> kept;
  for (auto& r : out)
    if (r.dim() <= max_dim) kept.push_back(std::move(r));
  return kept;
}

inline Representation direct_sum(const Representation& a, const Representation& b) {
  if (a.group() != b.group()) throw std::invalid_argument("direct_sum: different groups");
  std::vector<CMatrix> mats;
  const std::size_t n = a.dim() + b.dim();
  for (Elem x = 0; x < a.group().size(); ++x) {
    CMatrix m(n);
    for (std::size_t i = 0; i < a.dim(); ++i)
      for (std::size_t j = 0; j < a.dim(); ++j) m(i, j) = a(x)(i, j);
    for (std::size_t i = 0; i < b.dim(); ++i)
      for (std::size_t j = 0; j < b.dim(); ++j) m(a.dim() + i, a.dim() + j) = b(x)(i, j);
    mats.push_back(m);
  }
  return Representation(a.group(), a.name() + "+" + b.name(), std::move(mats));
}

/// g -> Tr rho(g), as a height-1 class function on the one-point space.
inline HeightOneFunction character(const Representation& rep) {
  std::map<Key, Height1Value> values;
  const GSet pt = point_space(rep.group());
  for (const auto& cls : conjugacy_classes(rep.group()))
    values.emplace(Key{{cls.front()}, 0}, Height1Value::single(0, rep(cls.front()).trace()));
  return HeightOneFunction::from_table(rep.group(), pt, 1, false, values);
}

inline constexpr std::size_t kTensorBudget = 6561;  // 3^8 rows

/// The matrix of (g, sigma) on V^{(x)n}: e_{J} -> (x)_a rho(g_a) e_{J_{sigma^-1(a)}}, so the
/// entry at (I, J) is prod_a rho(g_a)[I_a, J_{sigma^-1(a)}].
inline CMatrix tensor_power_matrix(const Representation& rep, const FiniteGroup& w, Elem x) {
  const WreathGroup& wg = require_wreath(w);
  if (wg.base_group() != rep.group()) throw std::invalid_argument("tensor_power_trace: wreath base differs from the group");
  const std::size_t n = wg.arity(), dim = rep.dim();
  std::size_t total = 1;
  for (std::size_t a = 0; a < n; ++a) {
    total *= dim;
    if (total > kTensorBudget) throw std::length_error("tensor_power_trace: dim^n exceeds the budget");
  }
  const WreathElement e = wg.decode(x);
  const PermImage si = perm_inverse(e.perm);
  CMatrix m(total);
  std::vector<std::size_t> I(n), J(n);
  for (std::size_t r = 0; r < total; ++r) {
    for (std::size_t a = 0, t = r; a < n; ++a, t /= dim) I[a] = t % dim;
    for (std::size_t c = 0; c < total; ++c) {
      for (std::size_t a = 0, t = c; a < n; ++a, t /= dim) J[a] = t % dim;
      Complex v = 1;
      for (std::size_t a = 0; a < n && v != Complex(0); ++a) v *= rep(e.base[a])(I[a], J[si[a]]);
      m(r, c) = v;
    }
  }
  return m;
}

inline Complex tensor_power_trace(const Representation& rep, const FiniteGroup& w, Elem x) {
  return tensor_power_matrix(rep, w, x).trace();
}

/// max over classes H of G wr S_n of |Tr(H on V^{(x)n}) - P_n(chi)(H)|.
inline double compare_with_geometric(const Representation& rep, std::size_t n) {
  const FiniteGroup w = wreath(rep.group(), n);
  const HeightOneFunction p = power_operation(character(rep), n);
  double m = 0;
  for (const TupleClass& tc : tuple_conjugacy_classes(w, 1)) {
    const Complex geometric = p.evaluate(tc.rep, 0).components().count(0) ? p.evaluate(tc.rep, 0).components().at(0) : 0.0;
    m = std::max(m, std::abs(tensor_power_trace(rep, w, tc.rep[0]) - geometric));
  }
  return m;
}

/// max over g of |Psi_n(chi)(g) - Tr(rho(g)^n)|, the power taken on matrices.
inline double adams_character_check(const Representation& rep, std::int64_t n,
                                    AdamsScaling scaling = AdamsScaling::HalfDegree) {
  const HeightOneFunction psi = adams(character(rep), n, scaling);
  double m = 0;
  for (Elem x = 0; x < rep.group().size(); ++x) {
    CMatrix p = CMatrix::identity(rep.dim());
    for (std::int64_t k = 0; k < n; ++k) p = p * rep(x);
    const auto v = psi.evaluate({x}, 0);
    const Complex val = v.components().count(0) ? v.components().at(0) : 0.0;
    m = std::max(m, std::abs(val - p.trace()));
  }
  return m;
}

}  // namespace ellpow
