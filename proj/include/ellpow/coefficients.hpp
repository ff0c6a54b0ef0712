#pragma once

// Coefficients for class-function values.
//
// Height 1 uses complex scalars. Height 2 uses weight-graded lattice functions
// F(l, l') with F(mu l, mu l') = mu^-w F(l, l'), written F(l, l') = l^-w f(l'/l).
// A GradedValue is a finitely supported map j -> coefficient; the j-component
// sits in degree 2j and, at height 2, has weight j.

#include "ellpow/int_matrix.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace ellpow {

using Complex = std::complex<double>;
using ComplexScalar = Complex;

inline const std::vector<Complex>& default_tau_samples() {
  static const std::vector<Complex> taus = {{0.0, 1.0}, {0.0, 2.0}, {0.5, 1.0}, {0.25, 2.0}};
  return taus;
}

/// How two values are compared: deviation |a - b| / max(1, |a|, |b|) at every sample.
struct CompareContext {
  double tol = 1e-9;
  std::vector<Complex> taus = default_tau_samples();
};

inline double deviation(Complex a, Complex b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

/// Divisor power sum sigma_k(n).
inline double divisor_sigma(int k, int n) {
  double s = 0;
  for (int d = 1; d <= n; ++d)
    if (n % d == 0) s += std::pow(static_cast<double>(d), k);
  return s;
}

// ---------------------------------------------------------------------------
// Lattice functions

class LatFunction {
 public:
  struct Node {
    explicit Node(int w) : weight(w) {}
    virtual ~Node() = default;
    virtual Complex eval(Complex l, Complex lp) const = 0;
    virtual nlohmann::json describe() const = 0;
    int weight;
  };

  LatFunction() : LatFunction(constant(0.0)) {}
  explicit LatFunction(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  int weight() const { return node_->weight; }
  Complex operator()(Complex l, Complex lp) const { return node_->eval(l, lp); }
  Complex at_tau(Complex tau) const { return node_->eval(1.0, tau); }
  nlohmann::json describe() const { return node_->describe(); }

  static LatFunction constant(Complex c);
  /// l^-w sum_n a_n q^n, q = exp(2 pi i l'/l), evaluated term by term.
  static LatFunction q_series(int w, std::vector<Complex> coeffs);
  /// Closed-form Eisenstein series E_w normalized to constant term 1 (w even, >= 4).
  static LatFunction eisenstein(int w);
  /// l^-w f(l'/l) for an arbitrary function of tau.
  static LatFunction from_tau(int w, std::function<Complex(Complex)> f, std::string name);

  /// (M* F)(l, l') = F(a l + b l', c l + d l').
  LatFunction slash(const IntMatrix& m) const;
  LatFunction scaled(Complex c) const;
  friend LatFunction operator*(const LatFunction& a, const LatFunction& b);
  friend LatFunction operator+(const LatFunction& a, const LatFunction& b);

 private:
  std::shared_ptr<const Node> node_;
};

namespace detail {

/// z^k for integer k by repeated squaring (std::pow on complex goes through log/exp).
inline Complex ipow(Complex z, int k) {
  if (k < 0) return 1.0 / ipow(z, -k);
  Complex out = 1;
  for (; k; k >>= 1, z *= z)
    if (k & 1) out *= z;
  return out;
}

inline Complex oriented_tau(Complex l, Complex lp) {
  const Complex tau = lp / l;
  if (!(tau.imag() > 0)) throw std::domain_error("lattice function evaluated on a basis with Im(l'/l) <= 0");
  return tau;
}

inline Complex q_of(Complex tau) { return std::exp(Complex(0, 2 * M_PI) * tau); }

struct ConstantNode final : LatFunction::Node {
  explicit ConstantNode(Complex v) : Node(0), c(v) {}
  Complex eval(Complex, Complex) const override { return c; }
  nlohmann::json describe() const override { return {{"weight", 0}, {"constant", {c.real(), c.imag()}}}; }
  Complex c;
};

struct QSeriesNode final : LatFunction::Node {
  QSeriesNode(int w, std::vector<Complex> a) : Node(w), coeffs(std::move(a)) {}
  Complex eval(Complex l, Complex lp) const override {
    const Complex q = q_of(oriented_tau(l, lp));
    Complex sum = 0, qn = 1;
    for (const Complex& a : coeffs) {
      sum += a * qn;
      qn *= q;
    }
    return ipow(l, -weight) * sum;
  }
  nlohmann::json describe() const override {
    nlohmann::json q = nlohmann::json::array();
    for (const Complex& a : coeffs) q.push_back(a.imag() == 0 ? nlohmann::json(a.real()) : nlohmann::json{a.real(), a.imag()});
    return {{"weight", weight}, {"q", q}};
  }
  std::vector<Complex> coeffs;
};

/// c_w sigma_{w-1}(n) for n < 40, the q-expansion coefficients of E_w past the constant term.
inline const std::vector<double>& eisenstein_coefficients(int w) {
  static const auto table = [] {
    std::map<int, std::vector<double>> t;
    for (auto [wt, c] : {std::pair{4, 240.0}, {6, -504.0}, {8, 480.0}, {10, -264.0}, {14, -24.0}}) {
      std::vector<double> a(40, 0.0);
      for (int n = 1; n < 40; ++n) a[n] = c * divisor_sigma(wt - 1, n);
      t.emplace(wt, std::move(a));
    }
    return t;
  }();
  auto it = table.find(w);
  if (it == table.end()) throw std::invalid_argument("eisenstein: supported weights are 4, 6, 8, 10, 14");
  return it->second;
}

/// E_w(tau) via the q-expansion on the standard fundamental domain, using
/// E(tau + 1) = E(tau) and E(-1/tau) = tau^w E(tau).
inline Complex eisenstein_tilde_uncached(int w, Complex tau) {
  const std::vector<double>& a = eisenstein_coefficients(w);
  Complex factor = 1;
  for (int guard = 0; guard < 1000; ++guard) {
    tau -= std::round(tau.real());
    if (std::norm(tau) >= 1.0 - 1e-12) break;
    // E(tau) = tau^-w E(-1/tau)
    factor *= ipow(tau, -w);
    tau = -1.0 / tau;
  }
  // |q| <= exp(-pi sqrt 3) here, so 40 terms are far past double precision
  const Complex q = q_of(tau);
  Complex sum = 1, qn = 1;
  for (std::size_t n = 1; n < a.size(); ++n) {
    qn *= q;
    if (std::abs(qn) < 1e-30) break;
    sum += a[n] * qn;
  }
  return factor * sum;
}

/// Products of graded values evaluate the same Eisenstein leaf at the same point many
/// times, so recent results are kept in a small per-thread table.
inline Complex eisenstein_tilde(int w, Complex tau) {
  struct Entry {
    int w = 0;
    double re = 0, im = 0;
    Complex value;
  };
  thread_local std::array<Entry, 256> cache{};
  const double parts[2] = {tau.real(), tau.imag()};
  std::uint64_t bits[2];
  std::memcpy(bits, parts, sizeof(bits));
  const std::uint64_t hash = (bits[0] * 0x9E3779B97F4A7C15ULL) ^ (bits[1] * 0xC2B2AE3D27D4EB4FULL) ^ std::uint64_t(w);
  Entry& e = cache[(hash >> 32) % cache.size()];
  if (e.w == w && e.re == tau.real() && e.im == tau.imag()) return e.value;
  e = {w, tau.real(), tau.imag(), eisenstein_tilde_uncached(w, tau)};
  return e.value;
}

struct EisensteinNode final : LatFunction::Node {
  explicit EisensteinNode(int w) : Node(w) {}
  Complex eval(Complex l, Complex lp) const override {
    return ipow(l, -weight) * eisenstein_tilde(weight, oriented_tau(l, lp));
  }
  nlohmann::json describe() const override { return {{"weight", weight}, {"eisenstein", weight}}; }
};

struct TauNode final : LatFunction::Node {
  TauNode(int w, std::function<Complex(Complex)> fn, std::string nm) : Node(w), f(std::move(fn)), name(std::move(nm)) {}
  Complex eval(Complex l, Complex lp) const override { return ipow(l, -weight) * f(oriented_tau(l, lp)); }
  nlohmann::json describe() const override { return {{"weight", weight}, {"closed", name}}; }
  std::function<Complex(Complex)> f;
  std::string name;
};

struct SlashNode final : LatFunction::Node {
  SlashNode(IntMatrix mat, LatFunction f)
      : Node(f.weight()), m(std::move(mat)), child(std::move(f)) {
    a = m(0, 0).convert_to<double>();
    b = m(0, 1).convert_to<double>();
    c = m(1, 0).convert_to<double>();
    d = m(1, 1).convert_to<double>();
  }
  Complex eval(Complex l, Complex lp) const override { return child(a * l + b * lp, c * l + d * lp); }
  nlohmann::json describe() const override {
    return {{"weight", weight}, {"slash", m.to_int64_rows()}, {"of", child.describe()}};
  }
  IntMatrix m;
  LatFunction child;
  double a, b, c, d;
};

struct ProductNode final : LatFunction::Node {
  ProductNode(LatFunction x, LatFunction y) : Node(x.weight() + y.weight()), f(std::move(x)), g(std::move(y)) {}
  Complex eval(Complex l, Complex lp) const override { return f(l, lp) * g(l, lp); }
  nlohmann::json describe() const override { return {{"weight", weight}, {"product", {f.describe(), g.describe()}}}; }
  LatFunction f, g;
};

struct SumNode final : LatFunction::Node {
  SumNode(LatFunction x, LatFunction y) : Node(x.weight()), f(std::move(x)), g(std::move(y)) {}
  Complex eval(Complex l, Complex lp) const override { return f(l, lp) + g(l, lp); }
  nlohmann::json describe() const override { return {{"weight", weight}, {"sum", {f.describe(), g.describe()}}}; }
  LatFunction f, g;
};

struct ScaleNode final : LatFunction::Node {
  ScaleNode(Complex s, LatFunction x) : Node(x.weight()), c(s), f(std::move(x)) {}
  Complex eval(Complex l, Complex lp) const override { return c * f(l, lp); }
  nlohmann::json describe() const override {
    return {{"weight", weight}, {"scale", {c.real(), c.imag()}}, {"of", f.describe()}};
  }
  Complex c;
  LatFunction f;
};

}  // namespace detail

inline LatFunction LatFunction::constant(Complex c) {
  return LatFunction(std::make_shared<detail::ConstantNode>(c));
}

inline LatFunction LatFunction::q_series(int w, std::vector<Complex> coeffs) {
  return LatFunction(std::make_shared<detail::QSeriesNode>(w, std::move(coeffs)));
}

inline LatFunction LatFunction::eisenstein(int w) { return LatFunction(std::make_shared<detail::EisensteinNode>(w)); }

inline LatFunction LatFunction::from_tau(int w, std::function<Complex(Complex)> f, std::string name) {
  return LatFunction(std::make_shared<detail::TauNode>(w, std::move(f), std::move(name)));
}

inline LatFunction LatFunction::slash(const IntMatrix& m) const {
  if (m.rows() != 2 || m.cols() != 2) throw std::invalid_argument("weight_slash: lattice functions need a 2x2 matrix");
  if (m.det() <= 0) throw std::invalid_argument("weight_slash: matrix must have positive determinant");
  if (m == IntMatrix::identity(2)) return *this;
  return LatFunction(std::make_shared<detail::SlashNode>(m, *this));
}

inline LatFunction LatFunction::scaled(Complex c) const {
  if (c == Complex(1.0)) return *this;
  return LatFunction(std::make_shared<detail::ScaleNode>(c, *this));
}

inline LatFunction operator*(const LatFunction& a, const LatFunction& b) {
  return LatFunction(std::make_shared<detail::ProductNode>(a, b));
}

inline LatFunction operator+(const LatFunction& a, const LatFunction& b) {
  if (a.weight() != b.weight()) throw std::invalid_argument("lattice functions of different weights cannot be added");
  return LatFunction(std::make_shared<detail::SumNode>(a, b));
}

inline LatFunction weight_slash(const IntMatrix& m, const LatFunction& f) { return f.slash(m); }

/// E_w as a truncated q-expansion with N terms (coefficients of q^0..q^{N-1}).
inline LatFunction eisenstein_series(int w, int n_terms) {
  if (n_terms < 2) throw std::invalid_argument("eisenstein_series: need at least two terms");
  const double c = w == 4 ? 240.0 : w == 6 ? -504.0 : 0.0;
  if (c == 0.0) throw std::invalid_argument("eisenstein_series: weight must be 4 or 6");
  std::vector<Complex> a(n_terms);
  a[0] = 1;
  for (int n = 1; n < n_terms; ++n) a[n] = c * divisor_sigma(w - 1, n);
  return LatFunction::q_series(w, std::move(a));
}

// ---------------------------------------------------------------------------
// Coefficient traits

template <class C>
struct Coeff;

template <>
struct Coeff<Complex> {
  static constexpr int height = 1;
  static Complex one() { return 1.0; }
  static Complex mul(const Complex& a, const Complex& b) { return a * b; }
  static Complex add(const Complex& a, const Complex& b) { return a + b; }
  static Complex scale(const Complex& a, Complex s) { return a * s; }
  /// Scalars are constant functions, so pullback does nothing.
  static Complex slash(const IntMatrix&, const Complex& a) { return a; }
  static void check_weight(int, const Complex&) {}
  static double dev(const Complex& a, const Complex& b, const CompareContext&) {
    return a == b ? 0.0 : deviation(a, b);
  }
  static double dev_zero(const Complex& a, const CompareContext&) { return deviation(a, 0.0); }
  static nlohmann::json to_json(const Complex& a, const CompareContext&) { return {a.real(), a.imag()}; }
};

template <>
struct Coeff<LatFunction> {
  static constexpr int height = 2;
  static LatFunction one() { return LatFunction::constant(1.0); }
  static LatFunction mul(const LatFunction& a, const LatFunction& b) { return a * b; }
  static LatFunction add(const LatFunction& a, const LatFunction& b) { return a + b; }
  static LatFunction scale(const LatFunction& a, Complex s) { return a.scaled(s); }
  static LatFunction slash(const IntMatrix& m, const LatFunction& a) { return a.slash(m); }
  static void check_weight(int j, const LatFunction& a) {
    if (a.weight() != j)
      throw std::invalid_argument("graded value: component " + std::to_string(j) + " has weight " +
                                  std::to_string(a.weight()));
  }
  static double dev(const LatFunction& a, const LatFunction& b, const CompareContext& ctx) {
    double m = 0;
    for (Complex tau : ctx.taus) m = std::max(m, deviation(a.at_tau(tau), b.at_tau(tau)));
    return m;
  }
  static double dev_zero(const LatFunction& a, const CompareContext& ctx) {
    double m = 0;
    for (Complex tau : ctx.taus) m = std::max(m, deviation(a.at_tau(tau), 0.0));
    return m;
  }
  /// Computed lattice functions are serialized by their values at the tau samples.
  static nlohmann::json to_json(const LatFunction& a, const CompareContext& ctx) {
    nlohmann::json samples = nlohmann::json::array();
    for (Complex tau : ctx.taus) {
      const Complex v = a.at_tau(tau);
      samples.push_back({{"tau", {tau.real(), tau.imag()}}, {"value", {v.real(), v.imag()}}});
    }
    return {{"weight", a.weight()}, {"samples", samples}};
  }
};

// ---------------------------------------------------------------------------
// Graded values

template <class C>
class GradedValue {
 public:
  using Coefficient = C;
  using Map = std::map<int, C>;

  GradedValue() = default;
  explicit GradedValue(Map comps) : comps_(std::move(comps)) {
    for (const auto& [j, c] : comps_) {
      if (j < 0) throw std::invalid_argument("graded value: negative degree");
      Coeff<C>::check_weight(j, c);
    }
  }

  static GradedValue unit() { return GradedValue(Map{{0, Coeff<C>::one()}}); }
  static GradedValue zero() { return GradedValue(); }
  static GradedValue single(int j, C c) { return GradedValue(Map{{j, std::move(c)}}); }

  const Map& components() const { return comps_; }
  bool empty() const { return comps_.empty(); }

  GradedValue operator*(const GradedValue& o) const {
    Map out;
    for (const auto& [a, x] : comps_)
      for (const auto& [b, y] : o.comps_) {
        C p = Coeff<C>::mul(x, y);
        auto it = out.find(a + b);
        if (it == out.end())
          out.emplace(a + b, std::move(p));
        else
          it->second = Coeff<C>::add(it->second, p);
      }
    return GradedValue(std::move(out));
  }

  GradedValue operator+(const GradedValue& o) const {
    Map out = comps_;
    for (const auto& [j, y] : o.comps_) {
      auto it = out.find(j);
      if (it == out.end())
        out.emplace(j, y);
      else
        it->second = Coeff<C>::add(it->second, y);
    }
    return GradedValue(std::move(out));
  }

  GradedValue scaled(Complex s) const {
    Map out;
    for (const auto& [j, x] : comps_) out.emplace(j, Coeff<C>::scale(x, s));
    return GradedValue(std::move(out));
  }

  /// r^{deg/2}: the j-component is multiplied by r^j.
  GradedValue scale_by_degree(double r) const {
    if (!(r > 0)) throw std::invalid_argument("scale_by_degree: r must be positive");
    Map out;
    for (const auto& [j, x] : comps_) out.emplace(j, Coeff<C>::scale(x, std::pow(r, j)));
    return GradedValue(std::move(out));
  }

  /// Componentwise pullback along M.
  GradedValue slash(const IntMatrix& m) const {
    Map out;
    for (const auto& [j, x] : comps_) out.emplace(j, Coeff<C>::slash(m, x));
    return GradedValue(std::move(out));
  }

  /// Largest deviation over all degrees (a missing component counts as zero).
  friend double max_deviation(const GradedValue& a, const GradedValue& b, const CompareContext& ctx) {
    double m = 0;
    for (const auto& [j, x] : a.comps_) {
      auto it = b.comps_.find(j);
      m = std::max(m, it == b.comps_.end() ? Coeff<C>::dev_zero(x, ctx) : Coeff<C>::dev(x, it->second, ctx));
    }
    for (const auto& [j, y] : b.comps_)
      if (!a.comps_.count(j)) m = std::max(m, Coeff<C>::dev_zero(y, ctx));
    return m;
  }

  nlohmann::json to_json(const CompareContext& ctx = {}) const {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [j, x] : comps_) out[std::to_string(j)] = Coeff<C>::to_json(x, ctx);
    return out;
  }

 private:
  Map comps_;
};

template <class C>
GradedValue<C> scale_by_degree(double r, const GradedValue<C>& v) {
  return v.scale_by_degree(r);
}

template <class C>
GradedValue<C> graded_product(const GradedValue<C>& u, const GradedValue<C>& v) {
  return u * v;
}

using Height1Value = GradedValue<Complex>;
using Height2Value = GradedValue<LatFunction>;

}  // namespace ellpow
