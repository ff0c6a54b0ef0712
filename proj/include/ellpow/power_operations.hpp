#pragma once

// Power operations P_n, Adams operations, the pseudo-power operation on p-groups,
// and the Hecke-like operator on lattice functions.
//
// P_n(f) at (H, x) in (G wr S_n, X^n) is the product over the orbits k of H of
//   det(M_k)^{deg/2} M_k^* f(h_k, x_{i_k}),
// where M_k^* is the weight slash (trivial on scalars) and det(M_k) = |I_k|.

#include "ellpow/class_function.hpp"
#include "ellpow/orbit_reduction.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ellpow {

template <class C>
struct PowerOptions {
  /// Overrides for the basepoint and basis choices in the orbit reduction.
  ReduceChoices choices;
};

template <class C>
ClassFunction<C> power_operation(const ClassFunction<C>& f, std::size_t n, const PowerOptions<C>& opts = {}) {
  const FiniteGroup w = wreath(f.group(), n);
  const GSet xn = power_space(f.space(), n, w);
  const ReduceChoices choices = opts.choices;
  return ClassFunction<C>::from_rule(w, xn, f.d(), f.elliptic(), [f, w, xn, choices](const Tuple& h, Point p) {
    using V = GradedValue<C>;
    const OrbitReduction red = reduce(w, h, choices);
    const std::vector<Point> coords = as_power_space(xn)->decode(p);
    V out = V::unit();
    for (const OrbitData& o : red.orbits) {
      const V v = f.evaluate(o.reduced, coords[o.basepoint]);
      const double det = o.matrix.det().template convert_to<double>();
      out = out * (f.d() == 2 ? v.slash(o.matrix) : v).scale_by_degree(det);
    }
    return out;
  });
}

/// How the degree scaling of the Adams operation is applied.
enum class AdamsScaling {
  HalfDegree,  ///< n^{deg/2}: the j-component is multiplied by n^j
  FullDegree,  ///< n^{deg}: only for fault-injection checks
};

/// Psi_n(f)(h, x) = n^{deg/2} f(h^n, x).
template <class C>
ClassFunction<C> adams(const ClassFunction<C>& f, std::int64_t n, AdamsScaling scaling = AdamsScaling::HalfDegree) {
  if (n < 1) throw std::invalid_argument("adams: n must be positive");
  const double r = scaling == AdamsScaling::HalfDegree ? static_cast<double>(n) : static_cast<double>(n * n);
  return ClassFunction<C>::from_rule(f.group(), f.space(), f.d(), f.elliptic(), [f, n, r](const Tuple& h, Point x) {
    return f.evaluate(power_tuple(f.group(), h, n), x).scale_by_degree(r);
  });
}

/// tau(h) in G wr S_{n^d}: the diagonal tuple paired with the translation action of
/// Z^d on Z^d / n Z^d = {0..n^d - 1} (mixed radix, coordinate i has weight n^i).
inline Tuple adams_cover_tuple(const FiniteGroup& w, const Tuple& h, std::size_t n) {
  const WreathGroup& wg = require_wreath(w);
  const std::size_t d = h.size();
  const std::size_t m = wg.arity();
  Tuple out;
  std::size_t stride = 1;
  for (std::size_t j = 0; j < d; ++j) {
    PermImage t(m);
    for (std::size_t p = 0; p < m; ++p) {
      const std::size_t digit = (p / stride) % n;
      t[p] = p - digit * stride + ((digit + 1) % n) * stride;
    }
    out.push_back(wg.encode({Tuple(m, h[j]), t}));
    stride *= n;
  }
  return out;
}

inline constexpr std::size_t kAdamsCoverBudget = 9;

/// Psi_n via P_{n^d} evaluated on the canonical n^d-fold cover.
template <class C>
ClassFunction<C> adams_via_power(const ClassFunction<C>& f, std::size_t n, std::size_t budget = kAdamsCoverBudget) {
  if (n < 1) throw std::invalid_argument("adams_via_power: n must be positive");
  std::size_t m = 1;
  for (std::size_t j = 0; j < f.d(); ++j) m *= n;
  if (m > budget) throw std::length_error("adams_via_power: n^d exceeds the wreath budget");
  const ClassFunction<C> p = power_operation(f, m);
  return ClassFunction<C>::from_rule(f.group(), f.space(), f.d(), f.elliptic(), [p, n, m](const Tuple& h, Point x) {
    const Tuple cover = adams_cover_tuple(p.group(), h, n);
    const PowerGSet& xs = *as_power_space(p.space());
    return p.evaluate(cover, xs.encode(std::vector<Point>(m, x)));
  });
}

/// A section of End(L) -> Lat(L): a basis matrix for every finite-index sublattice,
/// plus the action of that endomorphism on coefficients.
template <class C>
struct SectionPhi {
  std::string name = "hnf";
  std::function<IntMatrix(const Sublattice&)> rule = [](const Sublattice& l) { return l.basis(); };
  /// Trivial by default.
  std::function<GradedValue<C>(const IntMatrix&, const GradedValue<C>&)> coefficient_action =
      [](const IntMatrix&, const GradedValue<C>& v) { return v; };
};

/// The section L -> U * HNF(L) for a fixed U in GL_d(Z).
template <class C>
SectionPhi<C> unit_twisted_section(const IntMatrix& u) {
  if (u.det() != 1 && u.det() != -1) throw std::invalid_argument("section: twisting matrix must lie in GL_d(Z)");
  SectionPhi<C> s;
  s.name = "unit-twisted " + u.str();
  s.rule = [u](const Sublattice& l) { return u * l.basis(); };
  return s;
}

inline bool is_power_of(std::uint64_t x, std::uint64_t p) {
  if (x == 0) return false;
  while (x % p == 0) x /= p;
  return x == 1;
}

/// P_n^phi(f)(H, x) = prod_k phi_{L_k} f(psi_{L_k}^* h_k, x_{i_k}), where psi_{L_k} is the
/// isomorphism Z^d = L_k given by the rows of the section's matrix (any orientation).
/// Every tuple entry must have p-power order.
template <class C>
ClassFunction<C> pseudo_power_etheory(const ClassFunction<C>& f, std::uint64_t p, std::size_t n,
                                      const SectionPhi<C>& phi = {}) {
  const FiniteGroup w = wreath(f.group(), n);
  const GSet xn = power_space(f.space(), n, w);
  return ClassFunction<C>::from_rule(w, xn, f.d(), false, [f, w, xn, phi, p](const Tuple& h, Point pt) {
    for (Elem e : h)
      if (!is_power_of(w.order(e), p))
        throw std::invalid_argument("pseudo_power_etheory: element of order " + std::to_string(w.order(e)) +
                                    " is not of " + std::to_string(p) + "-power order");
    using V = GradedValue<C>;
    const WreathGroup& wg = require_wreath(w);
    const OrbitReduction red = reduce(w, h);
    const std::vector<Point> coords = as_power_space(xn)->decode(pt);
    V out = V::unit();
    for (const OrbitData& o : red.orbits) {
      const IntMatrix m = phi.rule(o.lattice);
      if (m.rows() != h.size() || m.cols() != h.size() || !(Sublattice(m) == o.lattice))
        throw std::logic_error("pseudo_power_etheory: section " + phi.name + " does not return a basis of " +
                               o.lattice.basis().str());
      Tuple pulled(h.size());
      for (std::size_t j = 0; j < h.size(); ++j) pulled[j] = wg.decode(wreath_evaluate(w, h, m.row(j))).base[o.basepoint];
      out = out * phi.coefficient_action(m, f.evaluate(pulled, coords[o.basepoint]));
    }
    return out;
  });
}

/// S_n(F) = sum over index-n sublattices L of M_L^* F. With `weighted`, each term also
/// carries det(M_L)^w = n^w, as in the orbit factor of the power operation.
inline LatFunction hecke_like(const LatFunction& f, std::int64_t n, bool weighted = false) {
  const auto lats = sublattices_of_index(2, n);
  LatFunction sum = f.slash(lats.front().basis());
  for (std::size_t i = 1; i < lats.size(); ++i) sum = sum + f.slash(lats[i].basis());
  return weighted ? sum.scaled(std::pow(static_cast<double>(n), f.weight())) : sum;
}

/// Classical Hecke operator on q-expansion coefficients, weight w:
/// (T_n a)_m = sum_{d | (m, n)} d^{w-1} a_{mn/d^2}. Returns as many terms as the input allows.
inline std::vector<Complex> classical_hecke_q(const std::vector<Complex>& a, int w, int n) {
  std::vector<Complex> out;
  for (int m = 0; static_cast<std::size_t>(m) * n < a.size(); ++m) {
    Complex s = 0;
    for (int d = 1; d <= n; ++d) {
      if (n % d != 0 || (m != 0 && m % d != 0)) continue;
      s += std::pow(static_cast<double>(d), w - 1) * a[static_cast<std::size_t>(m) * n / (d * d)];
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace ellpow
