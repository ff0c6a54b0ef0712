#pragma once

// Reduction of a commuting tuple in G wr S_n to orbit data: the Z^d-orbits I_k on
// {0..n-1}, stabilizer lattices L_k, their basis matrices M_k, and the reduced
// tuples h_k in G. Also the fixed-point bijection (X^n)^{im h} = prod_k X^{im h_k}.

#include "ellpow/lattice.hpp"
#include "ellpow/tuples.hpp"

#include <functional>
#include <stdexcept>
#include <vector>

namespace ellpow {

struct OrbitData {
  std::vector<std::size_t> points;  ///< I_k, sorted
  std::size_t basepoint = 0;        ///< i_k
  Sublattice lattice;               ///< L_k
  IntMatrix matrix;                 ///< basis matrix of L_k used for h_k (the HNF by default)
  Tuple reduced;                    ///< h_k, in G
  /// labels[a] for a in I_k: v with sigma^v(i_k) = a
  std::vector<std::vector<std::int64_t>> labels;
};

struct OrbitReduction {
  FiniteGroup base;  ///< G
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<OrbitData> orbits;  ///< ordered by smallest point
};

/// Optional overrides for the two free choices (defaults: min(I_k) and the HNF basis).
struct ReduceChoices {
  std::function<std::size_t(const std::vector<std::size_t>& orbit)> basepoint;
  /// Must return a matrix with positive determinant whose rows span the lattice.
  std::function<IntMatrix(const Sublattice&)> basis;
};

/// h evaluated at an integer vector, computed in the wreath group.
inline Elem wreath_evaluate(const FiniteGroup& w, const Tuple& h, const std::vector<BigInt>& v) {
  return evaluate_tuple(w, h, v);
}

inline OrbitReduction reduce(const FiniteGroup& w, const Tuple& h, const ReduceChoices& choices = {}) {
  const WreathGroup& wg = require_wreath(w);
  require_commuting(w, h);
  const std::size_t n = wg.arity();
  const std::size_t d = h.size();
  OrbitReduction red{wg.base_group(), n, d, {}};
  if (n == 0) return red;
  if (d == 0) {
    // Z^0 acts trivially: singleton orbits with the zero-rank lattice.
    for (std::size_t a = 0; a < n; ++a)
      red.orbits.push_back({{a}, a, Sublattice(IntMatrix(0, 0)), IntMatrix(0, 0), {}, std::vector<std::vector<std::int64_t>>(n)});
    return red;
  }
  std::vector<WreathElement> parts;
  std::vector<PermImage> perms;
  for (Elem x : h) {
    parts.push_back(wg.decode(x));
    perms.push_back(parts.back().perm);
  }
  std::vector<bool> seen(n, false);
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    OrbitLattice first = explore_orbit_lattice(perms, start);
    std::vector<std::size_t> pts = first.orbit;
    std::sort(pts.begin(), pts.end());
    for (std::size_t a : pts) seen[a] = true;
    const std::size_t base = choices.basepoint ? choices.basepoint(pts) : pts.front();
    if (!std::binary_search(pts.begin(), pts.end(), base))
      throw std::logic_error("reduce: chosen basepoint is outside its orbit");
    OrbitLattice ol = base == start ? std::move(first) : explore_orbit_lattice(perms, base);
    IntMatrix m = choices.basis ? choices.basis(ol.stabilizer) : ol.stabilizer.basis();
    if (m.det() <= 0 || hnf(m) != ol.stabilizer.basis())
      throw std::logic_error("reduce: chosen basis does not span the stabilizer lattice with positive orientation");
    Tuple hk(d);
    for (std::size_t j = 0; j < d; ++j) {
      const WreathElement v = wg.decode(wreath_evaluate(w, h, m.row(j)));
      if (v.perm[base] != base) throw std::logic_error("reduce: lattice vector does not fix the basepoint");
      hk[j] = v.base[base];
    }
    if (!is_commuting(wg.base_group(), hk)) throw std::logic_error("reduce: reduced tuple does not commute");
    std::vector<std::vector<std::int64_t>> labels(n);
    for (std::size_t a : pts) labels[a] = ol.labels[a];
    red.orbits.push_back({std::move(pts), base, std::move(ol.stabilizer), std::move(m), std::move(hk), std::move(labels)});
  }
  return red;
}

/// Ordered product along the cycle of sigma through i:
/// g_i g_{sigma^-1(i)} g_{sigma^-2(i)} ... (one factor per point of the cycle).
/// This is the basepoint entry of (g, sigma)^{|cycle|}, so it agrees with reduce at d = 1.
inline Elem cycle_product(const FiniteGroup& g, const Tuple& base, const PermImage& sigma,
                          const std::vector<std::size_t>& cycle, std::size_t i) {
  if (std::find(cycle.begin(), cycle.end(), i) == cycle.end())
    throw std::invalid_argument("cycle_product: basepoint outside the cycle");
  const PermImage si = perm_inverse(sigma);
  Elem out = g.identity();
  std::size_t a = i;
  for (std::size_t step = 0; step < cycle.size(); ++step) {
    out = g.mul(out, base.at(a));
    a = si[a];
  }
  if (a != i) throw std::invalid_argument("cycle_product: points do not form a cycle of sigma");
  return out;
}

/// The bijection (X^n)^{im h} -> prod_k X^{im h_k}, x -> (x_{i_k})_k, with its inverse
/// x_a = [h(l_a)]_a . y_k for a in I_k.
class FixedPointTransport {
 public:
  FixedPointTransport(const GSet& x, const FiniteGroup& w, const Tuple& h, const ReduceChoices& choices = {})
      : x_(x), w_(w), h_(h), red_(reduce(w, h, choices)) {
    if (require_wreath(w).base_group() != x.group())
      throw std::invalid_argument("fixed_point_transport: space is over a different group");
    power_ = power_space(x, red_.n, w);
  }

  const OrbitReduction& reduction() const { return red_; }
  const GSet& power() const { return power_; }

  /// (X^n)^{im h}, as encoded points of X^n.
  std::vector<Point> source() const {
    std::vector<Point> out;
    for (Point p = 0; p < power_.size(); ++p)
      if (power_.is_fixed(h_, p)) out.push_back(p);
    return out;
  }

  /// prod_k X^{im h_k}, in lexicographic order.
  std::vector<std::vector<Point>> target() const {
    std::vector<std::vector<Point>> factors;
    for (const auto& o : red_.orbits) factors.push_back(fixed_points(x_, red_.base, o.reduced));
    std::vector<std::vector<Point>> out{{}};
    for (const auto& f : factors) {
      std::vector<std::vector<Point>> next;
      for (const auto& prefix : out)
        for (Point p : f) {
          next.push_back(prefix);
          next.back().push_back(p);
        }
      out = std::move(next);
    }
    return out;
  }

  std::vector<Point> forward(Point p) const {
    const auto& pw = static_cast<const PowerGSet&>(power_.impl());
    const std::vector<Point> coords = pw.decode(p);
    std::vector<Point> y;
    for (const auto& o : red_.orbits) y.push_back(coords[o.basepoint]);
    return y;
  }

  Point inverse(const std::vector<Point>& y) const {
    if (y.size() != red_.orbits.size()) throw std::invalid_argument("fixed_point_transport: wrong number of factors");
    const auto& pw = static_cast<const PowerGSet&>(power_.impl());
    const WreathGroup& wg = require_wreath(w_);
    std::vector<Point> coords(red_.n);
    for (std::size_t k = 0; k < red_.orbits.size(); ++k) {
      const OrbitData& o = red_.orbits[k];
      for (std::size_t a : o.points) {
        const auto& l = o.labels[a];
        const WreathElement e = wg.decode(wreath_evaluate(w_, h_, std::vector<BigInt>(l.begin(), l.end())));
        if (e.perm[o.basepoint] != a) throw std::logic_error("fixed_point_transport: label does not reach its point");
        coords[a] = x_.act(e.base[a], y[k]);
      }
    }
    return pw.encode(coords);
  }

  /// Checks cardinalities, that both maps land in the right sets, and both composites.
  bool verify(std::string* why = nullptr) const {
    auto fail = [&](const std::string& msg) {
      if (why) *why = msg;
      return false;
    };
    const auto src = source();
    const auto tgt = target();
    if (src.size() != tgt.size()) return fail("cardinalities differ");
    std::vector<std::vector<Point>> tgt_sorted = tgt;
    std::sort(tgt_sorted.begin(), tgt_sorted.end());
    for (Point p : src) {
      const auto y = forward(p);
      if (!std::binary_search(tgt_sorted.begin(), tgt_sorted.end(), y)) return fail("forward leaves the target");
      if (inverse(y) != p) return fail("inverse(forward(x)) != x");
    }
    for (const auto& y : tgt) {
      const Point p = inverse(y);
      if (!std::binary_search(src.begin(), src.end(), p)) return fail("inverse leaves the source");
      if (forward(p) != y) return fail("forward(inverse(y)) != y");
    }
    return true;
  }

 private:
  GSet x_;
  FiniteGroup w_;
  Tuple h_;
  OrbitReduction red_;
  GSet power_;
};

}  // namespace ellpow
