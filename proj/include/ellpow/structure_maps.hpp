#pragma once

// Group homomorphisms and the three structure maps between wreath products:
//   alpha: G wr S_j x G wr S_k -> G wr S_{j+k}      (blocks side by side)
//   beta:  (G wr S_k) wr S_j   -> G wr S_{jk}       (j blocks of size k)
//   delta: (G x G') wr S_k     -> G wr S_k x G' wr S_k
// Each comes with the matching map of spaces.

#include "ellpow/gset.hpp"

#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ellpow {

struct GroupHomomorphism {
  FiniteGroup source;
  FiniteGroup target;
  std::function<Elem(Elem)> map;

  Elem operator()(Elem x) const { return map(x); }

  /// The image array (source index -> target index).
  std::vector<Elem> image() const {
    std::vector<Elem> out(source.size());
    for (Elem x = 0; x < source.size(); ++x) out[x] = map(x);
    return out;
  }

  /// Checks phi(xy) = phi(x)phi(y): exhaustively for small sources, else on random pairs.
  bool verify(std::size_t samples = 2000, std::uint64_t seed = 1) const {
    if (map(source.identity()) != target.identity()) return false;
    if (source.size() <= 64) {
      for (Elem x = 0; x < source.size(); ++x)
        for (Elem y = 0; y < source.size(); ++y)
          if (map(source.mul(x, y)) != target.mul(map(x), map(y))) return false;
      return true;
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Elem> pick(0, source.size() - 1);
    for (std::size_t t = 0; t < samples; ++t) {
      const Elem x = pick(rng), y = pick(rng);
      if (map(source.mul(x, y)) != target.mul(map(x), map(y))) return false;
    }
    return true;
  }
};

inline GroupHomomorphism identity_hom(const FiniteGroup& g) { return {g, g, [](Elem x) { return x; }}; }

/// phi o psi
inline GroupHomomorphism compose(const GroupHomomorphism& phi, const GroupHomomorphism& psi) {
  if (psi.target != phi.source) throw std::invalid_argument("compose: homomorphisms are not composable");
  return {psi.source, phi.target, [phi, psi](Elem x) { return phi.map(psi.map(x)); }};
}

/// Homomorphism from an explicit image array, validated.
inline GroupHomomorphism hom_from_image(const FiniteGroup& source, const FiniteGroup& target, std::vector<Elem> image) {
  if (image.size() != source.size()) throw std::invalid_argument("homomorphism: image array has wrong length");
  for (Elem v : image)
    if (v >= target.size()) throw std::invalid_argument("homomorphism: image out of range");
  GroupHomomorphism h{source, target, [image](Elem x) { return image[x]; }};
  if (!h.verify()) throw std::invalid_argument("homomorphism: map does not respect multiplication");
  return h;
}

/// A map of spaces together with the homomorphism it is equivariant for.
struct SpaceMap {
  GSet source;
  GSet target;
  std::function<Point(Point)> map;
};

/// Checks map(s . x) = phi(s) . map(x) for generators s and all (or sampled) points x.
inline bool is_equivariant(const GroupHomomorphism& phi, const SpaceMap& m, std::size_t max_points = 4096) {
  if (m.source.group() != phi.source || m.target.group() != phi.target) return false;
  const std::uint64_t step = std::max<std::uint64_t>(1, m.source.size() / max_points);
  for (Elem s : phi.source.generators())
    for (Point x = 0; x < m.source.size(); x += step)
      if (m.map(m.source.act(s, x)) != m.target.act(phi(s), m.map(x))) return false;
  return true;
}

struct StructureMap {
  GroupHomomorphism hom;
  SpaceMap space;
};

inline PermImage block_sum(const PermImage& a, const PermImage& b) {
  PermImage out(a.size() + b.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[a.size() + i] = a.size() + b[i];
  return out;
}

/// alpha for the space X: base tuples concatenate, permutations act on disjoint blocks.
inline StructureMap wreath_block_inclusion(const GSet& x, std::size_t j, std::size_t k) {
  const FiniteGroup& g = x.group();
  const FiniteGroup wj = wreath(g, j), wk = wreath(g, k), wjk = wreath(g, j + k);
  const FiniteGroup src = direct_product(wj, wk);
  const GSet xj = power_space(x, j, wj), xk = power_space(x, k, wk), xjk = power_space(x, j + k, wjk);
  const GSet src_space = product_space(xj, xk, src);
  auto hom = [src, wj, wk, wjk](Elem e) {
    const ProductGroup& p = require_product(src);
    const WreathElement a = require_wreath(wj).decode(p.first(e));
    const WreathElement b = require_wreath(wk).decode(p.second(e));
    Tuple base = a.base;
    base.insert(base.end(), b.base.begin(), b.base.end());
    return require_wreath(wjk).encode({std::move(base), block_sum(a.perm, b.perm)});
  };
  auto space = [src_space, xj, xk, xjk](Point p) {
    const ProductGSet& ps = *as_product_space(src_space);
    std::vector<Point> c = as_power_space(xj)->decode(ps.first(p));
    const std::vector<Point> d = as_power_space(xk)->decode(ps.second(p));
    c.insert(c.end(), d.begin(), d.end());
    return as_power_space(xjk)->encode(c);
  };
  return {{src, wjk, hom}, {src_space, xjk, space}};
}

/// beta for the space X: position (b, c) of block b is b*k + c; the outer permutation
/// moves blocks and the inner ones act within them.
inline StructureMap wreath_composition_inclusion(const GSet& x, std::size_t j, std::size_t k) {
  const FiniteGroup& g = x.group();
  const FiniteGroup wk = wreath(g, k);
  const FiniteGroup src = wreath(wk, j);
  const FiniteGroup tgt = wreath(g, j * k);
  const GSet xk = power_space(x, k, wk);
  const GSet src_space = power_space(xk, j, src);
  const GSet tgt_space = power_space(x, j * k, tgt);
  auto hom = [src, wk, tgt, j, k](Elem e) {
    const WreathElement outer = require_wreath(src).decode(e);
    Tuple base(j * k);
    PermImage pi(j * k);
    std::vector<WreathElement> inner;
    for (std::size_t b = 0; b < j; ++b) inner.push_back(require_wreath(wk).decode(outer.base[b]));
    for (std::size_t b = 0; b < j; ++b)
      for (std::size_t c = 0; c < k; ++c) {
        base[b * k + c] = inner[b].base[c];
        const std::size_t tb = outer.perm[b];
        pi[b * k + c] = tb * k + inner[tb].perm[c];
      }
    return require_wreath(tgt).encode({std::move(base), std::move(pi)});
  };
  auto space = [src_space, xk, tgt_space, j, k](Point p) {
    const std::vector<Point> blocks = as_power_space(src_space)->decode(p);
    std::vector<Point> flat(j * k);
    for (std::size_t b = 0; b < j; ++b) {
      const std::vector<Point> c = as_power_space(xk)->decode(blocks[b]);
      for (std::size_t i = 0; i < k; ++i) flat[b * k + i] = c[i];
    }
    return as_power_space(tgt_space)->encode(flat);
  };
  return {{src, tgt, hom}, {src_space, tgt_space, space}};
}

/// delta for spaces X, X': split base tuples coordinatewise and duplicate the permutation.
inline StructureMap wreath_diagonal(const GSet& x, const GSet& xp, std::size_t k) {
  const FiniteGroup gg = direct_product(x.group(), xp.group());
  const FiniteGroup src = wreath(gg, k);
  const FiniteGroup wk = wreath(x.group(), k), wkp = wreath(xp.group(), k);
  const FiniteGroup tgt = direct_product(wk, wkp);
  const GSet xxp = product_space(x, xp, gg);
  const GSet src_space = power_space(xxp, k, src);
  const GSet tgt_space = product_space(power_space(x, k, wk), power_space(xp, k, wkp), tgt);
  auto hom = [gg, src, wk, wkp, tgt, k](Elem e) {
    const WreathElement w = require_wreath(src).decode(e);
    const ProductGroup& p = require_product(gg);
    Tuple a(k), b(k);
    for (std::size_t i = 0; i < k; ++i) {
      a[i] = p.first(w.base[i]);
      b[i] = p.second(w.base[i]);
    }
    return require_product(tgt).pair(require_wreath(wk).encode({a, w.perm}), require_wreath(wkp).encode({b, w.perm}));
  };
  auto space = [xxp, src_space, tgt_space, k](Point p) {
    const std::vector<Point> c = as_power_space(src_space)->decode(p);
    const ProductGSet& ps = *as_product_space(xxp);
    std::vector<Point> a(k), b(k);
    for (std::size_t i = 0; i < k; ++i) {
      a[i] = ps.first(c[i]);
      b[i] = ps.second(c[i]);
    }
    const ProductGSet& ts = *as_product_space(tgt_space);
    return ts.pair(as_power_space(ts.first_space())->encode(a), as_power_space(ts.second_space())->encode(b));
  };
  return {{src, tgt, hom}, {src_space, tgt_space, space}};
}

}  // namespace ellpow
