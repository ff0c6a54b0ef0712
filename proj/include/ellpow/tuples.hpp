#pragma once

// Commuting d-tuples (homomorphisms Z^d -> G), their conjugacy classes, and the
// GL_d(Z) action on them.
//
// Convention for gamma . h: entry j of the result is prod_i h_i^{(gamma^-1)_{ji}},
// i.e. (gamma . h)(v) = h(v gamma^-1) for row vectors v. For d = 2 and
// gamma = [[a,b],[c,d]] this gives (g, g') -> (g^d g'^-b, g^-c g'^a).
// This is a right action: (g1 g2) . h = g2 . (g1 . h).

#include "ellpow/gset.hpp"
#include "ellpow/int_matrix.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace ellpow {

inline bool is_commuting(const FiniteGroup& g, const Tuple& h) {
  for (std::size_t a = 0; a < h.size(); ++a) {
    if (!g.contains(h[a])) return false;
    for (std::size_t b = a + 1; b < h.size(); ++b)
      if (!g.commute(h[a], h[b])) return false;
  }
  return true;
}

inline void require_commuting(const FiniteGroup& g, const Tuple& h) {
  if (!is_commuting(g, h)) throw std::invalid_argument("tuple entries do not pairwise commute");
}

inline std::string tuple_str(const FiniteGroup& g, const Tuple& h) {
  std::string s = "(";
  for (std::size_t i = 0; i < h.size(); ++i) s += (i ? "," : "") + g.label(h[i]);
  return s + ")";
}

inline Tuple conjugate_tuple(const FiniteGroup& g, Elem z, const Tuple& h) {
  Tuple out(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) out[i] = g.conj(z, h[i]);
  return out;
}

/// Raise every entry to the n-th power.
inline Tuple power_tuple(const FiniteGroup& g, const Tuple& h, std::int64_t n) {
  Tuple out(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) out[i] = g.pow(h[i], n);
  return out;
}

/// h evaluated on v in Z^d: prod_j h_j^{v_j}.
inline Elem evaluate_tuple(const FiniteGroup& g, const Tuple& h, const std::vector<BigInt>& v) {
  if (v.size() != h.size()) throw std::invalid_argument("evaluate_tuple: dimension mismatch");
  Elem out = g.identity();
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (v[j] == 0) continue;
    const BigInt ord = g.order(h[j]);
    out = g.mul(out, g.pow(h[j], to_int64(mod_floor(v[j], ord))));
  }
  return out;
}

/// All commuting d-tuples in lexicographic order.
inline std::vector<Tuple> commuting_tuples(const FiniteGroup& g, std::size_t d) {
  std::vector<Tuple> out;
  Tuple cur;
  std::function<void(const std::vector<Elem>&)> rec = [&](const std::vector<Elem>& cands) {
    if (cur.size() == d) {
      out.push_back(cur);
      return;
    }
    for (Elem x : cands) {
      std::vector<Elem> next;
      for (Elem y : cands)
        if (g.commute(x, y)) next.push_back(y);
      cur.push_back(x);
      rec(next);
      cur.pop_back();
    }
  };
  std::vector<Elem> all(g.size());
  std::iota(all.begin(), all.end(), Elem{0});
  rec(all);
  return out;
}

/// The action gamma . h described at the top of this file.
inline Tuple gl_act_on_tuple(const FiniteGroup& g, const IntMatrix& gamma, const Tuple& h) {
  const std::size_t d = h.size();
  if (gamma.rows() != d || gamma.cols() != d) throw std::invalid_argument("gl_act_on_tuple: matrix has wrong shape");
  const IntMatrix inv = gamma.unimodular_inverse();
  Tuple out(d);
  for (std::size_t j = 0; j < d; ++j) out[j] = evaluate_tuple(g, h, inv.row(j));
  return out;
}

/// One conjugacy class of commuting d-tuples.
struct TupleClass {
  Tuple rep;                        ///< lexicographically minimal member
  std::uint64_t size = 0;           ///< orbit size |G| / |C_G(rep)|
  std::vector<Elem> centralizer;    ///< sorted elements of C_G(rep)
};

namespace detail {

inline void tuple_classes_rec(const FiniteGroup& g, std::size_t d, Tuple& prefix, const std::vector<Elem>& cent,
                              const std::vector<Elem>& cent_gens, std::vector<TupleClass>& out) {
  if (prefix.size() == d) {
    out.push_back({prefix, g.size() / cent.size(), cent});
    return;
  }
  for (const auto& cls : conjugacy_classes(g, cent, cent_gens)) {
    const Elem r = cls.front();
    std::vector<Elem> next;
    for (Elem c : cent)
      if (g.commute(c, r)) next.push_back(c);
    prefix.push_back(r);
    tuple_classes_rec(g, d, prefix, next, subgroup_generators(g, next), out);
    prefix.pop_back();
  }
}

}  // namespace detail

/// Conjugacy classes of commuting d-tuples, by centralizer recursion, ordered by
/// representative. Representatives are lexicographic minima of their orbits.
inline std::vector<TupleClass> tuple_conjugacy_classes(const FiniteGroup& g, std::size_t d) {
  std::vector<Elem> all(g.size());
  std::iota(all.begin(), all.end(), Elem{0});
  std::vector<TupleClass> out;
  Tuple prefix;
  detail::tuple_classes_rec(g, d, prefix, all, g.generators(), out);
  return out;
}

/// Classes of pairs (h, x) with x fixed by h, under simultaneous conjugation.
struct KeyClass {
  Tuple tuple;
  Point point = 0;
  std::uint64_t size = 0;
};

inline std::vector<KeyClass> tuple_point_classes(const FiniteGroup& g, const GSet& x, std::size_t d) {
  if (x.group() != g) throw std::invalid_argument("tuple_point_classes: space is over a different group");
  std::vector<KeyClass> out;
  for (const TupleClass& tc : tuple_conjugacy_classes(g, d)) {
    std::vector<bool> done(x.size(), false);
    for (Point p = 0; p < x.size(); ++p) {
      if (done[p] || !x.is_fixed(tc.rep, p)) continue;
      std::uint64_t orbit = 0;
      for (Elem z : tc.centralizer) {
        const Point q = x.act(z, p);
        if (!done[q]) {
          done[q] = true;
          ++orbit;
        }
      }
      out.push_back({tc.rep, p, tc.size * orbit});
    }
  }
  return out;
}

/// Canonical key of (h, x): the lexicographic minimum of (z h z^-1, z x) over z in G.
/// Brute force over the group; meant for groups of moderate size.
inline std::pair<Tuple, Point> canonical_key(const FiniteGroup& g, const GSet& x, const Tuple& h, Point p) {
  std::pair<Tuple, Point> best{h, p};
  for (Elem z = 0; z < g.size(); ++z) {
    std::pair<Tuple, Point> cand{conjugate_tuple(g, z, h), x.act(z, p)};
    if (cand < best) best = std::move(cand);
  }
  return best;
}

/// Random commuting d-tuple: each entry drawn uniformly from the joint centralizer
/// of the earlier entries. Groups above `scan_bound` use rejection sampling instead of
/// scanning the group, falling back to a power of the previous entry.
inline Tuple random_commuting_tuple(const FiniteGroup& g, std::size_t d, std::mt19937_64& rng,
                                    std::uint64_t scan_bound = 50000) {
  Tuple h;
  if (g.size() > scan_bound) {
    std::uniform_int_distribution<Elem> pick(0, g.size() - 1);
    for (std::size_t j = 0; j < d; ++j) {
      Elem y = 0;
      bool found = false;
      for (int t = 0; t < 256 && !found; ++t) {
        y = pick(rng);
        found = std::all_of(h.begin(), h.end(), [&](Elem x) { return g.commute(x, y); });
      }
      if (!found) y = g.pow(h.back(), static_cast<std::int64_t>(rng() % 7));
      h.push_back(y);
    }
    return h;
  }
  std::vector<Elem> cands(g.size());
  std::iota(cands.begin(), cands.end(), Elem{0});
  for (std::size_t j = 0; j < d; ++j) {
    std::uniform_int_distribution<std::size_t> pick(0, cands.size() - 1);
    const Elem x = cands[pick(rng)];
    h.push_back(x);
    if (j + 1 == d) break;
    std::vector<Elem> next;
    for (Elem y : cands)
      if (g.commute(x, y)) next.push_back(y);
    cands = std::move(next);
  }
  return h;
}

/// Tuples to test a property on: all class representatives when the group is small
/// enough, otherwise `cap` random commuting tuples.
inline std::vector<Tuple> test_tuples(const FiniteGroup& g, std::size_t d, std::size_t cap, std::uint64_t seed,
                                      std::uint64_t exhaustive_bound = 20000) {
  if (g.size() <= exhaustive_bound) {
    std::vector<Tuple> out;
    for (auto& tc : tuple_conjugacy_classes(g, d)) out.push_back(std::move(tc.rep));
    return out;
  }
  std::mt19937_64 rng(seed);
  std::vector<Tuple> out;
  for (std::size_t i = 0; i < cap; ++i) out.push_back(random_commuting_tuple(g, d, rng));
  return out;
}

}  // namespace ellpow
