#pragma once

// Finite-index sublattices of Z^d in row-style Hermite normal form.
//
// A sublattice is stored by a d x d basis matrix whose rows are the basis
// vectors. The canonical form is upper triangular with positive diagonal and
// every entry above a pivot reduced into [0, pivot). Its determinant is the
// index of the sublattice.

#include "ellpow/int_matrix.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ellpow {

/// Hermite normal form of the row span of an m x d matrix of rank d.
/// Returns the d x d canonical basis; throws if the rows do not span a
/// finite-index sublattice.
inline IntMatrix hnf(const IntMatrix& m) {
  const std::size_t d = m.cols();
  const std::size_t rows = m.rows();
  if (rows < d) throw std::invalid_argument("hnf: fewer rows than columns, rank deficient");
  IntMatrix a = m;
  auto swap_rows = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < d; ++c) std::swap(a(i, c), a(j, c));
  };
  for (std::size_t c = 0; c < d; ++c) {
    // Euclid on column c among rows >= c.
    while (true) {
      std::optional<std::size_t> piv;
      for (std::size_t i = c; i < rows; ++i) {
        if (a(i, c) == 0) continue;
        if (!piv || abs(a(i, c)) < abs(a(*piv, c))) piv = i;
      }
      if (!piv) throw std::invalid_argument("hnf: singular input (rank deficient)");
      swap_rows(c, *piv);
      bool done = true;
      for (std::size_t i = c + 1; i < rows; ++i) {
        if (a(i, c) == 0) continue;
        BigInt q = floor_div(a(i, c), a(c, c));
        for (std::size_t k = c; k < d; ++k) a(i, k) -= q * a(c, k);
        if (a(i, c) != 0) done = false;
      }
      if (done) break;
    }
    if (a(c, c) < 0)
      for (std::size_t k = c; k < d; ++k) a(c, k) = -a(c, k);
    for (std::size_t i = 0; i < c; ++i) {
      BigInt q = floor_div(a(i, c), a(c, c));
      if (q == 0) continue;
      for (std::size_t k = c; k < d; ++k) a(i, k) -= q * a(c, k);
    }
  }
  IntMatrix out(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) out(i, j) = a(i, j);
  return out;
}

/// True when `m` is already in canonical row-HNF.
inline bool is_hnf(const IntMatrix& m) {
  if (!m.is_square()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (m(i, i) <= 0) return false;
    for (std::size_t j = 0; j < i; ++j)
      if (m(i, j) != 0) return false;
    for (std::size_t k = 0; k < i; ++k)
      if (m(k, i) < 0 || m(k, i) >= m(i, i)) return false;
  }
  return true;
}

class Sublattice {
 public:
  Sublattice() = default;
  /// Sublattice spanned by the rows of `generators` (any number of rows >= d).
  explicit Sublattice(const IntMatrix& generators) : basis_(hnf(generators)) {}

  static Sublattice full(std::size_t d) { return Sublattice(IntMatrix::identity(d)); }

  std::size_t rank() const { return basis_.rows(); }
  const IntMatrix& basis() const { return basis_; }
  BigInt index() const { return basis_.det(); }

  /// Membership by back-substitution against the triangular basis.
  bool contains(const std::vector<BigInt>& v) const {
    const std::size_t d = rank();
    if (v.size() != d) throw std::invalid_argument("Sublattice::contains: dimension mismatch");
    std::vector<BigInt> rest = v;
    for (std::size_t c = 0; c < d; ++c) {
      if (rest[c] % basis_(c, c) != 0) return false;
      BigInt coef = rest[c] / basis_(c, c);
      for (std::size_t k = c; k < d; ++k) rest[k] -= coef * basis_(c, k);
    }
    return true;
  }

  bool contains(const std::vector<std::int64_t>& v) const {
    return contains(std::vector<BigInt>(v.begin(), v.end()));
  }

  friend bool operator==(const Sublattice& a, const Sublattice& b) { return a.basis_ == b.basis_; }
  friend bool operator<(const Sublattice& a, const Sublattice& b) { return a.basis_ < b.basis_; }

 private:
  IntMatrix basis_;
};

/// The oriented basis matrix of a sublattice: its HNF basis (positive determinant).
inline IntMatrix oriented_basis_matrix(const Sublattice& lattice) { return lattice.basis(); }

/// All sublattices of Z^d of index n, in canonical order. Supports d in {1, 2}.
inline std::vector<Sublattice> sublattices_of_index(std::size_t d, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("sublattices_of_index: index must be positive");
  std::vector<Sublattice> out;
  if (d == 1) {
    out.emplace_back(IntMatrix{{n}});
  } else if (d == 2) {
    for (std::int64_t a = 1; a <= n; ++a) {
      if (n % a != 0) continue;
      const std::int64_t dd = n / a;
      for (std::int64_t b = 0; b < dd; ++b) out.emplace_back(IntMatrix{{a, b}, {0, dd}});
    }
  } else {
    throw std::invalid_argument("sublattices_of_index: only ranks 1 and 2 are supported");
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// A permutation of {0..m-1} in image-array form.
using PermImage = std::vector<std::size_t>;

/// Result of exploring one orbit of a Z^d-action given by d commuting permutations.
struct OrbitLattice {
  std::vector<std::size_t> orbit;                  ///< points in BFS order, basepoint first
  std::vector<std::vector<std::int64_t>> labels;   ///< labels[p]: v with sigma^v(base) = p (empty if p off-orbit)
  Sublattice stabilizer;                           ///< {v : sigma^v(base) = base}
};

/// BFS from `basepoint` under the permutations `gens` (which must commute).
/// Every revisit contributes a relation vector; the HNF of the relations is the
/// stabilizer lattice, whose index equals the orbit size.
inline OrbitLattice explore_orbit_lattice(const std::vector<PermImage>& gens, std::size_t basepoint) {
  const std::size_t d = gens.size();
  if (d == 0) throw std::invalid_argument("explore_orbit_lattice: need at least one generator");
  const std::size_t m = gens.front().size();
  if (basepoint >= m) throw std::out_of_range("explore_orbit_lattice: basepoint outside the set");
  std::vector<std::vector<std::int64_t>> labels(m);
  std::vector<bool> seen(m, false);
  std::vector<std::vector<std::int64_t>> relations;
  std::vector<std::size_t> order;
  std::deque<std::size_t> queue{basepoint};
  seen[basepoint] = true;
  labels[basepoint] = std::vector<std::int64_t>(d, 0);
  while (!queue.empty()) {
    const std::size_t p = queue.front();
    queue.pop_front();
    order.push_back(p);
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t q = gens[j][p];
      std::vector<std::int64_t> lab = labels[p];
      lab[j] += 1;
      if (!seen[q]) {
        seen[q] = true;
        labels[q] = std::move(lab);
        queue.push_back(q);
      } else {
        std::vector<std::int64_t> rel(d);
        bool nonzero = false;
        for (std::size_t k = 0; k < d; ++k) {
          rel[k] = lab[k] - labels[q][k];
          nonzero = nonzero || rel[k] != 0;
        }
        if (nonzero) relations.push_back(std::move(rel));
      }
    }
  }
  IntMatrix rel = IntMatrix::from_rows(relations);
  if (relations.size() < d) throw std::logic_error("explore_orbit_lattice: too few relations");
  Sublattice stab(rel);
  if (stab.index() != order.size())
    throw std::logic_error("explore_orbit_lattice: stabilizer index differs from orbit size");
  return {std::move(order), std::move(labels), std::move(stab)};
}

/// Stabilizer lattice of a transitive action of Z^d given by d commuting permutations.
inline Sublattice stabilizer_lattice(const std::vector<PermImage>& gens, std::size_t basepoint) {
  if (gens.empty()) throw std::invalid_argument("stabilizer_lattice: need at least one permutation");
  const std::size_t m = gens.front().size();
  for (const auto& g : gens) {
    if (g.size() != m) throw std::invalid_argument("stabilizer_lattice: permutations of different degrees");
    std::vector<bool> hit(m, false);
    for (std::size_t x : g) {
      if (x >= m || hit[x]) throw std::invalid_argument("stabilizer_lattice: not a permutation");
      hit[x] = true;
    }
  }
  for (std::size_t a = 0; a < gens.size(); ++a)
    for (std::size_t b = a + 1; b < gens.size(); ++b)
      for (std::size_t x = 0; x < m; ++x)
        if (gens[a][gens[b][x]] != gens[b][gens[a][x]])
          throw std::invalid_argument("stabilizer_lattice: permutations do not commute");
  OrbitLattice ol = explore_orbit_lattice(gens, basepoint);
  if (ol.orbit.size() != m) throw std::invalid_argument("stabilizer_lattice: action is not transitive");
  return ol.stabilizer;
}

}  // namespace ellpow
