#pragma once

// Permutations of {0..n-1} in image-array form, composed as functions:
// compose(a, b)(x) = a(b(x)).

#include "ellpow/lattice.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace ellpow {

inline std::uint64_t factorial(std::size_t n) {
  std::uint64_t f = 1;
  for (std::size_t k = 2; k <= n; ++k) {
    if (f > std::numeric_limits<std::uint64_t>::max() / k) throw std::overflow_error("factorial overflow");
    f *= k;
  }
  return f;
}

inline PermImage perm_identity(std::size_t n) {
  PermImage p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  return p;
}

inline bool is_permutation(const PermImage& p) {
  std::vector<bool> hit(p.size(), false);
  for (std::size_t x : p) {
    if (x >= p.size() || hit[x]) return false;
    hit[x] = true;
  }
  return true;
}

inline PermImage perm_compose(const PermImage& a, const PermImage& b) {
  if (a.size() != b.size()) throw std::invalid_argument("perm_compose: degree mismatch");
  PermImage c(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) c[x] = a[b[x]];
  return c;
}

inline PermImage perm_inverse(const PermImage& a) {
  PermImage inv(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) inv[a[x]] = x;
  return inv;
}

inline bool perm_is_identity(const PermImage& a) {
  for (std::size_t x = 0; x < a.size(); ++x)
    if (a[x] != x) return false;
  return true;
}

/// Lexicographic rank (Lehmer code); rank 0 is the identity.
inline std::uint64_t perm_rank(const PermImage& p) {
  const std::size_t n = p.size();
  std::uint64_t r = 0;
  std::vector<bool> used(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t smaller = 0;
    for (std::size_t v = 0; v < p[i]; ++v)
      if (!used[v]) ++smaller;
    used[p[i]] = true;
    r = r * (n - i) + smaller;
  }
  return r;
}

inline PermImage perm_unrank(std::uint64_t r, std::size_t n) {
  std::vector<std::uint64_t> digits(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t base = i + 1;  // digit at position n-1-i has radix i+1
    digits[n - 1 - i] = r % base;
    r /= base;
  }
  std::vector<std::size_t> pool = perm_identity(n);
  PermImage p(n);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = pool[digits[i]];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(digits[i]));
  }
  return p;
}

/// Sign of a permutation, +1 or -1.
inline int perm_sign(const PermImage& p) {
  std::vector<bool> seen(p.size(), false);
  int sign = 1;
  for (std::size_t s = 0; s < p.size(); ++s) {
    if (seen[s]) continue;
    std::size_t len = 0;
    for (std::size_t x = s; !seen[x]; x = p[x]) {
      seen[x] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

/// Cycles of p, each starting at its smallest point, ordered by that point.
inline std::vector<std::vector<std::size_t>> perm_cycles(const PermImage& p) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<bool> seen(p.size(), false);
  for (std::size_t s = 0; s < p.size(); ++s) {
    if (seen[s]) continue;
    std::vector<std::size_t> cyc;
    for (std::size_t x = s; !seen[x]; x = p[x]) {
      seen[x] = true;
      cyc.push_back(x);
    }
    out.push_back(std::move(cyc));
  }
  return out;
}

/// All permutations of degree n in lexicographic order (index = rank).
inline std::vector<PermImage> all_permutations(std::size_t n) {
  std::vector<PermImage> out;
  PermImage p = perm_identity(n);
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline std::string perm_str(const PermImage& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
  return s + "]";
}

}  // namespace ellpow
