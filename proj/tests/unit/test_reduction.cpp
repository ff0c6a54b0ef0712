#include "ellpow/ellpow.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace ellpow;

namespace {

Elem welem(const FiniteGroup& w, Tuple base, PermImage perm) {
  return require_wreath(w).encode({std::move(base), std::move(perm)});
}

bool conjugate_in(const FiniteGroup& g, const Tuple& a, const Tuple& b) {
  for (Elem z = 0; z < g.size(); ++z)
    if (conjugate_tuple(g, z, a) == b) return true;
  return false;
}

}  // namespace

TEST(Reduce, SingleTwoCycle) {
  const FiniteGroup w = wreath(cyclic_group(2), 2);
  const OrbitReduction r = reduce(w, {welem(w, {1, 0}, {1, 0})});
  ASSERT_EQ(r.orbits.size(), 1u);
  EXPECT_EQ(r.orbits[0].points, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(r.orbits[0].lattice.basis(), (IntMatrix{{2}}));
  EXPECT_EQ(r.orbits[0].matrix, (IntMatrix{{2}}));
  EXPECT_EQ(r.orbits[0].reduced, (Tuple{1}));
}

TEST(Reduce, RankTwoExample) {
  const FiniteGroup w = wreath(cyclic_group(2), 2);
  const OrbitReduction r = reduce(w, {welem(w, {1, 0}, {1, 0}), welem(w, {1, 1}, {0, 1})});
  ASSERT_EQ(r.orbits.size(), 1u);
  EXPECT_EQ(r.orbits[0].matrix, (IntMatrix{{2, 0}, {0, 1}}));
  EXPECT_EQ(r.orbits[0].reduced, (Tuple{1, 1}));
}

TEST(Reduce, UntwistedGivesCoordinates) {
  const FiniteGroup s3 = symmetric_group(3);
  const FiniteGroup w = wreath(s3, 3);
  const Tuple h{welem(w, {1, 3, 5}, {0, 1, 2}), welem(w, {1, 0, 5}, {0, 1, 2})};
  ASSERT_TRUE(is_commuting(w, h));
  const OrbitReduction r = reduce(w, h);
  ASSERT_EQ(r.orbits.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(r.orbits[k].lattice.basis(), IntMatrix::identity(2));
    EXPECT_EQ(r.orbits[k].reduced, (Tuple{require_wreath(w).decode(h[0]).base[k], require_wreath(w).decode(h[1]).base[k]}));
  }
}

TEST(Reduce, RejectsNonCommuting) {
  const FiniteGroup w = wreath(cyclic_group(2), 3);
  EXPECT_THROW(reduce(w, {welem(w, {0, 0, 0}, {1, 0, 2}), welem(w, {0, 0, 0}, {0, 2, 1})}), std::invalid_argument);
}

TEST(Reduce, DeterminantEqualsOrbitSize) {
  for (const FiniteGroup& g : {cyclic_group(2), cyclic_group(3), symmetric_group(3)})
    for (std::size_t n = 1; n <= 4; ++n)
      for (std::size_t d = 1; d <= 2; ++d) {
        const FiniteGroup w = wreath(g, n);
        for (const Tuple& h : test_tuples(w, d, 150, 7 * n + d, 2000)) {
          const OrbitReduction r = reduce(w, h);
          std::size_t total = 0;
          for (const auto& o : r.orbits) {
            EXPECT_EQ(o.matrix.det(), o.points.size());
            total += o.points.size();
          }
          EXPECT_EQ(total, n);
        }
      }
}

TEST(CycleProduct, Conventions) {
  const FiniteGroup s3 = symmetric_group(3);
  const Tuple g{1, 3, 5};
  // sigma = (0 -> 1 -> 2 -> 0); the product walks the cycle backwards from the basepoint
  const PermImage sigma{1, 2, 0};
  EXPECT_EQ(cycle_product(s3, g, sigma, {0, 1, 2}, 0), s3.mul(s3.mul(g[0], g[2]), g[1]));
  EXPECT_EQ(cycle_product(s3, g, perm_identity(3), {1}, 1), g[1]);
  EXPECT_THROW(cycle_product(s3, g, sigma, {0, 1, 2}, 5), std::invalid_argument);
}

TEST(CycleProduct, AgreesWithReduceAndBasepointChangeConjugates) {
  const FiniteGroup s3 = symmetric_group(3);
  const FiniteGroup w = wreath(s3, 3);
  const WreathGroup& wg = require_wreath(w);
  for (Elem x = 0; x < w.size(); ++x) {
    const WreathElement e = wg.decode(x);
    const OrbitReduction r = reduce(w, {x});
    for (const auto& o : r.orbits) {
      const Elem c = cycle_product(s3, e.base, e.perm, o.points, o.basepoint);
      EXPECT_EQ(o.reduced, (Tuple{c}));
      for (std::size_t other : o.points)
        EXPECT_TRUE(conjugate_in(s3, {cycle_product(s3, e.base, e.perm, o.points, other)}, {c}));
    }
  }
}

TEST(Reduce, ChoiceRobustness) {
  // Other basepoints give conjugate reduced tuples; another basis M' = U M (U in SL_d)
  // gives the reduced tuple of U^-1 acting on h_k, up to conjugacy.
  std::mt19937_64 rng(19);
  const std::vector<IntMatrix> units = {{{1, 1}, {0, 1}}, {{0, -1}, {1, 0}}, {{1, 0}, {-1, 1}}, {{2, 1}, {1, 1}}};
  for (const FiniteGroup& g : {cyclic_group(2), symmetric_group(3)})
    for (std::size_t n = 2; n <= 3; ++n) {
      const FiniteGroup w = wreath(g, n);
      for (const Tuple& h : test_tuples(w, 2, 100, n)) {
        const OrbitReduction base = reduce(w, h);
        for (int trial = 0; trial < 3; ++trial) {
          const IntMatrix u = units[rng() % units.size()];
          ReduceChoices ch;
          ch.basepoint = [&](const std::vector<std::size_t>& pts) { return pts[rng() % pts.size()]; };
          ch.basis = [&](const Sublattice& l) { return u * l.basis(); };
          const OrbitReduction alt = reduce(w, h, ch);
          ASSERT_EQ(alt.orbits.size(), base.orbits.size());
          for (std::size_t k = 0; k < base.orbits.size(); ++k) {
            EXPECT_EQ(alt.orbits[k].matrix, u * base.orbits[k].matrix);
            const Tuple moved = gl_act_on_tuple(g, u.unimodular_inverse(), base.orbits[k].reduced);
            EXPECT_TRUE(conjugate_in(g, moved, alt.orbits[k].reduced));
          }
        }
      }
    }
}

TEST(Reduce, ConjugationEquivariance) {
  const FiniteGroup g = symmetric_group(3);
  const FiniteGroup w = wreath(g, 3);
  const WreathGroup& wg = require_wreath(w);
  std::mt19937_64 rng(23);
  for (const Tuple& h : test_tuples(w, 2, 100, 1)) {
    const Elem z = rng() % w.size();
    const Tuple hz = conjugate_tuple(w, z, h);
    const OrbitReduction a = reduce(w, h), b = reduce(w, hz);
    const PermImage sz = wg.decode(z).perm;
    ASSERT_EQ(a.orbits.size(), b.orbits.size());
    for (const auto& o : a.orbits) {
      std::vector<std::size_t> image;
      for (std::size_t p : o.points) image.push_back(sz[p]);
      std::sort(image.begin(), image.end());
      const auto it = std::find_if(b.orbits.begin(), b.orbits.end(), [&](const OrbitData& q) { return q.points == image; });
      ASSERT_NE(it, b.orbits.end());
      EXPECT_EQ(it->lattice, o.lattice);
      EXPECT_TRUE(conjugate_in(g, o.reduced, it->reduced));
    }
  }
}

TEST(Transport, TrivialSpaceTwoCycle) {
  const FiniteGroup c2 = cyclic_group(2);
  const FiniteGroup w = wreath(c2, 2);
  const GSet x = trivial_space(c2, 2);
  const FixedPointTransport t(x, w, {welem(w, {1, 1}, {1, 0})});
  EXPECT_EQ(t.reduction().orbits.at(0).reduced, (Tuple{0}));
  EXPECT_EQ(t.source().size(), 2u);
  EXPECT_EQ(t.target().size(), 2u);
  EXPECT_TRUE(t.verify());
}

TEST(Transport, IdentityTupleIsCoordinatewise) {
  const FiniteGroup c2 = cyclic_group(2);
  const FiniteGroup w = wreath(c2, 3);
  const GSet x = table_space(c2, {{0, 1}, {1, 0}, {2, 2}});
  const FixedPointTransport t(x, w, {w.identity()});
  EXPECT_EQ(t.source().size(), 27u);
  const auto& pw = static_cast<const PowerGSet&>(t.power().impl());
  for (Point p : t.source()) EXPECT_EQ(t.forward(p), pw.decode(p));
  EXPECT_TRUE(t.verify());
}

TEST(Transport, FreeActionEmpty) {
  const FiniteGroup c2 = cyclic_group(2);
  const FiniteGroup w = wreath(c2, 2);
  const FixedPointTransport t(regular_space(c2), w, {welem(w, {1, 0}, {1, 0})});
  EXPECT_TRUE(t.source().empty());
  EXPECT_TRUE(t.target().empty());
  EXPECT_TRUE(t.verify());
}

TEST(Transport, BijectionOnS3Data) {
  const FiniteGroup s3 = symmetric_group(3);
  std::vector<std::vector<Point>> action(3, std::vector<Point>(6));
  for (Elem g = 0; g < 6; ++g)
    for (Point p = 0; p < 3; ++p) action[p][g] = (*s3.permutation(g))[p];
  const GSet x = table_space(s3, action);
  const FiniteGroup w = wreath(s3, 2);
  for (const Tuple& h : test_tuples(w, 2, 100, 3)) {
    const FixedPointTransport t(x, w, h);
    std::string why;
    EXPECT_TRUE(t.verify(&why)) << why;
  }
}
