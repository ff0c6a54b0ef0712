#include "ellpow/ellpow.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace ellpow;

namespace {

// Eisenstein q-expansion summed directly, divisor sums by trial division.
Complex e_series(int w, Complex tau, int terms = 60) {
  const double c = w == 4 ? 240.0 : -504.0;
  const Complex q = std::exp(Complex(0, 2 * M_PI) * tau);
  Complex sum = 1, qn = 1;
  for (int n = 1; n < terms; ++n) {
    qn *= q;
    double s = 0;
    for (int d = 1; d <= n; ++d)
      if (n % d == 0) s += std::pow(d, w - 1);
    sum += c * s * qn;
  }
  return sum;
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

const std::vector<Complex> kTaus = {{0.0, 1.0}, {0.0, 2.0}, {0.5, 1.0}, {0.25, 2.0}, {-0.3, 0.9}, {0.1, 1.3}};

}  // namespace

TEST(Eisenstein, SeriesCoefficients) {
  const json e4 = eisenstein_series(4, 3).describe();
  EXPECT_EQ(e4.at("q").at(1).get<double>(), 240.0);
  EXPECT_EQ(e4.at("q").at(2).get<double>(), 2160.0);
  EXPECT_EQ(eisenstein_series(6, 2).describe().at("q").at(1).get<double>(), -504.0);
  EXPECT_THROW(eisenstein_series(4, 1), std::invalid_argument);
  EXPECT_THROW(eisenstein_series(8, 5), std::invalid_argument);
}

TEST(Eisenstein, ClosedFormMatchesSeries) {
  for (int w : {4, 6})
    for (Complex tau : kTaus) {
      EXPECT_LT(rel(LatFunction::eisenstein(w).at_tau(tau), e_series(w, tau)), 1e-10) << w << " " << tau;
      EXPECT_LT(rel(eisenstein_series(w, 40).at_tau(tau), e_series(w, tau)), 1e-10);
    }
}

TEST(Eisenstein, ModularityFromSeries) {
  // E_w(-1/tau) = tau^w E_w(tau), both sides from the raw series
  for (int w : {4, 6})
    for (Complex tau : {Complex(0, 1.5), Complex(0.2, 1.1)})
      EXPECT_LT(rel(e_series(w, -1.0 / tau, 120), std::pow(tau, w) * e_series(w, tau)), 1e-9);
}

TEST(LatFunctionTest, WeightHomogeneity) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<LatFunction> fs = {LatFunction::eisenstein(4), eisenstein_series(6, 30),
                                       LatFunction::from_tau(2, [](Complex t) { return t * t; }, "tau^2")};
  for (const auto& f : fs)
    for (int t = 0; t < 20; ++t) {
      const Complex l(u(rng) + 1.5, u(rng));
      const Complex tau(u(rng), 1.0 + std::abs(u(rng)));
      const Complex mu(u(rng) + 2, u(rng));
      EXPECT_LT(rel(f(mu * l, mu * l * tau), std::pow(mu, -f.weight()) * f(l, l * tau)), 1e-9);
    }
}

TEST(LatFunctionTest, SlashExamples) {
  const LatFunction e4 = LatFunction::eisenstein(4);
  const LatFunction s = e4.slash(IntMatrix{{2, 0}, {0, 1}});
  EXPECT_LT(rel(s(1.0, Complex(0, 2)), std::pow(2.0, -4) * e_series(4, Complex(0, 1))), 1e-6);
  for (Complex tau : kTaus) {
    EXPECT_LT(rel(e4.slash(IntMatrix{{3, 0}, {0, 3}}).at_tau(tau), std::pow(3.0, -4) * e4.at_tau(tau)), 1e-12);
    EXPECT_EQ(e4.slash(IntMatrix::identity(2)).at_tau(tau), e4.at_tau(tau));
  }
  EXPECT_THROW(e4.slash(IntMatrix{{0, 1}, {1, 0}}), std::invalid_argument);
  EXPECT_THROW(e4.slash(IntMatrix{{1, 0}, {0, 0}}), std::invalid_argument);
}

TEST(LatFunctionTest, SlashFunctorial) {
  const LatFunction f = LatFunction::from_tau(2, [](Complex t) { return t * t + Complex(0, 1) * t; }, "poly");
  const std::vector<IntMatrix> ms = {IntMatrix{{1, 1}, {0, 1}}, IntMatrix{{2, 1}, {0, 3}}, IntMatrix{{1, 0}, {2, 1}},
                                     IntMatrix{{0, -1}, {1, 0}}};
  for (const auto& a : ms)
    for (const auto& b : ms)
      for (Complex tau : kTaus) {
        const Complex lhs = f.slash(a * b).at_tau(tau);
        const Complex rhs = f.slash(a).slash(b).at_tau(tau);
        EXPECT_LT(rel(lhs, rhs), 1e-9);
      }
}

TEST(LatFunctionTest, OrientationEnforced) {
  EXPECT_THROW(LatFunction::eisenstein(4)(1.0, Complex(0, -1)), std::domain_error);
}

TEST(Graded, ScaleByDegree) {
  const Height1Value v(Height1Value::Map{{0, 3.0}, {1, 1.0}, {2, 1.0}});
  EXPECT_EQ(max_deviation(v.scale_by_degree(1.0), v, {}), 0.0);
  EXPECT_EQ(v.scale_by_degree(2.0).components().at(0), Complex(3.0));
  EXPECT_EQ(v.scale_by_degree(2.0).components().at(1), Complex(2.0));
  EXPECT_EQ(v.scale_by_degree(2.0).components().at(2), Complex(4.0));
  EXPECT_LT(max_deviation(v.scale_by_degree(6.0), v.scale_by_degree(2.0).scale_by_degree(3.0), {}), 1e-15);
  EXPECT_THROW(v.scale_by_degree(0.0), std::invalid_argument);
}

TEST(Graded, ProductIsConvolution) {
  const Height1Value u(Height1Value::Map{{0, 1.0}, {1, 2.0}});
  const Height1Value v(Height1Value::Map{{1, 3.0}, {2, 5.0}});
  const auto p = u * v;
  EXPECT_EQ(p.components().at(1), Complex(3.0));
  EXPECT_EQ(p.components().at(2), Complex(11.0));
  EXPECT_EQ(p.components().at(3), Complex(10.0));
  EXPECT_EQ(max_deviation(Height1Value::unit() * v, v, {}), 0.0);
  EXPECT_EQ(max_deviation(u * v, v * u, {}), 0.0);
  EXPECT_EQ((Height1Value::single(1, 1.0) * Height1Value::single(1, 1.0)).components().count(2), 1u);
}

TEST(Graded, HeightTwoWeights) {
  const Height2Value e4 = Height2Value::single(4, LatFunction::eisenstein(4));
  const Complex tau(0, 2);
  EXPECT_LT(rel((e4 * e4).components().at(8).at_tau(tau), e_series(4, tau) * e_series(4, tau)), 1e-6);
  EXPECT_THROW(Height2Value::single(3, LatFunction::eisenstein(4)), std::invalid_argument);
  EXPECT_THROW(Height2Value(Height2Value::Map{{-1, LatFunction::constant(1.0)}}), std::invalid_argument);
}

TEST(Graded, DeviationMetric) {
  const CompareContext ctx;
  EXPECT_EQ(max_deviation(Height1Value::single(0, 1e6), Height1Value::single(0, 1e6 + 1), ctx), 1.0 / (1e6 + 1));
  EXPECT_EQ(max_deviation(Height1Value::single(0, 0.5), Height1Value(), ctx), 0.5);
}

// Class functions

TEST(ClassFunctionTest, ConstantAndLookup) {
  const FiniteGroup c2 = cyclic_group(2);
  const auto one = HeightOneFunction::constant(c2, point_space(c2), 1, Height1Value::unit());
  EXPECT_EQ(max_deviation(one.evaluate({1}), Height1Value::unit(), {}), 0.0);
  const auto f = HeightOneFunction::from_table(c2, point_space(c2), 1, false,
                                               {{{{0}, 0}, Height1Value::single(0, 2.0)}, {{{1}, 0}, Height1Value::single(0, 0.0)}});
  EXPECT_EQ(f.evaluate({1}).components().at(0), Complex(0.0));
  EXPECT_EQ(f.evaluate({0}).components().at(0), Complex(2.0));
  EXPECT_TRUE(f.warnings().empty());
}

TEST(ClassFunctionTest, MissingOrbitsWarn) {
  const FiniteGroup c3 = cyclic_group(3);
  const auto f = HeightOneFunction::from_table(c3, point_space(c3), 1, false, {{{{0}, 0}, Height1Value::unit()}});
  EXPECT_EQ(f.warnings().size(), 2u);
  EXPECT_TRUE(f.evaluate({2}).empty());
}

TEST(ClassFunctionTest, ConflictingValuesRejected) {
  const FiniteGroup s3 = symmetric_group(3);
  const auto classes = conjugacy_classes(s3);
  for (const auto& cls : classes) {
    if (cls.size() < 2) continue;
    EXPECT_THROW(HeightOneFunction::from_table(s3, point_space(s3), 1, false,
                                               {{{{cls[0]}, 0}, Height1Value::unit()}, {{{cls[1]}, 0}, Height1Value::zero()}}),
                 std::invalid_argument);
  }
}

TEST(ClassFunctionTest, EvaluationErrors) {
  const FiniteGroup s3 = symmetric_group(3);
  const GSet nat = natural_space(s3);
  const auto f = HeightOneFunction::constant(s3, nat, 1, Height1Value::unit());
  Elem transposition = 0;
  for (Elem x = 0; x < s3.size(); ++x)
    if (s3.order(x) == 2) transposition = x;
  const auto fixed = fixed_points(nat, s3, {transposition});
  ASSERT_EQ(fixed.size(), 1u);
  EXPECT_NO_THROW(f.evaluate({transposition}, fixed[0]));
  EXPECT_THROW(f.evaluate({transposition}, (fixed[0] + 1) % 3), std::invalid_argument);
  EXPECT_THROW(f.evaluate({99}, 0), std::invalid_argument);
  EXPECT_THROW(f.evaluate({0, 0}, 0), std::invalid_argument);
}

TEST(ClassFunctionTest, ConjugationInvarianceByStorage) {
  const FiniteGroup s3 = symmetric_group(3);
  std::map<Key, Height1Value> vals;
  Complex c = 1;
  for (const auto& kc : tuple_point_classes(s3, point_space(s3), 2)) {
    vals.emplace(Key{kc.tuple, kc.point}, Height1Value::single(0, c));
    c += 1;
  }
  const auto f = HeightOneFunction::from_table(s3, point_space(s3), 2, false, vals);
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    const Tuple h = random_commuting_tuple(s3, 2, rng);
    const Elem z = rng() % s3.size();
    EXPECT_EQ(max_deviation(f.evaluate(conjugate_tuple(s3, z, h)), f.evaluate(h), {}), 0.0);
  }
  EXPECT_TRUE(is_invariant(f).ok);
}

TEST(ClassFunctionTest, EllipticInvariance) {
  const FiniteGroup triv = trivial_group();
  const auto e4 = HeightTwoFunction::constant(triv, point_space(triv), 2, Height2Value::single(4, LatFunction::eisenstein(4)), true);
  const auto rep = is_invariant(e4);
  EXPECT_TRUE(rep.ok);
  EXPECT_LT(rep.max_deviation, 1e-9);

  const auto e4q = HeightTwoFunction::constant(triv, point_space(triv), 2, Height2Value::single(4, eisenstein_series(4, 60)), true);
  EXPECT_TRUE(is_invariant(e4q).ok);

  const auto tau = HeightTwoFunction::constant(
      triv, point_space(triv), 2, Height2Value::single(0, LatFunction::from_tau(0, [](Complex t) { return t; }, "tau")), true);
  const auto bad = is_invariant(tau);
  EXPECT_FALSE(bad.ok);
  bool saw_s = false;
  for (const auto& v : bad.violations) saw_s = saw_s || v.kind == "S";
  EXPECT_TRUE(saw_s);

  const auto one = HeightTwoFunction::constant(triv, point_space(triv), 2, Height2Value::unit(), true);
  EXPECT_TRUE(is_invariant(one).ok);
}

TEST(ClassFunctionTest, EllipticNeedsHeightTwo) {
  const FiniteGroup c2 = cyclic_group(2);
  EXPECT_THROW(HeightOneFunction::constant(c2, point_space(c2), 1, Height1Value::unit(), true), std::invalid_argument);
}

TEST(ClassFunctionTest, EllipticTupleDependence) {
  // f(g, g') = E4 when (g, g') = (e, e), 0 otherwise is invariant for C2: the trivial pair is fixed by SL2(Z).
  const FiniteGroup c2 = cyclic_group(2);
  const auto f = HeightTwoFunction::from_rule(c2, point_space(c2), 2, true, [](const Tuple& h, Point) {
    return h == Tuple{0, 0} ? Height2Value::single(4, LatFunction::eisenstein(4)) : Height2Value::zero();
  });
  EXPECT_TRUE(is_invariant(f).ok);
  // distinguishing (a, e) from (e, a) breaks S-equivariance
  const auto g = HeightTwoFunction::from_rule(c2, point_space(c2), 2, true, [](const Tuple& h, Point) {
    return h == Tuple{1, 0} ? Height2Value::unit() : Height2Value::zero();
  });
  EXPECT_FALSE(is_invariant(g).ok);
}

TEST(Restriction, IdentityAndTrivial) {
  const FiniteGroup s3 = symmetric_group(3);
  const auto f = character(standard_rep(s3));
  const auto keys = test_keys(s3, point_space(s3), 1);
  EXPECT_EQ(compare_on(restrict_along(f, identity_hom(s3), point_space(s3)), f, keys, {}), 0.0);
  const FiniteGroup triv = trivial_group();
  const auto r = restrict_along(f, hom_from_image(triv, s3, {s3.identity()}), point_space(triv));
  EXPECT_EQ(r.evaluate({0}).components().at(0), Complex(2.0));
}

TEST(Restriction, TranspositionInclusion) {
  const FiniteGroup s3 = symmetric_group(3);
  const FiniteGroup c2 = cyclic_group(2);
  Elem t = 0;
  for (Elem x = 0; x < s3.size(); ++x)
    if (s3.order(x) == 2) t = x;
  const auto phi = hom_from_image(c2, s3, {s3.identity(), t});
  const auto f = character(standard_rep(s3));
  const auto r = restrict_along(f, phi, point_space(c2));
  EXPECT_EQ(r.evaluate({0}).components().at(0), f.evaluate({s3.identity()}).components().at(0));
  EXPECT_EQ(r.evaluate({1}).components().at(0), f.evaluate({t}).components().at(0));
  EXPECT_EQ(r.evaluate({1}).components().at(0), Complex(0.0));
}

TEST(Restriction, Functorial) {
  const FiniteGroup s3 = symmetric_group(3);
  const FiniteGroup c2 = cyclic_group(2), triv = trivial_group();
  Elem t = 0;
  for (Elem x = 0; x < s3.size(); ++x)
    if (s3.order(x) == 2) t = x;
  const auto phi = hom_from_image(c2, s3, {s3.identity(), t});
  const auto psi = hom_from_image(triv, c2, {0});
  const auto f = character(regular_rep(s3));
  const auto twice = restrict_along(restrict_along(f, phi, point_space(c2)), psi, point_space(triv));
  const auto once = restrict_along(f, compose(phi, psi), point_space(triv));
  EXPECT_EQ(max_deviation(twice.evaluate({0}), once.evaluate({0}), {}), 0.0);
}

TEST(Restriction, NonEquivariantSpaceMapRejected) {
  const FiniteGroup s3 = symmetric_group(3);
  const GSet nat = natural_space(s3);
  const auto f = HeightOneFunction::constant(s3, nat, 1, Height1Value::unit());
  const SpaceMap bad{nat, nat, [](Point p) { return p == 0 ? Point{1} : p == 1 ? Point{0} : Point{2}; }};
  EXPECT_THROW(restrict_along(f, identity_hom(s3), bad), std::invalid_argument);
}

TEST(Multiply, UnitCommutativityDegree) {
  const FiniteGroup s3 = symmetric_group(3);
  const GSet pt = point_space(s3);
  const auto f = character(standard_rep(s3));
  const auto g = character(regular_rep(s3));
  const auto one = HeightOneFunction::constant(s3, pt, 1, Height1Value::unit());
  const auto keys = test_keys(s3, pt, 1);
  EXPECT_EQ(compare_on(multiply(f, one), f, keys, {}), 0.0);
  EXPECT_EQ(compare_on(multiply(f, g), multiply(g, f), keys, {}), 0.0);
  const auto j1 = HeightOneFunction::constant(s3, pt, 1, Height1Value::single(1, 1.0));
  const auto sq = multiply(j1, j1).evaluate({0});
  EXPECT_EQ(sq.components().size(), 1u);
  EXPECT_EQ(sq.components().count(2), 1u);
  EXPECT_THROW(multiply(f, character(trivial_rep(cyclic_group(2)))), std::invalid_argument);
}

TEST(StructureMaps, BlockInclusion) {
  const GSet pt = point_space(cyclic_group(2));
  const auto a = wreath_block_inclusion(pt, 2, 1);
  EXPECT_TRUE(a.hom.verify(100));
  EXPECT_TRUE(is_equivariant(a.hom, a.space));
  const auto b = wreath_block_inclusion(pt, 1, 1);
  const auto& src = require_product(b.hom.source);
  const FiniteGroup w1 = wreath(cyclic_group(2), 1);
  const Elem x = src.pair(require_wreath(w1).encode({{1}, {0}}), require_wreath(w1).encode({{0}, {0}}));
  EXPECT_EQ(require_wreath(b.hom.target).decode(b.hom(x)), (WreathElement{{1, 0}, {0, 1}}));
  const auto z = wreath_block_inclusion(pt, 0, 2);
  EXPECT_TRUE(z.hom.verify());
}

TEST(StructureMaps, CompositionInclusion) {
  const GSet pt = point_space(cyclic_group(2));
  for (auto [j, k] : {std::pair{2, 2}, {1, 2}, {2, 1}}) {
    const auto b = wreath_composition_inclusion(pt, j, k);
    EXPECT_TRUE(b.hom.verify(200));
    EXPECT_TRUE(is_equivariant(b.hom, b.space));
    if (j == 1 || k == 1) {
      const auto img = b.hom.image();
      EXPECT_EQ(std::set<Elem>(img.begin(), img.end()).size(), b.hom.source.size());
    }
  }
  const GSet two = regular_space(cyclic_group(2));
  const auto b = wreath_composition_inclusion(two, 2, 2);
  EXPECT_TRUE(is_equivariant(b.hom, b.space));
}

TEST(StructureMaps, Diagonal) {
  const FiniteGroup c2 = cyclic_group(2);
  for (std::size_t k : {1, 2}) {
    const auto d = wreath_diagonal(regular_space(c2), point_space(c2), k);
    EXPECT_TRUE(d.hom.verify(200));
    EXPECT_TRUE(is_equivariant(d.hom, d.space));
    const auto& tgt = require_product(d.hom.target);
    for (Elem x = 0; x < d.hom.source.size(); ++x) {
      const Elem y = d.hom(x);
      EXPECT_EQ(require_wreath(tgt.first_factor()).decode(tgt.first(y)).perm,
                require_wreath(tgt.second_factor()).decode(tgt.second(y)).perm);
    }
  }
}

TEST(HomomorphismTest, RejectsNonHomomorphism) {
  const FiniteGroup c2 = cyclic_group(2), c3 = cyclic_group(3);
  EXPECT_THROW(hom_from_image(c3, c2, {0, 1, 1}), std::invalid_argument);
  EXPECT_THROW(hom_from_image(c3, c2, {0, 5, 1}), std::invalid_argument);
}
