#include <gtest/gtest.h>

#include "anosov/floyd.hpp"
#include "anosov/zoo.hpp"

using namespace anosov;

TEST(FloydFunction, ParseAndValues) {
  const FloydFunction p = FloydFunction::parse("power:1");
  EXPECT_EQ(p.kind(), FloydFunction::Kind::PowerLaw);
  EXPECT_DOUBLE_EQ(p(0), 1.0);
  EXPECT_DOUBLE_EQ(p(2), 0.25);
  const FloydFunction e = FloydFunction::parse("exp:2");
  EXPECT_DOUBLE_EQ(e(3), 0.125);
  EXPECT_EQ(e.name(), "exp:2");
  const FloydFunction t = FloydFunction::parse("table:1,0.5,0.2");
  EXPECT_DOUBLE_EQ(t(2), 0.2);
  EXPECT_NEAR(t(3), 0.08, 1e-15);
  EXPECT_THROW(FloydFunction::parse("exp:1"), PreconditionError);
  EXPECT_THROW(FloydFunction::parse("power:0"), PreconditionError);
  EXPECT_THROW(FloydFunction::parse("table:1,2"), PreconditionError);
  EXPECT_THROW(FloydFunction::parse("gauss:1"), ParseError);
  EXPECT_THROW(FloydFunction::parse("exp:x"), ParseError);
}

TEST(FloydFunction, TailSumsMatchClosedForms) {
  EXPECT_NEAR(FloydFunction::exponential(2.0).tail_sum(0), 2.0, 1e-15);
  EXPECT_NEAR(FloydFunction::exponential(2.0).tail_sum(3), 0.25, 1e-15);
  // sum_{k >= 1} k^-2 = pi^2 / 6; f(0) is clamped to f(1)
  EXPECT_NEAR(FloydFunction::power_law(1.0).tail_sum(1), M_PI * M_PI / 6.0, 1e-12);
  EXPECT_NEAR(FloydFunction::power_law(1.0).tail_sum(0), 1.0 + M_PI * M_PI / 6.0, 1e-12);
  // 0.2 + 0.08 + ... = 0.2 / (1 - 0.4)
  EXPECT_NEAR(FloydFunction::custom({1.0, 0.5, 0.2}).tail_sum(2), 0.2 / 0.6, 1e-11);
  EXPECT_NEAR(karlsson_bound(FloydFunction::exponential(2.0), 7.0), 10.0 * 0.25, 1e-14);
}

TEST(FloydFunction, DecayRatioAndMonotonicity) {
  EXPECT_NEAR(FloydFunction::exponential(3.0).decay_ratio(), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(FloydFunction::power_law(1.0).decay_ratio(), 0.25, 1e-15);
  EXPECT_TRUE(FloydFunction::power_law(0.5).nonincreasing());
}

TEST(FloydBall, TreeDistancesFollowTheUniquePath) {
  auto m = GroupModel::free(2);
  const FloydFunction f = FloydFunction::exponential(2.0);
  EXPECT_DOUBLE_EQ(floyd_distance(*m, f, Word(), Word::parse("a"), 3), 0.5);
  EXPECT_DOUBLE_EQ(floyd_distance(*m, f, Word::parse("a"), Word::parse("b"), 3), 1.0);
  // aa -> a -> ab: two edges at level 2
  EXPECT_DOUBLE_EQ(floyd_distance(*m, f, Word::parse("aa"), Word::parse("ab"), 3), 0.5);
  EXPECT_THROW(floyd_distance(*m, f, Word(), Word::parse("aaaa"), 3), OutOfBall);
  EXPECT_THROW(floyd_distance(*m, f, Word(), Word(), -1), PreconditionError);
}

TEST(FloydBall, TriangleInequalityAndKarlssonBound) {
  auto m = GroupModel::free(2);
  const FloydFunction f = FloydFunction::exponential(2.0);
  const FloydBall b(*m, f, 5);
  const auto probe = ball(*m, 3);
  std::vector<std::vector<double>> d;
  for (const Word& g : probe) d.push_back(b.distances_from(b.position(g)));
  for (std::size_t i = 0; i < probe.size(); ++i) {
    for (std::size_t j = 0; j < probe.size(); ++j) {
      const double dij = d[i][b.position(probe[j])];
      EXPECT_LE(dij, karlsson_bound(f, gromov_product_group(*m, probe[i], probe[j])) + 1e-15);
      for (std::size_t k = 0; k < probe.size(); k += 7)
        EXPECT_LE(dij, d[i][b.position(probe[k])] + d[k][b.position(probe[j])] + 1e-15);
    }
  }
}

TEST(FloydBall, DistanceNonincreasingInRadius) {
  const Representation rho = surface_octagon();
  const FloydFunction f = FloydFunction::exponential(2.0);
  const Word g = Word::parse("ab"), h = Word::parse("cd");
  EXPECT_LE(floyd_distance(rho.model(), f, g, h, 4), floyd_distance(rho.model(), f, g, h, 3) + 1e-15);
}

TEST(Ugsp, FuchsianPlateausAndTrivialGrows) {
  const FloydFunction f = FloydFunction::exponential(std::exp(1.0));
  const UgspResult good = ugsp_check(fuchsian_free(2, 2.0), f, 6);
  EXPECT_EQ(good.verdict, Verdict::Consistent);
  EXPECT_NEAR(good.C, 0.0, 1e-12);
  const UgspResult bad = ugsp_check(trivial_rep(GroupModel::free(2), 2), f, 6);
  EXPECT_EQ(bad.verdict, Verdict::Inconsistent);
  EXPECT_NEAR(bad.C, 6.0, 1e-12);
  const UgspResult a = ugsp_check(fuchsian_free(2, 1.0), f, 6, 1), b = ugsp_check(fuchsian_free(2, 1.0), f, 6, 3);
  EXPECT_EQ(a.perRadius, b.perRadius);
}

TEST(FloydLipschitz, FuchsianConstantIsFinite) {
  const Representation rho = fuchsian_free(2, 2.0);
  const FloydLipschitzResult r = floyd_lipschitz_check(rho, FloydFunction::exponential(2.0), 3);
  EXPECT_EQ(r.degenerate, 1u);
  EXPECT_EQ(r.pairs, 52u * 51u / 2u);
  EXPECT_TRUE(std::isfinite(r.C));
  EXPECT_GT(r.C, 0.0);
}
