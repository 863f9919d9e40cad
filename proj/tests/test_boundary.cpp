#include <gtest/gtest.h>

#include "anosov/boundary.hpp"
#include "anosov/zoo.hpp"

using namespace anosov;

TEST(LimitPoint, PureCycleConvergesToAttractingEigenline) {
  // generator a = diag(e^t, e^-t) at angle 0
  const Representation rho = fuchsian_free(2, 2.0);
  const LimitSample s = limit_point(rho, BoundaryRay::parse("|a"), 30);
  EXPECT_NEAR(std::abs(s.point.dir()(0)), 1.0, 1e-12);
  EXPECT_LT(s.errBound, 1e-20);
  ASSERT_TRUE(s.hyperplane.has_value());
  const LimitSample t = limit_point(rho, BoundaryRay::parse("|A"), 30);
  EXPECT_NEAR(std::abs(t.point.dir()(1)), 1.0, 1e-12);
}

TEST(LimitPoint, ErrorBoundShrinksWithDepth) {
  const Representation rho = fuchsian_free(2, 1.0);
  const BoundaryRay x = BoundaryRay::parse("ab|aB");
  const LimitSample s10 = limit_point(rho, x, 10), s20 = limit_point(rho, x, 20), s40 = limit_point(rho, x, 40);
  EXPECT_LT(s20.errBound, s10.errBound);
  EXPECT_LT(s40.errBound, s20.errBound);
  EXPECT_LE(projective_distance(s20.point, s40.point), s20.errBound + s40.errBound);
}

TEST(LimitPoint, RejectsNonDivergentAndWrongDimension) {
  const Representation id = trivial_rep(GroupModel::free(1), 2);
  EXPECT_THROW(limit_point(id, BoundaryRay::parse("|a"), 30), NonDivergent);
  EXPECT_THROW(limit_point(fuchsian_free(2, 2.0), BoundaryRay::parse("|c"), 10), PreconditionError);
}

TEST(Transversality, MatchesGromovProductOnFuchsian) {
  const Representation rho = fuchsian_free(2, 1.5);
  const std::vector<std::pair<std::string, std::string>> pairs{{"|a", "|A"}, {"|a", "|b"}, {"ab|a", "aB|a"}, {"|ab", "|Ba"}};
  for (const auto& [sx, sy] : pairs) {
    const Transversality t = transversality(rho, BoundaryRay::parse(sx), BoundaryRay::parse(sy), 40);
    EXPECT_TRUE(t.agree) << sx << " " << sy << " " << t.direct << " " << t.viaGromov << " " << t.tolerance;
    EXPECT_NEAR(t.direct, t.viaGromov, 1e-6) << sx << " " << sy;
    EXPECT_GT(t.direct, 0.0);
  }
  EXPECT_THROW(transversality(rho, BoundaryRay::parse("|a"), BoundaryRay::parse("|a"), 10), PreconditionError);
}

TEST(Holder, FuchsianAndSymmetricSquareAreOne) {
  const Representation j = fuchsian_free(2, 2.0);
  for (const Representation& rho : {j, lift_sym(j, 2)}) {
    EXPECT_NEAR(holder_exponent_singular(rho, 8).estimate, 1.0, 1e-9);
    EXPECT_NEAR(holder_exponent_eigen(rho, 8).estimate, 1.0, 1e-9);
  }
}

TEST(Holder, DiagonalSumIsZero) {
  const Representation j = fuchsian_free(2, 2.0);
  const Representation s = lift_sum(j, j);
  EXPECT_NEAR(holder_exponent_singular(s, 6).estimate, 0.0, 1e-9);
  EXPECT_NEAR(holder_exponent_eigen(s, 6).estimate, 0.0, 1e-9);
  EXPECT_THROW(holder_exponent_singular(j, 1), PreconditionError);
}

TEST(Holder, ThreadCountDoesNotChangeTable) {
  const Representation rho = lift_sym(fuchsian_free(2, 1.0), 3);
  const HolderSingular a = holder_exponent_singular(rho, 6, 1), b = holder_exponent_singular(rho, 6, 4);
  ASSERT_EQ(a.table.size(), b.table.size());
  for (std::size_t i = 0; i < a.table.size(); ++i) EXPECT_EQ(a.table[i], b.table[i]);
}

TEST(SpanningRank, SymmetricPowersSpan) {
  const Representation j = fuchsian_free(2, 2.0);
  EXPECT_EQ(spanning_rank(j), 2);
  EXPECT_EQ(spanning_rank(lift_sym(j, 2)), 3);
  EXPECT_EQ(spanning_rank(lift_sym(j, 3)), 4);
}
