#include <gtest/gtest.h>

#include "anosov/diagnostics.hpp"
#include "anosov/io.hpp"
#include "anosov/zoo.hpp"

using namespace anosov;

namespace {

ScanOptions opts(int radius, int cyclicLength = 6, unsigned threads = 1) {
  ScanOptions o;
  o.radius = radius;
  o.cyclicLength = cyclicLength;
  o.threads = threads;
  return o;
}

Representation unipotent() {
  Matrix u(2, 2);
  u << 1, 1, 0, 1;
  return Representation(GroupModel::free(1), {u});
}

Representation diagonal() {
  Matrix g = Matrix::Zero(3, 3);
  g.diagonal() << 2.0, 1.0, 1.0;
  return Representation(GroupModel::free(1), {g});
}

}  // namespace

TEST(Divergence, FuchsianGrowsTrivialAndDoubleDoNot) {
  const Representation j = fuchsian_free(2, 2.0);
  const Report r = divergence_profile(j, 1, opts(6));
  EXPECT_EQ(r.verdict, Verdict::Consistent);
  const auto& m = r.tables.at("minGap");
  for (std::size_t k = 1; k < m.size(); ++k) EXPECT_GT(m[k], m[k - 1]);
  EXPECT_EQ(divergence_profile(trivial_rep(GroupModel::free(2), 2), 1, opts(5)).verdict, Verdict::Inconsistent);
  const Report d = divergence_profile(lift_sum(j, j), 1, opts(5));
  EXPECT_EQ(d.verdict, Verdict::Inconsistent);
  for (double v : d.tables.at("minGap")) EXPECT_NEAR(v, 0.0, 1e-9);
  EXPECT_THROW(divergence_profile(j, 2, opts(3)), PreconditionError);
  EXPECT_THROW(divergence_profile(j, 1, opts(-1)), PreconditionError);
}

TEST(Qie, LinearForFuchsianLogarithmicForUnipotent) {
  const Report r = qie_check(fuchsian_free(2, 2.0), opts(6));
  EXPECT_EQ(r.verdict, Verdict::Consistent);
  EXPECT_GT(r.constants.at("lowerSlope"), 0.5);
  EXPECT_TRUE(std::isfinite(r.constants.at("C")));
  EXPECT_EQ(qie_check(trivial_rep(GroupModel::free(2), 2), opts(5)).verdict, Verdict::Inconsistent);
  // asinh(n/2) only separates from a line at moderate radius
  EXPECT_EQ(qie_check(unipotent(), opts(12)).verdict, Verdict::Inconsistent);
}

TEST(CCartan, FuchsianConsistentWithNonnegativeDefect) {
  const Report r = ccartan_check(fuchsian_free(2, 2.0), 1, opts(6));
  EXPECT_EQ(r.verdicts.at("i"), Verdict::Consistent);
  EXPECT_EQ(r.verdicts.at("ii"), Verdict::Consistent);
  EXPECT_GE(r.constants.at("ii.minDefect"), -1e-9);
  EXPECT_GT(r.constants.at("i.c"), 1.0);
  EXPECT_EQ(ccartan_check(trivial_rep(GroupModel::free(2), 2), 1, opts(5)).verdicts.at("i"), Verdict::Inconsistent);
}

TEST(CCartan, DefectNonnegativeAcrossLifts) {
  const Representation j = fuchsian_free(2, 1.5);
  for (const Representation& rho : {lift_sym(j, 2), lift_sym(j, 3), lift_tensor(j, lift_sym(j, 2)), deform(lift_sym(j, 2), 1e-2, 4)})
    EXPECT_GE(ccartan_check(rho, 1, opts(5)).constants.at("ii.minDefect"), -1e-9);
}

TEST(WeakGap, PositiveForFuchsianZeroOtherwise) {
  const Report r = weak_gap_check(fuchsian_free(2, 2.0), 1, opts(4, 6));
  EXPECT_EQ(r.verdict, Verdict::Consistent);
  EXPECT_GT(r.constants.at("c"), 0.0);
  const Report u = weak_gap_check(unipotent(), 1, opts(4, 6));
  EXPECT_NEAR(u.constants.at("c"), 0.0, 1e-6);
  EXPECT_EQ(u.verdict, Verdict::Inconsistent);
  const Representation j = fuchsian_free(2, 2.0);
  EXPECT_EQ(weak_gap_check(lift_sum(j, j), 1, opts(4, 5)).verdict, Verdict::Inconsistent);
}

TEST(PropertyU, FreeDefectHistogram) {
  const auto m = GroupModel::free(2);
  const Report r = property_u_defect(*m, opts(8));
  EXPECT_EQ(r.constants.at("maxDefect"), 6.0);
  const auto& h = r.tables.at("histogram");
  EXPECT_EQ(h.size(), 7u);
  EXPECT_EQ(h[1], 0.0);  // defects are even
  double total = 0.0;
  for (double x : h) total += x;
  EXPECT_EQ(total, 13121.0);
  EXPECT_THROW(property_u_defect(surface_octagon().model(), opts(3)), PreconditionError);
}

TEST(DirectSum, DiscriminatesSymmetricSquareFromItself) {
  const Representation j = fuchsian_free(2, 2.0);
  const Report good = directsum_check(lift_sym(j, 2), j, opts(6, 6));
  for (const char* k : {"2", "3", "4", "5"}) EXPECT_EQ(good.verdicts.at(k), Verdict::Consistent) << k;
  EXPECT_GT(good.constants.at("3.c"), 0.0);
  EXPECT_GT(good.constants.at("5.c"), 0.0);
  EXPECT_NE(good.settings.at("precondition").find("witness"), std::string::npos);
  const Report bad = directsum_check(j, j, opts(6, 6));
  for (const char* k : {"2", "3", "4", "5"}) EXPECT_EQ(bad.verdicts.at(k), Verdict::Inconsistent) << k;
  EXPECT_EQ(bad.verdict, Verdict::Inconsistent);
  EXPECT_THROW(directsum_check(j, fuchsian_free(3, 2.0), opts(3)), PreconditionError);
}

TEST(Tensor, EqualGapsAreInconsistent) {
  const Representation j = fuchsian_free(2, 2.0);
  EXPECT_EQ(tensor_check(j, j, opts(5, 5)).verdict, Verdict::Inconsistent);
  // eps1 - eps2 gap is 2t for every symmetric power
  EXPECT_EQ(tensor_check(lift_sym(j, 2), lift_sym(j, 4), opts(5, 5)).verdict, Verdict::Inconsistent);
  const Report r = tensor_check(lift_sym(j, 2), lift_sym(fuchsian_free(2, 1.2, {0.3, 2.0}), 2), opts(5, 5));
  EXPECT_TRUE(std::isfinite(r.constants.at("mu.c")));
}

TEST(Interval, ExactRatiosAndPrecondition) {
  const Representation j = fuchsian_free(2, 2.0);
  const Report half = interval_search(j, lift_sym(j, 2), 1, 2, 1.0, opts(5, 5));
  EXPECT_LT(half.constants.at("residual"), 1e-9);
  EXPECT_EQ(half.verdict, Verdict::Consistent);
  const Report one = interval_search(j, j, 1, 1, 1.0, opts(4, 4));
  EXPECT_EQ(one.constants.at("residual"), 0.0);
  EXPECT_THROW(interval_search(j, lift_sym(j, 2), 3, 1, 1.0, opts(4, 4)), PreconditionError);
  EXPECT_THROW(interval_search(j, j, 1, 0, 1.0, opts(4, 4)), PreconditionError);
}

TEST(Gromov, FuchsianComparableTrivialDegenerate) {
  const Report r = gromov_comparability(fuchsian_free(2, 2.0), 1, opts(6));
  EXPECT_EQ(r.verdicts.at("i"), Verdict::Consistent);
  EXPECT_TRUE(std::isfinite(r.constants.at("i.C")));
  EXPECT_EQ(gromov_comparability(trivial_rep(GroupModel::free(2), 2), 1, opts(4)).verdicts.at("i"), Verdict::Inconsistent);
  EXPECT_THROW(gromov_comparability(fuchsian_free(2, 2.0), 1, opts(2)), PreconditionError);
}

TEST(UgspGromov, FuchsianPlateausTrivialFailsPrecondition) {
  const Report r = ugsp_gromov_bounds(fuchsian_free(2, 2.0), 1.0, opts(5));
  EXPECT_TRUE(std::isfinite(r.constants.at("i.R")));
  EXPECT_TRUE(std::isfinite(r.constants.at("ii.L")));
  EXPECT_EQ(r.verdict, Verdict::Consistent);
  EXPECT_THROW(ugsp_gromov_bounds(trivial_rep(GroupModel::free(2), 2), 1.0, opts(5)), PreconditionError);
}

TEST(MuLambda, SearchImprovesOnIdentity) {
  const Report d = mu_lambda_search(diagonal(), Word::parse("aa"), 2);
  EXPECT_EQ(d.witnesses.at("f"), "");
  EXPECT_NEAR(d.constants.at("value"), 0.0, 1e-12);
  const Representation j = fuchsian_free(2, 2.0);
  const Report r = mu_lambda_search(j, Word::parse("aBa"), 2);
  EXPECT_LT(r.constants.at("value"), r.constants.at("valueAtIdentity"));
  EXPECT_EQ(mu_lambda_search(j, Word::parse("aBa"), 0).witnesses.at("f"), "");
  EXPECT_THROW(mu_lambda_search(j, Word::parse("a"), -1), PreconditionError);
}

TEST(HolderReport, ConstantsAndVerdict) {
  const Report r = holder_report(fuchsian_free(2, 2.0), opts(6, 6));
  EXPECT_NEAR(r.constants.at("singular"), 1.0, 1e-9);
  EXPECT_NEAR(r.constants.at("eigen"), 1.0, 1e-9);
  EXPECT_EQ(r.constants.at("spanningRank"), 2.0);
  EXPECT_EQ(r.verdict, Verdict::Consistent);
}

TEST(BlockTriangular, CartanDifferencePlateaus) {
  const Representation rho = block_triangular(fuchsian_free(2, 2.0), lift_sym(fuchsian_free(2, 1.3), 2), 3);
  const Representation ss = semisimplify(rho);
  std::vector<double> running;
  for (int R = 0; R <= 6; ++R) {
    double worst = 0.0;
    for (const Word& w : ball(rho.model(), R)) worst = std::max(worst, std::abs(cartan(rho, w)[0] - cartan(ss, w)[0]));
    running.push_back(worst);
  }
  EXPECT_EQ(plateau_verdict(running, 0.5), Verdict::Consistent);
}

TEST(Determinism, ReportsIndependentOfThreadCount) {
  const Representation rho = lift_sym(fuchsian_free(2, 1.5), 2);
  auto run = [&](unsigned threads) {
    const ScanOptions o = opts(5, 5, threads);
    return reports_json({divergence_profile(rho, 1, o), qie_check(rho, o), ccartan_check(rho, 1, o),
                         weak_gap_check(rho, 1, o), gromov_comparability(rho, 1, o), holder_report(rho, o)})
        .dump();
  };
  const std::string one = run(1);
  EXPECT_EQ(one, run(2));
  EXPECT_EQ(one, run(4));
}
