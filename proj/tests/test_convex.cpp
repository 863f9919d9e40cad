#include <gtest/gtest.h>

#include <random>

#include "anosov/convex.hpp"
#include "anosov/zoo.hpp"

using namespace anosov;

TEST(Domain, ParseContainsAndLift) {
  const ConvexDomain b = ConvexDomain::parse("ball:2");
  EXPECT_EQ(b.kind(), ConvexDomain::Kind::Ball);
  EXPECT_EQ(b.name(), "ball:2");
  EXPECT_TRUE(b.contains(Vector::Zero(2)));
  EXPECT_FALSE(b.contains(Vector::Constant(2, 0.8)));
  const ConvexDomain s = ConvexDomain::parse("simplex:2");
  EXPECT_NEAR(s.lift(s.center()).sum(), 1.0, 1e-15);
  EXPECT_THROW(ConvexDomain::parse("cube:2"), ParseError);
  EXPECT_THROW(ConvexDomain::parse("ball"), ParseError);
  EXPECT_THROW(ConvexDomain::ball(0), PreconditionError);
  EXPECT_THROW(b.margin(Vector::Zero(3)), PreconditionError);
}

TEST(Hilbert, KleinDiscFromCentreIsArctanh) {
  const ConvexDomain disc = ConvexDomain::ball(2);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI), rad(0.0, 1.0 - 1e-9);
  for (int i = 0; i < 1000; ++i) {
    const double r = rad(rng), th = ang(rng);
    Vector x(2);
    x << r * std::cos(th), r * std::sin(th);
    EXPECT_NEAR(hilbert_distance(disc, Vector::Zero(2), x), std::atanh(r), 1e-10 * std::max(1.0, std::atanh(r)));
  }
}

TEST(Hilbert, KleinDiscAlongDiameter) {
  const ConvexDomain disc = ConvexDomain::ball(2);
  Vector u(2);
  u << 0.6, 0.8;
  for (double s : {-0.9, -0.3, 0.0, 0.5, 0.999999}) {
    for (double t : {-0.99, 0.1, 0.7, 0.9999999}) {
      const double expected = std::abs(std::atanh(s) - std::atanh(t));
      EXPECT_NEAR(hilbert_distance(disc, s * u, t * u), expected, 1e-9 * std::max(1.0, expected));
    }
  }
}

TEST(Hilbert, SymmetricAndBoundaryDegenerate) {
  const ConvexDomain disc = ConvexDomain::ball(2);
  Vector x(2), y(2);
  x << 0.3, -0.2;
  y << -0.5, 0.6;
  EXPECT_NEAR(hilbert_distance(disc, x, y), hilbert_distance(disc, y, x), 1e-14);
  EXPECT_EQ(hilbert_distance(disc, x, x), 0.0);
  Vector edge(2);
  edge << 1.0, 0.0;
  EXPECT_THROW(hilbert_distance(disc, x, edge), BoundaryDegenerate);
}

TEST(Hilbert, SimplexMatchesClosedForm) {
  const ConvexDomain s = ConvexDomain::simplex(2);
  std::mt19937_64 rng(5);
  std::gamma_distribution<double> g(1.0, 1.0);
  auto sample = [&] {
    Vector v(3);
    for (int i = 0; i < 3; ++i) v(i) = g(rng);
    v /= v.sum();
    return Vector(v.head(2));
  };
  for (int i = 0; i < 200; ++i) {
    const Vector x = sample(), y = sample();
    const double c = simplex_hilbert_closed_form(x, y);
    EXPECT_NEAR(hilbert_distance(s, x, y), c, 1e-10 * std::max(1.0, c));
  }
}

TEST(Klein, DisplacementOfCentredAxesIsTranslationLength) {
  // symmetric generators have axes through the centre, so the orbit of the
  // centre moves along the axis and d(g^N 0, 0) / N is exact
  const Representation j = fuchsian_free(2, 1.0);
  const Representation k = klein_action(j);
  const ConvexDomain disc = ConvexDomain::ball(2);
  for (const char* w : {"a", "b", "aa", "B"}) {
    const Word g = Word::parse(w);
    const Displacement d = hilbert_displacement(k, disc, g, Vector::Zero(2), 50);
    const LyapunovVector lam = lyapunov(k, g);
    EXPECT_NEAR(d.stable, 0.5 * (lam[0] - lam[2]), 1e-9) << w;
    EXPECT_NEAR(d.perOrbit, 0.5 * (lam[0] - lam[2]), 1e-9) << w;
    EXPECT_LT(d.bracket, 1e-9);
  }
}

TEST(Klein, ActionPreservesTheDisc) {
  const Representation k = klein_action(fuchsian_free(2, 1.0));
  Matrix q = Matrix::Identity(3, 3);
  q(2, 2) = -1.0;
  for (int i = 1; i <= 2; ++i) {
    const Matrix& g = k.generator(i);
    EXPECT_LT((g.transpose() * q * g - q).norm(), 1e-12);
  }
  EXPECT_THROW(klein_action(lift_sym(fuchsian_free(2, 1.0), 2)), PreconditionError);
}

TEST(Control1, KleinActionHasZeroKappa) {
  // d(g 0, 0) is the hyperbolic displacement, which is half the gap of sym^2
  const Representation k = klein_action(fuchsian_free(2, 1.0));
  const Control1Result r = control1_check(k, ConvexDomain::ball(2), Vector::Zero(2), 5);
  EXPECT_NEAR(r.kappa, 0.0, 1e-9);
  EXPECT_EQ(r.verdict, Verdict::Consistent);
  EXPECT_THROW(control1_check(k, ConvexDomain::ball(3), Vector::Zero(3), 5), PreconditionError);
}

TEST(Displacement, RejectsBadArguments) {
  const Representation k = klein_action(fuchsian_free(2, 1.0));
  const ConvexDomain disc = ConvexDomain::ball(2);
  EXPECT_THROW(hilbert_displacement(k, disc, Word::parse("a"), Vector::Zero(2), 1), PreconditionError);
  EXPECT_THROW(hilbert_displacement(k, disc, Word::parse("a"), Vector::Constant(2, 0.9), 10), PreconditionError);
}

TEST(Hilbert, ProjectiveInvarianceOnKleinDisc) {
  const Representation k = klein_action(fuchsian_free(2, 1.0));
  const ConvexDomain disc = ConvexDomain::ball(2);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI), rad(0.0, 0.5);
  auto point = [&] {
    const double r = rad(rng), th = ang(rng);
    Vector x(2);
    x << r * std::cos(th), r * std::sin(th);
    return x;
  };
  for (int i = 0; i < 1000; ++i) {
    const Vector x = point(), y = point();
    const Matrix& g = k.letter_matrix(static_cast<Letter>(i % 2 == 0 ? 1 : -2));
    const double before = hilbert_distance(disc, x, y);
    const double after = hilbert_distance(disc, projective_apply(disc, g, x), projective_apply(disc, g, y));
    EXPECT_NEAR(before, after, 1e-9);
  }
}

TEST(Hilbert, SimplexSymmetryAndTriangleInequality) {
  const ConvexDomain s = ConvexDomain::simplex(2);
  std::mt19937_64 rng(23);
  std::gamma_distribution<double> g(1.0, 1.0);
  auto sample = [&] {
    Vector v(3);
    for (int i = 0; i < 3; ++i) v(i) = g(rng);
    v /= v.sum();
    return Vector(v.head(2));
  };
  for (int i = 0; i < 1000; ++i) {
    const Vector x = sample(), y = sample(), z = sample();
    const double xy = hilbert_distance(s, x, y), yz = hilbert_distance(s, y, z), xz = hilbert_distance(s, x, z);
    EXPECT_NEAR(xy, hilbert_distance(s, y, x), 1e-10 * std::max(1.0, xy));
    EXPECT_LE(xz, xy + yz + 1e-10);
  }
}

TEST(Displacement, IdentityAndRotationAreZero) {
  const ConvexDomain disc = ConvexDomain::ball(2);
  Vector x0(2);
  x0 << 0.2, 0.1;
  const Representation id = trivial_rep(GroupModel::free(1), 3);
  const Displacement d = hilbert_displacement(id, disc, Word::parse("a"), x0, 10);
  EXPECT_NEAR(d.perOrbit, 0.0, 1e-15);
  EXPECT_NEAR(d.stable, 0.0, 1e-15);
  Matrix rot = Matrix::Identity(3, 3);
  rot.topLeftCorner(2, 2) << std::cos(0.7), -std::sin(0.7), std::sin(0.7), std::cos(0.7);
  const Representation r(GroupModel::free(1), {rot});
  const Displacement dr = hilbert_displacement(r, disc, Word::parse("a"), Vector::Zero(2), 20);
  EXPECT_NEAR(dr.stable, 0.0, 1e-12);
  EXPECT_NEAR(control1_check(r, disc, Vector::Zero(2), 4).kappa, 0.0, 1e-12);
}

TEST(Displacement, NonInvariantMapEscapes) {
  Matrix m = Matrix::Identity(3, 3);
  m(0, 0) = 3.0;
  const Representation r(GroupModel::free(1), {m});
  EXPECT_THROW(hilbert_displacement(r, ConvexDomain::ball(2), Word::parse("a"), Vector::Zero(2), 4), OrbitEscape);
}
