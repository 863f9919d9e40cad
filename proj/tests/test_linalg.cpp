#include <gtest/gtest.h>

#include <random>

#include "anosov/linalg.hpp"
#include "anosov/zoo.hpp"

using namespace anosov;

namespace {

Matrix diag(std::initializer_list<double> v) {
  Vector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d(i++) = x;
  return d.asDiagonal();
}

/// k = R(alpha) diag(s, 1/s) R(beta) with s in [1/2, 2], and its inverse
/// written down exactly.
std::pair<Matrix, Matrix> random_sl2(std::mt19937_64& rng) {
  const double s = std::exp((2.0 * uniform01(rng) - 1.0) * std::log(2.0));
  const double a = 2.0 * M_PI * uniform01(rng), b = 2.0 * M_PI * uniform01(rng);
  const Matrix k = rotation2(a) * Eigen::Vector2d(s, 1.0 / s).asDiagonal() * rotation2(b);
  const Matrix kinv = rotation2(-b) * Eigen::Vector2d(1.0 / s, s).asDiagonal() * rotation2(-a);
  return {k, kinv};
}

Matrix random_gl(std::mt19937_64& rng, int d) {
  for (;;) {
    Matrix m = random_matrix(rng, d, d);
    if (std::abs(m.determinant()) > 0.1) return m;
  }
}

}  // namespace

TEST(Cartan, DiagonalMatrix) {
  const CartanVector mu = cartan(ElementImage::from(diag({4.0, 1.0, 0.25})));
  EXPECT_NEAR(mu[0], std::log(4.0), 1e-14);
  EXPECT_NEAR(mu[1], 0.0, 1e-14);
  EXPECT_NEAR(mu[2], -std::log(4.0), 1e-14);
}

TEST(Cartan, SortedAndSumsToLogDet) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix g = random_gl(rng, 4);
    const CartanVector mu = cartan(ElementImage::from(g));
    for (int i = 0; i + 1 < 4; ++i) EXPECT_GE(mu[i], mu[i + 1]);
    double s = 0.0;
    for (double x : mu.entries) s += x;
    EXPECT_NEAR(s, std::log(std::abs(g.determinant())), 1e-10);
  }
}

TEST(Cartan, ScaledMatrixMatchesTowerForModerateProducts) {
  std::mt19937_64 rng(3);
  const Matrix a = random_gl(rng, 3), b = random_gl(rng, 3);
  ScaledMatrix s = ScaledMatrix::identity(3);
  ElementImage t = ElementImage::identity(3);
  for (int k = 0; k < 6; ++k) {
    s = s * ScaledMatrix::from(k % 2 ? a : b);
    t = t * ElementImage::from(k % 2 ? a : b);
  }
  const CartanVector ms = cartan(s), mt = cartan(t);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(ms[i], mt[i], 1e-9);
}

TEST(Cartan, LongProductKeepsSmallSingularValues) {
  // diag(e, 1, 1/e)^200 has exact Cartan projection (200, 0, -200)
  const Matrix g = diag({std::exp(1.0), 1.0, std::exp(-1.0)});
  Matrix k = Matrix::Identity(3, 3);
  k.topLeftCorner(2, 2) = rotation2(0.4);
  const Matrix c = k * g * k.transpose();
  ElementImage t = ElementImage::identity(3);
  const ElementImage one = ElementImage::from(c);
  for (int i = 0; i < 200; ++i) t = t * one;
  const CartanVector mu = cartan(t);
  EXPECT_NEAR(mu[0], 200.0, 1e-9);
  EXPECT_NEAR(mu[1], 0.0, 1e-9);
  EXPECT_NEAR(mu[2], -200.0, 1e-9);
  const LyapunovVector lam = lyapunov(t);
  EXPECT_NEAR(lam[0], 200.0, 1e-6);
  EXPECT_NEAR(lam[1], 0.0, 1e-6);
  EXPECT_NEAR(lam[2], -200.0, 1e-6);
}

TEST(Lyapunov, ConjugationInvariant) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix g = random_gl(rng, 3), k = random_gl(rng, 3);
    const LyapunovVector a = lyapunov(ElementImage::from(g));
    const LyapunovVector b = lyapunov(ElementImage::from(k * g * k.inverse()));
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(a[i], b[i], 1e-8);
  }
}

TEST(Lyapunov, RotationHasEqualModuli) {
  Matrix r(2, 2);
  r << std::cos(0.3), -std::sin(0.3), std::sin(0.3), std::cos(0.3);
  const LyapunovVector lam = lyapunov(ElementImage::from(2.0 * r));
  EXPECT_NEAR(lam[0], std::log(2.0), 1e-14);
  EXPECT_NEAR(lam[1], std::log(2.0), 1e-14);
}

TEST(Functional, ParseAndEvaluate) {
  const std::vector<double> v{3.0, 1.0, -4.0};
  EXPECT_DOUBLE_EQ(LinearFunctional::parse("eps:1")(v), 3.0);
  EXPECT_DOUBLE_EQ(LinearFunctional::parse("root:1")(v), 2.0);
  EXPECT_DOUBLE_EQ(LinearFunctional::parse("root:2")(v), 5.0);
  // omega_1 = eps_1 - mean
  EXPECT_DOUBLE_EQ(LinearFunctional::parse("weight:1")(v), 3.0);
  EXPECT_DOUBLE_EQ(LinearFunctional::parse("weight:2")(v), 4.0);
  EXPECT_DOUBLE_EQ(LinearFunctional::parse("custom:1,-1,0")(v), 2.0);
  EXPECT_THROW(LinearFunctional::parse("custom:1,1,0"), PreconditionError);
  EXPECT_THROW(LinearFunctional::parse("root:3")(v), PreconditionError);
  EXPECT_THROW(LinearFunctional::parse("bogus:1"), ParseError);
}

TEST(Functors, ExteriorPowerSingularValues) {
  std::mt19937_64 rng(13);
  const Matrix g = random_gl(rng, 4);
  const Vector s = Eigen::JacobiSVD<Matrix>(g).singularValues();
  const Matrix w = exterior_power(g, 2);
  EXPECT_EQ(w.rows(), 6);
  const Vector sw = Eigen::JacobiSVD<Matrix>(w).singularValues();
  EXPECT_NEAR(sw(0), s(0) * s(1), 1e-10);
  EXPECT_NEAR(exterior_power(g, 4)(0, 0), g.determinant(), 1e-10);
  EXPECT_TRUE(exterior_power(g, 1).isApprox(g));
}

TEST(Functors, ExteriorPowerIsMultiplicative) {
  std::mt19937_64 rng(17);
  const Matrix a = random_gl(rng, 4), b = random_gl(rng, 4);
  EXPECT_TRUE(exterior_power(a * b, 2).isApprox(exterior_power(a, 2) * exterior_power(b, 2), 1e-12));
}

TEST(Functors, SymmetricPowerIsMultiplicativeInBothBases) {
  std::mt19937_64 rng(19);
  const Matrix a = random_gl(rng, 2), b = random_gl(rng, 2);
  for (SymBasis basis : {SymBasis::Orthonormal, SymBasis::Monomial}) {
    for (int q = 1; q <= 4; ++q) {
      const Matrix lhs = symmetric_power(a * b, q, basis);
      const Matrix rhs = symmetric_power(a, q, basis) * symmetric_power(b, q, basis);
      EXPECT_TRUE(lhs.isApprox(rhs, 1e-12)) << "q=" << q;
    }
  }
}

TEST(Functors, SymmetricSquareMonomialExample) {
  Matrix g(2, 2);
  g << 1, 2, 3, 4;
  // (ax + by)^2, (ax + by)(cx + dy), (cx + dy)^2 in the basis x^2, xy, y^2
  Matrix expected(3, 3);
  expected << 1, 4, 4, 3, 10, 8, 9, 24, 16;
  EXPECT_TRUE(symmetric_power(g, 2, SymBasis::Monomial).isApprox(expected));
}

TEST(Functors, OrthonormalSymmetricPowerPreservesOrthogonality) {
  Matrix r(2, 2);
  r << std::cos(0.7), -std::sin(0.7), std::sin(0.7), std::cos(0.7);
  const Matrix s = symmetric_power(r, 3);
  EXPECT_TRUE((s * s.transpose()).isApprox(Matrix::Identity(4, 4), 1e-12));
}

TEST(Functors, SymmetricPowerCartanIdentity) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto [k, kinv] = random_sl2(rng);
    const double t = 0.5 + 2.5 * uniform01(rng);
    const Matrix g = k * diag({std::exp(t), std::exp(-t)}) * kinv;
    const Matrix ginv = k * diag({std::exp(-t), std::exp(t)}) * kinv;
    const double ls = std::log(Eigen::JacobiSVD<Matrix>(g).singularValues()(0));
    for (int q = 2; q <= 5; ++q) {
      const CartanVector mu = cartan(ElementImage::from_pair(symmetric_power(g, q), symmetric_power(ginv, q)));
      for (int j = 0; j <= q; ++j) EXPECT_NEAR(mu[j], (q - 2 * j) * ls, 1e-9);
    }
  }
}

TEST(ElementImage, ComplementaryWedgeMatchesMinors) {
  std::mt19937_64 rng(31);
  for (int d = 2; d <= 5; ++d) {
    const Matrix g = random_gl(rng, d);
    const ElementImage a = ElementImage::from_pair(g, g.inverse());
    EXPECT_NEAR(a.logAbsDet, std::log(std::abs(g.determinant())), 1e-10);
    for (int k = 1; k < d; ++k) {
      const ScaledMatrix& w = a.wedge[static_cast<std::size_t>(k - 1)];
      EXPECT_TRUE(w.represented().isApprox(exterior_power(g, k), 1e-10)) << "d=" << d << " k=" << k;
    }
  }
}

TEST(Functors, TensorDualSumComplexify) {
  std::mt19937_64 rng(29);
  const Matrix a = random_gl(rng, 2), b = random_gl(rng, 3);
  const Matrix t = tensor(a, b);
  EXPECT_EQ(t.rows(), 6);
  EXPECT_NEAR(t(0, 0), a(0, 0) * b(0, 0), 1e-15);
  EXPECT_NEAR(t(4, 2), a(1, 0) * b(1, 2), 1e-15);
  EXPECT_TRUE(dual(dual(a)).isApprox(a, 1e-12));
  const Matrix s = direct_sum(a, b);
  EXPECT_TRUE(s.topLeftCorner(2, 2).isApprox(a));
  EXPECT_TRUE(s.bottomRightCorner(3, 3).isApprox(b));
  EXPECT_TRUE(s.topRightCorner(2, 3).isZero());
  const Matrix c = complexify(a, Matrix::Zero(2, 2));
  EXPECT_EQ(c.rows(), 4);
  EXPECT_NEAR(std::abs(c.determinant()), a.determinant() * a.determinant(), 1e-10);
}

TEST(Proximal, DiagonalAttractorAndRepellor) {
  const ProximalData p = proximal_data(ScaledMatrix::from(diag({4.0, 1.0, 0.25})));
  EXPECT_NEAR(std::abs(p.attracting.dir()(0)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(p.repelling.normal()(0)), 1.0, 1e-14);
  EXPECT_NEAR(p.logTopModulus, std::log(4.0), 1e-14);
  EXPECT_TRUE(p.biproximal);
}

TEST(Proximal, RotationIsNotProximal) {
  Matrix r(2, 2);
  r << 0, -1, 1, 0;
  EXPECT_THROW(proximal_data(ScaledMatrix::from(r)), NotProximal);
}

TEST(Attractors, GapRequired) {
  EXPECT_THROW(attractor_plus(ScaledMatrix::from(Matrix::Identity(3, 3))), DegenerateGap);
  const ProjectivePoint p = attractor_plus(ElementImage::from(diag({3.0, 1.0, 1.0})));
  EXPECT_NEAR(std::abs(p.dir()(0)), 1.0, 1e-14);
  const Hyperplane h = attractor_minus(ElementImage::from(diag({3.0, 3.0, 1.0})));
  EXPECT_NEAR(std::abs(h.normal()(2)), 1.0, 1e-14);
}

TEST(Projective, DistancesAndCanonicalSign) {
  Vector x(2), y(2);
  x << 1, 0;
  y << -1, 0;
  EXPECT_NEAR(projective_distance(ProjectivePoint::from(x), ProjectivePoint::from(y)), 0.0, 1e-15);
  y << 1, 1;
  EXPECT_NEAR(projective_distance(ProjectivePoint::from(x), ProjectivePoint::from(y)), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(point_hyperplane_distance(ProjectivePoint::from(x), Hyperplane::with_normal(x)), 1.0, 1e-15);
  EXPECT_GT(ProjectivePoint::from(-x).dir()(0), 0.0);
}

TEST(ScaledMatrix, RenormalizationKeepsLogScale) {
  Matrix g = diag({1e10, 1e-10});
  ScaledMatrix s = ScaledMatrix::from(g);
  for (int i = 0; i < 30; ++i) s = s * ScaledMatrix::from(g);
  const CartanVector mu = cartan(s);
  EXPECT_NEAR(mu[0], 31 * std::log(1e10), 1e-8);
}
