#pragma once
//
// Test representations with known ground truth: ping-pong Fuchsian
// representations of free groups, the regular octagon genus-2 surface
// group, functorial lifts, random deformations and block-triangular reps.
//

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "anosov/errors.hpp"
#include "anosov/linalg.hpp"
#include "anosov/representation.hpp"
#include "anosov/words.hpp"

namespace anosov {

/// Disjoint attracting/repelling boundary arcs proving that the
/// generators play ping-pong on the circle.
struct PingPongCertificate {
  double t = 0.0;
  double arcRadius = 0.0;           // half-width of every arc
  std::vector<double> endpoints;    // boundary angles, attracting then repelling per generator
  double minSeparation = 0.0;       // smallest circular distance between arc centres
  bool passes() const { return minSeparation > 2.0 * arcRadius; }
};

inline Eigen::Matrix2d rotation2(double phi) {
  Eigen::Matrix2d r;
  r << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return r;
}

/// Angles measured on the boundary circle: theta_i places the attracting
/// endpoint of generator i at angle theta_i and the repelling one opposite.
inline PingPongCertificate pingpong_certificate(double t, const std::vector<double>& angles) {
  if (!(t > 0.0)) throw PreconditionError("translation strength t must be positive");
  PingPongCertificate c;
  c.t = t;
  c.arcRadius = 2.0 * std::atan(std::exp(-t));
  for (double th : angles) {
    c.endpoints.push_back(std::remainder(th, 2.0 * M_PI));
    c.endpoints.push_back(std::remainder(th + M_PI, 2.0 * M_PI));
  }
  c.minSeparation = 2.0 * M_PI;
  for (std::size_t i = 0; i < c.endpoints.size(); ++i) {
    for (std::size_t j = i + 1; j < c.endpoints.size(); ++j) {
      const double d = std::abs(std::remainder(c.endpoints[i] - c.endpoints[j], 2.0 * M_PI));
      c.minSeparation = std::min(c.minSeparation, d);
    }
  }
  if (angles.size() <= 1) c.minSeparation = M_PI;
  return c;
}

inline std::vector<double> default_angles(int k) {
  std::vector<double> a;
  for (int i = 0; i < k; ++i) a.push_back(M_PI * i / k);
  return a;
}

/// Generator i = R(theta_i / 2) diag(e^t, e^-t) R(-theta_i / 2). The model
/// is a free group anchored by this very representation.
inline Representation fuchsian_free(int k, double t, std::vector<double> angles = {}) {
  if (k < 1) throw PreconditionError("rank must be >= 1");
  if (angles.empty()) angles = default_angles(k);
  if (static_cast<int>(angles.size()) != k) throw PreconditionError("need one angle per generator");
  const PingPongCertificate cert = pingpong_certificate(t, angles);
  if (k > 1 && !cert.passes())
    throw PingPongFailure("ping-pong arcs of radius " + std::to_string(cert.arcRadius) + " overlap (min separation " +
                          std::to_string(cert.minSeparation) + ")");
  std::vector<Eigen::Matrix2d> anchor;
  std::vector<Matrix> gens, invs;
  for (double th : angles) {
    const Eigen::Matrix2d r = rotation2(th / 2.0);
    const Eigen::Matrix2d g = r * Eigen::Vector2d(std::exp(t), std::exp(-t)).asDiagonal() * r.transpose();
    anchor.push_back(g);
    gens.push_back(g);
    invs.push_back(r * Eigen::Vector2d(std::exp(-t), std::exp(t)).asDiagonal() * r.transpose());
  }
  return Representation(GroupModel::free_anchored(k, anchor), gens, false, {}, invs);
}

/// Side pairings of the regular hyperbolic octagon with interior angles
/// pi/4, generators a, b, c, d with a b a^-1 b^-1 c d c^-1 d^-1 = 1.
inline std::vector<Eigen::Matrix2d> octagon_generators() {
  Eigen::Matrix2d a, b, c, d;
  a << 3.2608807552165855, 3.260880755216585, -0.15333280715651032, 0.15333280715651032;
  b << -0.49026144574907221, -1.707106781186547, 1.707106781186547, 3.9044750081221662;
  c << 0.15333280715651032, 0.15333280715651032, -3.2608807552165855, 3.260880755216585;
  d << 3.9044750081221662, -1.707106781186547, 1.7071067811865472, -0.49026144574907221;
  return {a, b, c, d};
}

inline Representation surface_octagon(int bfsRadius = 5) {
  const auto gens = octagon_generators();
  auto model = GroupModel::surface(2, gens, bfsRadius);
  return Representation(model, std::vector<Matrix>(gens.begin(), gens.end()), false);
}

/// Representation with every generator sent to the same matrix family.
inline Representation from_generators(std::shared_ptr<const GroupModel> model, std::vector<Matrix> gens,
                                      bool unimodularize = false) {
  return Representation(std::move(model), std::move(gens), unimodularize);
}

/// All generators map to the identity of GL(d).
inline Representation trivial_rep(std::shared_ptr<const GroupModel> model, int d) {
  return Representation(model, std::vector<Matrix>(static_cast<std::size_t>(model->rank()), Matrix::Identity(d, d)));
}

// ---------------------------------------------------------------------------
// Lifts
// ---------------------------------------------------------------------------

/// Generator-wise application of a matrix functor. The functor is a group
/// homomorphism, so it is applied to the stored inverses as well. Block
/// structure is dropped since functors do not preserve it in general.
inline Representation lift(const Representation& rho, const std::function<Matrix(const Matrix&)>& functor) {
  std::vector<Matrix> gens, invs;
  for (int i = 1; i <= rho.rank(); ++i) {
    gens.push_back(functor(rho.generator(i)));
    invs.push_back(functor(rho.inverse(i)));
  }
  return Representation(rho.model_ptr(), std::move(gens), false, {}, std::move(invs));
}

inline Representation lift_sym(const Representation& rho, int q, SymBasis basis = SymBasis::Orthonormal) {
  return lift(rho, [&](const Matrix& g) { return symmetric_power(g, q, basis); });
}

inline Representation lift_exterior(const Representation& rho, int k) {
  if (k < 1 || k > rho.dim()) throw PreconditionError("exterior power index out of range");
  return lift(rho, [&](const Matrix& g) { return exterior_power(g, k); });
}

/// g -> g^-T, read off the stored inverse instead of inverting again.
inline Representation lift_dual(const Representation& rho) {
  std::vector<Matrix> gens, invs;
  for (int i = 1; i <= rho.rank(); ++i) {
    gens.push_back(rho.inverse(i).transpose());
    invs.push_back(rho.generator(i).transpose());
  }
  return Representation(rho.model_ptr(), std::move(gens), false, {}, std::move(invs));
}

inline Representation lift_tensor(const Representation& a, const Representation& b) {
  detail::require_same_model(a, b);
  std::vector<Matrix> gens, invs;
  for (int i = 1; i <= a.rank(); ++i) {
    gens.push_back(tensor(a.generator(i), b.generator(i)));
    invs.push_back(tensor(a.inverse(i), b.inverse(i)));
  }
  return Representation(a.model_ptr(), std::move(gens), false, {}, std::move(invs));
}

inline Representation lift_sum(const Representation& a, const Representation& b) {
  detail::require_same_model(a, b);
  std::vector<Matrix> gens, invs;
  for (int i = 1; i <= a.rank(); ++i) {
    gens.push_back(direct_sum(a.generator(i), b.generator(i)));
    invs.push_back(direct_sum(a.inverse(i), b.inverse(i)));
  }
  std::vector<int> blocks{a.dim(), b.dim()};
  return Representation(a.model_ptr(), std::move(gens), false, blocks, std::move(invs));
}

/// Realification of a complex representation given by real and imaginary
/// parts of each generator.
inline Representation lift_complexify(std::shared_ptr<const GroupModel> model, const std::vector<Matrix>& re,
                                      const std::vector<Matrix>& im) {
  if (re.size() != im.size()) throw PreconditionError("complexify: real and imaginary parts differ in count");
  std::vector<Matrix> gens;
  for (std::size_t i = 0; i < re.size(); ++i) gens.push_back(complexify(re[i], im[i]));
  return Representation(std::move(model), std::move(gens), false);
}

inline Representation lift_complexify(const Representation& rho) {
  return lift(rho, [](const Matrix& g) { return complexify(g, Matrix::Zero(g.rows(), g.cols())); });
}

// ---------------------------------------------------------------------------
// Deformations and block-triangular representations
// ---------------------------------------------------------------------------

/// Uniform double in [0, 1) from the top 53 bits, identical on every
/// platform (std::uniform_real_distribution is not).
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline Matrix random_matrix(std::mt19937_64& rng, int rows, int cols) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = 2.0 * uniform01(rng) - 1.0;
  return m;
}

/// Each generator multiplied by exp(eps * X) with X a random trace-free
/// matrix of unit Frobenius norm.
inline Representation deform(const Representation& rho, double eps, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int d = rho.dim();
  std::vector<Matrix> gens, invs;
  for (int i = 1; i <= rho.rank(); ++i) {
    Matrix x = random_matrix(rng, d, d);
    x.diagonal().array() -= x.trace() / d;
    x /= x.norm();
    const Matrix e = (eps * x).exp();
    const Matrix einv = (-eps * x).exp();
    gens.push_back(rho.generator(i) * e);
    invs.push_back(einv * rho.inverse(i));
  }
  return Representation(rho.model_ptr(), std::move(gens), rho.unimodularized(), rho.blocks(), std::move(invs));
}

/// Upper block-triangular [[A, C], [0, B]] with a random cocycle block C
/// scaled by `scale` (zero gives the direct sum).
inline Representation block_triangular(const Representation& a, const Representation& b, std::uint64_t seed,
                                       double scale = 1.0) {
  detail::require_same_model(a, b);
  std::mt19937_64 rng(seed);
  std::vector<Matrix> gens, invs;
  for (int i = 1; i <= a.rank(); ++i) {
    const Matrix c = scale * random_matrix(rng, a.dim(), b.dim());
    Matrix g = direct_sum(a.generator(i), b.generator(i));
    g.topRightCorner(a.dim(), b.dim()) = c;
    Matrix inv = direct_sum(a.inverse(i), b.inverse(i));
    inv.topRightCorner(a.dim(), b.dim()) = -a.inverse(i) * c * b.inverse(i);
    gens.push_back(g);
    invs.push_back(inv);
  }
  return Representation(a.model_ptr(), std::move(gens), false, {a.dim(), b.dim()}, std::move(invs));
}

/// Zeroes every block above the block diagonal.
inline Representation semisimplify(const Representation& rho) {
  if (rho.blocks().empty()) throw PreconditionError("semisimplify needs a representation with declared blocks");
  // the diagonal blocks of g^-1 are the inverses of those of g
  auto strip = [&](Matrix m) {
    int off = 0;
    for (int b : rho.blocks()) {
      m.block(off, off + b, b, rho.dim() - off - b).setZero();
      off += b;
    }
    return m;
  };
  std::vector<Matrix> gens, invs;
  for (int i = 1; i <= rho.rank(); ++i) {
    gens.push_back(strip(rho.generator(i)));
    invs.push_back(strip(rho.inverse(i)));
  }
  return Representation(rho.model_ptr(), std::move(gens), false, rho.blocks(), std::move(invs));
}

}  // namespace anosov
