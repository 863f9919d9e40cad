#pragma once
//
// Hilbert geometry of the Klein ball and the open simplex, orbit
// displacements of projective actions, and the comparison between
// Hilbert displacement and the extreme singular value gap.
//

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "anosov/errors.hpp"
#include "anosov/linalg.hpp"
#include "anosov/parallel.hpp"
#include "anosov/representation.hpp"
#include "anosov/verdict.hpp"
#include "anosov/words.hpp"

namespace anosov {

/// Points are given in an affine chart of dimension dim(); the projective
/// action is by (dim()+1)x(dim()+1) matrices on lifts.
///  Ball:    |x| < 1, lift (x, 1), chart v -> v[0..d) / v[d].
///  Simplex: x_i > 0, sum x_i < 1, lift (x, 1 - sum x), chart v -> v[0..d) / sum v.
class ConvexDomain {
 public:
  enum class Kind { Ball, Simplex };

  static ConvexDomain ball(int dim) { return ConvexDomain(Kind::Ball, dim); }
  static ConvexDomain simplex(int dim) { return ConvexDomain(Kind::Simplex, dim); }
  /// "ball:d" or "simplex:d".
  static ConvexDomain parse(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ParseError("domain must look like ball:d or simplex:d");
    int d = 0;
    try {
      d = std::stoi(text.substr(colon + 1));
    } catch (const std::logic_error&) {
      throw ParseError("bad domain dimension in '" + text + "'");
    }
    const std::string kind = text.substr(0, colon);
    if (kind == "ball") return ball(d);
    if (kind == "simplex") return simplex(d);
    throw ParseError("unknown domain kind '" + kind + "'");
  }

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  std::string name() const { return (kind_ == Kind::Ball ? "ball:" : "simplex:") + std::to_string(dim_); }

  /// Distance-like margin to the boundary (1 - |x| or min barycentric).
  double margin(const Vector& x) const {
    check_dim(x);
    if (kind_ == Kind::Ball) return 1.0 - x.norm();
    return std::min(x.minCoeff(), 1.0 - x.sum());
  }
  bool contains(const Vector& x, double eps = 1e-12) const { return margin(x) > eps; }

  Vector lift(const Vector& x) const {
    check_dim(x);
    Vector v(dim_ + 1);
    v.head(dim_) = x;
    v(dim_) = kind_ == Kind::Ball ? 1.0 : 1.0 - x.sum();
    return v;
  }

  /// Chart image of a lift; throws OrbitEscape if it leaves the domain.
  Vector chart(const Vector& v) const {
    const double w = kind_ == Kind::Ball ? v(dim_) : v.sum();
    if (!(std::abs(w) > 0.0)) throw OrbitEscape("point left the affine chart");
    Vector x = v.head(dim_) / w;
    if (kind_ == Kind::Simplex && (v.array() / w).minCoeff() <= 0.0) throw OrbitEscape("point left the simplex");
    if (!contains(x)) throw OrbitEscape("point left the domain (margin " + std::to_string(margin(x)) + ")");
    return x;
  }

  Vector center() const {
    if (kind_ == Kind::Ball) return Vector::Zero(dim_);
    return Vector::Constant(dim_, 1.0 / (dim_ + 1));
  }

 private:
  ConvexDomain(Kind k, int d) : kind_(k), dim_(d) {
    if (d < 1) throw PreconditionError("domain dimension must be >= 1");
  }
  void check_dim(const Vector& x) const {
    if (x.size() != dim_) throw PreconditionError("point dimension does not match the domain");
  }
  Kind kind_;
  int dim_;
};

namespace detail {

/// Positive root of a s^2 + 2 b s + c = 0 with a > 0, c < 0, without
/// cancellation.
inline double positive_root(double a, double b, double c) {
  const double disc = std::sqrt(b * b - a * c);
  return b > 0.0 ? -c / (b + disc) : (disc - b) / a;
}

}  // namespace detail

/// Half the log cross-ratio of x, y and the two boundary points on the
/// chord. Both exit parameters are measured from the nearer endpoint so
/// the result stays accurate close to the boundary.
inline double hilbert_distance(const ConvexDomain& omega, const Vector& x, const Vector& y) {
  const double mx = omega.margin(x), my = omega.margin(y);
  if (!(mx > 1e-12) || !(my > 1e-12)) throw BoundaryDegenerate("point within 1e-12 of the boundary");
  const Vector u = y - x;
  if (u.norm() == 0.0) return 0.0;
  double back = 0.0, fwd = 0.0;  // chord exits at x - back*u and y + fwd*u
  if (omega.kind() == ConvexDomain::Kind::Ball) {
    const double a = u.squaredNorm();
    back = detail::positive_root(a, -x.dot(u), x.squaredNorm() - 1.0);
    fwd = detail::positive_root(a, y.dot(u), y.squaredNorm() - 1.0);
  } else {
    const Vector p = omega.lift(x), q = omega.lift(y);
    Vector du = q - p;
    back = fwd = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < du.size(); ++i) {
      if (du(i) > 0.0) back = std::min(back, p(i) / du(i));
      if (du(i) < 0.0) fwd = std::min(fwd, -q(i) / du(i));
    }
  }
  if (!(back > 0.0) || !(fwd > 0.0) || !std::isfinite(back) || !std::isfinite(fwd))
    throw BoundaryDegenerate("chord-boundary intersection is ill-conditioned");
  return 0.5 * (std::log1p(1.0 / back) + std::log1p(1.0 / fwd));
}

/// Closed form on the simplex: half the log of max_{i,j} p_i q_j / (p_j q_i)
/// in barycentric coordinates.
inline double simplex_hilbert_closed_form(const Vector& x, const Vector& y) {
  const ConvexDomain s = ConvexDomain::simplex(static_cast<int>(x.size()));
  const Vector p = s.lift(x), q = s.lift(y);
  const Eigen::ArrayXd r = (q.array() / p.array()).log();
  return 0.5 * (r.maxCoeff() - r.minCoeff());
}

/// Applies g (as a projective map on lifts) to x.
inline Vector projective_apply(const ConvexDomain& omega, const Matrix& g, const Vector& x) {
  return omega.chart(g * omega.lift(x));
}

namespace detail {

/// A domain point carried as a unit lift. For the ball, logQ tracks
/// log(v_d^2 - |v_head|^2) through the action: a ball-preserving map is a
/// conformal Lorentz map, so Q(Mv) = |det M|^(2/n) Q(v) exactly, while
/// recomputing Q from coordinates cancels catastrophically near the boundary.
struct OrbitPoint {
  Vector v;
  double logQ = 0.0;
};

inline OrbitPoint orbit_start(const ConvexDomain& omega, const Vector& x) {
  Vector v = omega.lift(x);
  const double n = v.norm();
  v /= n;
  const double r = x.norm();
  const double logQ = omega.kind() == ConvexDomain::Kind::Ball ? std::log1p(-r) + std::log1p(r) - 2.0 * std::log(n) : 0.0;
  return {v, logQ};
}

/// Applies m, whose determinant is exp(logAbsDet), and checks that the
/// orbit stays in the domain and, for the ball, that Q is preserved.
inline void orbit_step(const ConvexDomain& omega, const Matrix& m, double logAbsDet, OrbitPoint& p) {
  const int n = omega.dim() + 1;
  Vector w = m * p.v;
  const double norm = w.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw OrbitEscape("orbit lift vanished or overflowed");
  w /= norm;
  if (omega.kind() == ConvexDomain::Kind::Ball) {
    p.logQ += 2.0 * logAbsDet / n - 2.0 * std::log(norm);
    const double direct = w(n - 1) * w(n - 1) - w.head(n - 1).squaredNorm();
    if (std::abs(direct - std::exp(p.logQ)) > 1e-9) throw OrbitEscape("orbit does not preserve the ball");
    if (w(n - 1) < 0.0) w = -w;
  } else {
    if (w.sum() < 0.0) w = -w;
    if (!(w.minCoeff() > 0.0)) throw OrbitEscape("point left the simplex");
  }
  p.v = w;
}

/// Hilbert distance between orbit points. Nearby pairs use the chord
/// formula; distant ball pairs use cosh d = B(p, q) / sqrt(Q(p) Q(q)), and
/// simplex pairs the barycentric closed form, both read off the lifts.
inline double orbit_distance(const ConvexDomain& omega, const OrbitPoint& a, const OrbitPoint& b) {
  const int n = omega.dim() + 1;
  if (omega.kind() == ConvexDomain::Kind::Simplex) {
    const Eigen::ArrayXd r = (b.v.array() / a.v.array()).log();
    return 0.5 * (r.maxCoeff() - r.minCoeff());
  }
  const double B = a.v(n - 1) * b.v(n - 1) - a.v.head(n - 1).dot(b.v.head(n - 1));
  if (B > 0.0) {
    const double logC = std::log(B) - 0.5 * (a.logQ + b.logQ);
    // acosh(c) = log(2c) up to c^-2 once c is large; c itself may overflow
    if (logC > 20.0) return logC + std::log(2.0);
    const double c = std::exp(logC);
    if (c > 1.6) return std::acosh(c);
  }
  return hilbert_distance(omega, omega.chart(a.v), omega.chart(b.v));
}

}  // namespace detail

struct Displacement {
  double perOrbit = 0.0;  // d(g x0, x0)
  double stable = 0.0;    // d(g^N x0, x0) / N
  double bracket = 0.0;   // |stable(N) - stable(N/2)|
  int N = 0;
};

/// Orbit displacement of rho(g) on omega; the orbit is advanced one
/// application at a time on normalized lifts.
inline Displacement hilbert_displacement(const Representation& rho, const ConvexDomain& omega, const Word& g,
                                         const Vector& x0, int N) {
  if (rho.dim() != omega.dim() + 1) throw PreconditionError("representation dimension must be domain dimension + 1");
  if (N < 2) throw PreconditionError("N must be >= 2");
  if (!omega.contains(x0)) throw PreconditionError("base point must be interior");
  rho.model().check_word(g);
  ScaledMatrix m = ScaledMatrix::identity(rho.dim());
  double logDet = 0.0;
  for (Letter l : g.letters()) {
    m = m * rho.letter_image(l).base();
    logDet += rho.letter_image(l).logAbsDet;
  }
  const double matLogDet = logDet - rho.dim() * m.logScale;
  const detail::OrbitPoint start = detail::orbit_start(omega, x0);
  detail::OrbitPoint p = start;
  Displacement d;
  d.N = N;
  double half = 0.0;
  for (int k = 1; k <= N; ++k) {
    detail::orbit_step(omega, m.mat, matLogDet, p);
    if (k == 1) d.perOrbit = detail::orbit_distance(omega, p, start);
    if (k == N / 2) half = detail::orbit_distance(omega, p, start) / (N / 2);
    if (k == N) d.stable = detail::orbit_distance(omega, p, start) / N;
  }
  d.bracket = std::abs(d.stable - half);
  return d;
}

/// Orthogonal change of basis sending the orthonormal symmetric-square
/// basis to coordinates where sym^2(SL(2,R)) preserves X^2 + Y^2 - Z^2, so
/// it acts on the Klein disc with the point stabilized by rotations at the
/// centre.
inline Matrix klein_conjugator() {
  const double s = 1.0 / std::sqrt(2.0);
  Matrix j(3, 3);
  j << s, 0, -s, 0, 1, 0, s, 0, s;
  return j;
}

/// The Ball(2) action of a 2x2 unimodular representation.
inline Representation klein_action(const Representation& rho2) {
  if (rho2.dim() != 2) throw PreconditionError("klein_action needs a 2x2 representation");
  const Matrix j = klein_conjugator();
  std::vector<Matrix> gens, invs;
  for (int i = 1; i <= rho2.rank(); ++i) {
    const Matrix& g = rho2.generator(i);
    if (std::abs(std::abs(g.determinant()) - 1.0) > 1e-9) throw PreconditionError("klein_action needs unimodular generators");
    gens.push_back(j * symmetric_power(g, 2) * j.transpose());
    invs.push_back(j * symmetric_power(rho2.inverse(i), 2) * j.transpose());
  }
  return Representation(rho2.model_ptr(), std::move(gens), false, {}, std::move(invs));
}

struct Control1Result {
  double kappa = 0.0;
  double minSlack = 0.0;           // min over the ball of gap - 2 d + kappa
  Word witness;
  std::vector<double> perRadius;   // running max of the clamped violation
  Verdict verdict = Verdict::Inconclusive;
};

/// kappa = max over ball(R) of 2 d(g x0, x0) - <eps1 - eps_d, mu(rho g)>,
/// clamped below at 0.
inline Control1Result control1_check(const Representation& rho, const ConvexDomain& omega, const Vector& x0, int R,
                                     unsigned threads = 1, const Tolerances& tol = {}) {
  if (R < 0) throw PreconditionError("radius must be >= 0");
  if (rho.dim() != omega.dim() + 1) throw PreconditionError("representation dimension must be domain dimension + 1");
  if (!omega.contains(x0)) throw PreconditionError("base point must be interior");
  const int d = rho.dim();
  const ImageTable t = ball_images(rho, R, threads);
  std::vector<double> viol(t.size());
  parallel_for(t.size(), threads, [&](std::size_t i) {
    const detail::OrbitPoint start = detail::orbit_start(omega, x0);
    detail::OrbitPoint p = start;
    for (Letter l : t.words[i].letters()) detail::orbit_step(omega, rho.letter_matrix(l), rho.letter_image(l).logAbsDet, p);
    const CartanVector mu = cartan(t.images[i]);
    viol[i] = 2.0 * detail::orbit_distance(omega, p, start) - (mu[0] - mu[d - 1]);
  });
  Control1Result r;
  r.perRadius.assign(static_cast<std::size_t>(R) + 1, 0.0);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (viol[i] > worst) {
      worst = viol[i];
      r.witness = t.words[i];
    }
    auto& slot = r.perRadius[t.words[i].size()];
    slot = std::max(slot, viol[i]);
  }
  for (std::size_t k = 1; k < r.perRadius.size(); ++k) r.perRadius[k] = std::max(r.perRadius[k], r.perRadius[k - 1]);
  r.kappa = std::max(0.0, worst);
  r.minSlack = std::numeric_limits<double>::infinity();
  for (double v : viol) r.minSlack = std::min(r.minSlack, r.kappa - v);
  r.verdict = plateau_verdict(r.perRadius, tol.plateauTol);
  return r;
}

}  // namespace anosov
