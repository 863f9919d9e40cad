#pragma once
//
// Matrix-level quantities for GL(d,R): log-scaled products, Cartan and
// Lyapunov projections, Cartan attractors, linear functionals on the
// Cartan subspace, and the functorial constructions (exterior, symmetric,
// tensor, direct sum, dual, complexification).
//

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "anosov/errors.hpp"

namespace anosov {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Default ratio threshold sigma_i/sigma_{i+1} below which a Cartan
/// attractor is considered undefined.
inline constexpr double kDefaultGapTol = 1.0 + 1e-6;

/// Condition number beyond which a plain product is declared unresolvable.
inline constexpr double kMaxCondition = 1e15;

// ---------------------------------------------------------------------------
// ScaledMatrix
// ---------------------------------------------------------------------------

/// A matrix stored as exp(logScale) * mat with the operator norm of `mat`
/// kept inside [1/2, 2].
struct ScaledMatrix {
  Matrix mat;
  double logScale = 0.0;

  int dim() const { return static_cast<int>(mat.rows()); }

  static ScaledMatrix identity(int d) { return {Matrix::Identity(d, d), 0.0}; }
  static ScaledMatrix from(const Matrix& m);

  /// exp(logScale) * mat; overflows for very long words.
  Matrix represented() const { return std::exp(logScale) * mat; }
};

/// Rescales `m.mat` so that its operator norm lies in [1/2, 2]. The
/// Frobenius norm is normalized to d^{1/4}, which brackets the operator
/// norm in [d^{-1/4}, d^{1/4}]; above d = 16 the exact norm is used.
inline void renormalize(ScaledMatrix& m) {
  const double d = static_cast<double>(m.mat.rows());
  double norm = m.mat.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) return;
  double target = std::pow(d, 0.25);
  if (d > 16) {
    norm = Eigen::JacobiSVD<Matrix>(m.mat).singularValues()(0);
    target = 1.0;
  }
  const double factor = norm / target;
  m.mat /= factor;
  m.logScale += std::log(factor);
}

inline ScaledMatrix ScaledMatrix::from(const Matrix& m) {
  ScaledMatrix out{m, 0.0};
  renormalize(out);
  return out;
}

inline ScaledMatrix operator*(const ScaledMatrix& a, const ScaledMatrix& b) {
  ScaledMatrix out{a.mat * b.mat, a.logScale + b.logScale};
  renormalize(out);
  return out;
}

/// True iff a and b represent the same matrix up to relative error `tol`
/// (measured against the larger of the two).
inline bool same_matrix(const ScaledMatrix& a, const ScaledMatrix& b, double tol) {
  const double shift = b.logScale - a.logScale;
  const Matrix diff = a.mat - std::exp(shift) * b.mat;
  const double ref = std::max(a.mat.norm(), std::exp(shift) * b.mat.norm());
  return diff.norm() <= tol * ref;
}

// ---------------------------------------------------------------------------
// Cartan / Lyapunov vectors
// ---------------------------------------------------------------------------

/// Descending log singular values (the Cartan projection).
struct CartanVector {
  std::vector<double> entries;
  int dim() const { return static_cast<int>(entries.size()); }
  double operator[](int i) const { return entries[static_cast<std::size_t>(i)]; }
};

/// Descending log moduli of eigenvalues (the Lyapunov projection).
struct LyapunovVector {
  std::vector<double> entries;
  int dim() const { return static_cast<int>(entries.size()); }
  double operator[](int i) const { return entries[static_cast<std::size_t>(i)]; }
};

namespace detail {

inline double safe_log(double x) {
  return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
}

inline std::vector<double> sorted_desc(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<double>());
  return v;
}

inline Vector singular_values(const Matrix& m) {
  if (m.rows() == 2 && m.cols() == 2) {
    // closed form, bitwise symmetric in the two singular values
    const double f = m.squaredNorm();
    const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const double disc = std::sqrt(std::max(0.0, f * f - 4.0 * det * det));
    const double s1sq = 0.5 * (f + disc);
    Vector sv(2);
    sv(0) = std::sqrt(s1sq);
    sv(1) = sv(0) > 0.0 ? std::abs(det) / sv(0) : 0.0;
    return sv;
  }
  return Eigen::JacobiSVD<Matrix>(m).singularValues();
}

inline double top_singular_value(const Matrix& m) { return singular_values(m)(0); }

inline std::vector<std::complex<double>> eigenvalues(const Matrix& m) {
  Eigen::EigenSolver<Matrix> es(m, false);
  std::vector<std::complex<double>> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) out[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
  return out;
}

inline double spectral_radius(const Matrix& m) {
  double r = 0.0;
  for (const auto& z : eigenvalues(m)) r = std::max(r, std::abs(z));
  return r;
}

}  // namespace detail

/// Cartan projection of the represented matrix, computed by a plain SVD of
/// `mat`. Accurate while sigma_d / sigma_1 stays well above machine
/// precision; products along long words should go through ElementImage.
inline CartanVector cartan(const ScaledMatrix& m) {
  const Vector sv = detail::singular_values(m.mat);
  CartanVector out;
  out.entries.reserve(static_cast<std::size_t>(sv.size()));
  for (Eigen::Index i = 0; i < sv.size(); ++i) out.entries.push_back(detail::safe_log(sv(i)) + m.logScale);
  return out;
}

inline LyapunovVector lyapunov(const ScaledMatrix& m) {
  std::vector<double> moduli;
  for (const auto& z : detail::eigenvalues(m.mat)) moduli.push_back(detail::safe_log(std::abs(z)) + m.logScale);
  return {detail::sorted_desc(std::move(moduli))};
}

/// log(sigma_1 / sigma_d) of the represented matrix.
inline double log_condition(const ScaledMatrix& m) {
  const Vector sv = detail::singular_values(m.mat);
  return detail::safe_log(sv(0)) - detail::safe_log(sv(sv.size() - 1));
}

// ---------------------------------------------------------------------------
// Projective objects
// ---------------------------------------------------------------------------

namespace detail {

inline Vector canonical_unit(const Vector& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw PreconditionError("cannot normalize a zero or non-finite vector");
  Vector u = v / n;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (std::abs(u(i)) > 1e-12) {
      if (u(i) < 0) u = -u;
      break;
    }
  }
  return u;
}

}  // namespace detail

/// A line in R^d, stored as a unit vector with canonical sign (first
/// coordinate of modulus above 1e-12 is positive).
class ProjectivePoint {
 public:
  static ProjectivePoint from(const Vector& v) { return ProjectivePoint(detail::canonical_unit(v)); }
  const Vector& dir() const { return dir_; }
  int dim() const { return static_cast<int>(dir_.size()); }

 private:
  explicit ProjectivePoint(Vector v) : dir_(std::move(v)) {}
  Vector dir_;
};

/// A hyperplane in R^d, stored through its canonical unit normal.
class Hyperplane {
 public:
  static Hyperplane with_normal(const Vector& n) { return Hyperplane(detail::canonical_unit(n)); }
  const Vector& normal() const { return normal_; }
  int dim() const { return static_cast<int>(normal_.size()); }

 private:
  explicit Hyperplane(Vector n) : normal_(std::move(n)) {}
  Vector normal_;
};

/// |sin| of the angle between two lines.
inline double projective_distance(const ProjectivePoint& p, const ProjectivePoint& q) {
  if (p.dim() != q.dim()) throw PreconditionError("projective_distance: dimension mismatch");
  // orthogonal component keeps small angles accurate
  const double c = p.dir().dot(q.dir());
  const double s = (p.dir() - c * q.dir()).norm();
  return std::min(1.0, s);
}

/// |<p, n>|: the sine of the angle between the line and the hyperplane.
inline double point_hyperplane_distance(const ProjectivePoint& p, const Hyperplane& h) {
  if (p.dim() != h.dim()) throw PreconditionError("point_hyperplane_distance: dimension mismatch");
  return std::min(1.0, std::abs(p.dir().dot(h.normal())));
}

/// Top left-singular direction of the represented matrix.
inline ProjectivePoint attractor_plus(const ScaledMatrix& m, double gapTol = kDefaultGapTol) {
  if (m.dim() < 2) throw PreconditionError("attractor_plus needs dimension >= 2");
  Eigen::JacobiSVD<Matrix> svd(m.mat, Eigen::ComputeFullU);
  const Vector& sv = svd.singularValues();
  if (!(sv(0) >= gapTol * sv(1))) throw DegenerateGap("attractor_plus: sigma_1/sigma_2 below gap tolerance");
  return ProjectivePoint::from(svd.matrixU().col(0));
}

/// Hyperplane spanned by the top d-1 left-singular directions.
inline Hyperplane attractor_minus(const ScaledMatrix& m, double gapTol = kDefaultGapTol) {
  if (m.dim() < 2) throw PreconditionError("attractor_minus needs dimension >= 2");
  Eigen::JacobiSVD<Matrix> svd(m.mat, Eigen::ComputeFullU);
  const Vector& sv = svd.singularValues();
  const Eigen::Index d = sv.size();
  if (!(sv(d - 2) >= gapTol * sv(d - 1)))
    throw DegenerateGap("attractor_minus: sigma_{d-1}/sigma_d below gap tolerance");
  return Hyperplane::with_normal(svd.matrixU().col(d - 1));
}

// ---------------------------------------------------------------------------
// Linear functionals on the Cartan subspace
// ---------------------------------------------------------------------------

/// epsilon_i, simple roots epsilon_i - epsilon_{i+1}, fundamental weights
/// omega_i = sum_{k<=i} epsilon_k (evaluated on the trace-free part), or a
/// custom trace-free coefficient vector. Indices are 1-based.
class LinearFunctional {
 public:
  enum class Kind { Epsilon, Root, Weight, Custom };

  static LinearFunctional epsilon(int i) { return {Kind::Epsilon, i, {}}; }
  static LinearFunctional root(int i) { return {Kind::Root, i, {}}; }
  static LinearFunctional weight(int i) { return {Kind::Weight, i, {}}; }
  static LinearFunctional custom(std::vector<double> coeffs) {
    const double sum = std::accumulate(coeffs.begin(), coeffs.end(), 0.0);
    if (std::abs(sum) > 1e-12) throw PreconditionError("custom functional must be trace-free");
    return {Kind::Custom, 0, std::move(coeffs)};
  }

  /// Parses "eps:i", "root:i", "weight:i" or "custom:c1,c2,...".
  static LinearFunctional parse(const std::string& text);

  Kind kind() const { return kind_; }
  int index() const { return index_; }
  const std::vector<double>& coefficients() const { return coeffs_; }
  std::string name() const;

  double operator()(std::span<const double> v) const;

 private:
  LinearFunctional(Kind k, int i, std::vector<double> c) : kind_(k), index_(i), coeffs_(std::move(c)) {}
  Kind kind_;
  int index_;
  std::vector<double> coeffs_;
};

inline double LinearFunctional::operator()(std::span<const double> v) const {
  const int d = static_cast<int>(v.size());
  auto need = [&](int i) {
    if (i < 1 || i > d) throw PreconditionError("functional index " + std::to_string(i) + " out of range for dimension " + std::to_string(d));
  };
  switch (kind_) {
    case Kind::Epsilon:
      need(index_);
      return v[static_cast<std::size_t>(index_ - 1)];
    case Kind::Root:
      need(index_);
      need(index_ + 1);
      return v[static_cast<std::size_t>(index_ - 1)] - v[static_cast<std::size_t>(index_)];
    case Kind::Weight: {
      need(index_);
      const double mean = std::accumulate(v.begin(), v.end(), 0.0) / d;
      double s = 0.0;
      for (int k = 0; k < index_; ++k) s += v[static_cast<std::size_t>(k)] - mean;
      return s;
    }
    case Kind::Custom: {
      if (static_cast<int>(coeffs_.size()) != d) throw PreconditionError("custom functional dimension mismatch");
      double s = 0.0;
      for (int k = 0; k < d; ++k) s += coeffs_[static_cast<std::size_t>(k)] * v[static_cast<std::size_t>(k)];
      return s;
    }
  }
  return 0.0;
}

inline std::string LinearFunctional::name() const {
  switch (kind_) {
    case Kind::Epsilon: return "eps:" + std::to_string(index_);
    case Kind::Root: return "root:" + std::to_string(index_);
    case Kind::Weight: return "weight:" + std::to_string(index_);
    case Kind::Custom: {
      std::ostringstream os;
      os << "custom:";
      for (std::size_t i = 0; i < coeffs_.size(); ++i) os << (i ? "," : "") << coeffs_[i];
      return os.str();
    }
  }
  return "";
}

inline LinearFunctional LinearFunctional::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ParseError("functional must look like kind:index, got '" + text + "'");
  const std::string kind = text.substr(0, colon);
  const std::string arg = text.substr(colon + 1);
  try {
    if (kind == "custom") {
      std::vector<double> c;
      std::stringstream ss(arg);
      std::string item;
      while (std::getline(ss, item, ',')) c.push_back(std::stod(item));
      return custom(std::move(c));
    }
    const int i = std::stoi(arg);
    if (i < 1) throw ParseError("functional index must be >= 1");
    if (kind == "eps" || kind == "epsilon") return epsilon(i);
    if (kind == "root") return root(i);
    if (kind == "weight" || kind == "omega") return weight(i);
  } catch (const std::logic_error&) {
    throw ParseError("bad functional argument in '" + text + "'");
  }
  throw ParseError("unknown functional kind '" + kind + "'");
}

inline double functional(const LinearFunctional& phi, const CartanVector& v) { return phi(v.entries); }
inline double functional(const LinearFunctional& phi, const LyapunovVector& v) { return phi(v.entries); }

// ---------------------------------------------------------------------------
// Functorial constructions
// ---------------------------------------------------------------------------

inline long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// k-subsets of {0..d-1} in lexicographic order.
inline std::vector<std::vector<int>> k_subsets(int d, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(k));
  std::iota(cur.begin(), cur.end(), 0);
  if (k == 0) return {{}};
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == d - k + i) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

/// Action on the k-th exterior power in the lexicographic k-subset basis:
/// entry (I, J) is the minor det(m[I, J]).
inline Matrix exterior_power(const Matrix& m, int k) {
  const int d = static_cast<int>(m.rows());
  if (m.rows() != m.cols()) throw PreconditionError("exterior_power: square matrix required");
  if (k < 1 || k > d) throw PreconditionError("exterior_power: need 1 <= k <= d");
  if (k == 1) return m;
  const auto subsets = k_subsets(d, k);
  const auto n = static_cast<Eigen::Index>(subsets.size());
  Matrix out(n, n);
  Matrix sub(k, k);
  for (Eigen::Index I = 0; I < n; ++I) {
    for (Eigen::Index J = 0; J < n; ++J) {
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
          sub(a, b) = m(subsets[static_cast<std::size_t>(I)][static_cast<std::size_t>(a)],
                        subsets[static_cast<std::size_t>(J)][static_cast<std::size_t>(b)]);
      out(I, J) = sub.determinant();
    }
  }
  return out;
}

/// Basis convention for symmetric powers.
enum class SymBasis {
  /// Monomials scaled by sqrt(multinomial): orthogonal matrices map to
  /// orthogonal matrices, so singular values of sym^q(g) are the degree-q
  /// monomials in the singular values of g.
  Orthonormal,
  /// Plain monomials x^I; row I lists the expansion of x^I after the
  /// substitution x -> g x.
  Monomial,
};

/// Exponent vectors of degree q in d variables, descending lexicographic
/// order (x^2, xy, y^2 for d = q = 2).
inline std::vector<std::vector<int>> monomial_exponents(int d, int q) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(d), 0);
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == d - 1) {
      cur[static_cast<std::size_t>(pos)] = remaining;
      out.push_back(cur);
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      cur[static_cast<std::size_t>(pos)] = e;
      self(self, pos + 1, remaining - e);
    }
  };
  rec(rec, 0, q);
  return out;
}

inline Matrix symmetric_power(const Matrix& m, int q, SymBasis basis = SymBasis::Orthonormal) {
  if (m.rows() != m.cols()) throw PreconditionError("symmetric_power: square matrix required");
  if (q < 1) throw PreconditionError("symmetric_power: need q >= 1");
  const int d = static_cast<int>(m.rows());
  if (q == 1) return m;
  const auto exps = monomial_exponents(d, q);
  std::map<std::vector<int>, Eigen::Index> index;
  for (std::size_t i = 0; i < exps.size(); ++i) index[exps[i]] = static_cast<Eigen::Index>(i);
  const auto n = static_cast<Eigen::Index>(exps.size());
  Matrix out = Matrix::Zero(n, n);
  using Poly = std::map<std::vector<int>, double>;
  for (Eigen::Index I = 0; I < n; ++I) {
    Poly poly{{std::vector<int>(static_cast<std::size_t>(d), 0), 1.0}};
    const auto& e = exps[static_cast<std::size_t>(I)];
    for (int k = 0; k < d; ++k) {
      for (int rep = 0; rep < e[static_cast<std::size_t>(k)]; ++rep) {
        Poly next;
        for (const auto& [mono, c] : poly) {
          for (int l = 0; l < d; ++l) {
            if (m(k, l) == 0.0) continue;
            auto mm = mono;
            ++mm[static_cast<std::size_t>(l)];
            next[mm] += c * m(k, l);
          }
        }
        poly = std::move(next);
      }
    }
    for (const auto& [mono, c] : poly) out(I, index.at(mono)) = c;
  }
  if (basis == SymBasis::Orthonormal) {
    std::vector<double> w(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < exps.size(); ++i) {
      double lw = std::lgamma(q + 1.0);
      for (int e : exps[i]) lw -= std::lgamma(e + 1.0);
      w[i] = std::exp(0.5 * lw);
    }
    for (Eigen::Index I = 0; I < n; ++I)
      for (Eigen::Index J = 0; J < n; ++J)
        out(I, J) *= w[static_cast<std::size_t>(I)] / w[static_cast<std::size_t>(J)];
  }
  return out;
}

/// The congruence action X -> g X g^t on symmetric matrices.
inline Matrix congruence(const Matrix& g, const Matrix& x) { return g * x * g.transpose(); }

/// Kronecker product with row-major blocks: block (i, j) is a(i, j) * b.
inline Matrix tensor(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Matrix direct_sum(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

/// Inverse transpose.
inline Matrix dual(const Matrix& a) {
  Eigen::FullPivLU<Matrix> lu(a);
  if (!lu.isInvertible()) throw PreconditionError("dual: singular matrix");
  return lu.inverse().transpose();
}

/// Realification of the complex matrix re + i*im as [[re, -im], [im, re]].
inline Matrix complexify(const Matrix& re, const Matrix& im) {
  if (re.rows() != im.rows() || re.cols() != im.cols()) throw PreconditionError("complexify: shape mismatch");
  const Eigen::Index n = re.rows(), m = re.cols();
  Matrix out(2 * n, 2 * m);
  out.topLeftCorner(n, m) = re;
  out.topRightCorner(n, m) = -im;
  out.bottomLeftCorner(n, m) = im;
  out.bottomRightCorner(n, m) = re;
  return out;
}

// ---------------------------------------------------------------------------
// Proximal data
// ---------------------------------------------------------------------------

struct ProximalData {
  double logTopModulus = 0.0;
  ProjectivePoint attracting;
  Hyperplane repelling;
  bool biproximal = false;
};

namespace detail {

inline Vector top_real_eigenvector(const Matrix& m, double gapTol, const char* what) {
  Eigen::EigenSolver<Matrix> es(m, true);
  const auto& ev = es.eigenvalues();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(ev.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return std::abs(ev(a)) > std::abs(ev(b)); });
  const double l1 = std::abs(ev(order[0]));
  const double l2 = ev.size() > 1 ? std::abs(ev(order[1])) : 0.0;
  if (!(l1 >= gapTol * l2)) throw NotProximal(std::string(what) + ": no spectral gap between the top two eigenvalue moduli");
  const Eigen::VectorXcd v = es.eigenvectors().col(order[0]);
  // top eigenvalue of a proximal matrix is real; pick the real direction
  Vector re = v.real();
  const Vector im = v.imag();
  if (im.norm() > re.norm()) re = im;
  return re;
}

}  // namespace detail

/// Attracting eigenline and repelling invariant hyperplane of a proximal
/// matrix. The hyperplane normal is the top eigenvector of the transpose.
inline ProximalData proximal_data(const ScaledMatrix& m, double gapTol = kDefaultGapTol) {
  if (m.dim() < 2) throw PreconditionError("proximal_data needs dimension >= 2");
  const Vector plus = detail::top_real_eigenvector(m.mat, gapTol, "proximal_data");
  const Vector normal = detail::top_real_eigenvector(m.mat.transpose(), gapTol, "proximal_data");
  std::vector<double> moduli;
  for (const auto& z : detail::eigenvalues(m.mat)) moduli.push_back(std::abs(z));
  std::sort(moduli.begin(), moduli.end(), std::greater<double>());
  const std::size_t d = moduli.size();
  return ProximalData{detail::safe_log(moduli[0]) + m.logScale, ProjectivePoint::from(plus), Hyperplane::with_normal(normal),
                      moduli[d - 2] >= gapTol * moduli[d - 1]};
}

// ---------------------------------------------------------------------------
// ElementImage: graded evaluation through exterior powers
// ---------------------------------------------------------------------------

/// The image of a group element carried simultaneously in every exterior
/// power Lambda^k, k = 1..d-1, plus log|det|. Top singular values and
/// spectral radii are computed to full relative precision in any product,
/// so log sigma_k = log sigma_1(Lambda^k) - log sigma_1(Lambda^{k-1}) stays
/// accurate when sigma_k / sigma_1 is far below machine precision.
struct ElementImage {
  int dim = 0;
  std::vector<ScaledMatrix> wedge;  // wedge[k-1] represents Lambda^k
  double logAbsDet = 0.0;

  const ScaledMatrix& base() const { return wedge.front(); }

  static ElementImage identity(int d) {
    ElementImage out;
    out.dim = d;
    for (int k = 1; k < std::max(d, 2); ++k) out.wedge.push_back(ScaledMatrix::identity(static_cast<int>(binomial(d, k))));
    return out;
  }

  /// Image of m given an accurate inverse. Lambda^k for k <= d/2 comes from
  /// the minors of m, the rest from the complementary minors of m^-1, so
  /// every exterior power is read off the side where it is large.
  static ElementImage from_pair(const Matrix& m, const Matrix& inv);
  static ElementImage from(const Matrix& m);
};

namespace detail {

/// Inverse through long double LU, accurate to about 1e-19 * cond(m).
inline Matrix accurate_inverse(const Matrix& m) {
  using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const LMatrix lm = m.cast<long double>();
  return LMatrix(lm.partialPivLu().inverse()).cast<double>();
}

/// Lambda^k(m) / det(m) from W = Lambda^{d-k}(m^-1) by Jacobi's identity
/// m[I, J] = det(m) (-1)^{|I| + |J|} m^-1[J^c, I^c].
inline Matrix complementary_wedge(const Matrix& w, int d, int k) {
  const auto rows = k_subsets(d, k);
  const auto cols = k_subsets(d, d - k);
  std::map<std::vector<int>, Eigen::Index> pos;
  for (std::size_t i = 0; i < cols.size(); ++i) pos.emplace(cols[i], static_cast<Eigen::Index>(i));
  std::vector<Eigen::Index> comp(rows.size());
  std::vector<double> sign(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<int> c;
    int sum = 0;
    for (int x = 0, j = 0; x < d; ++x) {
      if (j < k && rows[i][static_cast<std::size_t>(j)] == x) {
        sum += x;
        ++j;
      } else {
        c.push_back(x);
      }
    }
    comp[i] = pos.at(c);
    sign[i] = sum % 2 == 0 ? 1.0 : -1.0;
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out(i, j) = sign[static_cast<std::size_t>(i)] * sign[static_cast<std::size_t>(j)] *
                  w(comp[static_cast<std::size_t>(j)], comp[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace detail

inline ElementImage ElementImage::from_pair(const Matrix& m, const Matrix& inv) {
  const int d = static_cast<int>(m.rows());
  ElementImage out;
  out.dim = d;
  if (d == 1) {
    out.wedge.push_back(ScaledMatrix::from(m));
    out.logAbsDet = detail::safe_log(std::abs(m(0, 0)));
    return out;
  }
  // log|det| = log(sigma_1...sigma_h) - log(top d-h singular values of m^-1)
  const int h = d / 2;
  const ScaledMatrix lower = ScaledMatrix::from(exterior_power(m, h));
  const ScaledMatrix upper = ScaledMatrix::from(exterior_power(inv, d - h));
  out.logAbsDet = detail::safe_log(detail::top_singular_value(lower.mat)) + lower.logScale -
                  detail::safe_log(detail::top_singular_value(upper.mat)) - upper.logScale;
  const double detSign = m.determinant() < 0.0 ? -1.0 : 1.0;
  for (int k = 1; k < d; ++k) {
    if (2 * k <= d) {
      out.wedge.push_back(k == h ? lower : ScaledMatrix::from(exterior_power(m, k)));
    } else {
      ScaledMatrix w = ScaledMatrix::from(detail::complementary_wedge(exterior_power(inv, d - k), d, k));
      w.mat *= detSign;
      w.logScale += out.logAbsDet;
      out.wedge.push_back(w);
    }
  }
  return out;
}

inline ElementImage ElementImage::from(const Matrix& m) { return from_pair(m, detail::accurate_inverse(m)); }

inline ElementImage operator*(const ElementImage& a, const ElementImage& b) {
  ElementImage out;
  out.dim = a.dim;
  out.wedge.reserve(a.wedge.size());
  for (std::size_t k = 0; k < a.wedge.size(); ++k) out.wedge.push_back(a.wedge[k] * b.wedge[k]);
  out.logAbsDet = a.logAbsDet + b.logAbsDet;
  return out;
}

/// Singular values with sigma_k / sigma_1 above this ratio are read off the
/// plain SVD; smaller ones come from the exterior powers.
inline constexpr double kResolvedRatio = 1e-5;
/// Same for eigenvalue moduli (eigenvalues are more sensitive).
inline constexpr double kResolvedEigenRatio = 1e-3;

inline CartanVector cartan(const ElementImage& img) {
  const int d = img.dim;
  const Vector sv = detail::singular_values(img.base().mat);
  std::vector<double> mu(static_cast<std::size_t>(d));
  int resolved = 0;
  while (resolved < d && sv(resolved) >= kResolvedRatio * sv(0)) {
    mu[static_cast<std::size_t>(resolved)] = std::log(sv(resolved)) + img.base().logScale;
    ++resolved;
  }
  if (resolved < d) {
    auto partial = [&](int k) -> double {  // log(sigma_1 ... sigma_k)
      if (k == d) return img.logAbsDet;
      const ScaledMatrix& w = img.wedge[static_cast<std::size_t>(k - 1)];
      return detail::safe_log(detail::top_singular_value(w.mat)) + w.logScale;
    };
    double prev = partial(resolved);
    for (int k = resolved + 1; k <= d; ++k) {
      const double cur = partial(k);
      mu[static_cast<std::size_t>(k - 1)] = cur - prev;
      prev = cur;
    }
  }
  return {detail::sorted_desc(std::move(mu))};
}

namespace detail {

/// Sizes of the finest block-upper-triangular splitting of m, read off exact
/// zeros below the diagonal blocks. Products of such matrices keep the zeros.
inline std::vector<int> triangular_blocks(const Matrix& m) {
  const auto d = m.rows();
  std::vector<int> sizes;
  Eigen::Index start = 0;
  for (Eigen::Index k = 1; k < d; ++k) {
    if (m.block(k, start, d - k, k - start).isZero(0.0)) {
      sizes.push_back(static_cast<int>(k - start));
      start = k;
    }
  }
  sizes.push_back(static_cast<int>(d - start));
  return sizes;
}

/// Image of the diagonal block on coordinates [lo, lo + n): its minors are
/// the minors of the full matrix with rows and columns inside the block.
inline ElementImage diagonal_block(const ElementImage& img, int lo, int n) {
  const int d = img.dim;
  auto restrict = [&](int k) {
    const ScaledMatrix& w = img.wedge[static_cast<std::size_t>(k - 1)];
    const auto all = k_subsets(d, k);
    std::vector<Eigen::Index> idx;
    for (std::size_t i = 0; i < all.size(); ++i)
      if (all[i].front() >= lo && all[i].back() < lo + n) idx.push_back(static_cast<Eigen::Index>(i));
    ScaledMatrix out;
    out.mat = w.mat(idx, idx);
    out.logScale = w.logScale;
    return out;
  };
  ElementImage out;
  out.dim = n;
  for (int k = 1; k < std::max(n, 2); ++k) out.wedge.push_back(restrict(k));
  const ScaledMatrix top = restrict(n);
  out.logAbsDet = safe_log(std::abs(top.mat(0, 0))) + top.logScale;
  return out;
}

}  // namespace detail

/// Eigenvalue moduli, split along any exact block-triangular structure since
/// the spectrum of such a matrix is the union of its diagonal blocks.
inline LyapunovVector lyapunov(const ElementImage& img) {
  const int d = img.dim;
  if (d > 1) {
    const std::vector<int> sizes = detail::triangular_blocks(img.base().mat);
    if (sizes.size() > 1) {
      std::vector<double> all;
      int lo = 0;
      for (int n : sizes) {
        for (double x : lyapunov(detail::diagonal_block(img, lo, n)).entries) all.push_back(x);
        lo += n;
      }
      return {detail::sorted_desc(std::move(all))};
    }
  }
  std::vector<double> moduli;
  for (const auto& z : detail::eigenvalues(img.base().mat)) moduli.push_back(std::abs(z));
  std::sort(moduli.begin(), moduli.end(), std::greater<double>());
  std::vector<double> lam(static_cast<std::size_t>(d));
  int resolved = 0;
  while (resolved < d && moduli[static_cast<std::size_t>(resolved)] >= kResolvedEigenRatio * moduli[0]) {
    lam[static_cast<std::size_t>(resolved)] = std::log(moduli[static_cast<std::size_t>(resolved)]) + img.base().logScale;
    ++resolved;
  }
  if (resolved < d) {
    auto partial = [&](int k) -> double {  // log(l_1 ... l_k)
      if (k == d) return img.logAbsDet;
      const ScaledMatrix& w = img.wedge[static_cast<std::size_t>(k - 1)];
      return detail::safe_log(detail::spectral_radius(w.mat)) + w.logScale;
    };
    double prev = partial(resolved);
    for (int k = resolved + 1; k <= d; ++k) {
      const double cur = partial(k);
      lam[static_cast<std::size_t>(k - 1)] = cur - prev;
      prev = cur;
    }
  }
  return {detail::sorted_desc(std::move(lam))};
}

inline ProjectivePoint attractor_plus(const ElementImage& img, double gapTol = kDefaultGapTol) {
  if (img.dim < 2) throw PreconditionError("attractor_plus needs dimension >= 2");
  const CartanVector mu = cartan(img);
  if (!(mu[0] - mu[1] >= std::log(gapTol))) throw DegenerateGap("attractor_plus: sigma_1/sigma_2 below gap tolerance");
  Eigen::JacobiSVD<Matrix> svd(img.base().mat, Eigen::ComputeFullU);
  return ProjectivePoint::from(svd.matrixU().col(0));
}

/// Uses Lambda^{d-1}: its top left-singular vector is the wedge of the top
/// d-1 left-singular directions, whose Hodge dual is the hyperplane normal.
inline Hyperplane attractor_minus(const ElementImage& img, double gapTol = kDefaultGapTol) {
  const int d = img.dim;
  if (d < 2) throw PreconditionError("attractor_minus needs dimension >= 2");
  const CartanVector mu = cartan(img);
  if (!(mu[d - 2] - mu[d - 1] >= std::log(gapTol)))
    throw DegenerateGap("attractor_minus: sigma_{d-1}/sigma_d below gap tolerance");
  if (d == 2) {
    Eigen::JacobiSVD<Matrix> svd(img.base().mat, Eigen::ComputeFullU);
    return Hyperplane::with_normal(svd.matrixU().col(1));
  }
  const ScaledMatrix& top = img.wedge[static_cast<std::size_t>(d - 2)];
  Eigen::JacobiSVD<Matrix> svd(top.mat, Eigen::ComputeFullU);
  const Vector w = svd.matrixU().col(0);
  // lexicographic (d-1)-subsets: subset i omits index d-1-i
  Vector normal(d);
  for (int i = 0; i < d; ++i) {
    const int omitted = d - 1 - i;
    const double sign = ((d - 1 - omitted) % 2 == 0) ? 1.0 : -1.0;
    normal(omitted) = sign * w(i);
  }
  return Hyperplane::with_normal(normal);
}

}  // namespace anosov
