#pragma once
//
// Limit maps through Cartan attractors along boundary rays, transversality
// through Gromov products, and Hoelder exponent estimates.
//

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "anosov/errors.hpp"
#include "anosov/linalg.hpp"
#include "anosov/parallel.hpp"
#include "anosov/representation.hpp"
#include "anosov/words.hpp"

namespace anosov {

struct LimitSample {
  BoundaryRay ray;
  std::size_t depth = 0;
  ProjectivePoint point;
  std::optional<Hyperplane> hyperplane;  // absent when sigma_{d-1} = sigma_d
  double errBound = 0.0;                 // bound on d(point, limit)
  double hyperErrBound = 0.0;            // same for the hyperplane normal
  double tail = 0.0;                     // extrapolated part of errBound
};

namespace detail {

/// sigma_1(r) sigma_1(r^-1) sqrt(d-1), maximized over the letters of the ray.
inline double ray_constant(const Representation& rho, const BoundaryRay& x) {
  double c = 0.0;
  auto scan = [&](const Word& w) {
    for (Letter l : w.letters()) {
      const double s = std::exp(cartan(rho.letter_image(l))[0] + cartan(rho.letter_image(-l))[0]);
      c = std::max(c, s);
    }
  };
  scan(x.head());
  scan(x.cycle());
  return c * std::sqrt(static_cast<double>(rho.dim() - 1));
}

/// Sum over m >= n of C exp(-gap_m): explicit up to the first full cycle
/// past max(n, |head|), then a geometric tail using the smallest per-cycle
/// gap increment. Returns {total, tail}; infinity if gaps stop growing.
inline std::pair<double, double> telescoped_bound(const std::vector<double>& gaps, std::size_t n, std::size_t start,
                                                  std::size_t period, double C) {
  double explicitSum = 0.0;
  for (std::size_t m = n; m < start; ++m) explicitSum += std::exp(-gaps[m]);
  double inc = std::numeric_limits<double>::infinity();
  double block = 0.0;
  for (std::size_t j = 0; j < period; ++j) {
    inc = std::min(inc, gaps[start + period + j] - gaps[start + j]);
    block += std::exp(-gaps[start + j]);
  }
  if (!(inc > 0.0)) return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  const double tail = block / (-std::expm1(-inc));
  return {C * (explicitSum + tail), C * tail};
}

}  // namespace detail

/// Cartan attractors of rho(prefix_n(x)) with a certified-by-telescoping
/// error bound. NonDivergent when the first root gap fails to grow by more
/// than 1e-12 over 5 consecutive depths.
inline LimitSample limit_point(const Representation& rho, const BoundaryRay& x, std::size_t n,
                               double gapTol = kDefaultGapTol) {
  rho.model().check_word(x.head());
  rho.model().check_word(x.cycle());
  const int d = rho.dim();
  if (d < 2) throw PreconditionError("limit_point needs dimension >= 2");
  const std::size_t period = x.cycle().size();
  const std::size_t start = std::max(n, x.head().size());
  const std::size_t last = start + 2 * period;
  std::vector<double> gap1(last), gapLast(last);
  ElementImage img = ElementImage::identity(d);
  ElementImage atDepth = img;
  for (std::size_t m = 0; m < last; ++m) {
    if (m == n) atDepth = img;
    const CartanVector mu = cartan(img);
    gap1[m] = mu[0] - mu[1];
    gapLast[m] = mu[d - 2] - mu[d - 1];
    if (m >= 5 && m <= n && !(gap1[m] > gap1[m - 5] + 1e-12))
      throw NonDivergent("gap <eps1-eps2, mu> stagnates along ray " + x.str() + " at depth " + std::to_string(m));
    img = img * rho.letter_image(x.letter(m));
  }
  const double C = detail::ray_constant(rho, x);
  LimitSample s{x, n, attractor_plus(atDepth, gapTol), std::nullopt, 0.0, 0.0, 0.0};
  try {
    s.hyperplane = attractor_minus(atDepth, gapTol);
  } catch (const DegenerateGap&) {
  }
  const auto [err, tail] = detail::telescoped_bound(gap1, n, start, period, C);
  s.errBound = err;
  s.tail = tail;
  s.hyperErrBound = detail::telescoped_bound(gapLast, n, start, period, C).first;
  return s;
}

struct Transversality {
  double direct = 0.0;      // dist(xi(x), xi^-(y)) * dist(xi(y), xi^-(x))
  double viaGromov = 0.0;   // exp(-4 (rho(x_n) . rho(y_n))_eps1)
  double tolerance = 0.0;   // combined error bounds
  bool agree = false;
  LimitSample sx, sy;
};

inline Transversality transversality(const Representation& rho, const BoundaryRay& x, const BoundaryRay& y,
                                     std::size_t n) {
  if (x == y) throw PreconditionError("transversality needs distinct rays, got " + x.str() + " twice");
  Transversality t{0.0, 0.0, 0.0, false, limit_point(rho, x, n), limit_point(rho, y, n)};
  if (!t.sx.hyperplane || !t.sy.hyperplane)
    throw DegenerateGap("transversality needs the hyperplane attractors (sigma_{d-1} > sigma_d)");
  t.direct = point_hyperplane_distance(t.sx.point, *t.sy.hyperplane) * point_hyperplane_distance(t.sy.point, *t.sx.hyperplane);
  t.viaGromov = std::exp(-4.0 * gromov_product_phi(rho, ray_prefix(x, n), ray_prefix(y, n), LinearFunctional::epsilon(1)));
  // the Gromov product cancels Cartan entries of size ~|prefix|, so its
  // rounding error scales with them
  const Word xn = ray_prefix(x, n), yn = ray_prefix(y, n);
  double scale = 0.0;
  for (const Word& w : {xn, xn.inverse(), yn, yn.inverse(), xn.inverse() * yn, yn.inverse() * xn}) {
    const CartanVector mu = cartan(rho, w);
    scale += std::abs(mu[0]) + std::abs(mu[1]);
  }
  const double rounding = 64.0 * std::numeric_limits<double>::epsilon() * scale * std::max(t.viaGromov, t.direct);
  t.tolerance = 2.0 * (t.sx.errBound + t.sy.errBound + t.sx.hyperErrBound + t.sy.hyperErrBound) + rounding;
  t.agree = std::abs(t.direct - t.viaGromov) <= t.tolerance;
  return t;
}

// ---------------------------------------------------------------------------
// Hoelder exponents
// ---------------------------------------------------------------------------

/// Length used as the geometric scale: anchor displacement when the model
/// carries an anchor, word length otherwise.
inline double x_length(const GroupModel& model, const Word& g) {
  return model.has_anchor() ? anchor_displacement(model, g) : static_cast<double>(word_length(model, g));
}

struct HolderSingular {
  double estimate = 0.0;
  std::vector<double> table;       // a_n for n = 1..R (NaN when no element qualifies)
  std::vector<Word> witnesses;     // minimizer for each a_n
  int radius = 0;
};

/// sup_n inf_{|g|_X >= n} <eps1 - eps2, mu(rho g)> / |g|_X over ball(R).
inline HolderSingular holder_exponent_singular(const Representation& rho, int R, unsigned threads = 1) {
  if (R < 2) throw PreconditionError("holder_exponent_singular needs radius >= 2");
  if (rho.dim() < 2) throw PreconditionError("holder exponent needs dimension >= 2");
  const ImageTable t = ball_images(rho, R, threads);
  std::vector<double> len(t.size()), ratio(t.size());
  parallel_for(t.size(), threads, [&](std::size_t i) {
    len[i] = x_length(rho.model(), t.words[i]);
    const CartanVector mu = cartan(t.images[i]);
    ratio[i] = len[i] > 1e-12 ? (mu[0] - mu[1]) / len[i] : std::numeric_limits<double>::quiet_NaN();
  });
  HolderSingular h;
  h.radius = R;
  h.estimate = 0.0;
  bool any = false;
  for (int n = 1; n <= R; ++n) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t i = 1; i < t.size(); ++i) {
      if (len[i] < n || std::isnan(ratio[i])) continue;
      if (ratio[i] < best) {
        best = ratio[i];
        arg = i;
      }
    }
    if (std::isinf(best)) {
      h.table.push_back(std::numeric_limits<double>::quiet_NaN());
      h.witnesses.push_back(Word());
      continue;
    }
    h.table.push_back(best);
    h.witnesses.push_back(t.words[arg]);
    h.estimate = any ? std::max(h.estimate, best) : best;
    any = true;
  }
  return h;
}

struct HolderEigen {
  double estimate = 0.0;
  Word witness;
  std::size_t classes = 0;
};

/// inf over conjugacy classes of <eps1 - eps2, lambda(rho g)> / |g|_{X,inf}.
inline HolderEigen holder_exponent_eigen(const Representation& rho, int L, unsigned threads = 1) {
  if (L < 1) throw PreconditionError("holder_exponent_eigen needs L >= 1");
  const GroupModel& model = rho.model();
  const auto reps = class_representatives(model, L);
  std::vector<double> ratio(reps.size());
  parallel_for(reps.size(), threads, [&](std::size_t i) {
    const double sl = model.has_anchor() ? anchor_stable_length(model, reps[i]).value : stable_length(model, reps[i]);
    const LyapunovVector lam = lyapunov(rho, reps[i]);
    ratio[i] = sl > 1e-12 ? (lam[0] - lam[1]) / sl : std::numeric_limits<double>::infinity();
  });
  HolderEigen h;
  h.classes = reps.size();
  h.estimate = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < reps.size(); ++i) {
    if (ratio[i] < h.estimate) {
      h.estimate = ratio[i];
      h.witness = reps[i];
    }
  }
  return h;
}

/// Numerical rank (relative threshold `tol`) of limit points sampled on
/// rays with cycles of length <= 2, used to report whether the limit map
/// looks spanning.
inline int spanning_rank(const Representation& rho, std::size_t depth = 20, double tol = 1e-8) {
  const int d = rho.dim();
  std::vector<Vector> pts;
  for (const Word& c : cyclic_classes(rho.model().rank(), 2)) {
    if (static_cast<int>(pts.size()) >= 4 * d) break;
    try {
      pts.push_back(limit_point(rho, BoundaryRay::make(Word(), c), depth).point.dir());
    } catch (const Error&) {
    }
  }
  if (pts.empty()) return 0;
  Matrix m(d, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = pts[i];
  const Vector sv = Eigen::JacobiSVD<Matrix>(m).singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * sv(0)) ++rank;
  return rank;
}

}  // namespace anosov
