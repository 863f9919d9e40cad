#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "anosov/errors.hpp"

namespace anosov {

/// Finite data can refute a bound or be consistent with it; it never
/// proves one.
enum class Verdict { Consistent, Inconsistent, Inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Consistent: return "consistent";
    case Verdict::Inconsistent: return "inconsistent";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

struct Tolerances {
  double plateauTol = 0.5;  // absolute change allowed between radii R-2 and R
  double slopeTol = 0.1;    // fitted slopes at or below this count as zero
};

/// Plateau rule for a per-radius running quantity s_0..s_R: consistent when
/// s_R - s_{R-2} < tol; inconsistent when each of the last three increments
/// is at least tol (steady growth); otherwise inconclusive.
inline Verdict plateau_verdict(const std::vector<double>& s, double tol) {
  const std::size_t n = s.size();
  if (n < 3) return Verdict::Inconclusive;
  if (s[n - 1] - s[n - 3] < tol) return Verdict::Consistent;
  if (n >= 4) {
    bool growing = true;
    for (std::size_t k = n - 3; k < n; ++k)
      if (!(s[k] - s[k - 1] >= tol)) growing = false;
    if (growing) return Verdict::Inconsistent;
  }
  return Verdict::Inconclusive;
}

}  // namespace anosov
