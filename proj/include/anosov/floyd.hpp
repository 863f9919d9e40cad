#pragma once
//
// Floyd metrics on Cayley-graph balls, Karlsson tail estimates and the
// uniform gap summation / Floyd-Lipschitz scans.
//

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "anosov/errors.hpp"
#include "anosov/linalg.hpp"
#include "anosov/parallel.hpp"
#include "anosov/representation.hpp"
#include "anosov/verdict.hpp"
#include "anosov/words.hpp"

namespace anosov {

/// A summable, nonincreasing rescaling function with bounded decay ratio.
class FloydFunction {
 public:
  enum class Kind { PowerLaw, Exponential, Custom };

  /// n -> max(n, 1)^(-1-kappa); the clamp keeps f(0) finite.
  static FloydFunction power_law(double kappa) {
    if (!(kappa > 0.0)) throw PreconditionError("power-law Floyd function needs kappa > 0");
    return FloydFunction(Kind::PowerLaw, kappa, {});
  }
  /// n -> c^(-n).
  static FloydFunction exponential(double c) {
    if (!(c > 1.0)) throw PreconditionError("exponential Floyd function needs c > 1");
    return FloydFunction(Kind::Exponential, c, {});
  }
  /// Values f(0..m); extended beyond the table with the last ratio.
  static FloydFunction custom(std::vector<double> table) {
    if (table.size() < 2) throw PreconditionError("custom Floyd table needs at least two values");
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (!(table[i] > 0.0)) throw PreconditionError("Floyd values must be positive");
      if (i > 0 && table[i] > table[i - 1]) throw PreconditionError("Floyd values must be nonincreasing");
    }
    if (!(table.back() < table[table.size() - 2])) throw PreconditionError("custom Floyd table must end strictly decreasing");
    return FloydFunction(Kind::Custom, 0.0, std::move(table));
  }
  /// "power:kappa", "exp:c" or "table:v0,v1,...".
  static FloydFunction parse(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ParseError("Floyd function must look like kind:param, got '" + text + "'");
    const std::string kind = text.substr(0, colon), arg = text.substr(colon + 1);
    try {
      if (kind == "power") return power_law(std::stod(arg));
      if (kind == "exp") return exponential(std::stod(arg));
      if (kind == "table") {
        std::vector<double> v;
        std::stringstream ss(arg);
        std::string item;
        while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
        return custom(std::move(v));
      }
    } catch (const std::logic_error&) {
      throw ParseError("bad Floyd function parameter in '" + text + "'");
    }
    throw ParseError("unknown Floyd function kind '" + kind + "'");
  }

  Kind kind() const { return kind_; }
  double param() const { return param_; }
  std::string name() const {
    std::ostringstream os;
    switch (kind_) {
      case Kind::PowerLaw: os << "power:" << param_; break;
      case Kind::Exponential: os << "exp:" << param_; break;
      case Kind::Custom:
        os << "table:";
        for (std::size_t i = 0; i < table_.size(); ++i) os << (i ? "," : "") << table_[i];
        break;
    }
    return os.str();
  }

  double operator()(long long n) const {
    if (n < 0) n = 0;
    switch (kind_) {
      case Kind::PowerLaw: return std::pow(static_cast<double>(std::max(n, 1LL)), -1.0 - param_);
      case Kind::Exponential: return std::pow(param_, -static_cast<double>(n));
      case Kind::Custom: {
        const auto m = static_cast<long long>(table_.size()) - 1;
        if (n <= m) return table_[static_cast<std::size_t>(n)];
        return table_.back() * std::pow(last_ratio(), static_cast<double>(n - m));
      }
    }
    return 0.0;
  }

  /// Sum_{k >= k0} f(k).
  double tail_sum(long long k0) const {
    if (k0 < 0) k0 = 0;
    switch (kind_) {
      case Kind::Exponential: return std::pow(param_, -static_cast<double>(k0)) / (1.0 - 1.0 / param_);
      case Kind::PowerLaw: {
        const double s = 1.0 + param_;
        double sum = 0.0;
        long long k = k0;
        if (k == 0) {
          sum += 1.0;
          k = 1;
        }
        // explicit head, then Euler-Maclaurin for sum_{j >= N} j^-s
        const long long N = k + 64;
        for (; k < N; ++k) sum += std::pow(static_cast<double>(k), -s);
        const double x = static_cast<double>(N);
        sum += std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s) + s / 12.0 * std::pow(x, -s - 1.0) -
               s * (s + 1.0) * (s + 2.0) / 720.0 * std::pow(x, -s - 3.0);
        return sum;
      }
      case Kind::Custom: {
        double sum = 0.0;
        long long k = k0;
        const double r = last_ratio();
        // sum until the remaining geometric tail is below 1e-12 relative
        while (true) {
          const double v = (*this)(k);
          sum += v;
          const long long m = static_cast<long long>(table_.size()) - 1;
          if (k >= m) {
            const double rest = v * r / (1.0 - r);
            if (rest <= 1e-12 * sum) {
              sum += rest;
              break;
            }
          }
          ++k;
        }
        return sum;
      }
    }
    return 0.0;
  }

  /// Smallest ratio f(k+1)/f(k) for k <= kmax; the bounded-decay constant.
  double decay_ratio(long long kmax = 10000) const {
    switch (kind_) {
      case Kind::Exponential: return 1.0 / param_;
      case Kind::PowerLaw: return kmax >= 1 ? std::pow(2.0, -1.0 - param_) : 1.0;  // (k/(k+1))^(1+kappa) is smallest at k = 1
      case Kind::Custom: break;
    }
    // past the table the ratio is constant, so the table decides
    double m = 1.0;
    const long long last = std::min<long long>(kmax, static_cast<long long>(table_.size()));
    for (long long k = 0; k < last; ++k) m = std::min(m, (*this)(k + 1) / (*this)(k));
    return m;
  }
  bool nonincreasing(long long kmax = 10000) const {
    for (long long k = 0; k < kmax; ++k)
      if ((*this)(k + 1) > (*this)(k)) return false;
    return true;
  }

 private:
  FloydFunction(Kind k, double p, std::vector<double> t) : kind_(k), param_(p), table_(std::move(t)) {}
  double last_ratio() const { return table_.back() / table_[table_.size() - 2]; }

  Kind kind_;
  double param_;
  std::vector<double> table_;
};

/// G(x) = 10 * sum_{k >= floor(x/2)} f(k).
inline double karlsson_bound(const FloydFunction& f, double x) {
  const long long k0 = x <= 0.0 ? 0 : static_cast<long long>(std::floor(x / 2.0));
  return 10.0 * f.tail_sum(k0);
}

/// The ball of radius R as a weighted graph: the edge g -- gs carries the
/// weight f(max(|g|, |gs|)).
class FloydBall {
 public:
  FloydBall(const GroupModel& model, const FloydFunction& f, int R) : R_(R) {
    words_ = ball(model, R);
    for (std::size_t i = 0; i < words_.size(); ++i) index_.emplace(words_[i], i);
    adj_.resize(words_.size());
    const auto letters = alphabet(model.rank());
    const detail::SurfaceIndex* sidx = model.is_free() ? nullptr : &model.surface_index(R);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      for (Letter l : letters) {
        std::int64_t j = -1;
        if (sidx) {
          const std::int64_t k = sidx->find(sidx->entry(i).mat * sidx->gen(l));
          if (k >= 0 && static_cast<std::size_t>(k) < words_.size()) j = k;
        } else {
          const auto it = index_.find(words_[i] * Word::from_reduced({l}));
          if (it != index_.end()) j = static_cast<std::int64_t>(it->second);
        }
        if (j < 0) continue;
        const auto n = std::max(words_[i].size(), words_[static_cast<std::size_t>(j)].size());
        adj_[i].push_back({static_cast<std::size_t>(j), f(static_cast<long long>(n))});
      }
    }
  }

  int radius() const { return R_; }
  const std::vector<Word>& words() const { return words_; }
  std::size_t size() const { return words_.size(); }
  std::size_t position(const Word& w) const {
    const auto it = index_.find(w);
    if (it == index_.end())
      throw OutOfBall("word " + w.str() + " is not in the ball of radius " + std::to_string(R_));
    return it->second;
  }

  /// Dijkstra from vertex s over the ball.
  std::vector<double> distances_from(std::size_t s) const {
    std::vector<double> dist(words_.size(), std::numeric_limits<double>::infinity());
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    dist[s] = 0.0;
    pq.push({0.0, s});
    while (!pq.empty()) {
      const auto [d, u] = pq.top();
      pq.pop();
      if (d > dist[u]) continue;
      for (const auto& e : adj_[u]) {
        const double nd = d + e.weight;
        if (nd < dist[e.to]) {
          dist[e.to] = nd;
          pq.push({nd, e.to});
        }
      }
    }
    return dist;
  }

 private:
  struct Edge {
    std::size_t to;
    double weight;
  };
  int R_;
  std::vector<Word> words_;
  std::unordered_map<Word, std::size_t, WordHash> index_;
  std::vector<std::vector<Edge>> adj_;
};

/// Floyd distance restricted to paths inside ball(R); an upper bound for
/// the true distance, nonincreasing in R.
inline double floyd_distance(const GroupModel& model, const FloydFunction& f, const Word& g, const Word& h, int R) {
  if (R < 0) throw PreconditionError("radius must be >= 0");
  const FloydBall b(model, f, R);
  return b.distances_from(b.position(g))[b.position(h)];
}

struct UgspResult {
  double C = 0.0;
  Word witness;
  std::vector<double> perRadius;  // running max of -log f(|g|) - gap over ball(r)
  Verdict verdict = Verdict::Inconclusive;
};

/// C = max over ball(R) of -log f(|g|) - <eps1 - eps2, mu(rho g)>.
inline UgspResult ugsp_check(const Representation& rho, const FloydFunction& f, int R, unsigned threads = 1,
                             const Tolerances& tol = {}) {
  if (R < 0) throw PreconditionError("radius must be >= 0");
  if (rho.dim() < 2) throw PreconditionError("gap needs dimension >= 2");
  const ImageTable t = ball_images(rho, R, threads);
  std::vector<double> val(t.size());
  parallel_for(t.size(), threads, [&](std::size_t i) {
    const CartanVector mu = cartan(t.images[i]);
    val[i] = -std::log(f(static_cast<long long>(t.words[i].size()))) - (mu[0] - mu[1]);
  });
  UgspResult r;
  r.perRadius.assign(static_cast<std::size_t>(R) + 1, -std::numeric_limits<double>::infinity());
  r.C = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (val[i] > r.C) {
      r.C = val[i];
      r.witness = t.words[i];
    }
    auto& slot = r.perRadius[t.words[i].size()];
    slot = std::max(slot, val[i]);
  }
  for (std::size_t k = 1; k < r.perRadius.size(); ++k) r.perRadius[k] = std::max(r.perRadius[k], r.perRadius[k - 1]);
  r.verdict = plateau_verdict(r.perRadius, tol.plateauTol);
  return r;
}

struct FloydLipschitzResult {
  double C = 0.0;
  Word witnessG, witnessH;
  std::size_t degenerate = 0;  // elements without a well-defined attractor
  std::size_t pairs = 0;
};

/// max over pairs of ball(R) of d_P(Xi+(rho g), Xi+(rho h)) / d_f(g, h).
inline FloydLipschitzResult floyd_lipschitz_check(const Representation& rho, const FloydFunction& f, int R,
                                                  unsigned threads = 1) {
  if (R < 0) throw PreconditionError("radius must be >= 0");
  const FloydBall fb(rho.model(), f, R);
  const ImageTable t = image_table(rho, fb.words(), threads);
  const std::size_t n = t.size();
  std::vector<std::optional<ProjectivePoint>> attr(n);
  parallel_for(n, threads, [&](std::size_t i) {
    try {
      attr[i] = attractor_plus(t.images[i]);
    } catch (const DegenerateGap&) {
    }
  });
  struct Best {
    double ratio = 0.0;
    std::size_t j = 0;
    std::size_t pairs = 0;
  };
  std::vector<Best> best(n);
  parallel_for(n, threads, [&](std::size_t i) {
    if (!attr[i]) return;
    const auto dist = fb.distances_from(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!attr[j] || !(dist[j] >= 1e-12)) continue;
      ++best[i].pairs;
      const double r = projective_distance(*attr[i], *attr[j]) / dist[j];
      if (r > best[i].ratio) best[i] = {r, j, best[i].pairs};
    }
  });
  FloydLipschitzResult out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!attr[i]) ++out.degenerate;
    out.pairs += best[i].pairs;
    if (best[i].ratio > out.C) {
      out.C = best[i].ratio;
      out.witnessG = fb.words()[i];
      out.witnessH = fb.words()[best[i].j];
    }
  }
  return out;
}

}  // namespace anosov
