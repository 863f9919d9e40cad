#pragma once
//
// Free and surface group combinatorics: reduced words, shortlex order,
// balls, word metrics, Gromov products, eventually periodic boundary rays.
//

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "anosov/errors.hpp"

namespace anosov {

/// Signed generator index: +i is a_i, -i its inverse (i >= 1).
using Letter = int;

/// A freely reduced word. Construct through reduce() or Word::parse().
class Word {
 public:
  Word() = default;

  static Word parse(const std::string& text);
  /// Trusts that `letters` is already reduced.
  static Word from_reduced(std::vector<Letter> letters) {
    Word w;
    w.letters_ = std::move(letters);
    return w;
  }

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }

  Word inverse() const {
    std::vector<Letter> out(letters_.rbegin(), letters_.rend());
    for (auto& l : out) l = -l;
    return from_reduced(std::move(out));
  }
  Word prefix(std::size_t n) const {
    return from_reduced(std::vector<Letter>(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(std::min(n, size()))));
  }
  Word suffix_from(std::size_t n) const {
    return from_reduced(std::vector<Letter>(letters_.begin() + static_cast<std::ptrdiff_t>(std::min(n, size())), letters_.end()));
  }
  int max_generator() const {
    int m = 0;
    for (Letter l : letters_) m = std::max(m, std::abs(l));
    return m;
  }

  std::string str() const;

  friend bool operator==(const Word& a, const Word& b) { return a.letters_ == b.letters_; }
  friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }

 private:
  std::vector<Letter> letters_;
};

inline char letter_char(Letter l) {
  const int i = std::abs(l);
  if (i < 1 || i > 26) throw PreconditionError("letter index out of range: " + std::to_string(l));
  return static_cast<char>((l > 0 ? 'a' : 'A') + i - 1);
}

inline Letter char_letter(char c) {
  if (c >= 'a' && c <= 'z') return c - 'a' + 1;
  if (c >= 'A' && c <= 'Z') return -(c - 'A' + 1);
  throw ParseError(std::string("invalid letter '") + c + "'");
}

inline std::string Word::str() const {
  std::string s;
  s.reserve(letters_.size());
  for (Letter l : letters_) s.push_back(letter_char(l));
  return s;
}

/// Free reduction by a single left-to-right stack pass.
inline Word reduce(const std::vector<Letter>& raw) {
  std::vector<Letter> st;
  st.reserve(raw.size());
  for (Letter l : raw) {
    if (l == 0) throw PreconditionError("letter 0 is not a generator");
    if (!st.empty() && st.back() == -l)
      st.pop_back();
    else
      st.push_back(l);
  }
  return Word::from_reduced(std::move(st));
}

inline Word Word::parse(const std::string& text) {
  std::vector<Letter> raw;
  for (char c : text) {
    if (c == 'e' && text.size() == 1) return Word();
    if (c == ' ' || c == '.' || c == '*') continue;
    raw.push_back(char_letter(c));
  }
  return reduce(raw);
}

inline Word operator*(const Word& a, const Word& b) {
  std::vector<Letter> raw(a.letters());
  raw.insert(raw.end(), b.letters().begin(), b.letters().end());
  return reduce(raw);
}

inline Word power(const Word& g, int n) {
  Word base = n < 0 ? g.inverse() : g;
  Word out;
  for (int i = 0; i < std::abs(n); ++i) out = out * base;
  return out;
}

/// Position of a letter in the order a < A < b < B < ...
inline int letter_rank(Letter l) { return 2 * (std::abs(l) - 1) + (l < 0 ? 1 : 0); }

/// Letters of the alphabet of the given rank in shortlex order.
inline std::vector<Letter> alphabet(int rank) {
  std::vector<Letter> out;
  for (int i = 1; i <= rank; ++i) {
    out.push_back(i);
    out.push_back(-i);
  }
  return out;
}

inline bool shortlex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return letter_rank(a[i]) < letter_rank(b[i]);
  }
  return false;
}

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (Letter l : w.letters()) {
      h ^= static_cast<std::uint64_t>(static_cast<std::int64_t>(l) + 64);
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

/// Cyclically reduced conjugate, obtained by stripping matching ends.
inline Word cyclic_reduce(const Word& g) {
  std::size_t i = 0, j = g.size();
  while (j - i >= 2 && g[i] == -g[j - 1]) {
    ++i;
    --j;
  }
  return Word::from_reduced(std::vector<Letter>(g.letters().begin() + static_cast<std::ptrdiff_t>(i),
                                                g.letters().begin() + static_cast<std::ptrdiff_t>(j)));
}

inline bool is_cyclically_reduced(const Word& g) { return g.size() < 2 || g.front() != -g.back(); }

/// Lexicographically least (in shortlex letter order) cyclic rotation.
inline Word least_rotation(const Word& g) {
  Word best = g;
  const std::size_t n = g.size();
  for (std::size_t s = 1; s < n; ++s) {
    std::vector<Letter> rot(n);
    for (std::size_t i = 0; i < n; ++i) rot[i] = g[(s + i) % n];
    Word w = Word::from_reduced(std::move(rot));
    if (shortlex_less(w, best)) best = w;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Boundary rays
// ---------------------------------------------------------------------------

/// The eventually periodic boundary point head * cycle * cycle * ...
class BoundaryRay {
 public:
  static BoundaryRay make(const Word& head, const Word& cycle) {
    if (cycle.empty()) throw PreconditionError("boundary ray needs a nonempty cycle");
    if (!is_cyclically_reduced(cycle)) throw PreconditionError("boundary ray cycle must be cyclically reduced: " + cycle.str());
    if (!head.empty() && head.back() == -cycle.front())
      throw PreconditionError("boundary ray head and cycle cancel: " + head.str() + "|" + cycle.str());
    return BoundaryRay(head, cycle);
  }
  /// Parses "head|cycle" or just "cycle".
  static BoundaryRay parse(const std::string& text) {
    const auto bar = text.find('|');
    if (bar == std::string::npos) return make(Word(), Word::parse(text));
    return make(Word::parse(text.substr(0, bar)), Word::parse(text.substr(bar + 1)));
  }

  const Word& head() const { return head_; }
  const Word& cycle() const { return cycle_; }
  Letter letter(std::size_t i) const {
    if (i < head_.size()) return head_[i];
    return cycle_[(i - head_.size()) % cycle_.size()];
  }
  std::string str() const { return head_.empty() ? cycle_.str() : head_.str() + "|" + cycle_.str(); }

  friend bool operator==(const BoundaryRay& a, const BoundaryRay& b);

 private:
  BoundaryRay(Word h, Word c) : head_(std::move(h)), cycle_(std::move(c)) {}
  Word head_, cycle_;
};

/// Length-n initial subword of the ray.
inline Word ray_prefix(const BoundaryRay& x, std::size_t n) {
  std::vector<Letter> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = x.letter(i);
  return Word::from_reduced(std::move(out));
}

/// Two rays are the same boundary point iff their letter sequences agree.
inline bool operator==(const BoundaryRay& a, const BoundaryRay& b) {
  const std::size_t n = std::max(a.head().size(), b.head().size()) + a.cycle().size() * b.cycle().size();
  for (std::size_t i = 0; i < n; ++i)
    if (a.letter(i) != b.letter(i)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Group models
// ---------------------------------------------------------------------------

namespace detail {

/// Polar coordinates of g.i about i in the hyperbolic plane for g in
/// SL(2,R): radius 2 log sigma_1(g), angle of the top left-singular
/// direction modulo pi.
struct PolarKey {
  double r = 0.0;
  double theta = 0.0;
};

/// `absDet` is |det m| when known exactly; the determinant of a long
/// product computed from its entries is dominated by cancellation.
inline PolarKey polar_key(const Eigen::Matrix2d& m, double absDet = -1.0) {
  const double p = m.row(0).squaredNorm();
  const double s = m.row(1).squaredNorm();
  const double q = m.row(0).dot(m.row(1));
  const double f = p + s;
  const double det = absDet > 0.0 ? absDet : std::abs(m.determinant());
  const double disc = std::sqrt(std::max(0.0, (p - s) * (p - s) + 4.0 * q * q));
  const double s1sq = 0.5 * (f + disc);
  const double ratio = s1sq / std::max(det, 1e-300);
  PolarKey k;
  k.r = std::log(ratio);  // 2 log sigma_1 after unimodular normalization
  if (k.r < 1e-6) {
    k.r = std::max(k.r, 0.0);
    k.theta = 0.0;
    return k;
  }
  double th = 0.5 * std::atan2(2.0 * q, p - s);
  if (th < 0) th += M_PI;
  if (th >= M_PI) th -= M_PI;
  k.theta = th;
  return k;
}

/// Spatial index of the ball in a surface group, keyed by the polar data
/// of the orbit point of the anchor.
class SurfaceIndex {
 public:
  struct Entry {
    Eigen::Matrix2d mat;
    PolarKey key;
    std::int64_t parent;
    Letter last;
    int length;
  };

  explicit SurfaceIndex(const std::vector<Eigen::Matrix2d>& gens) : gens_(gens) {
    add(Eigen::Matrix2d::Identity(), -1, 0, 0);
    layerStart_ = {0, 1};
  }

  int radius() const { return static_cast<int>(layerStart_.size()) - 2; }

  void extend_to(int R) {
    const int rank = static_cast<int>(gens_.size()) / 2;
    const auto letters = alphabet(rank);
    while (radius() < R) {
      const std::size_t lo = layerStart_[layerStart_.size() - 2];
      const std::size_t hi = layerStart_.back();
      const int len = radius() + 1;
      for (std::size_t i = lo; i < hi; ++i) {
        for (Letter l : letters) {
          if (entries_[i].last == -l) continue;
          const Eigen::Matrix2d m = entries_[i].mat * gen(l);
          if (find(m) >= 0) continue;
          add(m, static_cast<std::int64_t>(i), l, len);
        }
      }
      layerStart_.push_back(entries_.size());
    }
  }

  std::int64_t find(const Eigen::Matrix2d& m) const {
    const PolarKey k = polar_key(m, 1.0);
    const auto [ci, cj] = cell(k);
    const double tolT = std::max(1e-11, 1e-3 * std::exp(-k.r));
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        const auto it = cells_.find(pack(ci + di, wrap(cj + dj)));
        if (it == cells_.end()) continue;
        for (std::int64_t idx : it->second) {
          const PolarKey& o = entries_[static_cast<std::size_t>(idx)].key;
          if (std::abs(o.r - k.r) > 1e-8) continue;
          double dt = std::abs(o.theta - k.theta);
          dt = std::min(dt, M_PI - dt);
          if (o.r < 1e-6 || dt <= tolT) return idx;
        }
      }
    }
    return -1;
  }

  const Entry& entry(std::size_t i) const { return entries_[i]; }
  std::size_t layer_begin(int n) const { return layerStart_[static_cast<std::size_t>(n)]; }
  std::size_t layer_end(int n) const { return layerStart_[static_cast<std::size_t>(n) + 1]; }

  Word word_of(std::size_t i) const {
    std::vector<Letter> out;
    for (std::int64_t j = static_cast<std::int64_t>(i); entries_[static_cast<std::size_t>(j)].parent >= 0;
         j = entries_[static_cast<std::size_t>(j)].parent)
      out.push_back(entries_[static_cast<std::size_t>(j)].last);
    std::reverse(out.begin(), out.end());
    return Word::from_reduced(std::move(out));
  }

  const Eigen::Matrix2d& gen(Letter l) const { return gens_[static_cast<std::size_t>(letter_rank(l))]; }

 private:
  static constexpr double kCell = 1e-3;
  static constexpr int kThetaCells = static_cast<int>(M_PI / kCell) + 1;

  static int wrap(int j) { return ((j % kThetaCells) + kThetaCells) % kThetaCells; }
  static std::pair<int, int> cell(const PolarKey& k) {
    return {static_cast<int>(std::floor(k.r / kCell)), wrap(static_cast<int>(std::floor(k.theta / kCell)))};
  }
  static std::int64_t pack(int i, int j) { return static_cast<std::int64_t>(i) * kThetaCells + j; }

  void add(const Eigen::Matrix2d& m, std::int64_t parent, Letter l, int len) {
    Entry e{m, polar_key(m, 1.0), parent, l, len};
    const auto [ci, cj] = cell(e.key);
    cells_[pack(ci, cj)].push_back(static_cast<std::int64_t>(entries_.size()));
    entries_.push_back(e);
  }

  std::vector<Eigen::Matrix2d> gens_;  // indexed by letter_rank
  std::vector<Entry> entries_;
  std::vector<std::size_t> layerStart_;
  std::unordered_map<std::int64_t, std::vector<std::int64_t>> cells_;
};

}  // namespace detail

/// A free group of given rank, or the fundamental group of a closed
/// orientable surface of given genus. Either may carry an anchor: 2x2
/// unimodular images of the generators realizing a discrete faithful
/// action on the hyperbolic plane.
class GroupModel {
 public:
  enum class Kind { Free, Surface };

  static std::shared_ptr<const GroupModel> free(int rank) {
    if (rank < 1) throw PreconditionError("free group rank must be >= 1");
    return std::shared_ptr<const GroupModel>(new GroupModel(Kind::Free, rank, {}, 0));
  }
  static std::shared_ptr<const GroupModel> free_anchored(int rank, std::vector<Eigen::Matrix2d> anchor) {
    if (static_cast<int>(anchor.size()) != rank) throw PreconditionError("anchor needs one matrix per generator");
    return std::shared_ptr<const GroupModel>(new GroupModel(Kind::Free, rank, std::move(anchor), 0));
  }
  static std::shared_ptr<const GroupModel> surface(int genus, std::vector<Eigen::Matrix2d> anchor, int bfsRadius = 5);

  Kind kind() const { return kind_; }
  bool is_free() const { return kind_ == Kind::Free; }
  /// Number of generators (2 * genus for surface groups).
  int rank() const { return rank_; }
  int genus() const { return kind_ == Kind::Surface ? rank_ / 2 : 0; }
  bool has_anchor() const { return !anchor_.empty(); }
  const std::vector<Eigen::Matrix2d>& anchor() const { return anchor_; }
  int bfs_radius() const { return bfsRadius_; }

  /// a1 b1 a1^-1 b1^-1 ... ag bg ag^-1 bg^-1 with generators ordered a1, b1, a2, b2, ...
  Word relator() const {
    std::vector<Letter> r;
    for (int i = 0; i < genus(); ++i) {
      const int a = 2 * i + 1, b = 2 * i + 2;
      r.insert(r.end(), {a, b, -a, -b});
    }
    return Word::from_reduced(std::move(r));
  }

  Eigen::Matrix2d anchor_image(const Word& g) const {
    if (!has_anchor()) throw PreconditionError("model carries no anchor");
    Eigen::Matrix2d m = Eigen::Matrix2d::Identity();
    for (Letter l : g.letters()) {
      const Eigen::Matrix2d& a = anchor_[static_cast<std::size_t>(std::abs(l) - 1)];
      m = m * (l > 0 ? a : Eigen::Matrix2d(a.inverse()));
    }
    return m;
  }

  /// log|det| of the anchor image, summed letter by letter (the determinant
  /// of a long product loses all relative precision to cancellation).
  double anchor_log_det(const Word& g) const {
    if (!has_anchor()) throw PreconditionError("model carries no anchor");
    double s = 0.0;
    for (Letter l : g.letters()) {
      const double ld = std::log(std::abs(anchor_[static_cast<std::size_t>(std::abs(l) - 1)].determinant()));
      s += l > 0 ? ld : -ld;
    }
    return s;
  }

  /// Shared index of the surface ball, built to at least radius R.
  const detail::SurfaceIndex& surface_index(int R) const {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    if (!cache_->index) {
      std::vector<Eigen::Matrix2d> gens(static_cast<std::size_t>(2 * rank_));
      for (int i = 0; i < rank_; ++i) {
        gens[static_cast<std::size_t>(2 * i)] = anchor_[static_cast<std::size_t>(i)];
        gens[static_cast<std::size_t>(2 * i + 1)] = anchor_[static_cast<std::size_t>(i)].inverse();
      }
      cache_->index = std::make_unique<detail::SurfaceIndex>(gens);
    }
    cache_->index->extend_to(R);
    return *cache_->index;
  }

  void check_word(const Word& g) const {
    if (g.max_generator() > rank_)
      throw PreconditionError("word " + g.str() + " uses a generator outside rank " + std::to_string(rank_));
  }

 private:
  struct Cache {
    std::mutex mutex;
    std::unique_ptr<detail::SurfaceIndex> index;
  };

  GroupModel(Kind k, int rank, std::vector<Eigen::Matrix2d> anchor, int bfsRadius)
      : kind_(k), rank_(rank), anchor_(std::move(anchor)), bfsRadius_(bfsRadius), cache_(std::make_shared<Cache>()) {}

  Kind kind_;
  int rank_;
  std::vector<Eigen::Matrix2d> anchor_;
  int bfsRadius_;
  std::shared_ptr<Cache> cache_;
};

inline std::shared_ptr<const GroupModel> GroupModel::surface(int genus, std::vector<Eigen::Matrix2d> anchor, int bfsRadius) {
  if (genus < 1) throw PreconditionError("surface genus must be >= 1");
  if (static_cast<int>(anchor.size()) != 2 * genus) throw PreconditionError("surface anchor needs 2*genus matrices");
  if (bfsRadius < 0) throw PreconditionError("bfsRadius must be >= 0");
  for (const auto& m : anchor)
    if (std::abs(std::abs(m.determinant()) - 1.0) > 1e-9) throw PreconditionError("surface anchor matrices must be unimodular");
  std::shared_ptr<const GroupModel> model(new GroupModel(Kind::Surface, 2 * genus, std::move(anchor), bfsRadius));
  const Eigen::Matrix2d rel = model->anchor_image(model->relator());
  const double err = std::min((rel - Eigen::Matrix2d::Identity()).norm(), (rel + Eigen::Matrix2d::Identity()).norm());
  if (err > 1e-8) throw PreconditionError("surface anchor violates the defining relation (error " + std::to_string(err) + ")");
  return model;
}

// ---------------------------------------------------------------------------
// Metrics and enumeration
// ---------------------------------------------------------------------------

/// Word length. Surface groups use the BFS index up to the configured
/// radius.
inline int word_length(const GroupModel& model, const Word& g) {
  model.check_word(g);
  if (model.is_free()) return static_cast<int>(g.size());
  const auto& idx = model.surface_index(model.bfs_radius());
  const std::int64_t i = idx.find(model.anchor_image(g));
  if (i < 0)
    throw SurfaceRadiusExceeded("word " + g.str() + " not found within BFS radius " + std::to_string(model.bfs_radius()));
  return idx.entry(static_cast<std::size_t>(i)).length;
}

/// Hyperbolic displacement 2 log sigma_1 of the anchor image.
inline double anchor_displacement(const GroupModel& model, const Word& g) {
  model.check_word(g);
  const Eigen::Matrix2d m = model.anchor_image(g);
  const double logDet = model.anchor_log_det(g);
  const double f = m.squaredNorm();
  const double det = std::exp(logDet);
  const double disc = std::sqrt(std::max(0.0, f * f - 4.0 * det * det));
  return std::max(0.0, std::log(0.5 * (f + disc)) - logDet);
}

struct StableLength {
  double value = 0.0;
  /// |estimate(N) - estimate(N/2)|; zero when the value is exact.
  double bracket = 0.0;
};

/// Stable length of the anchor displacement by power doubling:
/// (|g^N|_X - |g^{N/2}|_X) / (N/2), computed with log-scaled squaring.
inline StableLength anchor_stable_length(const GroupModel& model, const Word& g, int N = 64) {
  if (N < 4 || (N & (N - 1)) != 0) throw PreconditionError("power doubling needs N a power of two >= 4");
  Eigen::Matrix2d m = model.anchor_image(g);
  m /= std::exp(0.5 * model.anchor_log_det(g));
  double logScale = 0.0;
  std::map<int, double> disp;  // power -> 2 log sigma_1
  auto dispOf = [](const Eigen::Matrix2d& x, double ls) {
    const double f = x.squaredNorm();
    const double det = std::abs(x.determinant());
    const double disc = std::sqrt(std::max(0.0, f * f - 4.0 * det * det));
    return std::log(0.5 * (f + disc)) + 2.0 * ls;
  };
  for (int p = 1; p <= N; p *= 2) {
    disp[p] = dispOf(m, logScale);
    m = m * m;
    logScale *= 2.0;
    const double n = m.norm();
    m /= n;
    logScale += std::log(n);
  }
  const double est = (disp[N] - disp[N / 2]) / (N / 2);
  const double prev = (disp[N / 2] - disp[N / 4]) / (N / 4);
  return {std::max(0.0, est), std::abs(est - prev)};
}

/// Stable length: exact cyclically reduced length for free groups, anchor
/// power doubling for surface groups.
inline double stable_length(const GroupModel& model, const Word& g) {
  model.check_word(g);
  if (model.is_free()) return static_cast<double>(cyclic_reduce(g).size());
  return anchor_stable_length(model, g).value;
}

/// All free reduced words of length <= R in shortlex order.
inline std::vector<Word> enumerate_free_ball(int rank, int R) {
  if (R < 0) throw PreconditionError("radius must be >= 0");
  const auto letters = alphabet(rank);
  std::vector<Word> out{Word()};
  std::size_t lo = 0;
  for (int r = 1; r <= R; ++r) {
    const std::size_t hi = out.size();
    for (std::size_t i = lo; i < hi; ++i) {
      for (Letter l : letters) {
        if (!out[i].empty() && out[i].back() == -l) continue;
        std::vector<Letter> w(out[i].letters());
        w.push_back(l);
        out.push_back(Word::from_reduced(std::move(w)));
      }
    }
    lo = hi;
  }
  return out;
}

/// Every element of length <= R exactly once, in shortlex order. For
/// surface groups each element is represented by its shortlex-least
/// geodesic word, so the word length of each entry is its size.
inline std::vector<Word> ball(const GroupModel& model, int R) {
  if (R < 0) throw PreconditionError("radius must be >= 0");
  if (model.is_free()) return enumerate_free_ball(model.rank(), R);
  const auto& idx = model.surface_index(R);
  std::vector<Word> out;
  out.reserve(idx.layer_end(R));
  for (std::size_t i = 0; i < idx.layer_end(R); ++i) out.push_back(idx.word_of(i));
  return out;
}

inline std::size_t free_ball_size(int rank, int R) {
  std::size_t total = 1, sphere = 2 * static_cast<std::size_t>(rank);
  for (int r = 1; r <= R; ++r) {
    total += sphere;
    sphere *= 2 * static_cast<std::size_t>(rank) - 1;
  }
  return total;
}

/// Length of the longest common prefix.
inline std::size_t common_prefix(const Word& g, const Word& h) {
  std::size_t n = 0;
  while (n < g.size() && n < h.size() && g[n] == h[n]) ++n;
  return n;
}

/// (g . h)_e = (|g| + |h| - |g^-1 h|) / 2.
inline double gromov_product_group(const GroupModel& model, const Word& g, const Word& h) {
  if (model.is_free()) {
    model.check_word(g);
    model.check_word(h);
    return static_cast<double>(common_prefix(g, h));
  }
  return 0.5 * (word_length(model, g) + word_length(model, h) - word_length(model, g.inverse() * h));
}

/// Word defect |g| - |g|_inf; for free groups twice the conjugation depth.
inline double stable_defect(const GroupModel& model, const Word& g) {
  return word_length(model, g) - stable_length(model, g);
}

/// One representative (least rotation) per cyclic class of cyclically
/// reduced nonempty words of length <= L in a free group, in shortlex order.
inline std::vector<Word> cyclic_classes(int rank, int L) {
  std::vector<Word> out;
  for (const Word& w : enumerate_free_ball(rank, L)) {
    if (w.empty() || !is_cyclically_reduced(w)) continue;
    if (least_rotation(w) == w) out.push_back(w);
  }
  return out;
}

/// Conjugacy-class representatives for any model: free groups use
/// cyclic_classes; surface groups use nontrivial ball elements up to
/// radius L (no cyclic dedup available).
inline std::vector<Word> class_representatives(const GroupModel& model, int L) {
  if (L < 1) throw PreconditionError("cyclic length bound must be >= 1");
  if (model.is_free()) return cyclic_classes(model.rank(), L);
  auto b = ball(model, L);
  b.erase(b.begin());
  return b;
}

}  // namespace anosov
