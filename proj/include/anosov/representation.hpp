#pragma once
//
// Representations of free and surface groups into GL(d,R), evaluated on
// words in log-scaled form.
//

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "anosov/errors.hpp"
#include "anosov/linalg.hpp"
#include "anosov/parallel.hpp"
#include "anosov/words.hpp"

namespace anosov {

/// Generator images plus the group model they represent. Immutable after
/// construction; letter images are precomputed once. Inverses may be
/// supplied when they are known more accurately than a numerical inverse of
/// the generator (e.g. sym^q(g^-1) for a lift); otherwise they are computed
/// in extended precision.
class Representation {
 public:
  Representation(std::shared_ptr<const GroupModel> model, std::vector<Matrix> generators, bool unimodularize = false,
                 std::vector<int> blocks = {}, std::vector<Matrix> inverses = {})
      : model_(std::move(model)),
        gens_(std::move(generators)),
        invs_(std::move(inverses)),
        unimodular_(unimodularize),
        blocks_(std::move(blocks)) {
    if (!model_) throw PreconditionError("representation needs a group model");
    if (static_cast<int>(gens_.size()) != model_->rank())
      throw PreconditionError("representation has " + std::to_string(gens_.size()) + " generators, model rank is " +
                              std::to_string(model_->rank()));
    if (gens_.empty()) throw PreconditionError("representation needs generators");
    if (!invs_.empty() && invs_.size() != gens_.size()) throw PreconditionError("need one inverse per generator");
    dim_ = static_cast<int>(gens_.front().rows());
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      Matrix& g = gens_[i];
      if (g.rows() != dim_ || g.cols() != dim_) throw PreconditionError("generator images must be square of equal size");
      if (!g.allFinite()) throw PreconditionError("generator image has non-finite entries");
      const double det = g.determinant();
      if (!std::isfinite(det) || std::abs(det) < 1e-300) throw PreconditionError("generator image is not invertible");
      if (invs_.size() <= i) invs_.push_back(detail::accurate_inverse(g));
      if (unimodular_) {
        const double c = std::exp(ElementImage::from_pair(g, invs_[i]).logAbsDet / dim_);
        g /= c;
        invs_[i] *= c;
      }
    }
    if (!blocks_.empty()) {
      int total = 0;
      for (int b : blocks_) total += b;
      if (total != dim_) throw PreconditionError("block sizes must sum to the dimension");
    }
    letters_.reserve(gens_.size() * 2);
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      letters_.push_back(ElementImage::from_pair(gens_[i], invs_[i]));
      letters_.push_back(ElementImage::from_pair(invs_[i], gens_[i]));
    }
  }

  int dim() const { return dim_; }
  const GroupModel& model() const { return *model_; }
  const std::shared_ptr<const GroupModel>& model_ptr() const { return model_; }
  int rank() const { return model_->rank(); }
  const std::vector<Matrix>& generators() const { return gens_; }
  const Matrix& generator(int i) const { return gens_.at(static_cast<std::size_t>(i - 1)); }
  const std::vector<Matrix>& inverses() const { return invs_; }
  const Matrix& inverse(int i) const { return invs_.at(static_cast<std::size_t>(i - 1)); }
  bool unimodularized() const { return unimodular_; }
  /// Diagonal block sizes of an upper block-triangular representation.
  const std::vector<int>& blocks() const { return blocks_; }

  const ElementImage& letter_image(Letter l) const { return letters_[static_cast<std::size_t>(letter_rank(l))]; }
  const Matrix& letter_matrix(Letter l) const {
    const auto i = static_cast<std::size_t>(std::abs(l) - 1);
    return l > 0 ? gens_[i] : invs_[i];
  }

 private:
  std::shared_ptr<const GroupModel> model_;
  std::vector<Matrix> gens_;
  std::vector<Matrix> invs_;
  bool unimodular_;
  std::vector<int> blocks_;
  int dim_ = 0;
  std::vector<ElementImage> letters_;
};

namespace detail {

inline void require_same_model(const Representation& a, const Representation& b) {
  if (a.model_ptr() == b.model_ptr()) return;
  if (a.model().kind() != b.model().kind() || a.model().rank() != b.model().rank())
    throw PreconditionError("representations must share the group model");
}

}  // namespace detail

/// Product of generator images, renormalized after every multiply. Throws
/// SingularProduct when sigma_1/sigma_d exceeds 1e15, where the plain
/// matrix no longer resolves the small singular values.
inline ScaledMatrix rep_apply(const Representation& rho, const Word& g) {
  rho.model().check_word(g);
  ScaledMatrix m = ScaledMatrix::identity(rho.dim());
  for (Letter l : g.letters()) m = m * rho.letter_image(l).base();
  if (log_condition(m) > std::log(kMaxCondition))
    throw SingularProduct("condition number of rho(" + g.str() + ") exceeds 1e15");
  return m;
}

/// Graded image through all exterior powers; never loses the small
/// singular values, so it is what every scan uses.
inline ElementImage rep_image(const Representation& rho, const Word& g) {
  rho.model().check_word(g);
  ElementImage m = ElementImage::identity(rho.dim());
  for (Letter l : g.letters()) m = m * rho.letter_image(l);
  return m;
}

inline CartanVector cartan(const Representation& rho, const Word& g) { return cartan(rep_image(rho, g)); }
/// Eigenvalues are conjugation invariant, and the cyclically reduced word
/// avoids the ill-conditioned eigenproblem of a long conjugate.
inline LyapunovVector lyapunov(const Representation& rho, const Word& g) {
  return lyapunov(rep_image(rho, cyclic_reduce(g)));
}

/// Phi-Gromov product from the six Cartan projections.
inline double gromov_product_phi(const Representation& rho, const Word& g, const Word& h, const LinearFunctional& phi) {
  const Word gi = g.inverse(), hi = h.inverse();
  auto val = [&](const Word& w) { return functional(phi, cartan(rho, w)); };
  return 0.25 * (val(g) + val(gi) + val(h) + val(hi) - val(gi * h) - val(hi * g));
}

/// Words of a ball together with their images, looked up by word.
struct ImageTable {
  std::vector<Word> words;
  std::vector<ElementImage> images;
  std::unordered_map<Word, std::size_t, WordHash> index;

  std::size_t size() const { return words.size(); }
  const ElementImage& at(const Word& w) const {
    const auto it = index.find(w);
    if (it == index.end()) throw OutOfBall("word " + w.str() + " is not in the enumerated ball");
    return images[it->second];
  }
  bool contains(const Word& w) const { return index.count(w) > 0; }
  std::size_t position(const Word& w) const {
    const auto it = index.find(w);
    if (it == index.end()) throw OutOfBall("word " + w.str() + " is not in the enumerated ball");
    return it->second;
  }
};

/// Images of a shortlex-ordered, prefix-closed word list. Each image is
/// its prefix image times one letter, so results do not depend on the
/// thread count.
inline ImageTable image_table(const Representation& rho, std::vector<Word> words, unsigned threads = 1) {
  ImageTable t;
  t.words = std::move(words);
  t.images.resize(t.words.size());
  for (std::size_t i = 0; i < t.words.size(); ++i) t.index.emplace(t.words[i], i);
  std::size_t lo = 0;
  while (lo < t.words.size()) {
    std::size_t hi = lo;
    while (hi < t.words.size() && t.words[hi].size() == t.words[lo].size()) ++hi;
    parallel_for(hi - lo, threads, [&](std::size_t k) {
      const std::size_t i = lo + k;
      const Word& w = t.words[i];
      if (w.empty()) {
        t.images[i] = ElementImage::identity(rho.dim());
        return;
      }
      const auto it = t.index.find(w.prefix(w.size() - 1));
      if (it != t.index.end() && it->second < lo)
        t.images[i] = t.images[it->second] * rho.letter_image(w.back());
      else
        t.images[i] = rep_image(rho, w);
    });
    lo = hi;
  }
  return t;
}

inline ImageTable ball_images(const Representation& rho, int R, unsigned threads = 1) {
  return image_table(rho, ball(rho.model(), R), threads);
}

}  // namespace anosov
