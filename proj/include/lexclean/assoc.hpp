#ifndef LEXCLEAN_ASSOC_HPP
#define LEXCLEAN_ASSOC_HPP

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "lexclean/corpus.hpp"
#include "lexclean/mixture_params.hpp"

namespace lexclean {

inline std::uint64_t pair_key(WordId v, WordId w) {
  return (static_cast<std::uint64_t>(v) << 32) | w;
}

// Both co-occurrence totals are kept per pair:
//   n_min      - sum over segments of min(count of v in S, count of w in T);
//                this is the n_E the link model uses, and it caps k_E.
//   n_presence - number of segment pairs where both words appear at least
//                once; this feeds the 2x2 contingency table, whose marginals
//                are presence counts, so all four cells stay non-negative.
struct PairCounts {
  std::uint32_t n_min = 0;
  std::uint32_t n_presence = 0;
};

struct CoocOptions {
  std::uint64_t max_pairs = 50'000'000;  // candidate-pair overflow guard
  int workers = 1;
};

class CoocTable {
 public:
  static CoocTable count(const Corpus& corpus, const CoocOptions& options = {});

  const PairCounts* find(WordId v, WordId w) const;
  std::uint64_t pair_count() const { return pairs_.size(); }
  std::uint64_t total_min() const { return total_min_; }            // N
  std::uint64_t total_presence() const { return total_presence_; }
  std::uint64_t segment_pairs() const { return segment_pairs_; }    // P

  // Number of segment pairs containing the word at least once.
  std::uint64_t occurrences(Side side, WordId id) const {
    const auto& occ = side == Side::source ? occ_source_ : occ_target_;
    return id < occ.size() ? occ[id] : 0;
  }

  template <class F>
  void for_each(F&& f) const {  // unordered
    for (const auto& [key, counts] : pairs_) {
      f(static_cast<WordId>(key >> 32), static_cast<WordId>(key & 0xffffffffu),
        counts);
    }
  }

 private:
  std::unordered_map<std::uint64_t, PairCounts> pairs_;
  std::vector<std::uint32_t> occ_source_;
  std::vector<std::uint32_t> occ_target_;
  std::uint64_t segment_pairs_ = 0;
  std::uint64_t total_min_ = 0;
  std::uint64_t total_presence_ = 0;
};

// G^2 log-likelihood-ratio statistic of the 2x2 table
//   a = n_vw          b = occ_v - a
//   c = occ_w - a     d = total - a - b - c
// computed as 2 * sum O*ln(O/E) with 0*ln(0/E) taken as 0. Symmetric in the
// two words and >= 0. Throws std::logic_error on a negative cell (that is a
// counting bug upstream, not bad input).
double g2_score(std::uint64_t n_vw, std::uint64_t occ_v, std::uint64_t occ_w,
                std::uint64_t total);

struct LexiconEntry {
  WordId source = 0;
  WordId target = 0;
  double score = 0.0;   // G^2 at generation 0, log likelihood ratio after
  std::uint32_t k = 0;  // links won in the latest linking pass
  std::uint32_t n = 0;  // co-occurrence count (min rule), fixed by the corpus
};

struct Lexicon {
  std::vector<LexiconEntry> entries;
  int generation = 0;  // number of cleaning iterations applied
  std::optional<MixtureParams> params;  // params that produced current scores
};

// Canonical order used everywhere a lexicon is ranked or serialized:
// descending score, ties by (source word, target word) byte-wise.
void sort_canonical(Lexicon& lexicon, const Corpus& corpus);

// All pairs with n_min >= 1 and G^2 >= min_score, optionally keeping only
// entries ranked in the top max_candidates_per_word both among their source
// word's candidates and among their target word's candidates (0 = no limit).
// Scores are G^2 over presence counts; k starts at 0; generation 0.
Lexicon build_initial_lexicon(const CoocTable& table, const Corpus& corpus,
                              double min_score = 0.0,
                              std::uint32_t max_candidates_per_word = 0);

}  // namespace lexclean

#endif  // LEXCLEAN_ASSOC_HPP
