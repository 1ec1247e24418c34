#include "lexclean/assoc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "lexclean/errors.hpp"

namespace lexclean {

namespace {

struct SegmentCounts {
  // distinct (word, token count) per side of one segment
  std::vector<std::pair<WordId, std::uint32_t>> source;
  std::vector<std::pair<WordId, std::uint32_t>> target;
};

void tally_side(const std::vector<WordId>& tokens,
                std::vector<std::pair<WordId, std::uint32_t>>& out) {
  out.clear();
  for (WordId id : tokens) {
    auto it = std::find_if(out.begin(), out.end(),
                           [id](const auto& p) { return p.first == id; });
    if (it == out.end()) {
      out.emplace_back(id, 1);
    } else {
      ++it->second;
    }
  }
}

struct PartialTable {
  std::unordered_map<std::uint64_t, PairCounts> pairs;
  std::vector<std::uint32_t> occ_source;
  std::vector<std::uint32_t> occ_target;
};

void count_range(const Corpus& corpus, std::size_t begin, std::size_t end,
                 PartialTable& out) {
  out.occ_source.assign(corpus.source_vocab.size(), 0);
  out.occ_target.assign(corpus.target_vocab.size(), 0);
  SegmentCounts seg;
  for (std::size_t i = begin; i < end; ++i) {
    const SegmentPair& pair = corpus.segments[i];
    tally_side(pair.source, seg.source);
    tally_side(pair.target, seg.target);
    for (const auto& [v, cv] : seg.source) ++out.occ_source[v];
    for (const auto& [w, cw] : seg.target) ++out.occ_target[w];
    for (const auto& [v, cv] : seg.source) {
      for (const auto& [w, cw] : seg.target) {
        PairCounts& counts = out.pairs[pair_key(v, w)];
        counts.n_min += std::min(cv, cw);
        counts.n_presence += 1;
      }
    }
  }
}

}  // namespace

const PairCounts* CoocTable::find(WordId v, WordId w) const {
  auto it = pairs_.find(pair_key(v, w));
  return it == pairs_.end() ? nullptr : &it->second;
}

CoocTable CoocTable::count(const Corpus& corpus, const CoocOptions& options) {
  if (corpus.segments.empty()) {
    throw EmptyCorpusError("cannot count co-occurrences of an empty corpus");
  }
  CoocTable table;
  table.segment_pairs_ = corpus.segments.size();

  int workers = std::max(1, options.workers);
  std::size_t n = corpus.segments.size();
  workers = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(workers), n));

  std::vector<PartialTable> parts(workers);
  if (workers == 1) {
    count_range(corpus, 0, n, parts[0]);
  } else {
    std::vector<std::thread> threads;
    std::size_t chunk = (n + workers - 1) / workers;
    for (int t = 0; t < workers; ++t) {
      std::size_t begin = t * chunk;
      std::size_t end = std::min(n, begin + chunk);
      threads.emplace_back(
          [&corpus, begin, end, &part = parts[t]] { count_range(corpus, begin, end, part); });
    }
    for (auto& th : threads) th.join();
  }

  // Merge by plain addition; the result cannot depend on the partitioning.
  table.occ_source_.assign(corpus.source_vocab.size(), 0);
  table.occ_target_.assign(corpus.target_vocab.size(), 0);
  for (const PartialTable& part : parts) {
    for (std::size_t i = 0; i < part.occ_source.size(); ++i) {
      table.occ_source_[i] += part.occ_source[i];
    }
    for (std::size_t i = 0; i < part.occ_target.size(); ++i) {
      table.occ_target_[i] += part.occ_target[i];
    }
    for (const auto& [key, counts] : part.pairs) {
      PairCounts& merged = table.pairs_[key];
      merged.n_min += counts.n_min;
      merged.n_presence += counts.n_presence;
    }
    if (table.pairs_.size() > options.max_pairs) {
      throw ResourceError("co-occurrence pair count exceeds the configured "
                          "bound of " + std::to_string(options.max_pairs));
    }
  }
  for (const auto& [key, counts] : table.pairs_) {
    (void)key;
    table.total_min_ += counts.n_min;
    table.total_presence_ += counts.n_presence;
  }
  return table;
}

double g2_score(std::uint64_t n_vw, std::uint64_t occ_v, std::uint64_t occ_w,
                std::uint64_t total) {
  if (n_vw > occ_v || n_vw > occ_w || occ_v + occ_w - n_vw > total) {
    throw std::logic_error("g2_score: negative contingency cell");
  }
  const double a = static_cast<double>(n_vw);
  const double b = static_cast<double>(occ_v - n_vw);
  const double c = static_cast<double>(occ_w - n_vw);
  const double d = static_cast<double>(total - occ_v - occ_w + n_vw);
  const double p = static_cast<double>(total);

  const double row1 = a + b, row2 = c + d;
  const double col1 = a + c, col2 = b + d;
  auto term = [p](double observed, double row, double col) {
    if (observed <= 0.0) return 0.0;
    return observed * std::log(observed * p / (row * col));
  };
  double g = 2.0 * (term(a, row1, col1) + term(b, row1, col2) +
                    term(c, row2, col1) + term(d, row2, col2));
  return std::max(0.0, g);  // clip the odd -1e-16 from rounding
}

void sort_canonical(Lexicon& lexicon, const Corpus& corpus) {
  const Vocabulary& src = corpus.source_vocab;
  const Vocabulary& tgt = corpus.target_vocab;
  std::sort(lexicon.entries.begin(), lexicon.entries.end(),
            [&](const LexiconEntry& x, const LexiconEntry& y) {
              if (x.score != y.score) return x.score > y.score;
              int c = src.word(x.source).compare(src.word(y.source));
              if (c != 0) return c < 0;
              return tgt.word(x.target) < tgt.word(y.target);
            });
}

Lexicon build_initial_lexicon(const CoocTable& table, const Corpus& corpus,
                              double min_score,
                              std::uint32_t max_candidates_per_word) {
  Lexicon lexicon;
  const std::uint64_t total = table.segment_pairs();
  table.for_each([&](WordId v, WordId w, const PairCounts& counts) {
    double score = g2_score(counts.n_presence,
                            table.occurrences(Side::source, v),
                            table.occurrences(Side::target, w), total);
    if (score < min_score) return;
    lexicon.entries.push_back({v, w, score, 0, counts.n_min});
  });
  sort_canonical(lexicon, corpus);

  if (max_candidates_per_word > 0 && !lexicon.entries.empty()) {
    // An entry survives only if it ranks in the top k both among its source
    // word's candidates and among its target word's candidates. The two
    // ranks are taken over the full candidate set, which keeps the filter
    // symmetric under corpus transposition.
    std::vector<std::uint32_t> src_rank(corpus.source_vocab.size(), 0);
    std::vector<std::uint32_t> tgt_rank(corpus.target_vocab.size(), 0);
    std::vector<LexiconEntry> kept;
    kept.reserve(lexicon.entries.size());
    for (const LexiconEntry& e : lexicon.entries) {  // already sorted
      std::uint32_t sr = ++src_rank[e.source];
      std::uint32_t tr = ++tgt_rank[e.target];
      if (sr <= max_candidates_per_word && tr <= max_candidates_per_word) {
        kept.push_back(e);
      }
    }
    lexicon.entries = std::move(kept);
  }

  lexicon.generation = 0;
  lexicon.params.reset();
  return lexicon;
}

}  // namespace lexclean
