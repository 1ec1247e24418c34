#include "lexclean/linker.hpp"

#include <algorithm>
#include <ostream>
#include <thread>

namespace lexclean {

namespace {

// Remaining (unconsumed) token positions of one word in one segment side,
// consumed leftmost first.
struct TokenPool {
  std::vector<std::uint32_t> positions;
  std::uint32_t next = 0;

  std::uint32_t remaining() const {
    return static_cast<std::uint32_t>(positions.size()) - next;
  }
  std::uint32_t take() { return positions[next++]; }
};

using PoolMap = std::unordered_map<WordId, TokenPool>;

void fill_pools(const std::vector<WordId>& tokens, PoolMap& pools) {
  pools.clear();
  for (std::uint32_t pos = 0; pos < tokens.size(); ++pos) {
    pools[tokens[pos]].positions.push_back(pos);
  }
}

struct Candidate {
  double score;
  std::uint32_t entry;
  WordId v;
  WordId w;
};

}  // namespace

LexiconIndex::LexiconIndex(const Lexicon& lexicon) {
  index_.reserve(lexicon.entries.size());
  for (std::uint32_t i = 0; i < lexicon.entries.size(); ++i) {
    const LexiconEntry& e = lexicon.entries[i];
    index_.emplace(pair_key(e.source, e.target), i);
  }
}

const std::uint32_t* LexiconIndex::find(WordId v, WordId w) const {
  auto it = index_.find(pair_key(v, w));
  return it == index_.end() ? nullptr : &it->second;
}

LinkAssignment link_segment(const SegmentPair& pair, const Lexicon& lexicon,
                            const LexiconIndex& index, const Corpus& corpus) {
  LinkAssignment assignment;
  assignment.segment_index = pair.index;
  if (pair.source.empty() || pair.target.empty()) return assignment;

  PoolMap src_pools, tgt_pools;
  fill_pools(pair.source, src_pools);
  fill_pools(pair.target, tgt_pools);

  std::vector<Candidate> candidates;
  for (const auto& [v, vp] : src_pools) {
    for (const auto& [w, wp] : tgt_pools) {
      if (const std::uint32_t* e = index.find(v, w)) {
        candidates.push_back({lexicon.entries[*e].score, *e, v, w});
      }
    }
  }

  // Highest score first; equal scores fall back to the word strings so the
  // outcome is independent of hash iteration and lexicon storage order.
  const Vocabulary& src_vocab = corpus.source_vocab;
  const Vocabulary& tgt_vocab = corpus.target_vocab;
  std::sort(candidates.begin(), candidates.end(),
            [&](const Candidate& x, const Candidate& y) {
              if (x.score != y.score) return x.score > y.score;
              int c = src_vocab.word(x.v).compare(src_vocab.word(y.v));
              if (c != 0) return c < 0;
              return tgt_vocab.word(x.w) < tgt_vocab.word(y.w);
            });

  // Taking each candidate as often as its tokens allow, in sorted order,
  // is the same as repeatedly re-picking the best applicable entry: a
  // consumed token never makes another entry applicable.
  for (const Candidate& cand : candidates) {
    TokenPool& vp = src_pools[cand.v];
    TokenPool& wp = tgt_pools[cand.w];
    std::uint32_t m = std::min(vp.remaining(), wp.remaining());
    for (std::uint32_t j = 0; j < m; ++j) {
      assignment.links.push_back({vp.take(), wp.take(), cand.entry});
    }
  }
  return assignment;
}

LinkAssignment link_segment(const SegmentPair& pair, const Lexicon& lexicon,
                            const Corpus& corpus) {
  LexiconIndex index(lexicon);
  return link_segment(pair, lexicon, index, corpus);
}

LinkTally link_corpus(const Corpus& corpus, const Lexicon& lexicon,
                      const LinkOptions& options) {
  LexiconIndex index(lexicon);
  const std::size_t n_segments = corpus.segments.size();
  int workers = std::max(1, options.workers);
  workers = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(workers),
                            std::max<std::size_t>(1, n_segments)));

  std::vector<std::vector<std::uint32_t>> partial(
      workers, std::vector<std::uint32_t>(lexicon.entries.size(), 0));

  auto run = [&](std::size_t begin, std::size_t end,
                 std::vector<std::uint32_t>& k) {
    for (std::size_t i = begin; i < end; ++i) {
      LinkAssignment a = link_segment(corpus.segments[i], lexicon, index, corpus);
      for (const Link& link : a.links) ++k[link.entry];
    }
  };

  if (workers == 1) {
    run(0, n_segments, partial[0]);
  } else {
    std::vector<std::thread> threads;
    std::size_t chunk = (n_segments + workers - 1) / workers;
    for (int t = 0; t < workers; ++t) {
      std::size_t begin = t * chunk;
      std::size_t end = std::min(n_segments, begin + chunk);
      threads.emplace_back(run, begin, end, std::ref(partial[t]));
    }
    for (auto& th : threads) th.join();
  }

  LinkTally tally;
  tally.entries.resize(lexicon.entries.size());
  for (std::size_t i = 0; i < lexicon.entries.size(); ++i) {
    std::uint32_t k = 0;
    for (const auto& part : partial) k += part[i];
    tally.entries[i] = {k, lexicon.entries[i].n};
    tally.K += k;
    tally.N += lexicon.entries[i].n;
  }
  return tally;
}

void dump_links(const Corpus& corpus, const Lexicon& lexicon,
                std::ostream& out) {
  LexiconIndex index(lexicon);
  out << "segment_index\tsource_word\ttarget_word\n";
  for (const SegmentPair& pair : corpus.segments) {
    LinkAssignment a = link_segment(pair, lexicon, index, corpus);
    std::sort(a.links.begin(), a.links.end(),
              [](const Link& x, const Link& y) {
                return x.source_pos < y.source_pos;
              });
    for (const Link& link : a.links) {
      out << pair.index << '\t'
          << corpus.source_vocab.word(pair.source[link.source_pos]) << '\t'
          << corpus.target_vocab.word(pair.target[link.target_pos]) << '\n';
    }
  }
}

}  // namespace lexclean
