#ifndef LEXCLEAN_LINKER_HPP
#define LEXCLEAN_LINKER_HPP

#include <cstdint>
#include <iosfwd>
#include <unordered_map>
#include <vector>

#include "lexclean/assoc.hpp"
#include "lexclean/corpus.hpp"

namespace lexclean {

struct Link {
  std::uint32_t source_pos = 0;
  std::uint32_t target_pos = 0;
  std::uint32_t entry = 0;  // index into Lexicon::entries

  bool operator==(const Link&) const = default;
};

struct LinkAssignment {
  std::size_t segment_index = 0;
  std::vector<Link> links;  // in acceptance order; no position repeats
};

struct EntryTally {
  std::uint32_t k = 0;
  std::uint32_t n = 0;
};

struct LinkTally {
  std::vector<EntryTally> entries;  // parallel to Lexicon::entries
  std::uint64_t K = 0;              // total links
  std::uint64_t N = 0;              // sum of n over current lexicon entries
};

// (source, target) -> entry index lookup, built once per linking pass.
class LexiconIndex {
 public:
  explicit LexiconIndex(const Lexicon& lexicon);
  const std::uint32_t* find(WordId v, WordId w) const;

 private:
  std::unordered_map<std::uint64_t, std::uint32_t> index_;
};

// Competitive linking within one segment pair: repeatedly take the
// highest-scoring lexicon entry whose words both still have unconsumed
// tokens, link one token of each (leftmost positions first), and remove
// them. Ties on score are broken by the lexicographically smaller
// (source word, target word), so the result does not depend on lexicon
// storage order.
LinkAssignment link_segment(const SegmentPair& pair, const Lexicon& lexicon,
                            const LexiconIndex& index, const Corpus& corpus);
LinkAssignment link_segment(const SegmentPair& pair, const Lexicon& lexicon,
                            const Corpus& corpus);

struct LinkOptions {
  int workers = 1;
};

// Links every segment pair and accumulates k per entry. K = sum of k.
// N is recomputed over the current lexicon entries' n. Partition-invariant:
// the tally is a sum of per-segment integer counts.
LinkTally link_corpus(const Corpus& corpus, const Lexicon& lexicon,
                      const LinkOptions& options = {});

// Debug dump: segment_index, source_word, target_word per link, sorted by
// (segment_index, source token position).
void dump_links(const Corpus& corpus, const Lexicon& lexicon,
                std::ostream& out);

}  // namespace lexclean

#endif  // LEXCLEAN_LINKER_HPP
