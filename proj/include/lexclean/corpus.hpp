#ifndef LEXCLEAN_CORPUS_HPP
#define LEXCLEAN_CORPUS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace lexclean {

using WordId = std::uint32_t;

enum class Side { source, target };

// Suffix-stripping stemmer configuration. An empty suffix list is the
// identity stemmer. Otherwise the longest listed suffix is stripped, at
// most once, subject to two guards: the remaining stem must have at least
// min_stem_len characters and must not itself end in a listed suffix.
// The second guard is what makes single-pass stripping idempotent.
struct StemmerSpec {
  std::vector<std::string> suffixes;  // kept sorted and deduplicated
  std::size_t min_stem_len = 3;

  bool is_identity() const { return suffixes.empty(); }
  std::string id() const;

  // Accepts "identity" or "suffixes=[s,es,ing,ed]" with an optional
  // ";min_stem_len=N" tail. Brackets are optional.
  static StemmerSpec parse(std::string_view text);
};

std::string stem(const std::string& word, const StemmerSpec& spec);

// One side's word-string <-> word-id bijection plus token counts.
class Vocabulary {
 public:
  explicit Vocabulary(Side side) : side_(side) {}

  WordId intern(const std::string& word);
  std::optional<WordId> find(const std::string& word) const;
  const std::string& word(WordId id) const { return words_[id]; }
  std::size_t size() const { return words_.size(); }
  Side side() const { return side_; }

  // Total token count of this word across all segments, after stop-list
  // deletion and stemming.
  std::uint64_t occurrences(WordId id) const { return occurrences_[id]; }
  void add_occurrence(WordId id) { ++occurrences_[id]; }

  bool operator==(const Vocabulary& other) const {
    return side_ == other.side_ && words_ == other.words_ &&
           occurrences_ == other.occurrences_;
  }

 private:
  Side side_;
  std::unordered_map<std::string, WordId> ids_;
  std::vector<std::string> words_;
  std::vector<std::uint64_t> occurrences_;
};

// One aligned segment pair as interned word ids, in input token order.
// Either side may be empty (stop-list deletion can empty a segment).
struct SegmentPair {
  std::vector<WordId> source;
  std::vector<WordId> target;
  std::size_t index = 0;

  bool operator==(const SegmentPair&) const = default;
};

struct PreprocessRecord {
  std::uint64_t stoplist_source_checksum = 0;
  std::uint64_t stoplist_target_checksum = 0;
  std::string stemmer_id = "identity";
  bool lowercase = false;

  bool operator==(const PreprocessRecord&) const = default;
};

struct Corpus {
  std::vector<SegmentPair> segments;
  Vocabulary source_vocab{Side::source};
  Vocabulary target_vocab{Side::target};
  PreprocessRecord preprocessing;

  const Vocabulary& vocab(Side side) const {
    return side == Side::source ? source_vocab : target_vocab;
  }

  bool operator==(const Corpus& other) const {
    return segments == other.segments && source_vocab == other.source_vocab &&
           target_vocab == other.target_vocab &&
           preprocessing == other.preprocessing;
  }
};

struct PreprocessOptions {
  std::optional<std::filesystem::path> stoplist_source;
  std::optional<std::filesystem::path> stoplist_target;
  StemmerSpec stemmer;
  bool lowercase = false;  // ASCII-only when enabled
};

// Bitext format: one segment pair per line, source and target separated by
// a single TAB, tokens separated by single spaces, UTF-8. Zero-length lines
// are skipped; a line without a TAB (or with more than one) is malformed.
// Throws ParseError / IoError / EmptyCorpusError.
Corpus load_corpus(const std::filesystem::path& path,
                   const PreprocessOptions& options = {});
Corpus read_bitext(std::istream& in, const PreprocessOptions& options = {},
                   std::string_view stream_name = "<stream>");

// Stop-list format: one word per line, lines starting with '#' ignored.
struct Stoplist {
  std::unordered_set<std::string> words;
  std::uint64_t checksum = 0;  // FNV-1a over the raw file bytes
};
Stoplist load_stoplist(const std::filesystem::path& path);
Stoplist read_stoplist(std::istream& in);

// Incremental corpus assembly used by both the bitext reader and the
// synthetic generator: tokens are interned in encounter order, so the same
// token sequence always yields the same Corpus.
class CorpusBuilder {
 public:
  void add_segment(const std::vector<std::string>& source_tokens,
                   const std::vector<std::string>& target_tokens);
  Corpus finish(PreprocessRecord record = {});

 private:
  Corpus corpus_;
};

}  // namespace lexclean

#endif  // LEXCLEAN_CORPUS_HPP
