#ifndef LEXCLEAN_EVAL_HPP
#define LEXCLEAN_EVAL_HPP

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lexclean/assoc.hpp"
#include "lexclean/corpus.hpp"

namespace lexclean {

// Word-type recall: a word counts as represented when at least one lexicon
// entry contains it.
struct RecallReport {
  struct SideRecall {
    std::uint64_t represented = 0;
    std::uint64_t total = 0;
    double percent = 0.0;  // 100 when total == 0 (vacuously complete)
  };
  SideRecall source;
  SideRecall target;
  SideRecall combined;  // sides added, never merged across languages
};

RecallReport measure_recall(const Lexicon& lexicon, const Corpus& corpus);

// Gold pairs are stemmed with the run's stemmer on load so that morphology
// never causes a false mismatch against a stemmed corpus.
struct GoldLexicon {
  std::set<std::pair<std::string, std::string>> pairs;
};
GoldLexicon load_gold(const std::filesystem::path& path,
                      const StemmerSpec& stemmer = {});
GoldLexicon read_gold(std::istream& in, const StemmerSpec& stemmer = {});

enum class Verdict { gold_match, human_pending, human_correct, human_incorrect };

struct PrecisionSample {
  int sample_id = 0;
  std::vector<std::uint32_t> draws;  // entry indices, with replacement
  std::vector<Verdict> verdicts;     // parallel to draws
  std::uint64_t seed = 0;
};

// Seeded with-replacement sampling over the canonically ordered entries.
// Entries found in the gold file are verdicted gold_match; the rest start
// as human_pending and need adjudication before a precision number exists.
std::vector<PrecisionSample> sample_for_precision(const Lexicon& lexicon,
                                                  const Corpus& corpus,
                                                  const GoldLexicon& gold,
                                                  int n_samples = 5,
                                                  int sample_size = 100,
                                                  std::uint64_t seed = 0);

struct PrecisionReport {
  struct Row {
    int sample_id = 0;
    int gold_matches = 0;
    int human_correct = 0;
    int human_incorrect = 0;
    int pending = 0;
    double precision_percent = 0.0;  // meaningful only when pending == 0
  };
  std::vector<Row> rows;
  bool complete = false;      // no pending verdicts anywhere
  double mean_percent = 0.0;  // across samples, when complete
  double stddev_percent = 0.0;  // sample standard deviation, when complete
};

PrecisionReport summarize_precision(const std::vector<PrecisionSample>& samples);

// Whole-lexicon precision against a gold file: fraction of entries whose
// (source, target) strings appear in the gold set. The closed-loop metric
// for synthetic corpora where the gold file is the generator's truth.
double lexicon_precision_percent(const Lexicon& lexicon, const Corpus& corpus,
                                 const GoldLexicon& gold);

// Adjudication round trip: pending draws are written with a verdict column
// a human fills in ("correct"/"incorrect") and feeds back.
struct AdjudicationRow {
  int sample_id = 0;
  int draw_index = 0;
  std::string source;
  std::string target;
  std::string verdict;  // "pending", "correct", or "incorrect"
};
void write_adjudications(std::ostream& out,
                         const std::vector<PrecisionSample>& samples,
                         const Lexicon& lexicon, const Corpus& corpus);
std::vector<AdjudicationRow> read_adjudications(std::istream& in);
void apply_adjudications(std::vector<PrecisionSample>& samples,
                         const std::vector<AdjudicationRow>& rows);

// Segment pairs containing the entry's source word on the source side and
// target word on the target side, in segment order, with every occurrence
// of the two words marked.
struct ConcordanceExcerpt {
  std::size_t segment_index = 0;
  std::vector<std::uint32_t> source_positions;
  std::vector<std::uint32_t> target_positions;
};
std::vector<ConcordanceExcerpt> concordance(WordId v, WordId w,
                                            const Corpus& corpus,
                                            std::size_t max_lines);
// Plain text, one excerpt per line pair, matched tokens wrapped in [[...]].
void render_concordance(std::ostream& out,
                        const std::vector<ConcordanceExcerpt>& excerpts,
                        const Corpus& corpus);

// Synthetic bitext with a known one-to-one lexicon. Source segments draw
// Zipf-distributed words, except that with probability p_colloc a token is
// the collocate partner of its predecessor (words of adjacent rank are
// paired), giving the corpus the tight word collocations that indirect
// associations feed on. Each source token then either emits its true
// translation (p_trans), emits nothing (p_drop), emits the translation of
// a neighboring source token (p_indirect; with collocations in place this
// plants strong indirect associations), or emits a uniformly random target
// word (the remaining probability mass).
struct GeneratorConfig {
  std::uint32_t truth_pairs = 1000;
  std::uint32_t source_vocab = 1000;  // >= truth_pairs
  std::uint32_t target_vocab = 1000;
  double zipf_exponent = 1.5;
  double p_colloc = 0.5;
  std::uint32_t segments = 50000;
  std::uint32_t min_len = 4;
  std::uint32_t max_len = 8;
  double p_trans = 0.94;
  double p_drop = 0.01;
  double p_indirect = 0.05;
  std::uint64_t seed = 42;
};

struct GroundTruth {
  std::set<std::pair<std::string, std::string>> pairs;
  GeneratorConfig config;
};

// Deterministic per seed, bit for bit. Throws ConfigError on inconsistent
// rates (sum > 1) or impossible sizes.
std::pair<Corpus, GroundTruth> generate_bitext(const GeneratorConfig& config);

void write_bitext(std::ostream& out, const Corpus& corpus);
void write_gold(std::ostream& out, const GroundTruth& truth);

}  // namespace lexclean

#endif  // LEXCLEAN_EVAL_HPP
