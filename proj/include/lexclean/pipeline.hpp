#ifndef LEXCLEAN_PIPELINE_HPP
#define LEXCLEAN_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lexclean/assoc.hpp"
#include "lexclean/corpus.hpp"
#include "lexclean/mixture.hpp"

namespace lexclean {

// One row of the per-iteration diagnostics table.
struct IterationReport {
  int iteration = 0;
  double lambda_right = 0.0;
  double lambda_wrong = 0.0;
  std::uint64_t entries_in_lexicon = 0;
  double log_data_prob = 0.0;
  double mean_entry_log_likelihood = 0.0;
};

// Selects a lexicon snapshot either by a (k, n) plateau class, keeping all
// entries scoring at least as well as that class does under the current
// parameters, or by a raw minimum log score.
struct CutoffSpec {
  std::optional<std::pair<std::uint32_t, std::uint32_t>> plateau_class;
  double min_score = 0.0;

  static CutoffSpec plateau(std::uint32_t k, std::uint32_t n);
  static CutoffSpec min_log_score(double score);
  // "k/n" (plateau) or a decimal number (minimum log score).
  static CutoffSpec parse(const std::string& text);
  std::string describe() const;
};

struct CleanConfig {
  int max_iterations = 10;
  double param_tolerance = 1e-6;
  bool entry_set_stability = true;  // require an unchanged entry set too
  std::optional<CutoffSpec> cutoff;  // applied by the CLI after cleaning
  int workers = 1;
  bool dump_links = false;
  std::optional<std::filesystem::path> snapshot_dir;  // iter_<i>/ + report.tsv
};

struct CleanResult {
  Lexicon lexicon;
  std::vector<IterationReport> reports;
  bool reached_fixed_point = false;
};

// The iterative cleaning loop: link the corpus, discard entries that were
// never linked, fit the mixture on the survivors, regrade every survivor
// with its log likelihood ratio, and repeat until the entry set stops
// changing and both parameters move less than param_tolerance (or
// max_iterations is hit). Iterations after the first link with the
// regraded scores. Throws PipelineError when no entry is ever linked.
CleanResult clean(const Corpus& corpus, Lexicon initial,
                  const CleanConfig& config);

// Filtered copy of a regraded lexicon; the input is left untouched.
// Throws PipelineError if the lexicon was never regraded.
Lexicon apply_cutoff(const Lexicon& lexicon, const CutoffSpec& cutoff);

// The one-shot comparison mode: score all co-occurring pairs and keep
// those with G^2 >= threshold. Equivalent to build_initial_lexicon with
// min_score = threshold and no per-word cap.
Lexicon greedy_baseline(const Corpus& corpus, double threshold,
                        const CoocOptions& options = {});

}  // namespace lexclean

#endif  // LEXCLEAN_PIPELINE_HPP
