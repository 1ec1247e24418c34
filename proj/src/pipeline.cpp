#include "lexclean/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>

#include "lexclean/errors.hpp"
#include "lexclean/io.hpp"
#include "lexclean/linker.hpp"

namespace lexclean {

CutoffSpec CutoffSpec::plateau(std::uint32_t k, std::uint32_t n) {
  CutoffSpec spec;
  spec.plateau_class = {k, n};
  return spec;
}

CutoffSpec CutoffSpec::min_log_score(double score) {
  CutoffSpec spec;
  spec.min_score = score;
  return spec;
}

CutoffSpec CutoffSpec::parse(const std::string& text) {
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    try {
      std::uint32_t k = static_cast<std::uint32_t>(
          std::stoul(text.substr(0, slash)));
      std::uint32_t n = static_cast<std::uint32_t>(
          std::stoul(text.substr(slash + 1)));
      if (k > n) throw ConfigError("cutoff plateau has k > n: " + text);
      return plateau(k, n);
    } catch (const std::invalid_argument&) {
      throw ConfigError("bad cutoff plateau: " + text);
    }
  }
  try {
    return min_log_score(std::stod(text));
  } catch (const std::invalid_argument&) {
    throw ConfigError("bad cutoff: " + text);
  }
}

std::string CutoffSpec::describe() const {
  if (plateau_class) {
    return "plateau " + std::to_string(plateau_class->first) + "/" +
           std::to_string(plateau_class->second);
  }
  return "min_log_score " + fmt_g17(min_score);
}

namespace {

void write_iteration_snapshot(const std::filesystem::path& dir, int iteration,
                              const Corpus& corpus, const Lexicon& lexicon,
                              const MixtureParams& params) {
  std::filesystem::path iter_dir = dir / ("iter_" + std::to_string(iteration));
  std::filesystem::create_directories(iter_dir);
  write_lexicon_file(iter_dir / "lexicon.tsv", lexicon, corpus);
  write_params_file(iter_dir / "params.txt", params);
}

}  // namespace

CleanResult clean(const Corpus& corpus, Lexicon lexicon,
                  const CleanConfig& config) {
  if (lexicon.entries.empty()) {
    throw PipelineError("initial lexicon is empty");
  }
  if (config.max_iterations < 1) {
    throw ConfigError("max_iterations must be at least 1");
  }

  CleanResult result;
  std::optional<MixtureParams> previous = lexicon.params;

  for (int iteration = 1; iteration <= config.max_iterations; ++iteration) {
    if (config.dump_links && config.snapshot_dir) {
      std::filesystem::path iter_dir =
          *config.snapshot_dir / ("iter_" + std::to_string(iteration));
      std::filesystem::create_directories(iter_dir);
      std::ofstream out(iter_dir / "links.tsv");
      dump_links(corpus, lexicon, out);
    }

    LinkTally tally = link_corpus(corpus, lexicon, {config.workers});

    // Entries that never won a competition carry no evidence either way;
    // drop them before fitting.
    std::vector<LexiconEntry> kept;
    kept.reserve(lexicon.entries.size());
    LinkTally kept_tally;
    for (std::size_t i = 0; i < lexicon.entries.size(); ++i) {
      if (tally.entries[i].k == 0) continue;
      LexiconEntry entry = lexicon.entries[i];
      entry.k = tally.entries[i].k;
      kept.push_back(entry);
      kept_tally.entries.push_back(tally.entries[i]);
      kept_tally.K += tally.entries[i].k;
      kept_tally.N += tally.entries[i].n;
    }
    if (kept.empty()) {
      throw PipelineError("no entry ever linked (iteration " +
                          std::to_string(iteration) + ")");
    }
    const bool entry_set_changed = kept.size() != lexicon.entries.size();

    MixtureParams params;
    try {
      params = estimate_params(kept_tally);
    } catch (const EstimationError& e) {
      throw EstimationError("iteration " + std::to_string(iteration) + ": " +
                            e.what());
    }

    for (LexiconEntry& entry : kept) {
      entry.score = likelihood_ratio_log(entry.k, entry.n, params);
    }
    lexicon.entries = std::move(kept);
    lexicon.generation += 1;
    lexicon.params = params;
    sort_canonical(lexicon, corpus);

    result.reports.push_back(
        {iteration, params.lambda_right, params.lambda_wrong,
         static_cast<std::uint64_t>(lexicon.entries.size()),
         params.log_data_prob,
         params.log_data_prob / static_cast<double>(lexicon.entries.size())});

    if (config.snapshot_dir) {
      write_iteration_snapshot(*config.snapshot_dir, iteration, corpus,
                               lexicon, params);
    }

    if (previous &&
        (!config.entry_set_stability || !entry_set_changed) &&
        std::fabs(params.lambda_right - previous->lambda_right) <
            config.param_tolerance &&
        std::fabs(params.lambda_wrong - previous->lambda_wrong) <
            config.param_tolerance) {
      result.reached_fixed_point = true;
      break;
    }
    previous = params;
  }

  if (config.snapshot_dir) {
    write_report_file(*config.snapshot_dir / "report.tsv", result.reports);
  }
  result.lexicon = std::move(lexicon);
  return result;
}

Lexicon apply_cutoff(const Lexicon& lexicon, const CutoffSpec& cutoff) {
  if (lexicon.generation < 1 || !lexicon.params) {
    throw PipelineError("lexicon not regraded");
  }
  double threshold;
  if (cutoff.plateau_class) {
    threshold = likelihood_ratio_log(cutoff.plateau_class->first,
                                     cutoff.plateau_class->second,
                                     *lexicon.params);
    if (threshold <= 0.0) {
      std::cerr << "lexclean: warning: cutoff " << cutoff.describe()
                << " has non-positive score " << threshold
                << "; it keeps more than intended\n";
    }
  } else {
    threshold = cutoff.min_score;
  }

  Lexicon filtered;
  filtered.generation = lexicon.generation;
  filtered.params = lexicon.params;
  for (const LexiconEntry& entry : lexicon.entries) {
    if (entry.score >= threshold) filtered.entries.push_back(entry);
  }
  return filtered;
}

Lexicon greedy_baseline(const Corpus& corpus, double threshold,
                        const CoocOptions& options) {
  CoocTable table = CoocTable::count(corpus, options);
  return build_initial_lexicon(table, corpus, threshold, 0);
}

}  // namespace lexclean
