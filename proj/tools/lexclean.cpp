// Batch front end for the lexicon induction and cleaning pipeline.
//
// Subcommands: synth, induce, clean, cutoff, baseline, eval, concord.
// Every run writes config.resolved and report.tsv into --out so that any
// result can be reproduced from the run directory alone.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "lexclean/assoc.hpp"
#include "lexclean/corpus.hpp"
#include "lexclean/errors.hpp"
#include "lexclean/eval.hpp"
#include "lexclean/io.hpp"
#include "lexclean/linker.hpp"
#include "lexclean/pipeline.hpp"

namespace fs = std::filesystem;
using namespace lexclean;

namespace {

// ---------------------------------------------------------------------------
// run directory helpers

class RunDir {
 public:
  explicit RunDir(const std::string& out) : dir_(out) {
    fs::create_directories(dir_);
  }

  const fs::path& path() const { return dir_; }
  fs::path file(const std::string& name) const { return dir_ / name; }

  void set(const std::string& key, const std::string& value) {
    resolved_[key] = value;
  }
  void set(const std::string& key, double value) { set(key, fmt_g17(value)); }
  void set(const std::string& key, std::uint64_t value) {
    set(key, std::to_string(value));
  }
  void set(const std::string& key, int value) { set(key, std::to_string(value)); }
  void set(const std::string& key, bool value) {
    set(key, value ? std::string("true") : std::string("false"));
  }

  // key = value lines, sorted; readable back through --config
  void write_config() const {
    std::ofstream out(file("config.resolved"), std::ios::binary);
    if (!out) throw IoError("cannot write " + file("config.resolved").string());
    for (const auto& [key, value] : resolved_) {
      out << key << " = " << value << '\n';
    }
  }

  void write_table(const std::string& name,
                   const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows) const {
    std::ofstream out(file(name), std::ios::binary);
    if (!out) throw IoError("cannot write " + file(name).string());
    for (std::size_t i = 0; i < header.size(); ++i) {
      out << (i ? "\t" : "") << header[i];
    }
    out << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        out << (i ? "\t" : "") << row[i];
      }
      out << '\n';
    }
  }

 private:
  fs::path dir_;
  std::map<std::string, std::string> resolved_;
};

std::string fmt_percent(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  return buf;
}

// ---------------------------------------------------------------------------
// shared option bundles

struct PreprocessFlags {
  std::string corpus;
  std::string stoplist_src;
  std::string stoplist_tgt;
  std::string stemmer = "identity";
  bool lowercase = false;

  PreprocessOptions options() const {
    PreprocessOptions opts;
    if (!stoplist_src.empty()) opts.stoplist_source = stoplist_src;
    if (!stoplist_tgt.empty()) opts.stoplist_target = stoplist_tgt;
    opts.stemmer = StemmerSpec::parse(stemmer);
    opts.lowercase = lowercase;
    return opts;
  }

  Corpus load() const { return load_corpus(corpus, options()); }

  void record(RunDir& run) const {
    run.set("corpus", corpus);
    run.set("stoplist-src", stoplist_src);
    run.set("stoplist-tgt", stoplist_tgt);
    run.set("stemmer", stemmer);
    run.set("lowercase", lowercase);
  }
};

void add_preprocess_flags(CLI::App* sub, PreprocessFlags& flags) {
  sub->add_option("--corpus", flags.corpus, "bitext file (source TAB target)")
      ->required();
  sub->add_option("--stoplist-src", flags.stoplist_src,
                  "source-side stop-list file");
  sub->add_option("--stoplist-tgt", flags.stoplist_tgt,
                  "target-side stop-list file");
  sub->add_option("--stemmer", flags.stemmer,
                  "identity or suffixes=[s,es,...];min_stem_len=N");
  sub->add_flag("--lowercase", flags.lowercase, "ASCII-lowercase all tokens");
}

int resolve_workers(int workers_flag) {
  if (workers_flag > 0) return workers_flag;
  if (const char* env = std::getenv("LEXCLEAN_WORKERS")) {
    int value = std::atoi(env);
    if (value > 0) return value;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// a generation-0 lexicon has k = 0 everywhere; cleaned snapshots never do
bool rows_regraded(const std::vector<LexiconRow>& rows) {
  return std::any_of(rows.begin(), rows.end(),
                     [](const LexiconRow& r) { return r.k > 0; });
}

void write_lexicon_rows_file(const fs::path& path,
                             const std::vector<LexiconRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "source_word\ttarget_word\tscore\tk\tn\n";
  for (const LexiconRow& r : rows) {
    out << r.source << '\t' << r.target << '\t' << fmt_f6(r.score) << '\t'
        << r.k << '\t' << r.n << '\n';
  }
}

// ---------------------------------------------------------------------------
// subcommand state

struct SynthFlags {
  GeneratorConfig config;
  std::string out;
};

struct InduceFlags {
  PreprocessFlags pre;
  double min_score = 0.0;
  std::uint32_t max_candidates = 0;
  std::uint64_t max_pairs = 50'000'000;
  int workers = 0;
  std::string out;
};

struct CleanFlags {
  InduceFlags induce;
  int max_iter = 10;
  double param_tolerance = 1e-6;
  std::string plateau;
  std::optional<double> min_log_score;
  bool dump_links = false;
};

struct CutoffFlags {
  std::string lexicon;
  std::string params;
  std::string plateau;
  std::optional<double> min_log_score;
  std::string out;
};

struct BaselineFlags {
  PreprocessFlags pre;
  double threshold = 0.0;
  std::uint64_t max_pairs = 50'000'000;
  int workers = 0;
  std::string out;
};

struct EvalFlags {
  PreprocessFlags pre;
  std::string lexicon;
  std::string gold;
  std::string adjudications;
  int samples = 5;
  int sample_size = 100;
  std::uint64_t seed = 0;
  std::size_t max_lines = 10;
  std::string out;
};

struct ConcordFlags {
  PreprocessFlags pre;
  std::string source;
  std::string target;
  std::size_t max_lines = 25;
  std::string out;
};

// ---------------------------------------------------------------------------
// handlers

void run_synth(const SynthFlags& flags) {
  RunDir run(flags.out);
  auto [corpus, truth] = generate_bitext(flags.config);
  {
    std::ofstream out(run.file("corpus.tsv"), std::ios::binary);
    if (!out) throw IoError("cannot write corpus.tsv");
    write_bitext(out, corpus);
  }
  {
    std::ofstream out(run.file("gold.tsv"), std::ios::binary);
    if (!out) throw IoError("cannot write gold.tsv");
    write_gold(out, truth);
  }
  const GeneratorConfig& g = flags.config;
  run.set("subcommand", std::string("synth"));
  run.set("truth-pairs", static_cast<std::uint64_t>(g.truth_pairs));
  run.set("source-vocab", static_cast<std::uint64_t>(g.source_vocab));
  run.set("target-vocab", static_cast<std::uint64_t>(g.target_vocab));
  run.set("zipf", g.zipf_exponent);
  run.set("p-colloc", g.p_colloc);
  run.set("segments", static_cast<std::uint64_t>(g.segments));
  run.set("min-len", static_cast<std::uint64_t>(g.min_len));
  run.set("max-len", static_cast<std::uint64_t>(g.max_len));
  run.set("p-trans", g.p_trans);
  run.set("p-drop", g.p_drop);
  run.set("p-indirect", g.p_indirect);
  run.set("seed", g.seed);
  run.set("out", flags.out);
  run.write_config();
  run.write_table("report.tsv",
                  {"segments", "truth_pairs", "source_words", "target_words"},
                  {{std::to_string(corpus.segments.size()),
                    std::to_string(truth.pairs.size()),
                    std::to_string(corpus.source_vocab.size()),
                    std::to_string(corpus.target_vocab.size())}});
  std::cout << "synth: " << corpus.segments.size() << " segment pairs, "
            << truth.pairs.size() << " truth pairs -> " << run.path().string()
            << '\n';
}

void record_induce(const InduceFlags& flags, RunDir& run, int workers) {
  flags.pre.record(run);
  run.set("min-score", flags.min_score);
  run.set("max-candidates", static_cast<std::uint64_t>(flags.max_candidates));
  run.set("max-pairs", flags.max_pairs);
  run.set("workers", workers);
  run.set("out", flags.out);
}

void run_induce(const InduceFlags& flags) {
  RunDir run(flags.out);
  int workers = resolve_workers(flags.workers);
  Corpus corpus = flags.pre.load();
  CoocTable table = CoocTable::count(corpus, {flags.max_pairs, workers});
  Lexicon lexicon =
      build_initial_lexicon(table, corpus, flags.min_score, flags.max_candidates);
  write_lexicon_file(run.file("lexicon.tsv"), lexicon, corpus);
  run.set("subcommand", std::string("induce"));
  record_induce(flags, run, workers);
  run.write_config();
  run.write_table(
      "report.tsv",
      {"segments", "source_words", "target_words", "pairs", "cooc_total",
       "entries"},
      {{std::to_string(corpus.segments.size()),
        std::to_string(corpus.source_vocab.size()),
        std::to_string(corpus.target_vocab.size()),
        std::to_string(table.pair_count()), std::to_string(table.total_min()),
        std::to_string(lexicon.entries.size())}});
  std::cout << "induce: " << lexicon.entries.size() << " entries -> "
            << run.path().string() << '\n';
}

void run_clean(const CleanFlags& flags) {
  RunDir run(flags.induce.out);
  int workers = resolve_workers(flags.induce.workers);
  Corpus corpus = flags.induce.pre.load();
  CoocTable table =
      CoocTable::count(corpus, {flags.induce.max_pairs, workers});
  Lexicon initial = build_initial_lexicon(
      table, corpus, flags.induce.min_score, flags.induce.max_candidates);

  CleanConfig config;
  config.max_iterations = flags.max_iter;
  config.param_tolerance = flags.param_tolerance;
  config.workers = workers;
  config.dump_links = flags.dump_links;
  config.snapshot_dir = run.path();
  if (!flags.plateau.empty()) {
    config.cutoff = CutoffSpec::parse(flags.plateau);
  } else if (flags.min_log_score) {
    config.cutoff = CutoffSpec::min_log_score(*flags.min_log_score);
  }

  CleanResult result = clean(corpus, initial, config);
  write_lexicon_file(run.file("lexicon.final.tsv"), result.lexicon, corpus);
  if (config.cutoff) {
    Lexicon cut = apply_cutoff(result.lexicon, *config.cutoff);
    write_lexicon_file(run.file("lexicon.cutoff.tsv"), cut, corpus);
  }

  run.set("subcommand", std::string("clean"));
  record_induce(flags.induce, run, workers);
  run.set("max-iter", flags.max_iter);
  run.set("param-tolerance", flags.param_tolerance);
  run.set("plateau", flags.plateau);
  run.set("min-log-score",
          flags.min_log_score ? fmt_g17(*flags.min_log_score) : std::string());
  run.set("dump-links", flags.dump_links);
  run.write_config();

  std::cout << "iter\tlambda_right\tlambda_wrong\tentries\tlog_data_prob\t"
               "mean_entry_ll\n";
  for (const IterationReport& r : result.reports) {
    std::cout << r.iteration << '\t' << r.lambda_right << '\t'
              << r.lambda_wrong << '\t' << r.entries_in_lexicon << '\t'
              << r.log_data_prob << '\t' << r.mean_entry_log_likelihood
              << '\n';
  }
  std::cout << "clean: " << result.lexicon.entries.size() << " entries after "
            << result.reports.size() << " iterations ("
            << (result.reached_fixed_point ? "fixed point" : "iteration cap")
            << ") -> " << run.path().string() << '\n';
}

void run_cutoff(const CutoffFlags& flags) {
  RunDir run(flags.out);
  std::vector<LexiconRow> rows = read_lexicon_file(flags.lexicon);
  if (!rows_regraded(rows)) {
    throw PipelineError("lexicon not regraded: " + flags.lexicon);
  }

  CutoffSpec spec = !flags.plateau.empty()
                        ? CutoffSpec::parse(flags.plateau)
                        : CutoffSpec::min_log_score(
                              flags.min_log_score ? *flags.min_log_score : 0.0);
  double threshold;
  if (spec.plateau_class) {
    MixtureParams params = read_params_file(flags.params);
    threshold = likelihood_ratio_log(spec.plateau_class->first,
                                     spec.plateau_class->second, params);
    if (threshold <= 0.0) {
      std::cerr << "lexclean: warning: cutoff " << spec.describe()
                << " has non-positive score; it keeps more than intended\n";
    }
    // scores in the file are quantized to 6 fractional digits; quantize the
    // threshold the same way so plateau members compare equal
    threshold = std::stod(fmt_f6(threshold));
  } else {
    threshold = spec.min_score;
  }

  std::vector<LexiconRow> kept;
  for (const LexiconRow& row : rows) {
    if (row.score >= threshold) kept.push_back(row);
  }
  write_lexicon_rows_file(run.file("lexicon.tsv"), kept);

  run.set("subcommand", std::string("cutoff"));
  run.set("lexicon", flags.lexicon);
  run.set("params", flags.params);
  run.set("plateau", flags.plateau);
  run.set("min-log-score",
          flags.min_log_score ? fmt_g17(*flags.min_log_score) : std::string());
  run.set("out", flags.out);
  run.write_config();
  run.write_table("report.tsv",
                  {"cutoff", "threshold", "entries_in", "entries_out"},
                  {{spec.describe(), fmt_g17(threshold),
                    std::to_string(rows.size()), std::to_string(kept.size())}});
  std::cout << "cutoff: kept " << kept.size() << " of " << rows.size()
            << " entries -> " << run.path().string() << '\n';
}

void run_baseline(const BaselineFlags& flags) {
  RunDir run(flags.out);
  int workers = resolve_workers(flags.workers);
  Corpus corpus = flags.pre.load();
  Lexicon lexicon =
      greedy_baseline(corpus, flags.threshold, {flags.max_pairs, workers});
  write_lexicon_file(run.file("lexicon.tsv"), lexicon, corpus);
  run.set("subcommand", std::string("baseline"));
  flags.pre.record(run);
  run.set("threshold", flags.threshold);
  run.set("max-pairs", flags.max_pairs);
  run.set("workers", workers);
  run.set("out", flags.out);
  run.write_config();
  run.write_table("report.tsv", {"threshold", "entries"},
                  {{fmt_g17(flags.threshold),
                    std::to_string(lexicon.entries.size())}});
  std::cout << "baseline: " << lexicon.entries.size() << " entries -> "
            << run.path().string() << '\n';
}

void run_eval(const EvalFlags& flags) {
  RunDir run(flags.out);
  Corpus corpus = flags.pre.load();
  std::vector<LexiconRow> rows = read_lexicon_file(flags.lexicon);
  Lexicon lexicon = lexicon_from_rows(rows, corpus);

  RecallReport recall = measure_recall(lexicon, corpus);
  auto side_row = [](const std::string& name,
                     const RecallReport::SideRecall& side) {
    return std::vector<std::string>{name, std::to_string(side.represented),
                                    std::to_string(side.total),
                                    fmt_percent(side.percent)};
  };
  run.write_table("report.tsv", {"side", "represented", "total", "percent"},
                  {side_row("source", recall.source),
                   side_row("target", recall.target),
                   side_row("combined", recall.combined)});
  std::cout << "recall: source " << fmt_percent(recall.source.percent)
            << "%, target " << fmt_percent(recall.target.percent)
            << "%, combined " << fmt_percent(recall.combined.percent) << "%\n";

  if (!flags.gold.empty()) {
    GoldLexicon gold =
        load_gold(flags.gold, StemmerSpec::parse(flags.pre.stemmer));
    auto samples = sample_for_precision(lexicon, corpus, gold, flags.samples,
                                        flags.sample_size, flags.seed);
    if (!flags.adjudications.empty()) {
      std::ifstream in(flags.adjudications, std::ios::binary);
      if (!in) throw IoError("cannot read " + flags.adjudications);
      apply_adjudications(samples, read_adjudications(in));
    }
    PrecisionReport report = summarize_precision(samples);

    std::vector<std::vector<std::string>> prec_rows;
    for (const auto& row : report.rows) {
      prec_rows.push_back({std::to_string(row.sample_id),
                           std::to_string(row.gold_matches),
                           std::to_string(row.human_correct),
                           std::to_string(row.human_incorrect),
                           std::to_string(row.pending),
                           row.pending == 0 ? fmt_percent(row.precision_percent)
                                            : std::string("incomplete")});
    }
    if (report.complete) {
      prec_rows.push_back({"mean", "", "", "", "",
                           fmt_percent(report.mean_percent)});
      prec_rows.push_back({"std_dev", "", "", "", "",
                           fmt_percent(report.stddev_percent)});
    } else {
      prec_rows.push_back({"mean", "", "", "", "", "incomplete"});
      prec_rows.push_back({"std_dev", "", "", "", "", "incomplete"});
    }
    run.write_table("precision.tsv",
                    {"sample_id", "gold_matches", "human_correct",
                     "human_incorrect", "pending", "precision"},
                    prec_rows);

    // pending entries go out for adjudication with their concordances
    {
      std::ofstream out(run.file("adjudication.tsv"), std::ios::binary);
      if (!out) throw IoError("cannot write adjudication.tsv");
      write_adjudications(out, samples, lexicon, corpus);
    }
    {
      std::ofstream out(run.file("concordances.txt"), std::ios::binary);
      if (!out) throw IoError("cannot write concordances.txt");
      std::set<std::pair<WordId, WordId>> bundled;
      for (const auto& sample : samples) {
        for (std::size_t i = 0; i < sample.draws.size(); ++i) {
          if (sample.verdicts[i] != Verdict::human_pending) continue;
          const LexiconEntry& e = lexicon.entries[sample.draws[i]];
          if (!bundled.insert({e.source, e.target}).second) continue;
          out << "entry\t" << corpus.source_vocab.word(e.source) << '\t'
              << corpus.target_vocab.word(e.target) << '\n';
          render_concordance(
              out, concordance(e.source, e.target, corpus, flags.max_lines),
              corpus);
        }
      }
    }
    if (report.complete) {
      std::cout << "precision: mean " << fmt_percent(report.mean_percent)
                << "% (std dev " << fmt_percent(report.stddev_percent)
                << "%) over " << report.rows.size() << " samples\n";
    } else {
      std::cout << "precision: incomplete adjudication; fill in "
                << run.file("adjudication.tsv").string()
                << " and re-run with --adjudications\n";
    }
  }

  run.set("subcommand", std::string("eval"));
  flags.pre.record(run);
  run.set("lexicon", flags.lexicon);
  run.set("gold", flags.gold);
  run.set("adjudications", flags.adjudications);
  run.set("samples", flags.samples);
  run.set("sample-size", flags.sample_size);
  run.set("seed", flags.seed);
  run.set("max-lines", static_cast<std::uint64_t>(flags.max_lines));
  run.set("out", flags.out);
  run.write_config();
}

void run_concord(const ConcordFlags& flags) {
  RunDir run(flags.out);
  Corpus corpus = flags.pre.load();
  auto v = corpus.source_vocab.find(flags.source);
  auto w = corpus.target_vocab.find(flags.target);
  std::vector<ConcordanceExcerpt> excerpts;
  if (v && w) excerpts = concordance(*v, *w, corpus, flags.max_lines);

  std::ostringstream text;
  render_concordance(text, excerpts, corpus);
  {
    std::ofstream out(run.file("concordances.txt"), std::ios::binary);
    if (!out) throw IoError("cannot write concordances.txt");
    out << text.str();
  }
  std::cout << text.str();

  run.set("subcommand", std::string("concord"));
  flags.pre.record(run);
  run.set("source", flags.source);
  run.set("target", flags.target);
  run.set("max-lines", static_cast<std::uint64_t>(flags.max_lines));
  run.set("out", flags.out);
  run.write_config();
  run.write_table("report.tsv", {"source_word", "target_word", "excerpts"},
                  {{flags.source, flags.target,
                    std::to_string(excerpts.size())}});
}

// ---------------------------------------------------------------------------
// --config support: file keys become defaults, command-line flags win

std::vector<std::string> config_file_args(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file: " + path);
  std::vector<std::string> args;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": expected key = value");
    }
    auto trim = [](std::string s) {
      auto is_space = [](char c) { return c == ' ' || c == '\t'; };
      while (!s.empty() && is_space(s.front())) s.erase(s.begin());
      while (!s.empty() && is_space(s.back())) s.pop_back();
      return s;
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": empty key");
    }
    if (key == "subcommand" || key == "out") continue;  // positional context
    if (value == "false") continue;  // flags are presence-only
    if (value == "true") {
      args.push_back("--" + key);
    } else if (!value.empty()) {
      args.push_back("--" + key + "=" + value);
    }
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graded translation lexicon induction and cleaning"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  SynthFlags synth_flags;
  InduceFlags induce_flags;
  CleanFlags clean_flags;
  CutoffFlags cutoff_flags;
  BaselineFlags baseline_flags;
  EvalFlags eval_flags;
  ConcordFlags concord_flags;
  std::string config_path;

  app.add_option("--config", config_path,
                 "key = value file; command-line flags override it")
      ->expected(1);

  auto* synth = app.add_subcommand("synth", "generate a synthetic bitext with "
                                            "a known translation lexicon");
  synth->add_option("--truth-pairs", synth_flags.config.truth_pairs);
  synth->add_option("--source-vocab", synth_flags.config.source_vocab);
  synth->add_option("--target-vocab", synth_flags.config.target_vocab);
  synth->add_option("--zipf", synth_flags.config.zipf_exponent);
  synth->add_option("--p-colloc", synth_flags.config.p_colloc);
  synth->add_option("--segments", synth_flags.config.segments);
  synth->add_option("--min-len", synth_flags.config.min_len);
  synth->add_option("--max-len", synth_flags.config.max_len);
  synth->add_option("--p-trans", synth_flags.config.p_trans);
  synth->add_option("--p-drop", synth_flags.config.p_drop);
  synth->add_option("--p-indirect", synth_flags.config.p_indirect);
  synth->add_option("--seed", synth_flags.config.seed);
  synth->add_option("--out", synth_flags.out)->required();

  auto add_induce_flags = [](CLI::App* sub, InduceFlags& flags) {
    add_preprocess_flags(sub, flags.pre);
    sub->add_option("--min-score", flags.min_score,
                    "minimum association score for the initial lexicon");
    sub->add_option("--max-candidates", flags.max_candidates,
                    "keep at most this many entries per word (0 = no limit)");
    sub->add_option("--max-pairs", flags.max_pairs,
                    "abort if distinct co-occurring pairs exceed this bound");
    sub->add_option("--workers", flags.workers,
                    "linking/counting threads (0 = LEXCLEAN_WORKERS or cores)");
    sub->add_option("--out", flags.out)->required();
  };

  auto* induce = app.add_subcommand(
      "induce", "count co-occurrences and build the initial graded lexicon");
  add_induce_flags(induce, induce_flags);

  auto* cleanc = app.add_subcommand(
      "clean", "run the full iterative cleaning loop, writing one snapshot "
               "per iteration");
  add_induce_flags(cleanc, clean_flags.induce);
  cleanc->add_option("--max-iter", clean_flags.max_iter);
  cleanc->add_option("--param-tolerance", clean_flags.param_tolerance);
  auto* clean_plateau = cleanc->add_option(
      "--plateau", clean_flags.plateau, "also write lexicon.cutoff.tsv at "
                                        "this k/n plateau (e.g. 1/1)");
  cleanc->add_option("--min-log-score", clean_flags.min_log_score,
                     "also write lexicon.cutoff.tsv at this score")
      ->excludes(clean_plateau);
  cleanc->add_flag("--dump-links", clean_flags.dump_links,
                   "write iter_<i>/links.tsv debug dumps");

  auto* cutoff = app.add_subcommand(
      "cutoff", "filter a regraded lexicon snapshot by plateau or score");
  cutoff->add_option("--lexicon", cutoff_flags.lexicon)->required();
  cutoff->add_option("--params", cutoff_flags.params,
                     "params.txt matching the lexicon (needed for --plateau)");
  auto* cut_plateau =
      cutoff->add_option("--plateau", cutoff_flags.plateau, "k/n class");
  cutoff->add_option("--min-log-score", cutoff_flags.min_log_score)
      ->excludes(cut_plateau);
  cutoff->add_option("--out", cutoff_flags.out)->required();

  auto* baseline = app.add_subcommand(
      "baseline", "one-shot thresholded lexicon, no cleaning (comparison "
                  "mode)");
  add_preprocess_flags(baseline, baseline_flags.pre);
  baseline->add_option("--threshold", baseline_flags.threshold,
                       "keep pairs with association score >= threshold");
  baseline->add_option("--max-pairs", baseline_flags.max_pairs);
  baseline->add_option("--workers", baseline_flags.workers);
  baseline->add_option("--out", baseline_flags.out)->required();

  auto* eval = app.add_subcommand(
      "eval", "word-type recall, and sampled precision against a gold file");
  add_preprocess_flags(eval, eval_flags.pre);
  eval->add_option("--lexicon", eval_flags.lexicon)->required();
  eval->add_option("--gold", eval_flags.gold, "gold lexicon TSV");
  eval->add_option("--adjudications", eval_flags.adjudications,
                   "filled-in adjudication.tsv from a previous eval");
  eval->add_option("--samples", eval_flags.samples);
  eval->add_option("--sample-size", eval_flags.sample_size);
  eval->add_option("--seed", eval_flags.seed);
  eval->add_option("--max-lines", eval_flags.max_lines,
                   "concordance excerpts per pending entry");
  eval->add_option("--out", eval_flags.out)->required();

  auto* concord = app.add_subcommand(
      "concord", "print aligned segment pairs containing an entry's words");
  add_preprocess_flags(concord, concord_flags.pre);
  concord->add_option("--source", concord_flags.source)->required();
  concord->add_option("--target", concord_flags.target)->required();
  concord->add_option("--max-lines", concord_flags.max_lines);
  concord->add_option("--out", concord_flags.out)->required();

  try {
    // Merge --config keys in as if they had been typed right after the
    // subcommand; TakeLast makes explicit flags win.
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string config_file;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) {
        config_file = args[i + 1];
      } else if (args[i].rfind("--config=", 0) == 0) {
        config_file = args[i].substr(9);
      }
    }
    if (!config_file.empty()) {
      std::vector<std::string> merged;
      bool injected = false;
      for (const std::string& arg : args) {
        merged.push_back(arg);
        if (!injected && !arg.empty() && arg[0] != '-') {
          // first positional token is the subcommand
          auto extra = config_file_args(config_file);
          merged.insert(merged.end(), extra.begin(), extra.end());
          injected = true;
        }
      }
      args = std::move(merged);
    }
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "lexclean: config: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "lexclean: io: " << e.what() << '\n';
    return 1;
  }

  try {
    if (synth->parsed()) run_synth(synth_flags);
    if (induce->parsed()) run_induce(induce_flags);
    if (cleanc->parsed()) run_clean(clean_flags);
    if (cutoff->parsed()) run_cutoff(cutoff_flags);
    if (baseline->parsed()) run_baseline(baseline_flags);
    if (eval->parsed()) run_eval(eval_flags);
    if (concord->parsed()) run_concord(concord_flags);
  } catch (const EmptyCorpusError& e) {
    std::cerr << "lexclean: corpus: " << e.what() << '\n';
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "lexclean: parse: " << e.what() << '\n';
    return 1;
  } catch (const IoError& e) {
    std::cerr << "lexclean: io: " << e.what() << '\n';
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "lexclean: config: " << e.what() << '\n';
    return 1;
  } catch (const ResourceError& e) {
    std::cerr << "lexclean: resource: " << e.what() << '\n';
    return 1;
  } catch (const EstimationError& e) {
    std::cerr << "lexclean: estimation: " << e.what() << '\n';
    return 1;
  } catch (const PipelineError& e) {
    std::cerr << "lexclean: pipeline: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "lexclean: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
