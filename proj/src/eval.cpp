#include "lexclean/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_set>

#include "lexclean/errors.hpp"

namespace lexclean {

namespace {

double percent(std::uint64_t represented, std::uint64_t total) {
  if (total == 0) return 100.0;  // nothing to cover
  return 100.0 * static_cast<double>(represented) / static_cast<double>(total);
}

// Uniform double in [0,1) from the top 53 bits; kept away from std
// distributions so the stream is identical on every platform.
double next_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t next_index(std::mt19937_64& rng, std::uint64_t n) {
  return rng() % n;  // bias is negligible for n << 2^64
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::gold_match: return "gold";
    case Verdict::human_pending: return "pending";
    case Verdict::human_correct: return "correct";
    case Verdict::human_incorrect: return "incorrect";
  }
  return "?";
}

}  // namespace

RecallReport measure_recall(const Lexicon& lexicon, const Corpus& corpus) {
  std::unordered_set<WordId> src_words, tgt_words;
  for (const LexiconEntry& e : lexicon.entries) {
    src_words.insert(e.source);
    tgt_words.insert(e.target);
  }
  RecallReport report;
  report.source.represented = src_words.size();
  report.source.total = corpus.source_vocab.size();
  report.source.percent = percent(report.source.represented, report.source.total);
  report.target.represented = tgt_words.size();
  report.target.total = corpus.target_vocab.size();
  report.target.percent = percent(report.target.represented, report.target.total);
  report.combined.represented = report.source.represented + report.target.represented;
  report.combined.total = report.source.total + report.target.total;
  report.combined.percent =
      percent(report.combined.represented, report.combined.total);
  return report;
}

GoldLexicon read_gold(std::istream& in, const StemmerSpec& stemmer) {
  GoldLexicon gold;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError("gold:" + std::to_string(line_no) +
                       ": expected source<TAB>target");
    }
    gold.pairs.emplace(stem(line.substr(0, tab), stemmer),
                       stem(line.substr(tab + 1), stemmer));
  }
  return gold;
}

GoldLexicon load_gold(const std::filesystem::path& path,
                      const StemmerSpec& stemmer) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read gold file: " + path.string());
  return read_gold(in, stemmer);
}

std::vector<PrecisionSample> sample_for_precision(const Lexicon& lexicon,
                                                  const Corpus& corpus,
                                                  const GoldLexicon& gold,
                                                  int n_samples,
                                                  int sample_size,
                                                  std::uint64_t seed) {
  if (lexicon.entries.empty()) {
    throw ConfigError("cannot sample an empty lexicon for precision");
  }
  // Draw positions in the canonical ordering so the draws do not depend on
  // how the caller happens to store the entries; record the caller's index.
  std::vector<std::uint32_t> perm(lexicon.entries.size());
  for (std::uint32_t i = 0; i < perm.size(); ++i) perm[i] = i;
  const Vocabulary& src = corpus.source_vocab;
  const Vocabulary& tgt = corpus.target_vocab;
  std::sort(perm.begin(), perm.end(), [&](std::uint32_t a, std::uint32_t b) {
    const LexiconEntry& x = lexicon.entries[a];
    const LexiconEntry& y = lexicon.entries[b];
    if (x.score != y.score) return x.score > y.score;
    int c = src.word(x.source).compare(src.word(y.source));
    if (c != 0) return c < 0;
    return tgt.word(x.target) < tgt.word(y.target);
  });

  std::mt19937_64 rng(seed);
  std::vector<PrecisionSample> samples;
  samples.reserve(n_samples);
  for (int s = 0; s < n_samples; ++s) {
    PrecisionSample sample;
    sample.sample_id = s;
    sample.seed = seed;
    for (int i = 0; i < sample_size; ++i) {
      std::uint32_t idx = perm[next_index(rng, perm.size())];
      const LexiconEntry& e = lexicon.entries[idx];
      bool in_gold = gold.pairs.count({src.word(e.source),
                                       tgt.word(e.target)}) > 0;
      sample.draws.push_back(idx);
      sample.verdicts.push_back(in_gold ? Verdict::gold_match
                                        : Verdict::human_pending);
    }
    samples.push_back(std::move(sample));
  }
  return samples;
}

PrecisionReport summarize_precision(
    const std::vector<PrecisionSample>& samples) {
  PrecisionReport report;
  report.complete = true;
  std::vector<double> precisions;
  for (const PrecisionSample& sample : samples) {
    PrecisionReport::Row row;
    row.sample_id = sample.sample_id;
    for (Verdict v : sample.verdicts) {
      switch (v) {
        case Verdict::gold_match: ++row.gold_matches; break;
        case Verdict::human_correct: ++row.human_correct; break;
        case Verdict::human_incorrect: ++row.human_incorrect; break;
        case Verdict::human_pending: ++row.pending; break;
      }
    }
    if (row.pending == 0 && !sample.verdicts.empty()) {
      row.precision_percent = 100.0 * (row.gold_matches + row.human_correct) /
                              static_cast<double>(sample.verdicts.size());
      precisions.push_back(row.precision_percent);
    } else {
      report.complete = false;
    }
    report.rows.push_back(row);
  }
  if (report.complete && !precisions.empty()) {
    double sum = 0.0;
    for (double p : precisions) sum += p;
    report.mean_percent = sum / precisions.size();
    if (precisions.size() > 1) {
      double ss = 0.0;
      for (double p : precisions) {
        ss += (p - report.mean_percent) * (p - report.mean_percent);
      }
      report.stddev_percent = std::sqrt(ss / (precisions.size() - 1));
    }
  }
  return report;
}

double lexicon_precision_percent(const Lexicon& lexicon, const Corpus& corpus,
                                 const GoldLexicon& gold) {
  if (lexicon.entries.empty()) return 0.0;
  std::uint64_t hits = 0;
  for (const LexiconEntry& e : lexicon.entries) {
    if (gold.pairs.count({corpus.source_vocab.word(e.source),
                          corpus.target_vocab.word(e.target)})) {
      ++hits;
    }
  }
  return 100.0 * static_cast<double>(hits) /
         static_cast<double>(lexicon.entries.size());
}

void write_adjudications(std::ostream& out,
                         const std::vector<PrecisionSample>& samples,
                         const Lexicon& lexicon, const Corpus& corpus) {
  out << "sample_id\tdraw_index\tsource_word\ttarget_word\tverdict\n";
  for (const PrecisionSample& sample : samples) {
    for (std::size_t i = 0; i < sample.draws.size(); ++i) {
      if (sample.verdicts[i] == Verdict::gold_match) continue;
      const LexiconEntry& e = lexicon.entries[sample.draws[i]];
      out << sample.sample_id << '\t' << i << '\t'
          << corpus.source_vocab.word(e.source) << '\t'
          << corpus.target_vocab.word(e.target) << '\t'
          << verdict_name(sample.verdicts[i]) << '\n';
    }
  }
}

std::vector<AdjudicationRow> read_adjudications(std::istream& in) {
  std::vector<AdjudicationRow> rows;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string sample_id, draw_index;
    AdjudicationRow row;
    if (!std::getline(fields, sample_id, '\t') ||
        !std::getline(fields, draw_index, '\t') ||
        !std::getline(fields, row.source, '\t') ||
        !std::getline(fields, row.target, '\t') ||
        !std::getline(fields, row.verdict)) {
      throw ParseError("adjudications:" + std::to_string(line_no) +
                       ": expected 5 columns");
    }
    if (!saw_header) {
      if (sample_id != "sample_id") {
        throw ParseError("adjudications:1: missing header");
      }
      saw_header = true;
      continue;
    }
    row.sample_id = std::stoi(sample_id);
    row.draw_index = std::stoi(draw_index);
    rows.push_back(std::move(row));
  }
  return rows;
}

void apply_adjudications(std::vector<PrecisionSample>& samples,
                         const std::vector<AdjudicationRow>& rows) {
  for (const AdjudicationRow& row : rows) {
    if (row.sample_id < 0 ||
        row.sample_id >= static_cast<int>(samples.size())) {
      throw ParseError("adjudication row for unknown sample " +
                       std::to_string(row.sample_id));
    }
    PrecisionSample& sample = samples[row.sample_id];
    if (row.draw_index < 0 ||
        row.draw_index >= static_cast<int>(sample.draws.size())) {
      throw ParseError("adjudication row for unknown draw " +
                       std::to_string(row.draw_index));
    }
    if (row.verdict == "correct") {
      sample.verdicts[row.draw_index] = Verdict::human_correct;
    } else if (row.verdict == "incorrect") {
      sample.verdicts[row.draw_index] = Verdict::human_incorrect;
    } else if (row.verdict == "pending") {
      // left for a later pass
    } else {
      throw ParseError("unknown verdict: " + row.verdict);
    }
  }
}

std::vector<ConcordanceExcerpt> concordance(WordId v, WordId w,
                                            const Corpus& corpus,
                                            std::size_t max_lines) {
  std::vector<ConcordanceExcerpt> excerpts;
  for (const SegmentPair& pair : corpus.segments) {
    if (excerpts.size() >= max_lines) break;
    ConcordanceExcerpt excerpt;
    excerpt.segment_index = pair.index;
    for (std::uint32_t i = 0; i < pair.source.size(); ++i) {
      if (pair.source[i] == v) excerpt.source_positions.push_back(i);
    }
    if (excerpt.source_positions.empty()) continue;
    for (std::uint32_t i = 0; i < pair.target.size(); ++i) {
      if (pair.target[i] == w) excerpt.target_positions.push_back(i);
    }
    if (excerpt.target_positions.empty()) continue;
    excerpts.push_back(std::move(excerpt));
  }
  return excerpts;
}

void render_concordance(std::ostream& out,
                        const std::vector<ConcordanceExcerpt>& excerpts,
                        const Corpus& corpus) {
  auto render_side = [&out](const std::vector<WordId>& tokens,
                            const Vocabulary& vocab,
                            const std::vector<std::uint32_t>& marks) {
    std::size_t next_mark = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) out << ' ';
      bool marked = next_mark < marks.size() && marks[next_mark] == i;
      if (marked) {
        out << "[[" << vocab.word(tokens[i]) << "]]";
        ++next_mark;
      } else {
        out << vocab.word(tokens[i]);
      }
    }
    out << '\n';
  };
  for (const ConcordanceExcerpt& excerpt : excerpts) {
    const SegmentPair& pair = corpus.segments[excerpt.segment_index];
    out << excerpt.segment_index << "\tsrc\t";
    render_side(pair.source, corpus.source_vocab, excerpt.source_positions);
    out << excerpt.segment_index << "\ttgt\t";
    render_side(pair.target, corpus.target_vocab, excerpt.target_positions);
  }
}

std::pair<Corpus, GroundTruth> generate_bitext(const GeneratorConfig& config) {
  if (config.source_vocab < 1 || config.target_vocab < 1) {
    throw ConfigError("generator vocabularies must be non-empty");
  }
  if (config.truth_pairs > config.source_vocab ||
      config.truth_pairs > config.target_vocab) {
    throw ConfigError("truth_pairs exceeds a vocabulary size");
  }
  if (config.segments < 1) throw ConfigError("segments must be >= 1");
  if (config.min_len < 1 || config.min_len > config.max_len) {
    throw ConfigError("bad segment length range");
  }
  for (double rate :
       {config.p_trans, config.p_drop, config.p_indirect, config.p_colloc}) {
    if (rate < 0.0 || rate > 1.0) {
      throw ConfigError("generator rates must lie in [0,1]");
    }
  }
  if (config.p_trans + config.p_drop + config.p_indirect > 1.0) {
    throw ConfigError("generator rates sum to more than 1");
  }

  auto src_name = [](std::uint32_t rank) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "s%04u", rank + 1);
    return std::string(buf);
  };
  auto tgt_name = [](std::uint32_t rank) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "t%04u", rank + 1);
    return std::string(buf);
  };

  // Zipf cumulative distribution over ranks 0..V-1.
  std::vector<double> cdf(config.source_vocab);
  double norm = 0.0;
  for (std::uint32_t r = 0; r < config.source_vocab; ++r) {
    norm += 1.0 / std::pow(static_cast<double>(r + 1), config.zipf_exponent);
  }
  double acc = 0.0;
  for (std::uint32_t r = 0; r < config.source_vocab; ++r) {
    acc += 1.0 / std::pow(static_cast<double>(r + 1), config.zipf_exponent) / norm;
    cdf[r] = acc;
  }
  cdf.back() = 1.0;

  std::mt19937_64 rng(config.seed);
  auto draw_rank = [&]() {
    double u = next_double(rng);
    return static_cast<std::uint32_t>(
        std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
  };

  CorpusBuilder builder;
  std::vector<std::uint32_t> ranks;
  std::vector<std::string> src_tokens, tgt_tokens;
  for (std::uint32_t seg = 0; seg < config.segments; ++seg) {
    std::uint32_t len =
        config.min_len +
        static_cast<std::uint32_t>(
            next_index(rng, config.max_len - config.min_len + 1));
    ranks.clear();
    src_tokens.clear();
    tgt_tokens.clear();
    for (std::uint32_t i = 0; i < len; ++i) {
      std::uint32_t r;
      // the collocate partner of rank r is the adjacent rank r^1, so
      // partners have near-identical frequencies
      std::uint32_t partner = ranks.empty() ? 0 : (ranks.back() ^ 1u);
      if (!ranks.empty() && partner < config.source_vocab &&
          next_double(rng) < config.p_colloc) {
        r = partner;
      } else {
        r = draw_rank();
      }
      ranks.push_back(r);
      src_tokens.push_back(src_name(r));
    }
    for (std::uint32_t i = 0; i < len; ++i) {
      double u = next_double(rng);
      if (u < config.p_trans) {
        if (ranks[i] < config.truth_pairs) {
          tgt_tokens.push_back(tgt_name(ranks[i]));
        }
      } else if (u < config.p_trans + config.p_drop) {
        // dropped
      } else if (u < config.p_trans + config.p_drop + config.p_indirect) {
        // the confounder: emit the translation of another source word in
        // the segment instead of this one's, planting a co-occurrence
        // between this word and a word it does not translate. The
        // collocate partner is preferred when present, which concentrates
        // indirect associations on collocated pairs; otherwise the
        // segment's most frequent word stands in.
        std::uint32_t partner = ranks[i] ^ 1u;
        std::uint32_t confounder = ranks[i];
        for (std::uint32_t j = 0; j < len; ++j) {
          if (j != i && ranks[j] < confounder) confounder = ranks[j];
        }
        for (std::uint32_t j = 0; j < len; ++j) {
          if (j != i && ranks[j] == partner) {
            confounder = partner;
            break;
          }
        }
        if (confounder < config.truth_pairs) {
          tgt_tokens.push_back(tgt_name(confounder));
        }
      } else {
        tgt_tokens.push_back(tgt_name(static_cast<std::uint32_t>(
            next_index(rng, config.target_vocab))));
      }
    }
    builder.add_segment(src_tokens, tgt_tokens);
  }

  GroundTruth truth;
  truth.config = config;
  for (std::uint32_t r = 0; r < config.truth_pairs; ++r) {
    truth.pairs.emplace(src_name(r), tgt_name(r));
  }
  return {builder.finish(), std::move(truth)};
}

void write_bitext(std::ostream& out, const Corpus& corpus) {
  for (const SegmentPair& pair : corpus.segments) {
    for (std::size_t i = 0; i < pair.source.size(); ++i) {
      if (i) out << ' ';
      out << corpus.source_vocab.word(pair.source[i]);
    }
    out << '\t';
    for (std::size_t i = 0; i < pair.target.size(); ++i) {
      if (i) out << ' ';
      out << corpus.target_vocab.word(pair.target[i]);
    }
    out << '\n';
  }
}

void write_gold(std::ostream& out, const GroundTruth& truth) {
  for (const auto& [src, tgt] : truth.pairs) {
    out << src << '\t' << tgt << '\n';
  }
}

}  // namespace lexclean
