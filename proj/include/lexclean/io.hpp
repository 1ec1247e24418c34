#ifndef LEXCLEAN_IO_HPP
#define LEXCLEAN_IO_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lexclean/assoc.hpp"
#include "lexclean/corpus.hpp"
#include "lexclean/mixture_params.hpp"
#include "lexclean/pipeline.hpp"

namespace lexclean {

// Deterministic float formatting shared by every writer: fixed six
// fractional digits for lexicon scores, shortest round-trippable form for
// everything else.
std::string fmt_f6(double value);
std::string fmt_g17(double value);

// Lexicon snapshot: TSV with header source_word, target_word, score, k, n;
// rows sorted by descending score, ties by (source_word, target_word).
void write_lexicon(std::ostream& out, const Lexicon& lexicon,
                   const Corpus& corpus);
void write_lexicon_file(const std::filesystem::path& path,
                        const Lexicon& lexicon, const Corpus& corpus);

struct LexiconRow {
  std::string source;
  std::string target;
  double score = 0.0;
  std::uint32_t k = 0;
  std::uint32_t n = 0;
};
std::vector<LexiconRow> read_lexicon_rows(std::istream& in,
                                          std::string_view name = "<stream>");
std::vector<LexiconRow> read_lexicon_file(const std::filesystem::path& path);

// Rebinds file rows to a corpus's vocabularies. Throws ParseError when a
// word does not exist in the corpus.
Lexicon lexicon_from_rows(const std::vector<LexiconRow>& rows,
                          const Corpus& corpus);

// Flat key = value parameter snapshot.
void write_params(std::ostream& out, const MixtureParams& params);
void write_params_file(const std::filesystem::path& path,
                       const MixtureParams& params);
MixtureParams read_params(std::istream& in, std::string_view name = "<stream>");
MixtureParams read_params_file(const std::filesystem::path& path);

// Per-iteration diagnostics table.
void write_report(std::ostream& out, const std::vector<IterationReport>& rows);
void write_report_file(const std::filesystem::path& path,
                       const std::vector<IterationReport>& rows);
std::vector<IterationReport> read_report(std::istream& in,
                                         std::string_view name = "<stream>");

}  // namespace lexclean

#endif  // LEXCLEAN_IO_HPP
