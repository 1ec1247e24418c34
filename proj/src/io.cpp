#include "lexclean/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "lexclean/errors.hpp"

namespace lexclean {

std::string fmt_f6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

std::string fmt_g17(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

[[noreturn]] void row_error(std::string_view name, std::size_t line_no,
                            const std::string& what) {
  throw ParseError(std::string(name) + ":" + std::to_string(line_no) + ": " +
                   what);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read file: " + path.string());
  return in;
}

}  // namespace

void write_lexicon(std::ostream& out, const Lexicon& lexicon,
                   const Corpus& corpus) {
  Lexicon sorted = lexicon;
  sort_canonical(sorted, corpus);
  out << "source_word\ttarget_word\tscore\tk\tn\n";
  for (const LexiconEntry& e : sorted.entries) {
    out << corpus.source_vocab.word(e.source) << '\t'
        << corpus.target_vocab.word(e.target) << '\t' << fmt_f6(e.score)
        << '\t' << e.k << '\t' << e.n << '\n';
  }
}

void write_lexicon_file(const std::filesystem::path& path,
                        const Lexicon& lexicon, const Corpus& corpus) {
  auto out = open_out(path);
  write_lexicon(out, lexicon, corpus);
}

std::vector<LexiconRow> read_lexicon_rows(std::istream& in,
                                          std::string_view name) {
  std::vector<LexiconRow> rows;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != 5) row_error(name, line_no, "expected 5 columns");
    if (!saw_header) {
      if (fields[0] != "source_word") {
        row_error(name, line_no, "missing lexicon header");
      }
      saw_header = true;
      continue;
    }
    LexiconRow row;
    row.source = fields[0];
    row.target = fields[1];
    try {
      row.score = std::stod(fields[2]);
      row.k = static_cast<std::uint32_t>(std::stoul(fields[3]));
      row.n = static_cast<std::uint32_t>(std::stoul(fields[4]));
    } catch (const std::exception&) {
      row_error(name, line_no, "bad numeric field");
    }
    rows.push_back(std::move(row));
  }
  if (!saw_header) throw ParseError(std::string(name) + ": empty lexicon file");
  return rows;
}

std::vector<LexiconRow> read_lexicon_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_lexicon_rows(in, path.string());
}

Lexicon lexicon_from_rows(const std::vector<LexiconRow>& rows,
                          const Corpus& corpus) {
  Lexicon lexicon;
  lexicon.entries.reserve(rows.size());
  for (const LexiconRow& row : rows) {
    auto v = corpus.source_vocab.find(row.source);
    auto w = corpus.target_vocab.find(row.target);
    if (!v) throw ParseError("lexicon word not in corpus: " + row.source);
    if (!w) throw ParseError("lexicon word not in corpus: " + row.target);
    lexicon.entries.push_back({*v, *w, row.score, row.k, row.n});
  }
  return lexicon;
}

void write_params(std::ostream& out, const MixtureParams& params) {
  out << "lambda_right = " << fmt_g17(params.lambda_right) << '\n'
      << "lambda_wrong = " << fmt_g17(params.lambda_wrong) << '\n'
      << "tau = " << fmt_g17(params.tau) << '\n'
      << "lambda = " << fmt_g17(params.lambda) << '\n'
      << "K = " << params.K << '\n'
      << "N = " << params.N << '\n'
      << "log_data_prob = " << fmt_g17(params.log_data_prob) << '\n'
      << "converged = " << (params.converged ? "true" : "false") << '\n'
      << "iterations = " << params.iterations << '\n';
}

void write_params_file(const std::filesystem::path& path,
                       const MixtureParams& params) {
  auto out = open_out(path);
  write_params(out, params);
}

MixtureParams read_params(std::istream& in, std::string_view name) {
  MixtureParams params;
  std::string line;
  std::size_t line_no = 0;
  int seen = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto eq = line.find(" = ");
    if (eq == std::string::npos) row_error(name, line_no, "expected key = value");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 3);
    try {
      if (key == "lambda_right") params.lambda_right = std::stod(value);
      else if (key == "lambda_wrong") params.lambda_wrong = std::stod(value);
      else if (key == "tau") params.tau = std::stod(value);
      else if (key == "lambda") params.lambda = std::stod(value);
      else if (key == "K") params.K = std::stoull(value);
      else if (key == "N") params.N = std::stoull(value);
      else if (key == "log_data_prob") params.log_data_prob = std::stod(value);
      else if (key == "converged") params.converged = value == "true";
      else if (key == "iterations") params.iterations = std::stoi(value);
      else row_error(name, line_no, "unknown key: " + key);
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      row_error(name, line_no, "bad value for " + key);
    }
    ++seen;
  }
  if (seen < 9) {
    throw ParseError(std::string(name) + ": incomplete params snapshot");
  }
  return params;
}

MixtureParams read_params_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_params(in, path.string());
}

void write_report(std::ostream& out, const std::vector<IterationReport>& rows) {
  out << "iteration\tlambda_right\tlambda_wrong\tentries_in_lexicon\t"
         "log_data_prob\tmean_entry_log_likelihood\n";
  for (const IterationReport& row : rows) {
    out << row.iteration << '\t' << fmt_g17(row.lambda_right) << '\t'
        << fmt_g17(row.lambda_wrong) << '\t' << row.entries_in_lexicon << '\t'
        << fmt_g17(row.log_data_prob) << '\t'
        << fmt_g17(row.mean_entry_log_likelihood) << '\n';
  }
}

void write_report_file(const std::filesystem::path& path,
                       const std::vector<IterationReport>& rows) {
  auto out = open_out(path);
  write_report(out, rows);
}

std::vector<IterationReport> read_report(std::istream& in,
                                         std::string_view name) {
  std::vector<IterationReport> rows;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != 6) row_error(name, line_no, "expected 6 columns");
    if (!saw_header) {
      if (fields[0] != "iteration") row_error(name, line_no, "missing header");
      saw_header = true;
      continue;
    }
    IterationReport row;
    try {
      row.iteration = std::stoi(fields[0]);
      row.lambda_right = std::stod(fields[1]);
      row.lambda_wrong = std::stod(fields[2]);
      row.entries_in_lexicon = std::stoull(fields[3]);
      row.log_data_prob = std::stod(fields[4]);
      row.mean_entry_log_likelihood = std::stod(fields[5]);
    } catch (const std::exception&) {
      row_error(name, line_no, "bad numeric field");
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace lexclean
