#include "lexclean/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "lexclean/errors.hpp"

namespace lexclean {

namespace {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string ascii_lower(std::string word) {
  for (char& c : word) {
    c = static_cast<char>(
        std::tolower(static_cast<unsigned char>(c)));
  }
  return word;
}

bool ends_with_any(const std::string& word,
                   const std::vector<std::string>& suffixes) {
  for (const auto& s : suffixes) {
    if (word.size() >= s.size() &&
        word.compare(word.size() - s.size(), s.size(), s) == 0) {
      return true;
    }
  }
  return false;
}

std::vector<std::string> split_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(' ', start);
    if (end == std::string_view::npos) end = text.size();
    if (end > start) tokens.emplace_back(text.substr(start, end - start));
    start = end + 1;
  }
  return tokens;
}

}  // namespace

std::string StemmerSpec::id() const {
  if (is_identity()) return "identity";
  std::ostringstream out;
  out << "suffixes=[";
  for (std::size_t i = 0; i < suffixes.size(); ++i) {
    if (i) out << ',';
    out << suffixes[i];
  }
  out << "];min_stem_len=" << min_stem_len;
  return out.str();
}

StemmerSpec StemmerSpec::parse(std::string_view text) {
  StemmerSpec spec;
  if (text.empty() || text == "identity") return spec;
  if (text.substr(0, 9) != "suffixes=") {
    throw ConfigError("bad stemmer spec: " + std::string(text));
  }
  std::string_view rest = text.substr(9);
  std::string_view list = rest;
  if (auto semi = rest.find(';'); semi != std::string_view::npos) {
    list = rest.substr(0, semi);
    std::string_view tail = rest.substr(semi + 1);
    if (tail.substr(0, 13) != "min_stem_len=") {
      throw ConfigError("bad stemmer spec tail: " + std::string(tail));
    }
    spec.min_stem_len = std::stoul(std::string(tail.substr(13)));
  }
  if (!list.empty() && list.front() == '[') {
    if (list.back() != ']') {
      throw ConfigError("unbalanced brackets in stemmer spec");
    }
    list = list.substr(1, list.size() - 2);
  }
  std::size_t start = 0;
  while (start <= list.size()) {
    std::size_t end = list.find(',', start);
    if (end == std::string_view::npos) end = list.size();
    if (end > start) spec.suffixes.emplace_back(list.substr(start, end - start));
    start = end + 1;
  }
  if (spec.suffixes.empty()) {
    throw ConfigError("stemmer suffix list is empty: " + std::string(text));
  }
  std::sort(spec.suffixes.begin(), spec.suffixes.end());
  spec.suffixes.erase(std::unique(spec.suffixes.begin(), spec.suffixes.end()),
                      spec.suffixes.end());
  return spec;
}

std::string stem(const std::string& word, const StemmerSpec& spec) {
  if (spec.is_identity()) return word;
  // Strip the longest listed suffix whose removal leaves a stem of at
  // least min_stem_len characters that does not itself end in a listed
  // suffix. A stem that re-matched would get stripped again on a second
  // pass, and this function must be idempotent.
  const std::string* best = nullptr;
  for (const auto& s : spec.suffixes) {
    if (word.size() <= s.size()) continue;
    if (word.compare(word.size() - s.size(), s.size(), s) != 0) continue;
    std::size_t stem_len = word.size() - s.size();
    if (stem_len < spec.min_stem_len) continue;
    if (ends_with_any(word.substr(0, stem_len), spec.suffixes)) continue;
    if (!best || s.size() > best->size()) best = &s;
  }
  return best ? word.substr(0, word.size() - best->size()) : word;
}

WordId Vocabulary::intern(const std::string& word) {
  auto [it, inserted] = ids_.try_emplace(word, static_cast<WordId>(words_.size()));
  if (inserted) {
    words_.push_back(word);
    occurrences_.push_back(0);
  }
  return it->second;
}

std::optional<WordId> Vocabulary::find(const std::string& word) const {
  auto it = ids_.find(word);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

Stoplist read_stoplist(std::istream& in) {
  Stoplist list;
  std::ostringstream raw;
  raw << in.rdbuf();
  std::string bytes = raw.str();
  list.checksum = fnv1a64(bytes);
  std::istringstream lines(bytes);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    list.words.insert(line);
  }
  return list;
}

Stoplist load_stoplist(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read stop-list file: " + path.string());
  return read_stoplist(in);
}

void CorpusBuilder::add_segment(const std::vector<std::string>& source_tokens,
                                const std::vector<std::string>& target_tokens) {
  SegmentPair pair;
  pair.index = corpus_.segments.size();
  pair.source.reserve(source_tokens.size());
  for (const auto& t : source_tokens) {
    WordId id = corpus_.source_vocab.intern(t);
    corpus_.source_vocab.add_occurrence(id);
    pair.source.push_back(id);
  }
  pair.target.reserve(target_tokens.size());
  for (const auto& t : target_tokens) {
    WordId id = corpus_.target_vocab.intern(t);
    corpus_.target_vocab.add_occurrence(id);
    pair.target.push_back(id);
  }
  corpus_.segments.push_back(std::move(pair));
}

Corpus CorpusBuilder::finish(PreprocessRecord record) {
  corpus_.preprocessing = std::move(record);
  return std::move(corpus_);
}

Corpus read_bitext(std::istream& in, const PreprocessOptions& options,
                   std::string_view stream_name) {
  Stoplist stop_src, stop_tgt;
  if (options.stoplist_source) stop_src = load_stoplist(*options.stoplist_source);
  if (options.stoplist_target) stop_tgt = load_stoplist(*options.stoplist_target);

  auto preprocess = [&](std::string_view raw, const Stoplist& stop,
                        std::vector<std::string>& out) {
    out.clear();
    for (auto& token : split_tokens(raw)) {
      std::string word =
          options.lowercase ? ascii_lower(std::move(token)) : std::move(token);
      if (stop.words.count(word)) continue;
      out.push_back(stem(word, options.stemmer));
    }
  };

  CorpusBuilder builder;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> src_tokens, tgt_tokens;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(std::string(stream_name) + ":" + std::to_string(line_no) +
                       ": missing TAB separator");
    }
    if (line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError(std::string(stream_name) + ":" + std::to_string(line_no) +
                       ": more than one TAB separator");
    }
    preprocess(std::string_view(line).substr(0, tab), stop_src, src_tokens);
    preprocess(std::string_view(line).substr(tab + 1), stop_tgt, tgt_tokens);
    builder.add_segment(src_tokens, tgt_tokens);
  }

  PreprocessRecord record;
  record.stoplist_source_checksum = stop_src.checksum;
  record.stoplist_target_checksum = stop_tgt.checksum;
  record.stemmer_id = options.stemmer.id();
  record.lowercase = options.lowercase;
  Corpus corpus = builder.finish(std::move(record));
  if (corpus.segments.empty()) {
    throw EmptyCorpusError("empty corpus: " + std::string(stream_name));
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path,
                   const PreprocessOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read bitext file: " + path.string());
  return read_bitext(in, options, path.string());
}

}  // namespace lexclean
