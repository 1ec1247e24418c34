#ifndef LEXCLEAN_ERRORS_HPP
#define LEXCLEAN_ERRORS_HPP

#include <stdexcept>

namespace lexclean {

// Error taxonomy surfaced by the CLI: parse/io/config report bad input,
// resource guards a configured bound, estimation/pipeline report run-time
// failures of the cleaning math. All carry a human-readable message.

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PipelineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Loading a bitext with zero segment pairs gets its own type: most of the
// downstream statistics divide by corpus totals.
class EmptyCorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lexclean

#endif  // LEXCLEAN_ERRORS_HPP
