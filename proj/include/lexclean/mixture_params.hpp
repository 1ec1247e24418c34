#ifndef LEXCLEAN_MIXTURE_PARAMS_HPP
#define LEXCLEAN_MIXTURE_PARAMS_HPP

#include <cstdint>

namespace lexclean {

// Fitted two-binomial link model. lambda_right is the probability that
// co-occurring mutual translations get linked, lambda_wrong the same for
// non-translations. lambda = K/N is the marginal link rate and tau the
// mixture weight tying the three together:
//
//   lambda = tau * lambda_right + (1 - tau) * lambda_wrong
//
// tau is always derived from that identity, so the identity holds to
// machine precision even in the pinned K == N case (where tau exceeds 1
// by a hair and the strict ordering lambda_wrong < lambda < lambda_right
// cannot hold).
struct MixtureParams {
  double lambda_right = 0.0;
  double lambda_wrong = 0.0;
  double lambda = 0.0;
  double tau = 0.0;
  std::uint64_t K = 0;  // total links
  std::uint64_t N = 0;  // total co-occurrences over lexicon entries
  double log_data_prob = 0.0;
  bool converged = false;  // simplex spread fell below tolerance
  int iterations = 0;
  bool pinned = false;  // K == N degenerate path; values clamped, not fitted
};

}  // namespace lexclean

#endif  // LEXCLEAN_MIXTURE_PARAMS_HPP
