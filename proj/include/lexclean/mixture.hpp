#ifndef LEXCLEAN_MIXTURE_HPP
#define LEXCLEAN_MIXTURE_HPP

#include <cstdint>
#include <vector>

#include "lexclean/linker.hpp"
#include "lexclean/mixture_params.hpp"

namespace lexclean {

// ln[ C(n,k) p^k (1-p)^(n-k) ], log-gamma for the coefficient.
// Boundary conventions: p=0 gives 0.0 when k=0 else -inf; p=1 gives 0.0
// when k=n else -inf. Throws std::domain_error for k > n or p outside [0,1].
double binomial_log_pmf(std::uint32_t k, std::uint32_t n, double p);

// Entries grouped by (k, n): all members of a class contribute the same
// mixture term, and the binomial coefficient is constant in the parameters,
// so it is cached per class. Classes are kept sorted by (n, k), which fixes
// the summation order and makes the objective bit-reproducible.
class TallyHistogram {
 public:
  explicit TallyHistogram(const LinkTally& tally);

  struct Class {
    std::uint32_t k = 0;
    std::uint32_t n = 0;
    std::uint64_t count = 0;
    double log_choose = 0.0;  // ln C(n, k)
  };

  const std::vector<Class>& classes() const { return classes_; }
  std::uint64_t K() const { return K_; }
  std::uint64_t N() const { return N_; }

 private:
  std::vector<Class> classes_;
  std::uint64_t K_ = 0;
  std::uint64_t N_ = 0;
};

// Log likelihood of the tallies under the two-binomial mixture with the
// mixture weight tau pinned by tau = (K/N - lw) / (lr - lw). Infeasible
// parameter settings score -inf: lw >= lr, lw >= K/N, or any parameter
// outside [0,1]. The upper constraint K/N < lr is enforced with a 1e-9
// slack on tau so that boundary cases like K = N, lr = 1 - 1e-12 evaluate
// to their limit instead of -inf; a per-term positivity guard catches the
// sign problems an overshooting tau could cause.
double mixture_log_likelihood(const TallyHistogram& hist, double lambda_right,
                              double lambda_wrong);
double mixture_log_likelihood(const LinkTally& tally, double lambda_right,
                              double lambda_wrong);

struct EstimateOptions {
  int max_iterations = 500;
  double spread_tolerance = 1e-9;  // stop when max-min objective spread dips
};

// Maximum likelihood fit of (lambda_right, lambda_wrong) by Nelder-Mead
// over logit-reparameterized coordinates, started from (1-1e-6, 1e-6) and
// clamped to [1e-9, 1-1e-9]. Throws EstimationError when K = 0. When K = N
// the parameters are pinned near (1-eps, eps) with a warning instead of
// being fitted.
MixtureParams estimate_params(const LinkTally& tally,
                              const EstimateOptions& options = {});

// Log of the likelihood ratio B(k,n,lr)/B(k,n,lw) in favor of an entry
// being correct; the binomial coefficients cancel, leaving
//   k ln(lr/lw) + (n-k) ln((1-lr)/(1-lw)).
double likelihood_ratio_log(std::uint32_t k, std::uint32_t n,
                            const MixtureParams& params);

}  // namespace lexclean

#endif  // LEXCLEAN_MIXTURE_HPP
