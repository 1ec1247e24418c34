#include "lexclean/mixture.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <stdexcept>

#include "lexclean/errors.hpp"

namespace lexclean {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kProbClamp = 1e-9;  // probabilities live in [eps, 1-eps]

double log_choose(std::uint32_t k, std::uint32_t n) {
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

// ln( c1*exp(a) + c2*exp(b) ) where c2 may be a hair negative when tau
// overshoots 1 at the feasibility boundary; a non-positive sum is treated
// as zero probability.
double log_mix(double c1, double a, double c2, double b) {
  double m = std::max(a, b);
  if (m == kNegInf) return kNegInf;
  double s = c1 * std::exp(a - m) + c2 * std::exp(b - m);
  if (!(s > 0.0)) return kNegInf;
  return m + std::log(s);
}

double logit(double p) { return std::log(p / (1.0 - p)); }

double clamped_sigmoid(double x) {
  double p = 1.0 / (1.0 + std::exp(-x));
  return std::clamp(p, kProbClamp, 1.0 - kProbClamp);
}

struct SimplexOutcome {
  std::array<double, 2> x{};
  double value = kNegInf;
  bool converged = false;
  int iterations = 0;
};

// Two-dimensional Nelder-Mead maximizer: reflect / expand / contract /
// shrink with the textbook coefficients 1, 2, 0.5, 0.5. Stops when the
// objective spread over the simplex drops below tol or the iteration
// budget runs out.
template <class F>
SimplexOutcome maximize_simplex(const F& f, std::array<double, 2> start,
                                std::array<double, 2> step, int max_iterations,
                                double tol) {
  std::array<std::array<double, 2>, 3> xs{
      start,
      {start[0] + step[0], start[1]},
      {start[0], start[1] + step[1]}};
  std::array<double, 3> fs{f(xs[0]), f(xs[1]), f(xs[2])};

  SimplexOutcome out;
  int iter = 0;
  for (; iter < max_iterations; ++iter) {
    // order: b best, s middle, w worst
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return fs[i] > fs[j]; });
    const int b = order[0], s = order[1], w = order[2];

    if (std::isfinite(fs[b]) && std::isfinite(fs[w]) &&
        fs[b] - fs[w] < tol) {
      out.converged = true;
      break;
    }

    std::array<double, 2> centroid{(xs[b][0] + xs[s][0]) / 2.0,
                                   (xs[b][1] + xs[s][1]) / 2.0};
    auto at = [&](double coef) {
      return std::array<double, 2>{centroid[0] + coef * (centroid[0] - xs[w][0]),
                                   centroid[1] + coef * (centroid[1] - xs[w][1])};
    };

    std::array<double, 2> xr = at(1.0);
    double fr = f(xr);
    if (fr > fs[b]) {
      std::array<double, 2> xe = at(2.0);
      double fe = f(xe);
      if (fe > fr) {
        xs[w] = xe;
        fs[w] = fe;
      } else {
        xs[w] = xr;
        fs[w] = fr;
      }
    } else if (fr > fs[s]) {
      xs[w] = xr;
      fs[w] = fr;
    } else {
      std::array<double, 2> xc = fr > fs[w] ? at(0.5) : at(-0.5);
      double fc = f(xc);
      if (fc > std::max(fr, fs[w])) {
        xs[w] = xc;
        fs[w] = fc;
      } else {
        for (int i : {s, w}) {
          xs[i] = {(xs[i][0] + xs[b][0]) / 2.0, (xs[i][1] + xs[b][1]) / 2.0};
          fs[i] = f(xs[i]);
        }
      }
    }
  }

  int best = 0;
  for (int i = 1; i < 3; ++i) {
    if (fs[i] > fs[best]) best = i;
  }
  out.x = xs[best];
  out.value = fs[best];
  out.iterations = iter;
  return out;
}

}  // namespace

double binomial_log_pmf(std::uint32_t k, std::uint32_t n, double p) {
  if (k > n) throw std::domain_error("binomial_log_pmf: k > n");
  if (p < 0.0 || p > 1.0 || std::isnan(p)) {
    throw std::domain_error("binomial_log_pmf: p outside [0,1]");
  }
  if (p == 0.0) return k == 0 ? 0.0 : kNegInf;
  if (p == 1.0) return k == n ? 0.0 : kNegInf;
  return log_choose(k, n) + k * std::log(p) + (n - k) * std::log1p(-p);
}

TallyHistogram::TallyHistogram(const LinkTally& tally) {
  K_ = tally.K;
  N_ = tally.N;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> classes;
  for (const EntryTally& e : tally.entries) {
    ++classes[{e.n, e.k}];
  }
  classes_.reserve(classes.size());
  for (const auto& [nk, count] : classes) {
    classes_.push_back({nk.second, nk.first, count, log_choose(nk.second, nk.first)});
  }
}

double mixture_log_likelihood(const TallyHistogram& hist, double lambda_right,
                              double lambda_wrong) {
  if (hist.N() == 0) return kNegInf;
  if (std::isnan(lambda_right) || std::isnan(lambda_wrong)) return kNegInf;
  if (lambda_right < 0.0 || lambda_right > 1.0 || lambda_wrong < 0.0 ||
      lambda_wrong > 1.0) {
    return kNegInf;
  }
  const double lambda =
      static_cast<double>(hist.K()) / static_cast<double>(hist.N());
  if (!(lambda_wrong < lambda) || !(lambda_wrong < lambda_right)) {
    return kNegInf;
  }
  const double tau = (lambda - lambda_wrong) / (lambda_right - lambda_wrong);
  if (tau > 1.0 + 1e-9) return kNegInf;

  const double log_r = lambda_right > 0.0 ? std::log(lambda_right) : kNegInf;
  const double log_1r = lambda_right < 1.0 ? std::log1p(-lambda_right) : kNegInf;
  const double log_w = lambda_wrong > 0.0 ? std::log(lambda_wrong) : kNegInf;
  const double log_1w = lambda_wrong < 1.0 ? std::log1p(-lambda_wrong) : kNegInf;

  double total = 0.0;
  for (const TallyHistogram::Class& c : hist.classes()) {
    double a = c.k == 0 ? (c.n == c.k ? 0.0 : (c.n - c.k) * log_1r)
                        : (c.n == c.k ? c.k * log_r
                                      : c.k * log_r + (c.n - c.k) * log_1r);
    double b = c.k == 0 ? (c.n == c.k ? 0.0 : (c.n - c.k) * log_1w)
                        : (c.n == c.k ? c.k * log_w
                                      : c.k * log_w + (c.n - c.k) * log_1w);
    double term = log_mix(tau, a, 1.0 - tau, b);
    if (term == kNegInf) return kNegInf;
    total += static_cast<double>(c.count) * (c.log_choose + term);
  }
  return total;
}

double mixture_log_likelihood(const LinkTally& tally, double lambda_right,
                              double lambda_wrong) {
  return mixture_log_likelihood(TallyHistogram(tally), lambda_right,
                                lambda_wrong);
}

MixtureParams estimate_params(const LinkTally& tally,
                              const EstimateOptions& options) {
  MixtureParams params;
  params.K = tally.K;
  params.N = tally.N;
  if (tally.N == 0) {
    throw EstimationError("no co-occurrences in tally");
  }
  if (tally.K == 0) {
    throw EstimationError("no links; lexicon empty after discard");
  }
  params.lambda = static_cast<double>(tally.K) / static_cast<double>(tally.N);

  TallyHistogram hist(tally);

  if (tally.K == tally.N) {
    // Every co-occurrence linked: lambda = 1 sits outside the open interval
    // the mixture needs, so pin the parameters at the clamps instead of
    // fitting.
    std::cerr << "lexclean: warning: all co-occurrences are linked (K == N); "
                 "pinning lambda_right/lambda_wrong at the clamps\n";
    params.lambda_right = 1.0 - kProbClamp;
    params.lambda_wrong = kProbClamp;
    params.tau = (params.lambda - params.lambda_wrong) /
                 (params.lambda_right - params.lambda_wrong);
    params.log_data_prob =
        mixture_log_likelihood(hist, params.lambda_right, params.lambda_wrong);
    params.converged = true;
    params.iterations = 0;
    params.pinned = true;
    return params;
  }

  // Start near (1, 0); that exact point has zero-probability binomials, so
  // back off by 1e-6, and further if the observed link rate crowds a clamp.
  double lr0 = 1.0 - 1e-6;
  if (lr0 <= params.lambda) lr0 = (1.0 + params.lambda) / 2.0;
  double lw0 = 1e-6;
  if (lw0 >= params.lambda) lw0 = params.lambda / 2.0;

  auto objective = [&hist](const std::array<double, 2>& x) {
    return mixture_log_likelihood(hist, clamped_sigmoid(x[0]),
                                  clamped_sigmoid(x[1]));
  };

  // Perturb the initial vertices toward the interior; the logit scale makes
  // unit steps meaningful at any magnitude.
  std::array<double, 2> start{logit(lr0), logit(lw0)};
  std::array<double, 2> step{start[0] > 0 ? -1.0 : 1.0,
                             start[1] > 0 ? -1.0 : 1.0};
  SimplexOutcome run = maximize_simplex(objective, start, step,
                                        options.max_iterations,
                                        options.spread_tolerance);
  // One restart from the incumbent with a fresh simplex guards against a
  // collapsed simplex stalling short of the optimum.
  if (run.iterations < options.max_iterations) {
    SimplexOutcome retry = maximize_simplex(
        objective, run.x, step, options.max_iterations - run.iterations,
        options.spread_tolerance);
    if (retry.value >= run.value) {
      retry.iterations += run.iterations;
      run = retry;
    }
  }

  params.lambda_right = clamped_sigmoid(run.x[0]);
  params.lambda_wrong = clamped_sigmoid(run.x[1]);
  params.tau = (params.lambda - params.lambda_wrong) /
               (params.lambda_right - params.lambda_wrong);
  params.log_data_prob = run.value;
  params.converged = run.converged;
  params.iterations = run.iterations;
  return params;
}

double likelihood_ratio_log(std::uint32_t k, std::uint32_t n,
                            const MixtureParams& params) {
  if (k > n) throw std::domain_error("likelihood_ratio_log: k > n");
  if (n == 0) return 0.0;
  double win = std::log(params.lambda_right / params.lambda_wrong);
  double loss = std::log((1.0 - params.lambda_right) / (1.0 - params.lambda_wrong));
  return k * win + (n - k) * loss;
}

}  // namespace lexclean
