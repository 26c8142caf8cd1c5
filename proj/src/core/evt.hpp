#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace aoitail {

// Generalized Pareto parameters (scale sigma > 0, shape xi). xi = 0 is the
// exponential limit; all evaluators switch to series forms near it instead
// of dividing by a tiny shape.
struct GpdParams {
  double sigma = 1.0;
  double xi = 0.0;

  void validate() const;
};

// Tail excesses of the transformed inter-arrival sequence X = -log(x) over
// an empirical threshold. threshold is the nearest-rank (1 - tail_quantile)
// quantile x0 of X, tail_prob the realized exceedance fraction F_X(x0).
struct ExceedanceSet {
  std::vector<double> values;   // strictly positive excesses X - x0
  double threshold = 0.0;       // x0
  double tail_prob = 0.0;       // fraction of samples above x0
  std::size_t sample_count = 0; // size of the originating sample
};

// Builds the exceedance set from raw inter-arrival times (seconds).
// tail_quantile must lie in (0, 0.5) and the sample must be large enough to
// contain at least two expected exceedances.
ExceedanceSet extract_exceedances(const std::vector<double>& interarrivals,
                                  double tail_quantile);

// P(Y > y) = (1 + xi y / sigma)^(-1/xi), exp(-y/sigma) in the xi -> 0 limit.
// Returns 0 beyond the upper endpoint when xi < 0.
double gpd_ccdf(const GpdParams& p, double y);

// log density of the excess y under p
double gpd_loglik(const GpdParams& p, double y);

// d log density / d(sigma, xi), analytic
std::array<double, 2> gpd_loglik_gradient(const GpdParams& p, double y);

// Batch gradient ascent on the average log likelihood:
//   theta <- theta + (rate/|Y|) sum grad
// sigma is floored at 1e-6 and any step that leaves the support or lowers
// the average log likelihood is halved until valid. Optionally records the
// average log likelihood after each iteration.
GpdParams fit_local(const ExceedanceSet& data, GpdParams init, double rate,
                    int iterations, std::vector<double>* loglik_trace = nullptr);

double average_loglik(const GpdParams& p, const std::vector<double>& values);

// CSV persistence for offline inspection: a metadata comment line, then a
// header row "n,y" and one indexed excess per row.
void save_exceedances(const std::string& path, const ExceedanceSet& set);
ExceedanceSet load_exceedances(const std::string& path);

}  // namespace aoitail
