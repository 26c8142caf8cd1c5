#pragma once

#include <cstdint>
#include <vector>

#include "core/fgn.hpp"

namespace aoitail {

// Status-update inter-arrival process: the absolute value of a (possibly
// long-range dependent) Gaussian sequence. The underlying sequence is fGn
// scaled to (underlying_mean, underlying_std); hurst = 0.5 gives i.i.d.
// draws, hurst > 0.5 gives long-range dependence.
struct TrafficModel {
  double mean_interarrival = 0.1;  // seconds, mean of the underlying Gaussian
  double underlying_std = 0.05;    // seconds
  double hurst = 0.5;              // [0.5, 1)
  std::uint64_t seed = 0;
  FgnMethod fgn_method = FgnMethod::kAuto;

  void validate() const;  // throws std::invalid_argument
};

// The correlated Gaussian sequence before folding. Exposed so correlation
// structure can be inspected directly.
std::vector<double> generate_underlying(const TrafficModel& model, std::size_t n);

// |underlying|, clamped away from exact zero so -log(x) stays finite.
std::vector<double> generate_interarrivals(const TrafficModel& model, std::size_t n);

// Folded-normal helpers for |N(mu, sigma^2)|.
double folded_normal_mean(double mu, double sigma);
double folded_normal_cdf(double mu, double sigma, double c);
// smallest c with P(|X| <= c) >= p, found by bisection
double folded_normal_quantile(double mu, double sigma, double p);

}  // namespace aoitail
