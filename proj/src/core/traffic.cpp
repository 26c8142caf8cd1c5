#include "core/traffic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "core/rng.hpp"

namespace aoitail {

namespace {
double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
}  // namespace

void TrafficModel::validate() const {
  if (!(mean_interarrival > 0.0))
    throw std::invalid_argument("traffic: mean_interarrival must be > 0");
  if (!(underlying_std > 0.0))
    throw std::invalid_argument("traffic: underlying_std must be > 0");
  if (!(hurst >= 0.5 && hurst < 1.0))
    throw std::invalid_argument("traffic: hurst must lie in [0.5, 1)");
}

std::vector<double> generate_underlying(const TrafficModel& model, std::size_t n) {
  model.validate();
  std::mt19937_64 rng = make_engine(model.seed);
  std::vector<double> xs = generate_fgn(model.hurst, n, rng, model.fgn_method);
  for (double& x : xs) x = model.mean_interarrival + model.underlying_std * x;
  return xs;
}

std::vector<double> generate_interarrivals(const TrafficModel& model, std::size_t n) {
  std::vector<double> xs = generate_underlying(model, n);
  for (double& x : xs) {
    x = std::fabs(x);
    if (x < std::numeric_limits<double>::min())
      x = std::numeric_limits<double>::min();
  }
  return xs;
}

double folded_normal_mean(double mu, double sigma) {
  const double ratio = mu / sigma;
  return sigma * std::sqrt(2.0 / M_PI) * std::exp(-0.5 * ratio * ratio) +
         mu * (1.0 - 2.0 * std_normal_cdf(-ratio));
}

double folded_normal_cdf(double mu, double sigma, double c) {
  if (c <= 0.0) return 0.0;
  return std_normal_cdf((c - mu) / sigma) - std_normal_cdf((-c - mu) / sigma);
}

double folded_normal_quantile(double mu, double sigma, double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("folded_normal_quantile: p must lie in (0, 1)");
  double lo = 0.0;
  double hi = std::fabs(mu) + 40.0 * sigma;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (folded_normal_cdf(mu, sigma, mid) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace aoitail
