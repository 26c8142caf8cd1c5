#include "core/evt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace aoitail {

namespace {

// Shape magnitudes below these switch to series expansions. The CCDF needs
// the second-order term so both branches agree to well under 1e-8 at the
// boundary; the xi-gradient cancels two O(1/xi) terms and is kept on the
// series up to a larger cutoff.
constexpr double kCcdfSeriesCutoff = 1e-6;
constexpr double kGradSeriesCutoff = 1e-4;
constexpr double kSigmaFloor = 1e-6;

// Support condition 1 + xi y / sigma > 0, evaluated through the shared
// expression t = (xi y) / sigma everywhere (support test, log likelihood,
// gradient). Mixing algebraically equal but differently rounded variants
// lets iterates pass the test where log1p(t) is already -inf.
double support_term(const GpdParams& p, double y) {
  return (p.xi * y) / p.sigma;
}

bool in_support(const GpdParams& p, double y) {
  return y >= 0.0 && support_term(p, y) > -1.0;
}

bool in_support_all(const GpdParams& p, const std::vector<double>& ys) {
  if (!(p.sigma > 0.0)) return false;
  if (p.xi >= 0.0) return true;
  for (double y : ys)
    if (!(support_term(p, y) > -1.0)) return false;
  return true;
}

}  // namespace

void GpdParams::validate() const {
  if (!(sigma > 0.0)) throw std::invalid_argument("gpd: sigma must be > 0");
  if (!std::isfinite(xi)) throw std::invalid_argument("gpd: xi must be finite");
}

ExceedanceSet extract_exceedances(const std::vector<double>& interarrivals,
                                  double tail_quantile) {
  if (!(tail_quantile > 0.0 && tail_quantile < 0.5))
    throw std::invalid_argument("extract_exceedances: tail_quantile not in (0, 0.5)");
  const std::size_t n = interarrivals.size();
  const std::size_t min_n =
      static_cast<std::size_t>(std::ceil(2.0 / tail_quantile));
  if (n < min_n)
    throw std::invalid_argument("extract_exceedances: sample too small for quantile");

  std::vector<double> transformed(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(interarrivals[i] > 0.0))
      throw std::invalid_argument("extract_exceedances: inter-arrivals must be > 0");
    transformed[i] = -std::log(interarrivals[i]);
  }

  // nearest-rank (1 - q) quantile: k-th order statistic, k = ceil((1-q) n)
  std::vector<double> sorted(transformed);
  std::sort(sorted.begin(), sorted.end());
  std::size_t k = static_cast<std::size_t>(
      std::ceil((1.0 - tail_quantile) * static_cast<double>(n)));
  k = std::min(std::max<std::size_t>(k, 1), n);
  const double x0 = sorted[k - 1];

  ExceedanceSet set;
  set.threshold = x0;
  set.sample_count = n;
  for (double x : transformed)
    if (x > x0) set.values.push_back(x - x0);
  if (set.values.empty())
    throw std::invalid_argument("extract_exceedances: no strict exceedances");
  set.tail_prob = static_cast<double>(set.values.size()) / static_cast<double>(n);
  return set;
}

double gpd_ccdf(const GpdParams& p, double y) {
  p.validate();
  if (y < 0.0) throw std::invalid_argument("gpd_ccdf: y must be >= 0");
  const double u = y / p.sigma;
  if (std::fabs(p.xi) < kCcdfSeriesCutoff) {
    // exp(-(1/xi) log1p(xi u)) expanded to second order in xi
    return std::exp(-u + p.xi * u * u / 2.0 - p.xi * p.xi * u * u * u / 3.0);
  }
  const double t = support_term(p, y);
  if (t <= -1.0) return 0.0;  // beyond the upper endpoint for xi < 0
  return std::exp(-std::log1p(t) / p.xi);
}

double gpd_loglik(const GpdParams& p, double y) {
  p.validate();
  if (!in_support(p, y))
    throw std::invalid_argument("gpd_loglik: y outside the support");
  const double u = y / p.sigma;
  if (std::fabs(p.xi) < 1e-12) {
    return -std::log(p.sigma) - u - p.xi * (u - u * u / 2.0);
  }
  return -std::log(p.sigma) - (1.0 + 1.0 / p.xi) * std::log1p(support_term(p, y));
}

std::array<double, 2> gpd_loglik_gradient(const GpdParams& p, double y) {
  p.validate();
  if (!in_support(p, y))
    throw std::invalid_argument("gpd_loglik_gradient: y outside the support");
  const double sigma = p.sigma;
  const double xi = p.xi;
  const double u = y / sigma;
  // t comes from the same expression the support check evaluates, so
  // t > -1 holds here and log1p(t) is finite; rounding the algebraically
  // equal xi * (y / sigma) can land exactly on -1 while the check passes
  const double t = support_term(p, y);
  const double w = 1.0 + t;

  // d/dsigma: (xi+1)/(sigma^2/y + sigma xi) - 1/sigma simplifies to
  // (y - sigma) / (sigma (sigma + xi y)) = (u - 1) / (sigma w)
  const double d_sigma = (u - 1.0) / (sigma * w);

  double d_xi;
  if (std::fabs(xi) < kGradSeriesCutoff) {
    // series in xi; the two exact terms each carry a u/xi singularity that
    // cancels analytically but not in floating point
    const double u2 = u * u;
    const double u3 = u2 * u;
    const double u4 = u2 * u2;
    d_xi = -(u - u2 / 2.0) + xi * (u2 - 2.0 * u3 / 3.0) +
           xi * xi * (0.75 * u4 - u3);
  } else {
    d_xi = std::log1p(t) / (xi * xi) - (1.0 + 1.0 / xi) * u / w;
  }
  return {d_sigma, d_xi};
}

double average_loglik(const GpdParams& p, const std::vector<double>& values) {
  long double acc = 0.0L;
  for (double y : values) acc += gpd_loglik(p, y);
  return static_cast<double>(acc / static_cast<long double>(values.size()));
}

GpdParams fit_local(const ExceedanceSet& data, GpdParams init, double rate,
                    int iterations, std::vector<double>* loglik_trace) {
  init.validate();
  if (!(rate > 0.0)) throw std::invalid_argument("fit_local: rate must be > 0");
  if (iterations < 0) throw std::invalid_argument("fit_local: negative iterations");
  if (data.values.empty())
    throw std::invalid_argument("fit_local: empty exceedance set");

  // canonical summation order makes the result exactly invariant to the
  // order of the input samples
  std::vector<double> ys(data.values);
  std::sort(ys.begin(), ys.end());
  if (!in_support_all(init, ys))
    throw std::invalid_argument("fit_local: init outside the support of the data");

  const double inv_n = 1.0 / static_cast<double>(ys.size());
  GpdParams theta = init;
  double theta_ll = average_loglik(theta, ys);
  if (loglik_trace) {
    loglik_trace->clear();
    loglik_trace->push_back(theta_ll);
  }

  for (int it = 0; it < iterations; ++it) {
    long double g_sigma = 0.0L;
    long double g_xi = 0.0L;
    for (double y : ys) {
      const auto g = gpd_loglik_gradient(theta, y);
      g_sigma += g[0];
      g_xi += g[1];
    }
    double step_sigma = rate * static_cast<double>(g_sigma) * inv_n;
    double step_xi = rate * static_cast<double>(g_xi) * inv_n;

    // halve the step until the candidate is inside the support and keeps the
    // average log-likelihood from dropping (the gradient near the xi < 0
    // support boundary is huge, and an unchecked step catapults sigma); a
    // step that underflows against theta always passes, so this only fails
    // on non-finite gradients
    bool accepted = false;
    for (int halving = 0; halving < 200; ++halving) {
      const GpdParams cand{std::max(theta.sigma + step_sigma, kSigmaFloor),
                           theta.xi + step_xi};
      if (in_support_all(cand, ys)) {
        const double cand_ll = average_loglik(cand, ys);
        if (cand_ll >= theta_ll - 1e-12) {
          theta = cand;
          theta_ll = cand_ll;
          accepted = true;
          break;
        }
      }
      step_sigma *= 0.5;
      step_xi *= 0.5;
    }
    if (!accepted)
      throw std::runtime_error("fit_local: no valid ascent step exists");
    if (loglik_trace) loglik_trace->push_back(theta_ll);
  }
  return theta;
}

void save_exceedances(const std::string& path, const ExceedanceSet& set) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_exceedances: cannot open " + path);
  char buf[128];
  std::snprintf(buf, sizeof(buf), "# x0=%.17g tail_prob=%.17g sample_count=%zu\n",
                set.threshold, set.tail_prob, set.sample_count);
  out << buf << "n,y\n";
  for (std::size_t i = 0; i < set.values.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i, set.values[i]);
    out << buf;
  }
  if (!out) throw std::runtime_error("save_exceedances: write failed: " + path);
}

ExceedanceSet load_exceedances(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_exceedances: cannot open " + path);
  ExceedanceSet set;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::sscanf(line.c_str(), "# x0=%lg tail_prob=%lg sample_count=%zu",
                  &set.threshold, &set.tail_prob, &set.sample_count);
      continue;
    }
    if (!header_seen) {
      if (line.rfind("n,y", 0) != 0)
        throw std::runtime_error("load_exceedances: missing n,y header in " + path);
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("load_exceedances: malformed row: " + line);
    set.values.push_back(std::stod(line.substr(comma + 1)));
  }
  if (!header_seen)
    throw std::runtime_error("load_exceedances: empty file: " + path);
  return set;
}

}  // namespace aoitail
