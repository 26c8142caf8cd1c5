#pragma once

#include <cstdint>
#include <vector>

#include "core/evt.hpp"

namespace aoitail {

// One sensor's contribution to the federated tail model.
struct LocalModelReport {
  int sensor_id = 0;
  GpdParams model;
  std::size_t sample_count = 0;  // exceedances behind the local fit
  double hurst = 0.5;            // estimated from the full inter-arrival series

  void validate() const;
};

// Binary participation flags, one per report.
struct SelectionVector {
  std::vector<std::uint8_t> on;

  std::size_t count() const;
  bool any() const { return count() > 0; }
  static SelectionVector all(std::size_t k);
};

// Sample-count weighted average of the selected local models.
GpdParams fed_average(const std::vector<LocalModelReport>& reports,
                      const SelectionVector& selection);

// Rescaled-range (R/S) estimate of the Hurst exponent. Window sizes are
// log-spaced within [8, n/2]; the raw estimate is the least-squares slope of
// log(mean R/S) against log(size). Throws on constant input or n < 64.
double hurst_rs_slope(const std::vector<double>& series);
// slope clamped to [0.5, 1)
double hurst_estimate(const std::vector<double>& series);

// Correlation-aware weight of one sensor in the variance proxy:
//   S + 2 sum_{m=1}^{S-1} (S - m) m^{2H-2}
// The hyperbolic sum only applies to long-range dependent sensors; short-range
// ones (H = 0.5) contribute their sample count alone.
double correlation_weight(std::size_t sample_count, double hurst);

// Variance proxy of the aggregated model under a selection:
//   Psi = sum_k eta_k w_k / (sum_k eta_k S_k)^2,  w_k = correlation_weight
double selection_cost(const std::vector<LocalModelReport>& reports,
                      const SelectionVector& selection);

struct SelectOptions {
  int restarts = 1;          // total local searches; the first starts from init
  std::uint64_t seed = 0;    // for the random restarts
};

// Local search over selections: deterministic sweeps of single flips and
// (drop one, add one) swaps, first strict improvement, repeated until no
// move helps. Never returns an empty selection and never worsens the start.
SelectionVector select_models(const std::vector<LocalModelReport>& reports,
                              const SelectionVector& init,
                              const SelectOptions& options = {});

}  // namespace aoitail
