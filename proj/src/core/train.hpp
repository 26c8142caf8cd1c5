#pragma once

#include <cstddef>
#include <vector>

#include "core/config.hpp"
#include "core/evt.hpp"
#include "core/federated.hpp"

namespace aoitail {

// Output of the offline federated phase: every sensor's local fit plus the
// two aggregated models (selected weighted average and plain all-ones
// FedAvg, kept for comparison).
struct TrainingResult {
  std::vector<LocalModelReport> reports;
  SelectionVector selection;
  GpdParams global_selected;
  GpdParams global_fedavg;
};

// Generates each sensor's historical inter-arrivals, extracts exceedances of
// -log(x) over the configured quantile, fits local GPDs by gradient ascent,
// estimates the Hurst exponent from the full series, and aggregates.
TrainingResult run_training_phase(const SimConfig& cfg);

struct ThetaStat {
  double sigma = 0.0;
  double xi = 0.0;
};

// Spread of the aggregated model across repeated training rounds with fresh
// data, under the correlation-aware selection and under all-ones FedAvg.
struct VarianceSummary {
  ThetaStat mean_selected;
  ThetaStat std_selected;  // sample standard deviation per component
  ThetaStat mean_fedavg;
  ThetaStat std_fedavg;
  std::size_t rounds = 0;
};

VarianceSummary fl_variance_experiment(const SimConfig& cfg, std::size_t rounds);

}  // namespace aoitail
