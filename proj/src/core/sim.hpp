#pragma once

#include <vector>

#include "core/aoi.hpp"
#include "core/config.hpp"
#include "core/evt.hpp"

namespace aoitail {

// Time averages over all post-warmup transmissions, pooled across sensors
// and Monte-Carlo runs.
struct OnlineMetrics {
  double p_avg_w = 0.0;      // transmit power
  double p_min_avg_w = 0.0;  // URLLC lower bound actually applied
  double peak_aoi_s = 0.0;
  double f_avg = 0.0;        // age cost (1/beta) A^beta
  double queue_delay_s = 0.0;
  double tx_delay_s = 0.0;
  double e2e_delay_s = 0.0;  // queue + transmission
  double violation_prob = 0.0;  // Pr{q > q_threshold}
  double stay_time_s = 0.0;  // mean interval between receptions
  double infeasible_rate = 0.0;  // slots where the bound hit p_max
  std::size_t slots = 0;
};

struct CcdfPoint {
  double delay_s = 0.0;
  double ccdf = 0.0;
};

struct OnlineResult {
  OnlineMetrics metrics;
  // per-slot rows, capped at records_per_sensor per sensor (run 0 only)
  std::vector<TransmissionRecord> records;
  // empirical survival function of the pooled queuing delays
  std::vector<CcdfPoint> ccdf;
};

// Drift-plus-penalty power control simulated over cfg.horizon transmissions
// per sensor with the given global tail model.
OnlineResult run_online_phase(const SimConfig& cfg, const GpdParams& tail);

struct SweepRow {
  double v = 0.0;
  OnlineMetrics metrics;
};

// Online phase repeated for each v with common random numbers (identical
// traffic and fading streams across v values).
std::vector<SweepRow> sweep_v(const SimConfig& cfg, const GpdParams& tail,
                              const std::vector<double>& v_values);

// Same, but runs the training phase first and sweeps with the selected
// global model.
std::vector<SweepRow> sweep_v(const SimConfig& cfg,
                              const std::vector<double>& v_values);

}  // namespace aoitail
