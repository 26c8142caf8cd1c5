#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "core/aoi.hpp"
#include "core/channel.hpp"
#include "core/power.hpp"
#include "core/traffic.hpp"

namespace aoitail {

inline double dbm_to_watts(double dbm) {
  return 1e-3 * std::pow(10.0, dbm / 10.0);
}

inline double watts_to_dbm(double watts) {
  return 10.0 * std::log10(watts / 1e-3);
}

// Full run configuration. Values are kept in the units used by the config
// file (dBm for powers, total Hz for bandwidth); the builder methods below
// convert once into the linear SI units the core works with.
struct SimConfig {
  // traffic
  double mean_interarrival = 0.1;  // s, mean of the underlying Gaussian
  double underlying_std = 0.05;    // s
  double hurst = 0.5;
  // optional per-sensor Hurst spread: sensors get evenly spaced exponents in
  // [hurst_min, hurst_max]; NaN means every sensor uses `hurst`
  double hurst_min = std::numeric_limits<double>::quiet_NaN();
  double hurst_max = std::numeric_limits<double>::quiet_NaN();
  std::string fgn_method = "auto";  // auto | circulant | sequential

  // channel and link budget
  double distance_m = 15.0;
  double carrier_ghz = 2.625;
  std::string fading = "rayleigh";  // rayleigh | none
  double bandwidth_hz = 1e6;        // total uplink bandwidth W
  double data_bits = 1e4;           // bits per status update D
  double noise_dbm_hz = -174.0;
  std::size_t num_sensors = 50;

  // age cost
  double beta = 1.0;
  double f_threshold = 0.25;

  // power tradeoff and delay constraint
  double v = 1.0;
  double p_max_dbm = 10.0;
  double epsilon = 1e-4;
  double q_threshold_s = 0.2;
  double tail_quantile = 0.01;  // exceedance fraction defining x0
  // explicit threshold override in -log(x) units; NaN derives it from the
  // folded-normal quantile of the configured traffic
  double x0 = std::numeric_limits<double>::quiet_NaN();

  // local GPD training
  double gamma = 0.01;       // learning rate
  int iters = 3000;          // gradient-ascent iterations J
  double theta0_sigma = 1.0;
  double theta0_xi = 0.1;
  std::size_t train_samples = 2000;  // historical inter-arrivals per sensor
  int selection_restarts = 1;

  // simulation
  std::size_t horizon = 100000;  // transmissions per sensor
  std::size_t warmup = 1000;
  std::size_t monte_carlo_runs = 1;
  std::size_t records_per_sensor = 5000;  // per-slot rows kept for records.csv
  std::uint64_t master_seed = 1;
  unsigned threads = 0;  // 0 = one worker per hardware thread

  void validate() const;

  // builders into the per-module types; seeds come from the caller so the
  // same config can drive independent substreams
  double hurst_for(std::size_t sensor) const;
  TrafficModel traffic_model(std::size_t sensor, std::uint64_t seed) const;
  ChannelModel channel_model(std::uint64_t seed) const;
  LinkBudget link_budget() const;
  AoiCostConfig aoi_cost() const;
  TradeoffConfig tradeoff() const;
  // threshold_x0 defaults to the analytic folded-normal quantile so the
  // online phase does not depend on the training sample
  UrllcConstraint urllc(const GpdParams& tail) const;
  FgnMethod fgn() const;
};

// All recognized config keys, for error messages and round-tripping.
std::vector<std::string> config_keys();

// Set/read one field by config-file key. Throws std::invalid_argument on
// unknown keys or malformed values.
void config_set(SimConfig& cfg, const std::string& key, const std::string& value);
std::string config_get(const SimConfig& cfg, const std::string& key);

// key = value lines, # comments, blank lines ignored, later keys win.
SimConfig load_config_file(const std::string& path);
SimConfig load_config_string(const std::string& text);
std::string dump_config(const SimConfig& cfg);

}  // namespace aoitail
