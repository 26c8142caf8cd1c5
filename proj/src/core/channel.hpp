#pragma once

#include <cstdint>
#include <random>

namespace aoitail {

enum class FadingKind { kNone, kRayleigh };

// Wireless link between a sensor and the controller. Path loss follows an
// indoor office model, fading is block (one draw per transmission) with a
// unit-mean exponential power gain for Rayleigh envelopes.
struct ChannelModel {
  double distance_m = 15.0;
  double carrier_ghz = 2.625;
  FadingKind fading = FadingKind::kRayleigh;
  std::uint64_t seed = 0;

  void validate() const;
};

// Shared uplink parameters. bandwidth_per_sensor_hz is the per-sensor share
// W/K of the total bandwidth.
struct LinkBudget {
  double bandwidth_per_sensor_hz = 1e6 / 50.0;
  double data_bits = 1e4;
  double noise_psd_w_hz = 3.9810717055349565e-21;  // -174 dBm/Hz
  int num_sensors = 50;

  void validate() const;
  double total_bandwidth_hz() const {
    return bandwidth_per_sensor_hz * num_sensors;
  }
};

// 33 log10(d_m) + 20 log10(f_GHz) + 32, in dB
double path_loss_db(const ChannelModel& model);

// deterministic part of the power gain, 10^(-path_loss/10)
double mean_gain(const ChannelModel& model);

// path loss times a fading draw from the given engine
double draw_gain(const ChannelModel& model, std::mt19937_64& rng);

// Time to push data_bits through the per-sensor share of the channel:
//   T = D / (w log2(1 + gain * power / (w N0))),  w = W/K
double transmission_time(const LinkBudget& budget, double gain, double power_w);

}  // namespace aoitail
