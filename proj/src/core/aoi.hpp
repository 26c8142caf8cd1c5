#pragma once

#include <cstdint>
#include <vector>

namespace aoitail {

// Penalty on peak age f(A) = (1/beta) A^beta and its long-run budget f_th,
// tracked by a virtual queue.
struct AoiCostConfig {
  double beta = 1.0;
  double f_threshold = 0.25;

  void validate() const;
};

// Per-sensor bookkeeping carried across transmissions. aoi_anchor is the age
// at the previous reception instant (queue delay + transmission time of the
// data just delivered); it starts at zero, so the first peak age reduces to
// x^1 + T^1.
struct SensorState {
  double queue_delay = 0.0;    // seconds, q^n
  double virtual_queue = 0.0;  // Z^n
  double aoi_anchor = 0.0;     // age at the last reception
  double last_reception = 0.0; // absolute time of the last reception
  std::uint64_t index = 0;     // transmissions completed
};

// One completed transmission. peak_aoi_s is the peak age of the previously
// delivered data, measured just before this reception.
struct TransmissionRecord {
  int sensor_id = 0;
  std::uint64_t index = 0;     // 1-based slot number
  double power_w = 0.0;
  double tx_time_s = 0.0;
  double queue_delay_s = 0.0;  // q^n of the data sent this slot
  double peak_aoi_s = 0.0;
  double interarrival_s = 0.0; // x^n
  double virtual_queue = 0.0;  // Z^n before the update
  double p_min_w = 0.0;        // URLLC lower bound, clamped to p_max
  bool infeasible = false;     // lower bound exceeded p_max this slot
};

// Peak age accumulated between two receptions:
//   A = anchor + max(x - anchor, 0) + tx_time
double peak_aoi(double aoi_anchor, double interarrival, double tx_time);

// q^{n+1} = max(q + tx_time - next_interarrival, 0)
double advance_queue(double queue_delay, double tx_time, double next_interarrival);

// f(A) = (1/beta) A^beta
double aoi_cost(const AoiCostConfig& cost, double peak_aoi_value);

// Z^{n+1} = max(Z + f(A) - f_th, 0)
double advance_virtual_queue(const AoiCostConfig& cost, double virtual_queue,
                             double peak_aoi_value);

// Samples the sawtooth age trajectory implied by a record sequence at the
// given absolute times. Reception instants are reconstructed from the
// cumulative inter-arrivals; before the first reception the age grows from
// zero at t = 0.
std::vector<double> aoi_trajectory(const std::vector<TransmissionRecord>& records,
                                   const std::vector<double>& times);

}  // namespace aoitail
