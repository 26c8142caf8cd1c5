#include "core/aoi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aoitail {

void AoiCostConfig::validate() const {
  if (!(beta >= 1.0))
    throw std::invalid_argument("aoi: beta must be >= 1");
  if (!(f_threshold > 0.0))
    throw std::invalid_argument("aoi: f_threshold must be > 0");
}

double peak_aoi(double aoi_anchor, double interarrival, double tx_time) {
  if (aoi_anchor < 0.0 || interarrival < 0.0 || tx_time < 0.0)
    throw std::invalid_argument("peak_aoi: negative input");
  return aoi_anchor + std::max(interarrival - aoi_anchor, 0.0) + tx_time;
}

double advance_queue(double queue_delay, double tx_time, double next_interarrival) {
  if (queue_delay < 0.0 || tx_time < 0.0 || next_interarrival < 0.0)
    throw std::invalid_argument("advance_queue: negative input");
  return std::max(queue_delay + tx_time - next_interarrival, 0.0);
}

double aoi_cost(const AoiCostConfig& cost, double peak_aoi_value) {
  cost.validate();
  if (peak_aoi_value < 0.0)
    throw std::invalid_argument("aoi_cost: negative peak age");
  if (cost.beta == 1.0) return peak_aoi_value;
  return std::pow(peak_aoi_value, cost.beta) / cost.beta;
}

double advance_virtual_queue(const AoiCostConfig& cost, double virtual_queue,
                             double peak_aoi_value) {
  if (virtual_queue < 0.0)
    throw std::invalid_argument("advance_virtual_queue: negative virtual queue");
  return std::max(virtual_queue + aoi_cost(cost, peak_aoi_value) - cost.f_threshold,
                  0.0);
}

std::vector<double> aoi_trajectory(const std::vector<TransmissionRecord>& records,
                                   const std::vector<double>& times) {
  // reception instants: t_n = sum of inter-arrivals up to n, plus q_n + T_n
  std::vector<double> reception(records.size());
  std::vector<double> reset_age(records.size());
  double arrivals = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    arrivals += records[i].interarrival_s;
    reception[i] = arrivals + records[i].queue_delay_s + records[i].tx_time_s;
    reset_age[i] = records[i].queue_delay_s + records[i].tx_time_s;
    if (i > 0 && reception[i] < reception[i - 1])
      throw std::invalid_argument("aoi_trajectory: receptions out of order");
  }

  std::vector<double> ages(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (t < 0.0) throw std::invalid_argument("aoi_trajectory: negative time");
    // last reception at or before t
    auto it = std::upper_bound(reception.begin(), reception.end(), t);
    if (it == reception.begin()) {
      ages[i] = t;  // nothing delivered yet, age grows from zero at t = 0
    } else {
      const std::size_t n = static_cast<std::size_t>(it - reception.begin()) - 1;
      ages[i] = reset_age[n] + (t - reception[n]);
    }
  }
  return ages;
}

}  // namespace aoitail
