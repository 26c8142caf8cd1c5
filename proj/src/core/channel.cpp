#include "core/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace aoitail {

void ChannelModel::validate() const {
  if (!(distance_m > 0.0))
    throw std::invalid_argument("channel: distance_m must be > 0");
  if (!(carrier_ghz > 0.0))
    throw std::invalid_argument("channel: carrier_ghz must be > 0");
}

void LinkBudget::validate() const {
  if (!(bandwidth_per_sensor_hz > 0.0))
    throw std::invalid_argument("link: bandwidth_per_sensor_hz must be > 0");
  if (!(data_bits > 0.0))
    throw std::invalid_argument("link: data_bits must be > 0");
  if (!(noise_psd_w_hz > 0.0))
    throw std::invalid_argument("link: noise_psd_w_hz must be > 0");
  if (num_sensors < 1)
    throw std::invalid_argument("link: num_sensors must be >= 1");
}

double path_loss_db(const ChannelModel& model) {
  model.validate();
  return 33.0 * std::log10(model.distance_m) +
         20.0 * std::log10(model.carrier_ghz) + 32.0;
}

double mean_gain(const ChannelModel& model) {
  return std::pow(10.0, -path_loss_db(model) / 10.0);
}

double draw_gain(const ChannelModel& model, std::mt19937_64& rng) {
  const double base = mean_gain(model);
  if (model.fading == FadingKind::kNone) return base;
  std::exponential_distribution<double> fade(1.0);  // unit-mean power gain
  return base * fade(rng);
}

double transmission_time(const LinkBudget& budget, double gain, double power_w) {
  budget.validate();
  if (!(power_w > 0.0))
    throw std::invalid_argument("transmission_time: power must be > 0");
  if (!(gain > 0.0))
    throw std::invalid_argument("transmission_time: gain must be > 0");
  const double w = budget.bandwidth_per_sensor_hz;
  const double snr = gain * power_w / (w * budget.noise_psd_w_hz);
  // log2(1+snr) = log1p(snr)/ln2, keeps accuracy for small snr
  return budget.data_bits * M_LN2 / (w * std::log1p(snr));
}

}  // namespace aoitail
