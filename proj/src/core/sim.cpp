#include "core/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "core/channel.hpp"
#include "core/parallel.hpp"
#include "core/power.hpp"
#include "core/rng.hpp"
#include "core/traffic.hpp"
#include "core/train.hpp"

namespace aoitail {

namespace {

// partial sums of one (sensor, run) job, merged in job order afterwards
struct JobAccum {
  long double power = 0.0L;
  long double p_min = 0.0L;
  long double peak_aoi = 0.0L;
  long double cost = 0.0L;
  long double queue = 0.0L;
  long double tx = 0.0L;
  long double stay = 0.0L;
  std::size_t slots = 0;
  std::size_t violations = 0;
  std::size_t infeasible = 0;
  std::vector<double> queue_samples;
  std::vector<TransmissionRecord> records;
};

JobAccum simulate_sensor(const SimConfig& cfg, const GpdParams& tail,
                         std::size_t sensor, std::size_t run,
                         bool keep_records, bool keep_samples) {
  const std::uint64_t stream =
      static_cast<std::uint64_t>(sensor) | (static_cast<std::uint64_t>(run) << 32);
  const TrafficModel traffic = cfg.traffic_model(
      sensor, substream_seed(cfg.master_seed, stream, kStreamTrafficOnline));
  const ChannelModel channel = cfg.channel_model(0);
  const LinkBudget budget = cfg.link_budget();
  const AoiCostConfig cost = cfg.aoi_cost();
  const TradeoffConfig tradeoff = cfg.tradeoff();
  const UrllcConstraint urllc = cfg.urllc(tail);

  // one extra arrival: the queue recursion looks at the next inter-arrival
  const std::vector<double> xs =
      generate_interarrivals(traffic, cfg.horizon + 1);
  std::mt19937_64 fading = make_engine(
      substream_seed(cfg.master_seed, stream, kStreamFading));

  JobAccum acc;
  if (keep_samples) acc.queue_samples.reserve(cfg.horizon - cfg.warmup);
  if (keep_records)
    acc.records.reserve(
        std::min<std::size_t>(cfg.records_per_sensor, cfg.horizon - cfg.warmup));

  double queue = 0.0;
  double z = 0.0;
  double anchor = 0.0;
  double arrival_clock = 0.0;
  double last_reception = 0.0;
  for (std::size_t n = 0; n < cfg.horizon; ++n) {
    const double x = xs[n];
    arrival_clock += x;
    const double gain = draw_gain(channel, fading);
    const double base = std::max(x, anchor);  // c^n of the per-slot objective
    const MinPowerResult mp =
        min_power(urllc, budget, gain, queue, tradeoff.p_max_w);
    const double power = solve_per_slot(tradeoff, cost, budget, gain, z, base,
                                        mp.power_w);
    const double tx = transmission_time(budget, gain, power);
    const double peak = base + tx;
    const double reception = arrival_clock + queue + tx;

    // the reception instant must advance consistently with the peak-age
    // recursion; deviation means the bookkeeping above drifted
    if (n > 0) {
      const double recursive = last_reception + peak - anchor;
      if (std::fabs(reception - recursive) >
          1e-6 * std::max(1.0, std::fabs(reception)))
        throw std::logic_error("simulate_sensor: reception-time mismatch");
    }

    if (n >= cfg.warmup) {
      acc.power += power;
      acc.p_min += mp.power_w;
      acc.peak_aoi += peak;
      acc.cost += aoi_cost(cost, peak);
      acc.queue += queue;
      acc.tx += tx;
      acc.stay += reception - last_reception;
      acc.slots += 1;
      acc.violations += (queue > urllc.q_threshold_s) ? 1 : 0;
      acc.infeasible += mp.feasible ? 0 : 1;
      if (keep_samples) acc.queue_samples.push_back(queue);
      if (keep_records && acc.records.size() < cfg.records_per_sensor) {
        TransmissionRecord rec;
        rec.sensor_id = static_cast<int>(sensor);
        rec.index = n + 1;
        rec.power_w = power;
        rec.tx_time_s = tx;
        rec.queue_delay_s = queue;
        rec.peak_aoi_s = peak;
        rec.interarrival_s = x;
        rec.virtual_queue = z;
        rec.p_min_w = mp.power_w;
        rec.infeasible = !mp.feasible;
        acc.records.push_back(rec);
      }
    }

    z = advance_virtual_queue(cost, z, peak);
    anchor = queue + tx;  // age of this update at its reception
    last_reception = reception;
    queue = advance_queue(queue, tx, xs[n + 1]);
  }
  return acc;
}

std::vector<CcdfPoint> empirical_ccdf(std::vector<double>& samples) {
  constexpr std::size_t kPoints = 1024;
  std::vector<CcdfPoint> out;
  if (samples.empty()) return out;
  std::sort(samples.begin(), samples.end());
  const double top = samples.back();
  const double span = top > 0.0 ? top * (1.0 + 1.0 / kPoints) : 1e-9;
  const double n = static_cast<double>(samples.size());
  out.reserve(kPoints);
  for (std::size_t i = 0; i < kPoints; ++i) {
    const double t = span * static_cast<double>(i) / (kPoints - 1);
    const auto above =
        samples.end() - std::upper_bound(samples.begin(), samples.end(), t);
    out.push_back({t, static_cast<double>(above) / n});
  }
  return out;
}

OnlineResult run_online_impl(const SimConfig& cfg, const GpdParams& tail,
                             bool keep_records, bool keep_ccdf) {
  cfg.validate();
  tail.validate();
  const std::size_t jobs = cfg.num_sensors * cfg.monte_carlo_runs;
  std::vector<JobAccum> parts(jobs);
  parallel_for(jobs, cfg.threads, [&](std::size_t job) {
    const std::size_t sensor = job % cfg.num_sensors;
    const std::size_t run = job / cfg.num_sensors;
    parts[job] = simulate_sensor(cfg, tail, sensor, run,
                                 keep_records && run == 0, keep_ccdf);
  });

  JobAccum total;
  std::vector<double> pooled;
  OnlineResult result;
  for (auto& p : parts) {
    total.power += p.power;
    total.p_min += p.p_min;
    total.peak_aoi += p.peak_aoi;
    total.cost += p.cost;
    total.queue += p.queue;
    total.tx += p.tx;
    total.stay += p.stay;
    total.slots += p.slots;
    total.violations += p.violations;
    total.infeasible += p.infeasible;
    pooled.insert(pooled.end(), p.queue_samples.begin(), p.queue_samples.end());
    result.records.insert(result.records.end(), p.records.begin(),
                          p.records.end());
    p.queue_samples.clear();
    p.queue_samples.shrink_to_fit();
  }

  const double n = static_cast<double>(total.slots);
  OnlineMetrics& m = result.metrics;
  m.p_avg_w = static_cast<double>(total.power / n);
  m.p_min_avg_w = static_cast<double>(total.p_min / n);
  m.peak_aoi_s = static_cast<double>(total.peak_aoi / n);
  m.f_avg = static_cast<double>(total.cost / n);
  m.queue_delay_s = static_cast<double>(total.queue / n);
  m.tx_delay_s = static_cast<double>(total.tx / n);
  m.e2e_delay_s = m.queue_delay_s + m.tx_delay_s;
  m.violation_prob = static_cast<double>(total.violations) / n;
  m.stay_time_s = static_cast<double>(total.stay / n);
  m.infeasible_rate = static_cast<double>(total.infeasible) / n;
  m.slots = total.slots;
  if (keep_ccdf) result.ccdf = empirical_ccdf(pooled);
  return result;
}

}  // namespace

OnlineResult run_online_phase(const SimConfig& cfg, const GpdParams& tail) {
  return run_online_impl(cfg, tail, true, true);
}

std::vector<SweepRow> sweep_v(const SimConfig& cfg, const GpdParams& tail,
                              const std::vector<double>& v_values) {
  if (v_values.empty())
    throw std::invalid_argument("sweep_v: empty v grid");
  std::vector<SweepRow> rows;
  rows.reserve(v_values.size());
  for (double v : v_values) {
    SimConfig point = cfg;
    point.v = v;
    // substreams do not depend on v, so every grid point sees the same
    // traffic and fading draws (common random numbers)
    SweepRow row;
    row.v = v;
    row.metrics = run_online_impl(point, tail, false, false).metrics;
    rows.push_back(row);
  }
  return rows;
}

std::vector<SweepRow> sweep_v(const SimConfig& cfg,
                              const std::vector<double>& v_values) {
  return sweep_v(cfg, run_training_phase(cfg).global_selected, v_values);
}

}  // namespace aoitail
