#include "core/train.hpp"

#include <cmath>
#include <stdexcept>

#include "core/parallel.hpp"
#include "core/rng.hpp"

namespace aoitail {

namespace {

// one sensor's local training pass on fresh data
LocalModelReport train_sensor(const SimConfig& cfg, std::size_t sensor,
                              std::uint64_t round) {
  const std::uint64_t stream =
      static_cast<std::uint64_t>(sensor) | (round << 32);
  const TrafficModel traffic = cfg.traffic_model(
      sensor, substream_seed(cfg.master_seed, stream, kStreamTrafficTrain));
  const std::vector<double> xs =
      generate_interarrivals(traffic, cfg.train_samples);
  const ExceedanceSet exceedances =
      extract_exceedances(xs, cfg.tail_quantile);
  LocalModelReport report;
  report.sensor_id = static_cast<int>(sensor);
  report.model = fit_local(exceedances, {cfg.theta0_sigma, cfg.theta0_xi},
                           cfg.gamma, cfg.iters);
  report.sample_count = exceedances.values.size();
  report.hurst = hurst_estimate(xs);
  return report;
}

struct RoundOutput {
  SelectionVector selection;
  GpdParams selected;
  GpdParams fedavg;
};

RoundOutput run_round(const SimConfig& cfg, std::uint64_t round,
                      std::vector<LocalModelReport>* reports_out) {
  std::vector<LocalModelReport> reports(cfg.num_sensors);
  // sensors train independently; rounds above us may already be parallel
  for (std::size_t k = 0; k < cfg.num_sensors; ++k)
    reports[k] = train_sensor(cfg, k, round);

  SelectOptions options;
  options.restarts = cfg.selection_restarts;
  options.seed = substream_seed(cfg.master_seed, round, kStreamSelection);
  const SelectionVector all = SelectionVector::all(cfg.num_sensors);
  RoundOutput out;
  out.selection = select_models(reports, all, options);
  out.selected = fed_average(reports, out.selection);
  out.fedavg = fed_average(reports, all);
  if (reports_out) *reports_out = std::move(reports);
  return out;
}

}  // namespace

TrainingResult run_training_phase(const SimConfig& cfg) {
  cfg.validate();
  if (cfg.train_samples < 64)
    throw std::invalid_argument("train: need at least 64 samples per sensor");
  TrainingResult result;
  RoundOutput out = run_round(cfg, 0, &result.reports);
  result.selection = std::move(out.selection);
  result.global_selected = out.selected;
  result.global_fedavg = out.fedavg;
  return result;
}

VarianceSummary fl_variance_experiment(const SimConfig& cfg,
                                       std::size_t rounds) {
  cfg.validate();
  if (rounds < 2)
    throw std::invalid_argument("variance experiment: need at least 2 rounds");

  std::vector<RoundOutput> outputs(rounds);
  parallel_for(rounds, cfg.threads, [&](std::size_t r) {
    outputs[r] = run_round(cfg, r, nullptr);
  });

  auto summarize = [rounds](auto&& value) {
    long double mean_s = 0.0L, mean_x = 0.0L;
    for (std::size_t r = 0; r < rounds; ++r) {
      mean_s += value(r).sigma;
      mean_x += value(r).xi;
    }
    mean_s /= rounds;
    mean_x /= rounds;
    long double var_s = 0.0L, var_x = 0.0L;
    for (std::size_t r = 0; r < rounds; ++r) {
      const long double ds = value(r).sigma - mean_s;
      const long double dx = value(r).xi - mean_x;
      var_s += ds * ds;
      var_x += dx * dx;
    }
    var_s /= (rounds - 1);
    var_x /= (rounds - 1);
    return std::pair<ThetaStat, ThetaStat>(
        {static_cast<double>(mean_s), static_cast<double>(mean_x)},
        {static_cast<double>(std::sqrt(var_s)),
         static_cast<double>(std::sqrt(var_x))});
  };

  VarianceSummary summary;
  summary.rounds = rounds;
  auto sel = summarize([&](std::size_t r) -> const GpdParams& {
    return outputs[r].selected;
  });
  summary.mean_selected = sel.first;
  summary.std_selected = sel.second;
  auto avg = summarize([&](std::size_t r) -> const GpdParams& {
    return outputs[r].fedavg;
  });
  summary.mean_fedavg = avg.first;
  summary.std_fedavg = avg.second;
  return summary;
}

}  // namespace aoitail
