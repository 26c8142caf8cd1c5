// Command-line front end. Talks to the core exclusively through the shared
// library's C interface.
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aoitail/aoitail.h"

namespace {

struct ConfigDeleter {
  void operator()(aoitail_config* cfg) const { aoitail_config_destroy(cfg); }
};
using ConfigHandle = std::unique_ptr<aoitail_config, ConfigDeleter>;

[[noreturn]] void die(const std::string& context) {
  std::fprintf(stderr, "error: %s: %s\n", context.c_str(),
               aoitail_last_error());
  std::exit(1);
}

void check(aoitail_status status, const std::string& context) {
  if (status != AOITAIL_OK) die(context);
}

// options shared by the stochastic subcommands
struct CommonOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  std::vector<std::string> set_pairs;

  struct Override {
    std::string key;
    std::string value;
    CLI::Option* option = nullptr;
  };
  std::vector<Override> overrides;
};

void add_override(CLI::App* sub, CommonOptions& common, const std::string& flag,
                  const std::string& key, const std::string& help) {
  common.overrides.push_back({key, {}, nullptr});
  auto& slot = common.overrides.back();
  slot.option = sub->add_option(flag, slot.value, help);
}

void add_common(CLI::App* sub, CommonOptions& common) {
  // CLI11 keeps references into the override slots; reserve so the vector
  // never reallocates under them
  common.overrides.reserve(32);
  sub->add_option("--config", common.config_path,
                  "key = value configuration file");
  sub->add_option("--out", common.out_dir, "output directory")
      ->capture_default_str();
  sub->add_option("--seed", common.seed, "master random seed")->required();
  sub->add_option("--set", common.set_pairs,
                  "override one config key (key=value, repeatable)");
  add_override(sub, common, "--num-sensors", "num_sensors", "sensor count K");
  add_override(sub, common, "--bandwidth-hz", "bandwidth_hz",
               "total uplink bandwidth");
  add_override(sub, common, "--p-max-dbm", "p_max_dbm", "power budget");
  add_override(sub, common, "--beta", "beta", "age cost exponent");
  add_override(sub, common, "--data-bits", "data_bits", "bits per update");
  add_override(sub, common, "--noise-dbm-hz", "noise_dbm_hz",
               "noise power spectral density");
  add_override(sub, common, "--gamma", "gamma", "GPD learning rate");
  add_override(sub, common, "--epsilon", "epsilon",
               "delay violation probability bound");
  add_override(sub, common, "--x0", "x0",
               "tail threshold on -log(x), or 'auto'");
  add_override(sub, common, "--f-threshold", "f_threshold",
               "long-run age cost budget");
  add_override(sub, common, "--iters", "iters", "local training iterations");
  add_override(sub, common, "--q-threshold-s", "q_threshold_s",
               "queuing delay threshold");
  add_override(sub, common, "--v", "v", "power-delay tradeoff weight");
  add_override(sub, common, "--hurst", "hurst", "traffic Hurst exponent");
  add_override(sub, common, "--mean-interarrival", "mean_interarrival",
               "mean inter-arrival time");
  add_override(sub, common, "--horizon", "horizon",
               "transmissions per sensor");
  add_override(sub, common, "--warmup", "warmup", "discarded transmissions");
  add_override(sub, common, "--train-samples", "train_samples",
               "historical samples per sensor");
  add_override(sub, common, "--threads", "threads",
               "worker threads (0 = all)");
}

ConfigHandle build_config(const CommonOptions& common) {
  ConfigHandle cfg(aoitail_config_create());
  if (!cfg) die("allocating config");
  if (!common.config_path.empty())
    check(aoitail_config_load(cfg.get(), common.config_path.c_str()),
          "loading " + common.config_path);
  for (const auto& o : common.overrides)
    if (o.option->count() > 0)
      check(aoitail_config_set(cfg.get(), o.key.c_str(), o.value.c_str()),
            "setting " + o.key);
  for (const auto& pair : common.set_pairs) {
    const auto eq = pair.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "error: --set expects key=value, got '%s'\n",
                   pair.c_str());
      std::exit(1);
    }
    check(aoitail_config_set(cfg.get(), pair.substr(0, eq).c_str(),
                             pair.substr(eq + 1).c_str()),
          "setting " + pair.substr(0, eq));
  }
  check(aoitail_config_set(cfg.get(), "seed",
                           std::to_string(common.seed).c_str()),
        "setting seed");
  return cfg;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string item =
        text.substr(start, comma == std::string::npos ? comma : comma - start);
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      std::fprintf(stderr, "error: bad value '%s' in --v-grid\n", item.c_str());
      std::exit(1);
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AoI-aware power allocation with a learned delay-tail model"};
  app.require_subcommand(1);

  auto* train = app.add_subcommand(
      "train", "federated training of the tail model (models.csv, "
               "selection.csv)");
  CommonOptions train_opts;
  add_common(train, train_opts);

  auto* simulate = app.add_subcommand(
      "simulate", "online power-allocation phase (metrics.csv, records.csv, "
                  "ccdf.csv)");
  CommonOptions sim_opts;
  std::string model_path;
  std::string global_row = "global_selected";
  add_common(simulate, sim_opts);
  simulate->add_option("--model", model_path, "models.csv from a train run")
      ->required();
  simulate->add_option("--global-row", global_row,
                       "which aggregate row to simulate with")
      ->capture_default_str();

  auto* sweep = app.add_subcommand(
      "sweep", "online phase across a v grid (sweep.csv)");
  CommonOptions sweep_opts;
  std::string sweep_model;
  std::string sweep_row = "global_selected";
  std::string v_grid;
  add_common(sweep, sweep_opts);
  sweep->add_option("--v-grid", v_grid, "comma-separated v values")
      ->required();
  sweep->add_option("--model", sweep_model,
                    "models.csv to reuse (default: train first)");
  sweep->add_option("--global-row", sweep_row,
                    "which aggregate row to sweep with")
      ->capture_default_str();

  auto* hurst = app.add_subcommand(
      "hurst", "rescaled-range Hurst estimate of a series");
  std::string hurst_input;
  hurst->add_option("--input", hurst_input, "CSV with the series in column 1")
      ->required();

  CLI11_PARSE(app, argc, argv);

  if (train->parsed()) {
    ConfigHandle cfg = build_config(train_opts);
    check(aoitail_train(cfg.get(), train_opts.out_dir.c_str()), "train");
  } else if (simulate->parsed()) {
    ConfigHandle cfg = build_config(sim_opts);
    check(aoitail_simulate(cfg.get(), model_path.c_str(), global_row.c_str(),
                           sim_opts.out_dir.c_str()),
          "simulate");
  } else if (sweep->parsed()) {
    ConfigHandle cfg = build_config(sweep_opts);
    const std::vector<double> grid = parse_grid(v_grid);
    check(aoitail_sweep(cfg.get(),
                        sweep_model.empty() ? nullptr : sweep_model.c_str(),
                        sweep_row.c_str(), grid.data(), grid.size(),
                        sweep_opts.out_dir.c_str()),
          "sweep");
  } else if (hurst->parsed()) {
    double estimate = 0.0;
    check(aoitail_hurst_file(hurst_input.c_str(), &estimate), "hurst");
    std::printf("%.17g\n", estimate);
  }
  return 0;
}
