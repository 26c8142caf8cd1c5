#include "aoitail/aoitail.h"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/federated.hpp"
#include "core/io.hpp"
#include "core/power.hpp"
#include "core/sim.hpp"
#include "core/train.hpp"

struct aoitail_config {
  aoitail::SimConfig cfg;
};

namespace {

thread_local std::string g_last_error = "no error";

void set_error(const char* what) { g_last_error = what ? what : "unknown"; }

template <typename Fn>
aoitail_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return AOITAIL_OK;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return AOITAIL_ERR_INVALID_ARGUMENT;
  } catch (const std::logic_error& e) {
    set_error(e.what());
    return AOITAIL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    set_error(e.what());
    return AOITAIL_ERR_RUNTIME;
  } catch (...) {
    set_error("unknown error");
    return AOITAIL_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

std::filesystem::path prepare_out_dir(const char* out_dir) {
  require(out_dir != nullptr, "out_dir is NULL");
  std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// resolve the tail model for simulate/sweep: a row of models_csv, or a fresh
// training run when no file is given
aoitail::GpdParams resolve_tail(const aoitail::SimConfig& cfg,
                                const char* models_csv,
                                const char* global_row) {
  const std::string row = global_row ? global_row : "global_selected";
  if (models_csv && *models_csv)
    return aoitail::read_models_csv(models_csv).global(row);
  const aoitail::TrainingResult tr = aoitail::run_training_phase(cfg);
  return row == "global_fedavg" ? tr.global_fedavg : tr.global_selected;
}

}  // namespace

extern "C" {

const char* aoitail_version(void) { return "aoitail 1.0.0"; }

const char* aoitail_last_error(void) { return g_last_error.c_str(); }

aoitail_config* aoitail_config_create(void) {
  return new (std::nothrow) aoitail_config();
}

void aoitail_config_destroy(aoitail_config* cfg) { delete cfg; }

aoitail_status aoitail_config_load(aoitail_config* cfg, const char* path) {
  return guarded([&] {
    require(cfg != nullptr, "cfg is NULL");
    require(path != nullptr, "path is NULL");
    cfg->cfg = aoitail::load_config_file(path);
  });
}

aoitail_status aoitail_config_set(aoitail_config* cfg, const char* key,
                                  const char* value) {
  return guarded([&] {
    require(cfg != nullptr, "cfg is NULL");
    require(key != nullptr && value != nullptr, "key/value is NULL");
    aoitail::config_set(cfg->cfg, key, value);
  });
}

aoitail_status aoitail_config_get(const aoitail_config* cfg, const char* key,
                                  char* buf, size_t buf_len) {
  return guarded([&] {
    require(cfg != nullptr, "cfg is NULL");
    require(key != nullptr, "key is NULL");
    require(buf != nullptr && buf_len > 0, "buffer is empty");
    const std::string value = aoitail::config_get(cfg->cfg, key);
    const size_t n = std::min(buf_len - 1, value.size());
    std::memcpy(buf, value.data(), n);
    buf[n] = '\0';
  });
}

aoitail_status aoitail_train(const aoitail_config* cfg, const char* out_dir) {
  return guarded([&] {
    require(cfg != nullptr, "cfg is NULL");
    const auto dir = prepare_out_dir(out_dir);
    const aoitail::TrainingResult result =
        aoitail::run_training_phase(cfg->cfg);
    aoitail::write_models_csv((dir / "models.csv").string(), result);
    aoitail::write_selection_csv((dir / "selection.csv").string(), result);
  });
}

aoitail_status aoitail_simulate(const aoitail_config* cfg,
                                const char* models_csv, const char* global_row,
                                const char* out_dir) {
  return guarded([&] {
    require(cfg != nullptr, "cfg is NULL");
    require(models_csv != nullptr, "models_csv is NULL");
    const auto dir = prepare_out_dir(out_dir);
    const aoitail::GpdParams tail =
        resolve_tail(cfg->cfg, models_csv, global_row);
    const aoitail::OnlineResult result =
        aoitail::run_online_phase(cfg->cfg, tail);
    aoitail::write_metrics_csv((dir / "metrics.csv").string(), result.metrics);
    aoitail::write_records_csv((dir / "records.csv").string(), result.records);
    aoitail::write_ccdf_csv((dir / "ccdf.csv").string(), result.ccdf);
  });
}

aoitail_status aoitail_sweep(const aoitail_config* cfg, const char* models_csv,
                             const char* global_row, const double* v_values,
                             size_t v_count, const char* out_dir) {
  return guarded([&] {
    require(cfg != nullptr, "cfg is NULL");
    require(v_values != nullptr && v_count > 0, "v grid is empty");
    const auto dir = prepare_out_dir(out_dir);
    const aoitail::GpdParams tail =
        resolve_tail(cfg->cfg, models_csv, global_row);
    const std::vector<double> grid(v_values, v_values + v_count);
    const auto rows = aoitail::sweep_v(cfg->cfg, tail, grid);
    aoitail::write_sweep_csv((dir / "sweep.csv").string(), rows);
  });
}

aoitail_status aoitail_hurst(const double* values, size_t count,
                             double* estimate) {
  return guarded([&] {
    require(values != nullptr && estimate != nullptr, "NULL argument");
    const std::vector<double> series(values, values + count);
    *estimate = aoitail::hurst_estimate(series);
  });
}

aoitail_status aoitail_hurst_file(const char* path, double* estimate) {
  return guarded([&] {
    require(path != nullptr && estimate != nullptr, "NULL argument");
    *estimate = aoitail::hurst_estimate(aoitail::read_series_csv(path));
  });
}

aoitail_status aoitail_gpd_fit(const double* exceedances, size_t count,
                               double sigma0, double xi0, double rate,
                               int iters, double* sigma_out, double* xi_out) {
  return guarded([&] {
    require(exceedances != nullptr, "exceedances is NULL");
    require(sigma_out != nullptr && xi_out != nullptr, "output is NULL");
    aoitail::ExceedanceSet set;
    set.values.assign(exceedances, exceedances + count);
    set.sample_count = count;
    set.tail_prob = 1.0;
    const aoitail::GpdParams fit =
        aoitail::fit_local(set, {sigma0, xi0}, rate, iters);
    *sigma_out = fit.sigma;
    *xi_out = fit.xi;
  });
}

aoitail_status aoitail_gpd_ccdf(double sigma, double xi, double y,
                                double* out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    *out = aoitail::gpd_ccdf({sigma, xi}, y);
  });
}

aoitail_status aoitail_min_power(const aoitail_config* cfg, double sigma,
                                 double xi, double gain, double queue_delay_s,
                                 double* power_out, int* feasible_out) {
  return guarded([&] {
    require(cfg != nullptr, "cfg is NULL");
    require(power_out != nullptr && feasible_out != nullptr, "output is NULL");
    const aoitail::UrllcConstraint c = cfg->cfg.urllc({sigma, xi});
    const aoitail::MinPowerResult r =
        aoitail::min_power(c, cfg->cfg.link_budget(), gain, queue_delay_s,
                           cfg->cfg.tradeoff().p_max_w);
    *power_out = r.power_w;
    *feasible_out = r.feasible ? 1 : 0;
  });
}

}  // extern "C"
