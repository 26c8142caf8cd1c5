#include "core/federated.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "core/rng.hpp"

namespace aoitail {

void LocalModelReport::validate() const {
  model.validate();
  if (sample_count == 0)
    throw std::invalid_argument("report: sample_count must be > 0");
  if (!(hurst >= 0.5 && hurst <= 1.0))
    throw std::invalid_argument("report: hurst must lie in [0.5, 1]");
}

std::size_t SelectionVector::count() const {
  std::size_t c = 0;
  for (auto f : on) c += (f != 0);
  return c;
}

SelectionVector SelectionVector::all(std::size_t k) {
  SelectionVector s;
  s.on.assign(k, 1);
  return s;
}

namespace {

void check_selection(const std::vector<LocalModelReport>& reports,
                     const SelectionVector& selection) {
  if (selection.on.size() != reports.size())
    throw std::invalid_argument("selection size does not match reports");
  if (!selection.any())
    throw std::invalid_argument("selection must keep at least one sensor");
}

}  // namespace

GpdParams fed_average(const std::vector<LocalModelReport>& reports,
                      const SelectionVector& selection) {
  check_selection(reports, selection);
  double total = 0.0;
  double sigma = 0.0;
  double xi = 0.0;
  const LocalModelReport* first = nullptr;
  bool all_same = true;
  for (std::size_t k = 0; k < reports.size(); ++k) {
    if (!selection.on[k]) continue;
    reports[k].validate();
    if (!first)
      first = &reports[k];
    else
      all_same = all_same && reports[k].model.sigma == first->model.sigma &&
                 reports[k].model.xi == first->model.xi;
    const double w = static_cast<double>(reports[k].sample_count);
    total += w;
    sigma += w * reports[k].model.sigma;
    xi += w * reports[k].model.xi;
  }
  // identical models average to themselves exactly, bypassing the rounding
  // of the weighted sum
  if (all_same) return first->model;
  return {sigma / total, xi / total};
}

double hurst_rs_slope(const std::vector<double>& series) {
  const std::size_t n = series.size();
  if (n < 64)
    throw std::invalid_argument("hurst: need at least 64 samples");

  // log-spaced window sizes inside [8, n/2]; small windows carry most of the
  // finite-sample bias, so start at 16 once the series is long enough
  const std::size_t m_lo = (n >= 512) ? 16 : 8;
  const std::size_t m_hi = std::max<std::size_t>(n / 4, 2 * m_lo);
  std::size_t count = 4;
  if (m_hi > m_lo) {
    const double spans = std::log2(static_cast<double>(m_hi) / m_lo);
    count = std::max<std::size_t>(4, static_cast<std::size_t>(spans) + 1);
  }
  std::vector<std::size_t> sizes;
  for (std::size_t i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(count - 1);
    const double m = static_cast<double>(m_lo) *
                     std::pow(static_cast<double>(m_hi) / m_lo, f);
    const auto rounded = static_cast<std::size_t>(std::lround(m));
    if (sizes.empty() || rounded > sizes.back()) sizes.push_back(rounded);
  }

  std::vector<double> log_m;
  std::vector<double> log_rs;
  for (std::size_t m : sizes) {
    const std::size_t windows = n / m;
    double rs_sum = 0.0;
    std::size_t valid = 0;
    for (std::size_t w = 0; w < windows; ++w) {
      const double* seg = series.data() + w * m;
      double mean = 0.0;
      for (std::size_t i = 0; i < m; ++i) mean += seg[i];
      mean /= static_cast<double>(m);
      double cum = 0.0, lo = 0.0, hi = 0.0, ss = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double dev = seg[i] - mean;
        ss += dev * dev;
        cum += dev;
        lo = std::min(lo, cum);
        hi = std::max(hi, cum);
      }
      const double s = std::sqrt(ss / static_cast<double>(m));
      if (s <= 0.0) continue;  // constant window, R = 0 as well
      rs_sum += (hi - lo) / s;
      ++valid;
    }
    if (valid == 0) continue;
    const double mean_rs = rs_sum / static_cast<double>(valid);
    if (mean_rs <= 0.0) continue;
    log_m.push_back(std::log(static_cast<double>(m)));
    log_rs.push_back(std::log(mean_rs));
  }
  if (log_m.size() < 2)
    throw std::invalid_argument("hurst: degenerate series (no usable windows)");

  // least-squares slope
  const double k = static_cast<double>(log_m.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < log_m.size(); ++i) {
    sx += log_m[i];
    sy += log_rs[i];
    sxx += log_m[i] * log_m[i];
    sxy += log_m[i] * log_rs[i];
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

double hurst_estimate(const std::vector<double>& series) {
  return std::clamp(hurst_rs_slope(series), 0.5, 1.0 - 1e-6);
}

double correlation_weight(std::size_t sample_count, double hurst) {
  if (sample_count == 0)
    throw std::invalid_argument("correlation_weight: empty sample");
  if (!(hurst >= 0.5 && hurst <= 1.0))
    throw std::invalid_argument("correlation_weight: hurst must lie in [0.5, 1]");
  const double s = static_cast<double>(sample_count);
  if (hurst <= 0.5) return s;  // short-range dependent, covariances neglected
  // sum_{i<j} m^{2H-2} over pair lags m = j - i, grouped by lag
  const double expo = 2.0 * hurst - 2.0;
  double pairs = 0.0;
  for (std::size_t m = 1; m < sample_count; ++m)
    pairs += static_cast<double>(sample_count - m) *
             std::pow(static_cast<double>(m), expo);
  return s + 2.0 * pairs;
}

double selection_cost(const std::vector<LocalModelReport>& reports,
                      const SelectionVector& selection) {
  check_selection(reports, selection);
  double num = 0.0;
  double weighted_count = 0.0;
  for (std::size_t k = 0; k < reports.size(); ++k) {
    if (!selection.on[k]) continue;
    reports[k].validate();
    num += correlation_weight(reports[k].sample_count, reports[k].hurst);
    weighted_count += static_cast<double>(reports[k].sample_count);
  }
  return num / (weighted_count * weighted_count);
}

namespace {

struct CostModel {
  std::vector<double> weight;  // correlation weights
  std::vector<double> size;    // sample counts

  double cost(double num, double den) const { return num / (den * den); }
};

// first-improvement sweeps of flips then swaps until a full pass is quiet
void local_search(const CostModel& model, SelectionVector& sel, double& num,
                  double& den, double& cost) {
  const std::size_t k = sel.on.size();
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < k; ++i) {
      const double sign = sel.on[i] ? -1.0 : 1.0;
      const double cand_den = den + sign * model.size[i];
      if (cand_den <= 0.0) continue;  // would empty the selection
      const double cand_num = num + sign * model.weight[i];
      const double cand_cost = model.cost(cand_num, cand_den);
      if (cand_cost < cost) {
        sel.on[i] ^= 1;
        num = cand_num;
        den = cand_den;
        cost = cand_cost;
        changed = true;
      }
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (!sel.on[i]) continue;
      for (std::size_t j = 0; j < k; ++j) {
        if (sel.on[j]) continue;
        const double cand_num = num - model.weight[i] + model.weight[j];
        const double cand_den = den - model.size[i] + model.size[j];
        const double cand_cost = model.cost(cand_num, cand_den);
        if (cand_cost < cost) {
          sel.on[i] = 0;
          sel.on[j] = 1;
          num = cand_num;
          den = cand_den;
          cost = cand_cost;
          changed = true;
          break;  // i is no longer selected, move on
        }
      }
    }
  }
}

}  // namespace

SelectionVector select_models(const std::vector<LocalModelReport>& reports,
                              const SelectionVector& init,
                              const SelectOptions& options) {
  check_selection(reports, init);
  if (options.restarts < 1)
    throw std::invalid_argument("select_models: restarts must be >= 1");

  CostModel model;
  model.weight.reserve(reports.size());
  model.size.reserve(reports.size());
  for (const auto& r : reports) {
    r.validate();
    model.weight.push_back(correlation_weight(r.sample_count, r.hurst));
    model.size.push_back(static_cast<double>(r.sample_count));
  }

  auto run_from = [&](SelectionVector sel) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < sel.on.size(); ++i) {
      if (!sel.on[i]) continue;
      num += model.weight[i];
      den += model.size[i];
    }
    double cost = model.cost(num, den);
    local_search(model, sel, num, den, cost);
    return std::pair<SelectionVector, double>(std::move(sel), cost);
  };

  auto [best, best_cost] = run_from(init);
  if (options.restarts > 1) {
    std::mt19937_64 rng = make_engine(options.seed);
    std::bernoulli_distribution coin(0.5);
    for (int r = 1; r < options.restarts; ++r) {
      SelectionVector start;
      start.on.assign(reports.size(), 0);
      do {
        for (auto& f : start.on) f = coin(rng) ? 1 : 0;
      } while (!start.any());
      auto [cand, cand_cost] = run_from(std::move(start));
      if (cand_cost < best_cost) {
        best = std::move(cand);
        best_cost = cand_cost;
      }
    }
  }
  return best;
}

}  // namespace aoitail
