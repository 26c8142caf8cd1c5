#include "core/power.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace aoitail {

void UrllcConstraint::validate() const {
  tail.validate();
  if (!(q_threshold_s > 0.0))
    throw std::invalid_argument("urllc: q_threshold_s must be > 0");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("urllc: epsilon must lie in (0, 1)");
  if (!(tail_prob > 0.0 && tail_prob <= 0.5))
    throw std::invalid_argument("urllc: tail_prob must lie in (0, 0.5]");
  if (!(epsilon < tail_prob))
    throw std::invalid_argument("urllc: epsilon must be below tail_prob");
  if (!std::isfinite(threshold_x0))
    throw std::invalid_argument("urllc: threshold_x0 must be finite");
}

void TradeoffConfig::validate() const {
  if (!(v >= 0.0)) throw std::invalid_argument("tradeoff: v must be >= 0");
  if (!(p_max_w > 0.0))
    throw std::invalid_argument("tradeoff: p_max_w must be > 0");
}

MinPowerResult min_power(const UrllcConstraint& c, const LinkBudget& budget,
                         double gain, double queue_delay_s, double p_max_w) {
  c.validate();
  budget.validate();
  if (!(gain > 0.0)) throw std::invalid_argument("min_power: gain must be > 0");
  if (queue_delay_s < 0.0)
    throw std::invalid_argument("min_power: negative queue delay");
  if (!(p_max_w > 0.0))
    throw std::invalid_argument("min_power: p_max_w must be > 0");

  // conditional tail quantile mapped back through exp:
  //   slack = exp((sigma/xi)(1 - (eps/F)^(-xi)) - x0)
  // expm1 keeps the xi -> 0 limit sigma*log(eps/F) exact
  const double log_ratio = std::log(c.epsilon / c.tail_prob);  // < 0
  const double xi = c.tail.xi;
  const double inner = (xi == 0.0)
                           ? c.tail.sigma * log_ratio
                           : -(c.tail.sigma / xi) * std::expm1(-xi * log_ratio);
  const double slack = std::exp(inner - c.threshold_x0);

  const double delay_budget = c.q_threshold_s - queue_delay_s + slack;
  if (!(delay_budget > 0.0)) return {p_max_w, false};

  const double w = budget.bandwidth_per_sensor_hz;
  const double required_rate = budget.data_bits * M_LN2 / (w * delay_budget);
  const double power =
      (w * budget.noise_psd_w_hz / gain) * std::expm1(required_rate);
  if (!(power <= p_max_w)) return {p_max_w, false};  // also catches overflow
  return {power, true};
}

namespace {

struct ObjectiveTerms {
  double coef_a;  // data_bits * ln2 / w
  double coef_b;  // gain / (w * noise)
};

ObjectiveTerms make_terms(const LinkBudget& budget, double gain) {
  const double w = budget.bandwidth_per_sensor_hz;
  return {budget.data_bits * M_LN2 / w, gain / (w * budget.noise_psd_w_hz)};
}

double objective_at(const ObjectiveTerms& t, const TradeoffConfig& tradeoff,
                    double beta, double virtual_queue, double aoi_base,
                    double power) {
  const double age = aoi_base + t.coef_a / std::log1p(t.coef_b * power);
  const double penalty = tradeoff.v * power / kPowerPenaltyReferenceW;
  if (beta == 1.0)
    return virtual_queue * age + 0.5 * age * age + penalty;
  return virtual_queue * std::pow(age, beta) / beta +
         std::pow(age, 2.0 * beta) / (2.0 * beta * beta) + penalty;
}

double derivative_at(const ObjectiveTerms& t, const TradeoffConfig& tradeoff,
                     double beta, double virtual_queue, double aoi_base,
                     double power) {
  const double s = t.coef_b * power;
  const double log_term = std::log1p(s);
  const double age = aoi_base + t.coef_a / log_term;
  const double d_time = -t.coef_a * t.coef_b / (log_term * log_term * (1.0 + s));
  double weight;
  if (beta == 1.0) {
    weight = virtual_queue + age;
  } else {
    weight = virtual_queue * std::pow(age, beta - 1.0) +
             std::pow(age, 2.0 * beta - 1.0) / beta;
  }
  return weight * d_time + tradeoff.v / kPowerPenaltyReferenceW;
}

double golden_section(const ObjectiveTerms& t, const TradeoffConfig& tradeoff,
                      double beta, double virtual_queue, double aoi_base,
                      double lo, double hi) {
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - ratio * (b - a);
  double x2 = a + ratio * (b - a);
  auto value = [&](double p) {
    const double f =
        objective_at(t, tradeoff, beta, virtual_queue, aoi_base, p);
    return std::isnan(f) ? std::numeric_limits<double>::infinity() : f;
  };
  double f1 = value(x1);
  double f2 = value(x2);
  for (int i = 0; i < 160 && (b - a) > 1e-15; ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - ratio * (b - a);
      f1 = value(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + ratio * (b - a);
      f2 = value(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double slot_objective(const TradeoffConfig& tradeoff, const AoiCostConfig& cost,
                      const LinkBudget& budget, double gain, double virtual_queue,
                      double aoi_base_s, double power_w) {
  tradeoff.validate();
  cost.validate();
  budget.validate();
  if (!(gain > 0.0) || !(power_w > 0.0))
    throw std::invalid_argument("slot_objective: gain and power must be > 0");
  return objective_at(make_terms(budget, gain), tradeoff, cost.beta,
                      virtual_queue, aoi_base_s, power_w);
}

double solve_per_slot(const TradeoffConfig& tradeoff, const AoiCostConfig& cost,
                      const LinkBudget& budget, double gain, double virtual_queue,
                      double aoi_base_s, double p_min_w) {
  tradeoff.validate();
  cost.validate();
  budget.validate();
  if (!(gain > 0.0)) throw std::invalid_argument("solve_per_slot: gain must be > 0");
  if (!(p_min_w >= 0.0) || p_min_w > tradeoff.p_max_w)
    throw std::invalid_argument("solve_per_slot: need 0 <= p_min <= p_max");
  if (virtual_queue < 0.0 || aoi_base_s < 0.0)
    throw std::invalid_argument("solve_per_slot: negative state");

  const ObjectiveTerms terms = make_terms(budget, gain);
  const double beta = cost.beta;
  // the objective blows up as P -> 0 (transmission never completes), so a
  // zero lower bound is evaluated from a tiny positive power instead
  double lo = std::max(p_min_w, 1e-15);
  double hi = tradeoff.p_max_w;
  if (lo >= hi) return hi;

  const double d_lo =
      derivative_at(terms, tradeoff, beta, virtual_queue, aoi_base_s, lo);
  if (std::isnan(d_lo))
    return golden_section(terms, tradeoff, beta, virtual_queue, aoi_base_s, lo, hi);
  if (d_lo >= 0.0) return lo;  // already increasing at the lower bound

  const double d_hi =
      derivative_at(terms, tradeoff, beta, virtual_queue, aoi_base_s, hi);
  if (std::isnan(d_hi))
    return golden_section(terms, tradeoff, beta, virtual_queue, aoi_base_s, lo, hi);
  if (d_hi <= 0.0) return hi;  // still decreasing at the cap

  for (int i = 0; i < 64 && (hi - lo) > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double d_mid =
        derivative_at(terms, tradeoff, beta, virtual_queue, aoi_base_s, mid);
    if (std::isnan(d_mid))
      return golden_section(terms, tradeoff, beta, virtual_queue, aoi_base_s, lo, hi);
    if (d_mid < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace aoitail
