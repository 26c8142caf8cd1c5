#pragma once

#include "core/aoi.hpp"
#include "core/channel.hpp"
#include "core/evt.hpp"

namespace aoitail {

// Probabilistic queuing-delay requirement: Pr{q + T - x > q_threshold} <= epsilon,
// with the small-inter-arrival tail of x characterized by a fitted GPD over
// the transformed threshold x0 = -log(small quantile of x).
struct UrllcConstraint {
  double q_threshold_s = 0.2;
  double epsilon = 1e-4;
  double tail_prob = 0.01;   // empirical exceedance fraction at x0
  double threshold_x0 = 0.0; // threshold in -log(x) units
  GpdParams tail;

  void validate() const;
};

// Weight of the power penalty in the per-slot objective. The penalty is
// v * (power / 1 mW); normalizing by a milliwatt keeps the interesting range
// of v near [1e-3, 1e3] for dBm-scale budgets.
inline constexpr double kPowerPenaltyReferenceW = 1e-3;

struct TradeoffConfig {
  double v = 1.0;
  double p_max_w = 0.01;  // 10 dBm

  void validate() const;
};

struct MinPowerResult {
  double power_w = 0.0;  // clamped to p_max when infeasible
  bool feasible = false;
};

// Smallest transmit power whose transmission time keeps the delay violation
// probability within epsilon, by inverting the GPD tail quantile:
//   T <= q_th - q + exp((sigma/xi)(1 - (eps/F)^(-xi)) - x0)
// Infeasible when the delay budget is non-positive or the required power
// exceeds p_max; the returned power is then p_max.
MinPowerResult min_power(const UrllcConstraint& c, const LinkBudget& budget,
                         double gain, double queue_delay_s, double p_max_w);

// Drift-plus-penalty objective for one slot:
//   (Z/beta)(c + T(P))^beta + (1/(2 beta^2))(c + T(P))^(2 beta) + v P / 1mW
double slot_objective(const TradeoffConfig& tradeoff, const AoiCostConfig& cost,
                      const LinkBudget& budget, double gain, double virtual_queue,
                      double aoi_base_s, double power_w);

// Minimizer of slot_objective over [p_min, p_max]. The objective is convex in
// P, so the root of its derivative is bracketed by bisection (64 iterations,
// 1e-12 W interval tolerance) with a golden-section fallback if the
// derivative fails to evaluate. Boundary optima return p_min / p_max exactly.
double solve_per_slot(const TradeoffConfig& tradeoff, const AoiCostConfig& cost,
                      const LinkBudget& budget, double gain, double virtual_queue,
                      double aoi_base_s, double p_min_w);

}  // namespace aoitail
