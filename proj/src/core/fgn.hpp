#pragma once

#include <cstddef>
#include <random>
#include <vector>

namespace aoitail {

enum class FgnMethod {
  kAuto,        // circulant embedding, sequential fallback if embedding fails
  kCirculant,   // fail hard if the embedding is not nonnegative definite
  kSequential,  // exact conditional sampling, O(n^2), for small n / verification
};

// Autocovariance of unit-variance fractional Gaussian noise at lags 0..lags-1:
//   gamma(m) = 0.5 * (|m+1|^{2H} - 2|m|^{2H} + |m-1|^{2H})
std::vector<double> fgn_autocovariance(double hurst, std::size_t lags);

// Generates n samples of zero-mean unit-variance fGn with the given Hurst
// exponent. hurst = 0.5 degenerates to i.i.d. standard normals. Deterministic
// for a given engine state.
std::vector<double> generate_fgn(double hurst, std::size_t n, std::mt19937_64& rng,
                                 FgnMethod method = FgnMethod::kAuto);

}  // namespace aoitail
