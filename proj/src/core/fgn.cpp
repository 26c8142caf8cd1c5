#include "core/fgn.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>

namespace aoitail {

namespace {

// FFTW plan creation is not thread safe and plans execute on fixed buffers,
// so every transform of a given size goes through one cached, mutex-guarded
// plan. FFTW_ESTIMATE keeps planning deterministic.
struct PlanCache {
  std::mutex mutex;
  struct Entry {
    fftw_complex* buf = nullptr;
    fftw_plan plan = nullptr;
    std::size_t size = 0;
  };
  std::map<std::size_t, Entry> entries;

  ~PlanCache() {
    for (auto& [size, e] : entries) {
      if (e.plan) fftw_destroy_plan(e.plan);
      if (e.buf) fftw_free(e.buf);
    }
  }

  // in-place forward DFT of data (length m), serialized
  void forward(std::vector<std::complex<double>>& data) {
    std::lock_guard<std::mutex> lock(mutex);
    Entry& e = entries[data.size()];
    if (!e.plan) {
      e.size = data.size();
      e.buf = fftw_alloc_complex(e.size);
      e.plan = fftw_plan_dft_1d(static_cast<int>(e.size), e.buf, e.buf,
                                FFTW_FORWARD, FFTW_ESTIMATE);
      if (!e.plan) throw std::runtime_error("fftw plan creation failed");
    }
    for (std::size_t i = 0; i < e.size; ++i) {
      e.buf[i][0] = data[i].real();
      e.buf[i][1] = data[i].imag();
    }
    fftw_execute(e.plan);
    for (std::size_t i = 0; i < e.size; ++i)
      data[i] = std::complex<double>(e.buf[i][0], e.buf[i][1]);
  }
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Davies-Harte synthesis. Embeds the covariance into a circulant of length
// m = 2^k >= 2n, takes eigenvalues by FFT and colors a complex Gaussian
// vector with conjugate symmetry so the output is real with the exact target
// covariance. Returns false if the embedding has a significantly negative
// eigenvalue (then the caller falls back to sequential sampling).
bool fgn_circulant(double hurst, std::size_t n, std::mt19937_64& rng,
                   std::vector<double>& out) {
  const std::size_t m = next_pow2(2 * n);
  const std::size_t half = m / 2;
  std::vector<double> gamma = fgn_autocovariance(hurst, half + 1);

  std::vector<std::complex<double>> work(m);
  for (std::size_t j = 0; j <= half; ++j) work[j] = gamma[j];
  for (std::size_t j = half + 1; j < m; ++j) work[j] = gamma[m - j];
  plan_cache().forward(work);

  double lambda_max = 0.0;
  double lambda_min = 0.0;
  std::vector<double> lambda(m);
  for (std::size_t k = 0; k < m; ++k) {
    lambda[k] = work[k].real();
    lambda_max = std::max(lambda_max, lambda[k]);
    lambda_min = std::min(lambda_min, lambda[k]);
  }
  // fGn embeddings are nonnegative definite in theory; tolerate FFT roundoff
  if (lambda_min < -1e-8 * lambda_max) return false;

  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& l : lambda)
    if (l < 0.0) l = 0.0;

  // conjugate-symmetric spectral coefficients, fixed draw order
  work[0] = std::sqrt(lambda[0] / m) * normal(rng);
  work[half] = std::sqrt(lambda[half] / m) * normal(rng);
  for (std::size_t k = 1; k < half; ++k) {
    const double scale = std::sqrt(lambda[k] / (2.0 * m));
    const double re = normal(rng);
    const double im = normal(rng);
    work[k] = std::complex<double>(scale * re, scale * im);
    work[m - k] = std::conj(work[k]);
  }
  plan_cache().forward(work);

  out.resize(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = work[j].real();
  return true;
}

// Exact sequential (conditional-distribution) sampling via Levinson-Durbin
// recursion on the autocovariance. O(n^2), intended for small n and as the
// fallback when the circulant embedding fails.
void fgn_sequential(double hurst, std::size_t n, std::mt19937_64& rng,
                    std::vector<double>& out) {
  std::vector<double> gamma = fgn_autocovariance(hurst, n);
  std::normal_distribution<double> normal(0.0, 1.0);
  out.resize(n);
  out[0] = normal(rng);
  if (n == 1) return;

  std::vector<double> phi(n, 0.0);
  std::vector<double> phi_prev(n, 0.0);
  double v = 1.0;  // innovation variance, gamma(0) = 1
  for (std::size_t i = 1; i < n; ++i) {
    double tau = gamma[i];
    for (std::size_t j = 1; j < i; ++j) tau -= phi_prev[j] * gamma[i - j];
    const double k = tau / v;
    phi[i] = k;
    for (std::size_t j = 1; j < i; ++j) phi[j] = phi_prev[j] - k * phi_prev[i - j];
    v *= (1.0 - k * k);
    if (v <= 0.0) throw std::runtime_error("fgn: degenerate innovation variance");
    double mean = 0.0;
    for (std::size_t j = 1; j <= i; ++j) mean += phi[j] * out[i - j];
    out[i] = mean + std::sqrt(v) * normal(rng);
    std::copy(phi.begin(), phi.begin() + static_cast<std::ptrdiff_t>(i) + 1,
              phi_prev.begin());
  }
}

}  // namespace

std::vector<double> fgn_autocovariance(double hurst, std::size_t lags) {
  if (!(hurst >= 0.5 && hurst < 1.0))
    throw std::invalid_argument("fgn: hurst must lie in [0.5, 1)");
  std::vector<double> gamma(lags);
  const double h2 = 2.0 * hurst;
  for (std::size_t m = 0; m < lags; ++m) {
    if (m == 0) {
      gamma[0] = 1.0;
    } else {
      const double md = static_cast<double>(m);
      gamma[m] = 0.5 * (std::pow(md + 1.0, h2) - 2.0 * std::pow(md, h2) +
                        std::pow(md - 1.0, h2));
    }
  }
  return gamma;
}

std::vector<double> generate_fgn(double hurst, std::size_t n, std::mt19937_64& rng,
                                 FgnMethod method) {
  if (!(hurst >= 0.5 && hurst < 1.0))
    throw std::invalid_argument("fgn: hurst must lie in [0.5, 1)");
  if (n == 0) return {};

  std::vector<double> out;
  if (hurst == 0.5 && method != FgnMethod::kSequential) {
    // white noise, no transform needed
    std::normal_distribution<double> normal(0.0, 1.0);
    out.resize(n);
    for (double& x : out) x = normal(rng);
    return out;
  }

  switch (method) {
    case FgnMethod::kCirculant:
      if (!fgn_circulant(hurst, n, rng, out))
        throw std::runtime_error("fgn: circulant embedding not nonnegative definite");
      return out;
    case FgnMethod::kSequential:
      fgn_sequential(hurst, n, rng, out);
      return out;
    case FgnMethod::kAuto:
    default:
      if (fgn_circulant(hurst, n, rng, out)) return out;
      if (n > 32768)
        throw std::runtime_error(
            "fgn: embedding failed and n is too large for sequential fallback");
      fgn_sequential(hurst, n, rng, out);
      return out;
  }
}

}  // namespace aoitail
