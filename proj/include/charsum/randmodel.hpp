#pragma once

/**
 * @file randmodel.hpp
 * @brief Random model Z_H = X_1 + ... + X_H with X_j independent and uniform
 * on the unit circle.
 *
 * Sampling is counter based: draw block b uses its own stream, so Monte
 * Carlo estimates are identical for any thread count.
 */

#include <complex>
#include <cstdint>
#include <vector>

#include "charsum/random.hpp"

namespace charsum {

class ModelSampler {
 public:
  ModelSampler(std::uint64_t H, std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t window() const { return H_; }
  /// One draw of Z_H.
  std::complex<double> sample();

 private:
  std::uint64_t H_;
  CounterRng rng_;
};

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t draws = 0;
};

struct McConfig {
  std::uint64_t draws = 1'000'000;
  std::uint64_t seed = 1;
  std::uint64_t block_draws = 1 << 14;
  unsigned threads = 1;
};

/// Estimates of E[(Re Z_H)^r (Im Z_H)^s] for all r + s <= max_order from a single
/// set of draws; entry (r, s) is at index moment_index(r, s). Standard errors
/// come from a delete-one-block jackknife.
struct McMomentTable {
  int max_order = 0;
  std::vector<McEstimate> entries;
  const McEstimate& at(int r, int s) const;
};
McMomentTable mc_moments(std::uint64_t H, int max_order, const McConfig& config);

McEstimate mc_moment(std::uint64_t H, int r, int s, const McConfig& config);

/// Monte Carlo estimate of E[exp(i(u Re Z~ + v Im Z~))], Z~ = Z_H / sqrt(H/2);
/// the estimates of the real and imaginary parts are returned separately.
struct McCfEstimate {
  McEstimate re;
  McEstimate im;
};
McCfEstimate mc_cf(double u, double v, std::uint64_t H, const McConfig& config);

/// Exact characteristic function of Z_H / sqrt(H/2):
/// J0(sqrt(2 (u^2 + v^2) / H))^H.
double model_cf(double u, double v, std::uint64_t H);

}  // namespace charsum
