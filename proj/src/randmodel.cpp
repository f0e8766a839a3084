#include "charsum/randmodel.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "charsum/accumulate.hpp"
#include "charsum/errors.hpp"
#include "charsum/parallel.hpp"
#include "charsum/specfun.hpp"

namespace charsum {

ModelSampler::ModelSampler(std::uint64_t H, std::uint64_t seed, std::uint64_t stream)
    : H_(H), rng_(seed, stream) {
  if (H == 0) throw PreconditionError("ModelSampler: H must be positive");
}

std::complex<double> ModelSampler::sample() {
  double re = 0.0, im = 0.0;
  for (std::uint64_t j = 0; j < H_; ++j) {
    const double theta = 2.0 * std::numbers::pi * rng_.uniform();
    re += std::cos(theta);
    im += std::sin(theta);
  }
  return {re, im};
}

namespace {

int triangle_index(int r, int s) {
  const int n = r + s;
  return n * (n + 1) / 2 + s;
}

// Jackknife over per-block sums: blocks[b] holds (sum of f, count).
McEstimate jackknife(const std::vector<double>& block_sums, const std::vector<std::uint64_t>& sizes) {
  McEstimate est;
  DoubleDouble total;
  std::uint64_t n = 0;
  for (std::size_t b = 0; b < block_sums.size(); ++b) {
    total.add(block_sums[b]);
    n += sizes[b];
  }
  est.draws = n;
  est.value = total.value() / static_cast<double>(n);
  const std::size_t B = block_sums.size();
  if (B < 2) return est;
  double mean_loo = 0.0;
  std::vector<double> loo(B);
  for (std::size_t b = 0; b < B; ++b) {
    loo[b] = (total.value() - block_sums[b]) / static_cast<double>(n - sizes[b]);
    mean_loo += loo[b];
  }
  mean_loo /= static_cast<double>(B);
  double ss = 0.0;
  for (double v : loo) ss += (v - mean_loo) * (v - mean_loo);
  est.std_error = std::sqrt(static_cast<double>(B - 1) / static_cast<double>(B) * ss);
  return est;
}

template <class PerDraw>
std::vector<std::vector<double>> blocked_sums(std::uint64_t H, const McConfig& cfg,
                                              std::size_t width, std::vector<std::uint64_t>& sizes,
                                              PerDraw&& per_draw) {
  if (cfg.draws == 0 || cfg.block_draws == 0) throw PreconditionError("Monte Carlo needs draws > 0");
  const std::uint64_t blocks = (cfg.draws + cfg.block_draws - 1) / cfg.block_draws;
  std::vector<std::vector<double>> sums(blocks, std::vector<double>(width, 0.0));
  sizes.assign(blocks, 0);
  parallel_for(blocks, resolve_threads(cfg.threads), [&](std::uint64_t b) {
    const std::uint64_t n = std::min(cfg.block_draws, cfg.draws - b * cfg.block_draws);
    ModelSampler sampler(H, cfg.seed, b);
    std::vector<DoubleDouble> acc(width);
    std::vector<double> values(width);
    for (std::uint64_t i = 0; i < n; ++i) {
      per_draw(sampler.sample(), values);
      for (std::size_t w = 0; w < width; ++w) acc[w].add(values[w]);
    }
    for (std::size_t w = 0; w < width; ++w) sums[b][w] = acc[w].value();
    sizes[b] = n;
  });
  return sums;
}

}  // namespace

const McEstimate& McMomentTable::at(int r, int s) const {
  if (r < 0 || s < 0 || r + s > max_order) throw std::out_of_range("McMomentTable::at");
  return entries[static_cast<std::size_t>(triangle_index(r, s))];
}

McMomentTable mc_moments(std::uint64_t H, int max_order, const McConfig& config) {
  if (max_order < 0 || max_order > 8) throw PreconditionError("mc_moments: order must be in [0, 8]");
  const std::size_t width = static_cast<std::size_t>((max_order + 1) * (max_order + 2) / 2);
  std::vector<std::uint64_t> sizes;
  auto sums = blocked_sums(H, config, width, sizes, [&](std::complex<double> z, std::vector<double>& out) {
    std::array<double, 9> a{}, b{};
    a[0] = b[0] = 1.0;
    for (int e = 1; e <= max_order; ++e) {
      a[e] = a[e - 1] * z.real();
      b[e] = b[e - 1] * z.imag();
    }
    for (int n = 0; n <= max_order; ++n) {
      for (int s = 0; s <= n; ++s) out[triangle_index(n - s, s)] = a[n - s] * b[s];
    }
  });
  McMomentTable table;
  table.max_order = max_order;
  table.entries.resize(width);
  std::vector<double> column(sums.size());
  for (std::size_t w = 0; w < width; ++w) {
    for (std::size_t b = 0; b < sums.size(); ++b) column[b] = sums[b][w];
    table.entries[w] = jackknife(column, sizes);
  }
  return table;
}

McEstimate mc_moment(std::uint64_t H, int r, int s, const McConfig& config) {
  if (r < 0 || s < 0 || r + s > 8) throw PreconditionError("mc_moment: need r, s >= 0 and r + s <= 8");
  return mc_moments(H, r + s, config).at(r, s);
}

McCfEstimate mc_cf(double u, double v, std::uint64_t H, const McConfig& config) {
  const double inv = 1.0 / std::sqrt(static_cast<double>(H) / 2.0);
  std::vector<std::uint64_t> sizes;
  auto sums = blocked_sums(H, config, 2, sizes, [&](std::complex<double> z, std::vector<double>& out) {
    const double phase = (u * z.real() + v * z.imag()) * inv;
    out[0] = std::cos(phase);
    out[1] = std::sin(phase);
  });
  std::vector<double> re(sums.size()), im(sums.size());
  for (std::size_t b = 0; b < sums.size(); ++b) {
    re[b] = sums[b][0];
    im[b] = sums[b][1];
  }
  return {jackknife(re, sizes), jackknife(im, sizes)};
}

double model_cf(double u, double v, std::uint64_t H) {
  if (H == 0) throw PreconditionError("model_cf: H must be positive");
  const double rho2 = u * u + v * v;
  if (rho2 == 0.0) return 1.0;
  const double x = std::sqrt(2.0 * rho2 / static_cast<double>(H));
  const double h = static_cast<double>(H);
  if (x <= 2.0) {
    // J0 > 0 here; log1p keeps H * log J0 accurate when J0 is close to 1.
    return std::exp(h * std::log1p(bessel_j0_minus_one(x)));
  }
  return std::pow(bessel_j0(x), h);
}

}  // namespace charsum
