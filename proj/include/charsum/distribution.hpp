#pragma once

/**
 * @file distribution.hpp
 * @brief Rectangle frequencies of the normalized sums, discrepancy against
 * the standard bivariate Gaussian, and the one-dimensional KS distance for a
 * real character.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "charsum/errors.hpp"
#include "charsum/specfun.hpp"
#include "charsum/window.hpp"

namespace charsum {

/// Counts of series points inside each closed rectangle.
class RectSink {
 public:
  using partial_type = std::vector<u64>;
  explicit RectSink(std::vector<Rectangle> rects) : rects_(std::move(rects)) {}
  partial_type init() const { return partial_type(rects_.size(), 0); }
  void consume(partial_type& acc, const SeriesBlock& b) const {
    for (std::size_t x = 0; x < b.size(); ++x) {
      for (std::size_t k = 0; k < rects_.size(); ++k) acc[k] += rects_[k].contains(b.re[x], b.im[x]);
    }
  }
  void merge(partial_type& into, const partial_type& from) const {
    for (std::size_t k = 0; k < into.size(); ++k) into[k] += from[k];
  }

 private:
  std::vector<Rectangle> rects_;
};

template <class Source>
std::vector<u64> rect_counts(const Source& source, const std::vector<Rectangle>& rects,
                             unsigned threads = 1) {
  return reduce_series(source, RectSink(rects), threads);
}

template <class Source>
double rect_frequency(const Source& source, const Rectangle& R, unsigned threads = 1) {
  return static_cast<double>(rect_counts(source, {R}, threads)[0]) /
         static_cast<double>(source.modulus());
}

/// 28 hand-picked rectangles (centered squares, half-planes, quadrants,
/// strips, off-center boxes) followed by the 144 unit-half cells of the
/// half-integer grid on [-3,3]^2.
std::vector<Rectangle> default_rectangle_family();

/// (area(R) + 1) (H^(-1/4) + sqrt(log H / log q)).
double thm1_bound(const Rectangle& R, std::uint64_t H, std::uint64_t q);

/// True when H lies outside the range log q >= 20 log H where the
/// convergence rate is established.
bool outside_theorem_range(std::uint64_t H, std::uint64_t q);

struct DiscrepancyRow {
  Rectangle rect;
  double mu2 = 0.0;
  double empirical = 0.0;
  double gauss = 0.0;
  double gap = 0.0;
  double bound = 0.0;
};

struct DiscrepancyReport {
  std::uint64_t q = 0;
  std::uint64_t H = 0;
  std::string label;
  bool exploratory = false;
  std::vector<DiscrepancyRow> rows;
  double max_gap() const;
  double mean_gap() const;
  double max_bound() const;
};

DiscrepancyReport discrepancy_from_counts(std::uint64_t q, std::uint64_t H, std::string label,
                                          const std::vector<Rectangle>& rects,
                                          const std::vector<u64>& counts);

template <class Source>
DiscrepancyReport discrepancy(const Source& source, const std::vector<Rectangle>& rects,
                              std::string label, unsigned threads = 1) {
  return discrepancy_from_counts(source.modulus(), source.window(), std::move(label), rects,
                                 rect_counts(source, rects, threads));
}

/// KS distance between the empirical distribution of the sample and N(0,1).
double ks_distance_normal(std::vector<double> sample);

/// Exact sup_lambda |F_emp(lambda) - Phi(lambda)| over all jump points of the
/// empirical CDF of the real parts. Throws PreconditionError when any
/// imaginary part is nonzero.
template <class Source>
double ks_1d_real(const Source& source) {
  std::vector<double> values;
  values.reserve(source.modulus());
  for (u64 c = 0; c < source.num_chunks(); ++c) {
    source.visit_chunk(c, [&](const SeriesBlock& b) {
      for (std::size_t i = 0; i < b.size(); ++i) {
        if (b.im[i] != 0.0) throw PreconditionError("ks_1d_real: series is not real");
        values.push_back(b.re[i]);
      }
    });
  }
  return ks_distance_normal(std::move(values));
}

/// Discrepancy over the default family for H beyond the established range,
/// with the natural normalization (sqrt(H) real, sqrt(H/2) non-real). The
/// report is always marked exploratory. Throws PreconditionError unless
/// 1 <= H <= q / (10 log q).
DiscrepancyReport conjecture1_preset(const Character& chi, std::uint64_t H,
                                     const std::vector<Rectangle>& rects, unsigned threads = 1);

}  // namespace charsum
