#pragma once

/**
 * @file window.hpp
 * @brief Streaming short character sums S(x) = sum_{x < n <= x+H} chi(n).
 *
 * All q starting points x = 0..q-1 are produced in one O(q + H) pass. The
 * x-range is cut into fixed-length chunks; each chunk seeds its own window by
 * direct evaluation, so chunk contents depend only on the chunk index and
 * every reduction over chunks (merged in chunk order) is bitwise independent
 * of the thread count. Arguments beyond q - 1 wrap around (chi has period q).
 *
 * Two window representations:
 *  - counter mode (order d <= exact_order_limit): the window is d integer class
 *    counts plus a zero-slot count; statistics that only need the counts are
 *    exact.
 *  - float mode: compensated running sum, recomputed from scratch every
 *    resync_period steps.
 *
 * Consumers receive blocks of normalized values S(x) / scale, where scale is
 * 1, sqrt(H) (real characters) or sqrt(H/2) (non-real characters).
 */

#include <algorithm>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "charsum/accumulate.hpp"
#include "charsum/characters.hpp"
#include "charsum/parallel.hpp"

namespace charsum {

enum class Normalization { none, real, complex };

double normalization_scale(Normalization mode, u64 H);
/// sqrt(H) for the Legendre symbol, sqrt(H/2) otherwise.
Normalization natural_normalization(const Character& chi);
const char* to_string(Normalization mode);

struct SeriesBlock {
  u64 x0 = 0;
  std::span<const double> re;
  std::span<const double> im;
  std::size_t size() const { return re.size(); }
};

struct WindowOptions {
  u64 exact_order_limit = 64;
  /// In counter mode with d above this limit the float value is updated
  /// incrementally instead of being rebuilt from the counts every step.
  u64 materialize_limit = 64;
  u64 chunk_length = u64{1} << 16;
  u64 resync_period = u64{1} << 16;
  unsigned threads = 1;
  std::optional<Normalization> normalization;
};

/// Per-pass bookkeeping on the raw (unnormalized) sums.
struct WindowSummary {
  u64 q = 0;
  u64 H = 0;
  u64 order = 0;
  bool exact_mode = false;
  /// Counter mode: sum over x of the class-j count of window x.
  std::vector<std::int64_t> class_totals;
  /// Number of windows that contain a multiple of q.
  u64 zero_windows = 0;
  DoubleDouble sum_re;
  DoubleDouble sum_im;
  DoubleDouble sum_abs2;
  /// Real characters only: exact integer sums of S and S^2.
  bool has_integer_sums = false;
  std::int64_t integer_sum = 0;
  unsigned __int128 integer_sum_sq = 0;

  /// True when sum_x S(x) = 0 is established exactly (class totals all equal,
  /// or the integer sum vanishes). Always false in float mode.
  bool exact_sum_zero() const;
  std::complex<double> mean() const;
  /// (1/q) sum_x |S(x)|^2.
  double second_moment() const;

  void merge(const WindowSummary& other);
};

class WindowSource {
 public:
  /// Throws PreconditionError unless 1 <= H < q.
  WindowSource(Character chi, u64 H, WindowOptions options = {});

  const Character& character() const { return chi_; }
  u64 modulus() const { return q_; }
  u64 window() const { return H_; }
  Normalization normalization() const { return norm_; }
  double scale() const { return scale_; }
  bool exact_mode() const { return exact_; }
  const WindowOptions& options() const { return options_; }

  u64 num_chunks() const { return (q_ + options_.chunk_length - 1) / options_.chunk_length; }
  std::pair<u64, u64> chunk_range(u64 c) const;

  void visit_chunk(u64 c, const std::function<void(const SeriesBlock&)>& fn,
                   WindowSummary* summary = nullptr) const;

  WindowSummary empty_summary() const;

 private:
  void visit_counter(u64 x0, u64 x1, std::vector<double>& re, std::vector<double>& im,
                     WindowSummary* summary) const;
  void visit_float(u64 x0, u64 x1, std::vector<double>& re, std::vector<double>& im) const;

  Character chi_;
  u64 q_;
  u64 H_;
  WindowOptions options_;
  bool exact_;
  Normalization norm_;
  double scale_;
};

/// In-memory normalized series; T is float for dumps, double otherwise.
template <class T>
struct MemorySeries {
  u64 q = 0;
  u64 H = 0;
  u64 k = 0;
  u64 order = 0;
  Normalization normalization = Normalization::none;
  double scale = 1.0;
  u64 chunk_length = u64{1} << 16;
  std::vector<T> re;
  std::vector<T> im;

  u64 modulus() const { return q; }
  u64 window() const { return H; }
  u64 num_chunks() const { return (q + chunk_length - 1) / chunk_length; }

  void visit_chunk(u64 c, const std::function<void(const SeriesBlock&)>& fn) const {
    const u64 x0 = c * chunk_length;
    const u64 x1 = std::min(q, x0 + chunk_length);
    if constexpr (std::is_same_v<T, double>) {
      fn(SeriesBlock{x0, std::span<const double>(re.data() + x0, x1 - x0),
                     std::span<const double>(im.data() + x0, x1 - x0)});
    } else {
      std::vector<double> r(re.begin() + x0, re.begin() + x1);
      std::vector<double> i(im.begin() + x0, im.begin() + x1);
      fn(SeriesBlock{x0, r, i});
    }
  }
};

using NormalizedSeries = MemorySeries<double>;
using DumpSeries = MemorySeries<float>;

/// Reduces a statistic over every chunk of a source; partial results are
/// merged in chunk order. Sink requirements:
///   using partial_type = ...;
///   partial_type init() const;
///   void consume(partial_type&, const SeriesBlock&) const;
///   void merge(partial_type& into, const partial_type& from) const;
template <class Source, class Sink>
typename Sink::partial_type reduce_series(const Source& source, const Sink& sink,
                                          unsigned threads) {
  const u64 n = source.num_chunks();
  std::vector<typename Sink::partial_type> parts;
  parts.reserve(n);
  for (u64 c = 0; c < n; ++c) parts.push_back(sink.init());
  parallel_for(n, threads, [&](u64 c) {
    source.visit_chunk(c, [&](const SeriesBlock& b) { sink.consume(parts[c], b); });
  });
  for (u64 c = 1; c < n; ++c) sink.merge(parts[0], parts[c]);
  return std::move(parts[0]);
}

template <class P>
struct SeriesResult {
  WindowSummary summary;
  P value;
};

/// Streams S(0..q-1) into the sink and returns the merged statistic together
/// with the pass summary.
template <class Sink>
SeriesResult<typename Sink::partial_type> compute_series(const WindowSource& source,
                                                         const Sink& sink) {
  const u64 n = source.num_chunks();
  std::vector<typename Sink::partial_type> parts;
  std::vector<WindowSummary> summaries(n, source.empty_summary());
  parts.reserve(n);
  for (u64 c = 0; c < n; ++c) parts.push_back(sink.init());
  parallel_for(n, resolve_threads(source.options().threads), [&](u64 c) {
    source.visit_chunk(
        c, [&](const SeriesBlock& b) { sink.consume(parts[c], b); }, &summaries[c]);
  });
  for (u64 c = 1; c < n; ++c) {
    sink.merge(parts[0], parts[c]);
    summaries[0].merge(summaries[c]);
  }
  return {std::move(summaries[0]), std::move(parts[0])};
}

/// Summary-only pass.
WindowSummary summarize_series(const WindowSource& source);

/// Copies the normalized series into memory (16 bytes per starting point).
NormalizedSeries materialize(const WindowSource& source);

/// Direct O(H) evaluation of S(x), for spot checks.
std::complex<double> window_sum_direct(const Character& chi, u64 H, u64 x);

/// Direct class counts of window x: counts[j] plus the zero-slot count.
struct WindowCounts {
  std::vector<u64> counts;
  u64 zeros = 0;
};
WindowCounts window_counts_direct(const Character& chi, u64 H, u64 x);

/// Exact value of (1/q) sum_x |S(x)|^2 for any nonprincipal chi mod prime q.
struct Fraction {
  u64 numerator = 0;
  u64 denominator = 1;
  double value() const {
    return static_cast<double>(numerator) / static_cast<double>(denominator);
  }
  bool operator==(const Fraction&) const = default;
};
Fraction exact_second_moment(u64 q, u64 H);

struct ComponentStats {
  std::complex<double> mean;
  /// Counter mode only: sum_x S(x) = 0 exactly.
  bool mean_exactly_zero = false;
  double var_re = 0.0;
  double var_im = 0.0;
  double second_moment = 0.0;
};
ComponentStats mean_and_component_variances(const WindowSource& source);

// Binary dump: 24-byte little-endian header
//   char magic[4] = "CSUM"; u32 version; u64 q; u32 H; u32 k;
// followed by q pairs (re, im) of float32, normalized by the character's
// natural scale (sqrt(H) real, sqrt(H/2) non-real).
inline constexpr std::uint32_t kDumpVersion = 1;
inline constexpr std::size_t kDumpHeaderBytes = 24;

void write_dump(const std::filesystem::path& path, const WindowSource& source);
DumpSeries read_dump(const std::filesystem::path& path);

}  // namespace charsum
