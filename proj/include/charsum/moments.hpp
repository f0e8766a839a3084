#pragma once

/**
 * @file moments.hpp
 * @brief Mixed moments M(r,s) = (1/q) sum_x (Re S(x))^r (Im S(x))^s of the raw
 * sums, the random-model moments they approximate, and complete
 * shifted-product character sums.
 */

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "charsum/accumulate.hpp"
#include "charsum/characters.hpp"
#include "charsum/window.hpp"

namespace charsum {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

inline constexpr int kDefaultMaxMomentOrder = 8;

struct MomentIndex {
  int r = 0;
  int s = 0;
};

/// All (r, s) with r + s <= max_order, ordered by total degree then s.
std::vector<MomentIndex> moment_indices(int max_order);

/// Streaming sink for empirical moments of the raw sums. Sources hand out
/// normalized values; the scale is reapplied at the end. Sums are kept in
/// double-double.
class MomentSink {
 public:
  using partial_type = std::vector<DoubleDouble>;

  MomentSink(std::vector<MomentIndex> indices, double scale);

  partial_type init() const { return partial_type(indices_.size()); }
  void consume(partial_type& acc, const SeriesBlock& block) const;
  void merge(partial_type& into, const partial_type& from) const;

  /// Averages over q points and rescales to raw moments.
  std::vector<double> finish(const partial_type& acc, u64 q) const;
  const std::vector<MomentIndex>& indices() const { return indices_; }

 private:
  std::vector<MomentIndex> indices_;
  double scale_;
  int max_order_ = 0;
};

/// Empirical M(r,s) over any series source (window, materialized, dump).
template <class Source>
std::vector<double> empirical_moments(const Source& source, const std::vector<MomentIndex>& idx,
                                      double scale, unsigned threads) {
  MomentSink sink(idx, scale);
  return sink.finish(reduce_series(source, sink, threads), source.modulus());
}

double empirical_moment(const WindowSource& source, int r, int s);

/// I(k,l) = (1/q) sum_x S(x)^k conj(S(x))^l on raw sums, for every k + l <= max_order.
/// Entry (k, l) at moment_indices order with r = k, s = l.
std::vector<std::complex<double>> complex_moments(const WindowSource& source, int max_order);

/// M(r,s) rebuilt from the complex moments by the binomial expansion
/// M(r,s) = sum_{j,k} 2^-r (2i)^-s C(r,j) C(s,k) (-1)^(s-k) I(j+k, r+s-j-k).
/// The imaginary part is a roundoff residue.
std::complex<double> moment_from_complex(const std::vector<std::complex<double>>& I, int r, int s);

/// Number of pairs of m-tuples from [1, H] that agree as multisets:
/// (m!)^2 [x^m] (sum_k x^k / (k!)^2)^H, by truncated binary powering over
/// exact rationals.
BigInt multiset_count_B(int m, std::uint64_t H, int max_m = kDefaultMaxMomentOrder);

/// c(r,s) = sum_{j+k=m} 2^-r (2i)^-s C(r,j) C(s,k) (-1)^(s-k) for r + s = 2m
/// (real; zero whenever r or s is odd). Zero for odd r + s.
BigRational model_coefficient(int r, int s);

/// E[(Re Z_H)^r (Im Z_H)^s] = B_m(H) c(r,s) for r + s = 2m, 0 for odd r + s.
BigRational model_moment_exact(int r, int s, std::uint64_t H);
double model_moment(int r, int s, std::uint64_t H);

struct MomentEntry {
  int r = 0;
  int s = 0;
  double empirical = 0.0;
  BigRational model_exact;
  double model = 0.0;
  double diff = 0.0;
  /// (r + s) H^(r+s) q^(-1/2)
  double bound = 0.0;
  double ratio = 0.0;
  /// H^(r+s) <= sqrt(q)
  bool hypothesis_ok = false;
};

struct MomentTable {
  u64 q = 0;
  u64 H = 0;
  std::vector<MomentEntry> entries;
  const MomentEntry& at(int r, int s) const;
  bool has(int r, int s) const;
};

/// Empirical and model moments side by side for the given index set.
MomentTable prop22_compare(const WindowSource& source, const std::vector<MomentIndex>& indices);

/// Fills diff / bound / ratio / hypothesis columns from empirical values.
MomentTable assemble_moment_table(u64 q, u64 H, const std::vector<MomentIndex>& indices,
                                  const std::vector<double>& empirical);

struct TupleSumCheck {
  std::vector<u64> y;
  std::vector<u64> z;
  std::complex<double> sum;
  /// x for which some factor vanishes.
  u64 vanishing = 0;
  bool diagonal = false;
  /// The polynomial prod(x+y) prod(x+z)^(d-1) is a perfect d-th power although
  /// the multisets differ; the bound does not apply to such tuples.
  bool degenerate = false;
  double bound = 0.0;
};

/// Complete sum sum_{x=0}^{q-1} chi(prod (x + y_i)) conj(chi(prod (x + z_j))),
/// accumulated as exact per-class counts.
TupleSumCheck shifted_product_sum(const Character& chi, const std::vector<u64>& y,
                                  const std::vector<u64>& z, unsigned threads = 1);

struct WeilReport {
  std::vector<TupleSumCheck> checks;
  std::size_t off_diagonal = 0;
  std::size_t flagged = 0;
  std::size_t violations = 0;
  double max_ratio = 0.0;
  bool ok() const { return violations == 0; }
};

/// Draws `samples` off-diagonal (k, l) tuple pairs with entries in [1, H] by
/// rejection and checks |sum| <= (k + l) sqrt(q) for each non-degenerate one.
WeilReport weil_check(const Character& chi, std::size_t samples, int k, int l, u64 H,
                      std::uint64_t seed);

}  // namespace charsum
