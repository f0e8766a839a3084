#pragma once

/**
 * @file charfn.hpp
 * @brief Empirical characteristic function
 *   Phi(u,v) = (1/q) sum_x exp(i (u Re S~(x) + v Im S~(x)))
 * of the normalized sums, its Gaussian comparison and the truncated moment
 * expansion F_N.
 */

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "charsum/errors.hpp"
#include "charsum/moments.hpp"
#include "charsum/window.hpp"

namespace charsum {

struct CfNode {
  double u = 0.0;
  double v = 0.0;
};

/// Sum_{i,j} a_i b_j Phi(u_i, v_j) over a tensor grid.
struct TensorContraction {
  std::span<const double> u;
  std::span<const std::complex<double>> a;
  std::span<const double> v;
  std::span<const std::complex<double>> b;
};

/// Anything that can evaluate a characteristic function at a batch of nodes.
class CfProvider {
 public:
  virtual ~CfProvider() = default;
  virtual std::vector<std::complex<double>> evaluate(std::span<const CfNode> nodes) const = 0;
  /// Default: evaluate the full grid and contract. Providers backed by data
  /// override this with a one-pass factorized evaluation.
  virtual std::vector<std::complex<double>> contract(std::span<const TensorContraction> jobs) const;
};

/// exp(-(u^2 + v^2) / 2).
class GaussianCf final : public CfProvider {
 public:
  std::vector<std::complex<double>> evaluate(std::span<const CfNode> nodes) const override;
};

/// Characteristic function of the random model Z_H / sqrt(H/2).
class ModelCf final : public CfProvider {
 public:
  explicit ModelCf(std::uint64_t H) : H_(H) {}
  std::vector<std::complex<double>> evaluate(std::span<const CfNode> nodes) const override;

 private:
  std::uint64_t H_;
};

/// Streaming sink evaluating Phi at a node set in one pass. When the nodes
/// form a full tensor grid, exp(i u X) and exp(i v Y) are computed once per
/// axis value and multiplied.
class CfSink {
 public:
  using partial_type = std::vector<std::array<DoubleDouble, 2>>;

  explicit CfSink(std::vector<CfNode> nodes);

  partial_type init() const { return partial_type(nodes_.size()); }
  void consume(partial_type& acc, const SeriesBlock& block) const;
  void merge(partial_type& into, const partial_type& from) const;
  std::vector<std::complex<double>> finish(const partial_type& acc, u64 q) const;

 private:
  std::vector<CfNode> nodes_;
  bool grid_ = false;
  std::vector<double> us_, vs_;
  std::vector<std::size_t> u_of_, v_of_;
};

/// Empirical provider over an in-memory normalized series.
class EmpiricalCf final : public CfProvider {
 public:
  explicit EmpiricalCf(std::shared_ptr<const NormalizedSeries> series, unsigned threads = 1,
                       double cost_budget = 2e11);

  std::vector<std::complex<double>> evaluate(std::span<const CfNode> nodes) const override;
  std::vector<std::complex<double>> contract(std::span<const TensorContraction> jobs) const override;
  const NormalizedSeries& series() const { return *series_; }

 private:
  std::shared_ptr<const NormalizedSeries> series_;
  unsigned threads_;
  double budget_;
};

/// 17 x 17 uniform grid on [-2, 2]^2 by default.
std::vector<CfNode> uniform_grid(double lo, double hi, std::size_t per_axis);

struct CfGridEntry {
  CfNode node;
  std::complex<double> value;
  double gauss = 0.0;
};

struct CfGrid {
  std::vector<CfGridEntry> entries;
};

/// One streaming pass over any series source. Throws PreconditionError when
/// nodes * q exceeds cost_budget.
template <class Source>
CfGrid empirical_cf(const Source& source, const std::vector<CfNode>& nodes, unsigned threads,
                    double cost_budget = 2e11) {
  if (static_cast<double>(nodes.size()) * static_cast<double>(source.modulus()) > cost_budget) {
    throw PreconditionError("empirical_cf: nodes x q exceeds the evaluation budget");
  }
  CfSink sink(nodes);
  const auto values = sink.finish(reduce_series(source, sink, threads), source.modulus());
  CfGrid grid;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double r2 = nodes[i].u * nodes[i].u + nodes[i].v * nodes[i].v;
    grid.entries.push_back({nodes[i], values[i], std::exp(-r2 / 2.0)});
  }
  return grid;
}

struct Theorem31Row {
  CfNode node;
  std::complex<double> value;
  double gauss = 0.0;
  double gap = 0.0;
  /// Slack times the assembled error budget.
  double budget = 0.0;
  /// |u|, |v| <= H^(1/4) and N <= log q / (20 log H).
  bool hypothesis_ok = false;
};

struct Theorem31Report {
  int N = 1;
  double slack = 10.0;
  bool n_admissible = false;
  std::vector<Theorem31Row> rows;
  double max_gap() const;
  bool within_budget() const;
};

/// Unslacked budget:
///   exp(-(u^2+v^2)/2) (u^4+v^4)/H + ((2u^2)^N + (2v^2)^N)/N! + (2uv)^(2N)/(2N)!
///   + q^(-1/4) (1 + u^(2N)) (1 + v^(2N)).
double theorem31_budget(double u, double v, int N, std::uint64_t H, std::uint64_t q);

/// Throws PreconditionError for N < 1 or N > 8. An N above the theorem's
/// admissible range is flagged in every row, not rejected.
Theorem31Report theorem31_report(const CfGrid& grid, int N, std::uint64_t H, std::uint64_t q,
                                 double slack = 10.0);

/// F_N(u,v) = sum_{r,s<2N} (iu)^r (iv)^s / ((H/2)^((r+s)/2) r! s!) M(r,s).
std::complex<double> truncated_cf_FN(const MomentTable& moments, int N, double u, double v,
                                     std::uint64_t H);

/// ((2u^2)^N + (2v^2)^N)/N! + (2uv)^(2N)/(2N)!.
double truncation_budget(double u, double v, int N);

}  // namespace charsum
