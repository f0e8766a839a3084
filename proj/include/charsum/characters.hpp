#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "charsum/modarith.hpp"

namespace charsum {

/// e(p/m) = exp(2 pi i p / m) with exact values at multiples of 1/4 and exact
/// conjugate symmetry e((m - p)/m) = conj(e(p/m)).
std::complex<double> unit_root(u64 p, u64 m);

/// Dirichlet character chi_k(n) = e(k * ind[n] / (q - 1)), zero on multiples of q.
///
/// Values are labeled by their class j in [0, d): chi(n) = e(j/d), where d is the
/// order. Floating values are always produced from the class index.
class Character {
 public:
  static constexpr u64 kDefaultValueTableLimit = u64{1} << 20;
  static constexpr u32 kZeroClass = 0xFFFFFFFFu;

  /// Throws PreconditionError unless 1 <= k <= q - 2.
  Character(std::shared_ptr<const PrimeContext> ctx, u64 k,
            u64 value_table_limit = kDefaultValueTableLimit);

  const PrimeContext& context() const { return *ctx_; }
  std::shared_ptr<const PrimeContext> shared_context() const { return ctx_; }
  u64 modulus() const { return ctx_->modulus(); }
  u64 exponent() const { return k_; }
  u64 order() const { return d_; }
  bool is_real() const { return d_ == 2; }
  bool has_value_table() const { return !table_.empty(); }

  u32 value_class(u64 n) const {
    const u64 r = n % q_;
    if (r == 0) return kZeroClass;
    return static_cast<u32>(step_ * ind_[r] % d_);
  }

  std::complex<double> root(u32 j) const {
    return table_.empty() ? unit_root(j, d_) : table_[j];
  }

  std::complex<double> operator()(u64 n) const {
    const u32 j = value_class(n);
    return j == kZeroClass ? std::complex<double>{} : root(j);
  }

  /// chi_{q-1-k}.
  Character conjugate() const;

 private:
  std::shared_ptr<const PrimeContext> ctx_;
  const u32* ind_;
  u64 q_;
  u64 k_;
  u64 d_;
  u64 step_;  // k / gcd(k, q - 1), so that j = step * ind mod d
  u64 value_table_limit_;
  std::vector<std::complex<double>> table_;
};

Character make_character(std::shared_ptr<const PrimeContext> ctx, u64 k);

/// Exponent of the Legendre symbol, (q - 1) / 2.
u64 legendre_exponent(const PrimeContext& ctx);

/// |sum_{n=0}^{q-1} chi(n)| from exact per-class counts; exactly 0.0 whenever
/// the class counts are all equal.
double orthogonality_check(const Character& chi);

}  // namespace charsum
