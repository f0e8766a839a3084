#include "charsum/characters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "charsum/errors.hpp"

namespace charsum {

namespace {

// exp(2 pi i p / m) for 0 < p/m < 1/8 (in lowest-loss form).
std::complex<double> small_angle(u64 p, u64 m) {
  const long double angle = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(p) /
                            static_cast<long double>(m);
  return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
}

}  // namespace

std::complex<double> unit_root(u64 p, u64 m) {
  p %= m;
  if (p == 0) return {1.0, 0.0};
  // Exact quarter turns.
  if ((4 * p) % m == 0) {
    switch (4 * p / m) {
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  // Lower half plane by conjugation.
  if (2 * p > m) return std::conj(unit_root(m - p, m));
  // (1/4, 1/2): e(x) = i e(x - 1/4).
  if (4 * p > m) {
    const auto w = unit_root(4 * p - m, 4 * m);
    return {-w.imag(), w.real()};
  }
  // (1/8, 1/4): e(x) = i conj(e(1/4 - x)).
  if (8 * p > m) {
    const auto w = unit_root(m - 4 * p, 4 * m);
    return {w.imag(), w.real()};
  }
  return small_angle(p, m);
}

Character::Character(std::shared_ptr<const PrimeContext> ctx, u64 k, u64 value_table_limit)
    : ctx_(std::move(ctx)), value_table_limit_(value_table_limit) {
  if (!ctx_) throw PreconditionError("Character: null context");
  q_ = ctx_->modulus();
  const u64 n = q_ - 1;
  if (k % n == 0) throw PreconditionError("Character: k = 0 mod q - 1 is the principal character");
  if (k >= n) throw PreconditionError("Character: exponent must lie in [1, q - 2]");
  k_ = k;
  const u64 g = std::gcd(k, n);
  d_ = n / g;
  step_ = k / g;
  ind_ = ctx_->table().data();
  if (d_ <= value_table_limit_) {
    table_.resize(d_);
    for (u64 j = 0; j < d_; ++j) table_[j] = unit_root(j, d_);
  }
}

Character Character::conjugate() const {
  return Character(ctx_, q_ - 1 - k_, value_table_limit_);
}

Character make_character(std::shared_ptr<const PrimeContext> ctx, u64 k) {
  return Character(std::move(ctx), k);
}

u64 legendre_exponent(const PrimeContext& ctx) { return (ctx.modulus() - 1) / 2; }

double orthogonality_check(const Character& chi) {
  const u64 d = chi.order();
  std::vector<u64> counts(d, 0);
  for (u64 n = 0; n < chi.modulus(); ++n) {
    const u32 j = chi.value_class(n);
    if (j != Character::kZeroClass) ++counts[j];
  }
  if (std::all_of(counts.begin(), counts.end(), [&](u64 c) { return c == counts[0]; })) return 0.0;
  std::complex<double> sum;
  for (u64 j = 0; j < d; ++j) sum += static_cast<double>(counts[j]) * chi.root(static_cast<u32>(j));
  return std::abs(sum);
}

}  // namespace charsum
