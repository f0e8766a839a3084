#pragma once

/**
 * @file modarith.hpp
 * @brief Prime-field arithmetic and the discrete-log index table.
 *
 * Every character mod q is evaluated through ind[n], the exponent i with
 * g^i = n (mod q) for the smallest primitive root g. The table is a dense
 * array of 32-bit entries, one per residue, so q is capped at 2^31 - 1 by
 * default.
 */

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace charsum {

using u64 = std::uint64_t;
using u32 = std::uint32_t;

u64 mul_mod(u64 a, u64 b, u64 m);
u64 pow_mod(u64 base, u64 exp, u64 m);

/// Deterministic Miller-Rabin for 2 <= n < 2^63. Throws PreconditionError
/// outside that range.
bool is_prime(u64 n);

/// Smallest prime >= n (n < 2^63).
u64 next_prime(u64 n);

struct PrimePower {
  u64 prime;
  int multiplicity;
  bool operator==(const PrimePower&) const = default;
};

/// Factorization by trial division with a Pollard-rho fallback, primes ascending.
std::vector<PrimePower> factorize(u64 n);

/// Smallest g >= 2 whose order mod q is q - 1.
u64 find_primitive_root(u64 q);

class PrimeContext {
 public:
  static constexpr u64 kDefaultMaxModulus = (u64{1} << 31) - 1;
  static constexpr u32 kNoIndex = 0xFFFFFFFFu;

  /// Certifies q, finds its smallest primitive root and builds the table.
  static PrimeContext create(u64 q, u64 max_modulus = kDefaultMaxModulus);

  /// Wraps an externally supplied table without validating it. Used by
  /// fixtures that need a deliberately broken context; run
  /// verify_index_table() before trusting one.
  static PrimeContext from_table(u64 q, u64 g, std::vector<u32> table);

  u64 modulus() const { return q_; }
  u64 generator() const { return g_; }
  u64 group_order() const { return q_ - 1; }

  /// Index of n mod q; requires q not dividing n.
  u32 index(u64 n) const { return ind_[n % q_]; }

  /// Whole table, slot 0 holds kNoIndex.
  std::span<const u32> table() const { return ind_; }
  const std::vector<PrimePower>& group_order_factors() const { return factors_; }

 private:
  friend PrimeContext build_index_table(u64 q, u64 g, u64 max_modulus);
  PrimeContext(u64 q, u64 g, std::vector<u32> ind, std::vector<PrimePower> factors)
      : q_(q), g_(g), ind_(std::move(ind)), factors_(std::move(factors)) {}

  u64 q_;
  u64 g_;
  std::vector<u32> ind_;
  std::vector<PrimePower> factors_;
};

/// Iterates the powers of g once. Throws MemoryCapError when q exceeds
/// max_modulus and PreconditionError when g is not a primitive root.
PrimeContext build_index_table(u64 q, u64 g, u64 max_modulus = PrimeContext::kDefaultMaxModulus);

/// Checks bijectivity, ind[1] = 0, ind[g] = 1 and a sampled round trip.
/// Returns a list of human-readable violations (empty when sound).
std::vector<std::string> verify_index_table(const PrimeContext& ctx, u64 samples = 1000,
                                            u64 seed = 1);

}  // namespace charsum
