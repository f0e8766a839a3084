#include "charsum/modarith.hpp"

#include <algorithm>
#include <numeric>

#include "charsum/errors.hpp"
#include "charsum/random.hpp"

namespace charsum {

u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m);
}

u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

namespace {

constexpr u64 kPrimalityLimit = u64{1} << 63;

bool miller_rabin_round(u64 n, u64 d, int s, u64 a) {
  u64 x = pow_mod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

bool is_prime_unchecked(u64 n) {
  if (n < 2) return false;
  static constexpr u64 kSmall[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : kSmall) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This witness set is exact for every n < 3.3e24.
  for (u64 a : kSmall) {
    if (!miller_rabin_round(n, d, s, a)) return false;
  }
  return true;
}

u64 pollard_rho(u64 n, u64 seed) {
  if (n % 2 == 0) return 2;
  CounterRng rng(seed, n);
  for (;;) {
    const u64 c = 1 + rng.below(n - 1);
    u64 y = rng.below(n);
    u64 m = 128, g = 1, r = 1, q = 1, x = 0, ys = 0;
    auto f = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r <<= 1;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime_unchecked(n)) {
    out.push_back(n);
    return;
  }
  const u64 d = pollard_rho(n, out.size() + 1);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace

bool is_prime(u64 n) {
  if (n < 2 || n >= kPrimalityLimit) {
    throw PreconditionError("is_prime: n must satisfy 2 <= n < 2^63, got " + std::to_string(n));
  }
  return is_prime_unchecked(n);
}

u64 next_prime(u64 n) {
  if (n <= 2) return 2;
  for (u64 c = n | 1;; c += 2) {
    if (c >= kPrimalityLimit) throw PreconditionError("next_prime: search left the 2^63 range");
    if (is_prime_unchecked(c)) return c;
  }
}

std::vector<PrimePower> factorize(u64 n) {
  if (n == 0) throw PreconditionError("factorize: n must be positive");
  std::vector<u64> primes;
  for (u64 p = 2; p < 1000 && p * p <= n; ++p) {
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  factor_into(n, primes);
  std::sort(primes.begin(), primes.end());
  std::vector<PrimePower> out;
  for (u64 p : primes) {
    if (!out.empty() && out.back().prime == p) {
      ++out.back().multiplicity;
    } else {
      out.push_back({p, 1});
    }
  }
  return out;
}

namespace {

bool is_generator(u64 g, u64 q, const std::vector<PrimePower>& factors) {
  if (g % q == 0) return false;
  return std::all_of(factors.begin(), factors.end(), [&](const PrimePower& f) {
    return pow_mod(g, (q - 1) / f.prime, q) != 1;
  });
}

}  // namespace

u64 find_primitive_root(u64 q) {
  if (q < 3 || !is_prime(q)) {
    throw PreconditionError("find_primitive_root: q must be an odd prime, got " + std::to_string(q));
  }
  const auto factors = factorize(q - 1);
  for (u64 g = 2; g < q; ++g) {
    if (is_generator(g, q, factors)) return g;
  }
  throw std::logic_error("find_primitive_root: no generator found");
}

PrimeContext build_index_table(u64 q, u64 g, u64 max_modulus) {
  if (q > max_modulus) {
    throw MemoryCapError("index table: q = " + std::to_string(q) + " exceeds the cap " +
                         std::to_string(max_modulus));
  }
  if (q < 3 || !is_prime(q)) throw PreconditionError("index table: q must be an odd prime");
  auto factors = factorize(q - 1);
  if (!is_generator(g, q, factors)) {
    throw PreconditionError("index table: " + std::to_string(g) + " is not a primitive root mod " +
                            std::to_string(q));
  }
  std::vector<u32> ind(q, PrimeContext::kNoIndex);
  u64 power = 1;
  for (u64 i = 0; i < q - 1; ++i) {
    ind[power] = static_cast<u32>(i);
    power = power * g % q;
  }
  return PrimeContext(q, g, std::move(ind), std::move(factors));
}

PrimeContext PrimeContext::create(u64 q, u64 max_modulus) {
  if (q > max_modulus) {
    throw MemoryCapError("q = " + std::to_string(q) + " exceeds the modulus cap " +
                         std::to_string(max_modulus));
  }
  return build_index_table(q, find_primitive_root(q), max_modulus);
}

PrimeContext PrimeContext::from_table(u64 q, u64 g, std::vector<u32> table) {
  if (table.size() != q) throw PreconditionError("from_table: table must have q entries");
  return PrimeContext(q, g, std::move(table), factorize(q - 1));
}

std::vector<std::string> verify_index_table(const PrimeContext& ctx, u64 samples, u64 seed) {
  std::vector<std::string> problems;
  const u64 q = ctx.modulus();
  const auto table = ctx.table();
  if (table.size() != q) {
    problems.push_back("table size differs from q");
    return problems;
  }
  std::vector<bool> seen(q - 1, false);
  u64 bad = 0;
  for (u64 n = 1; n < q; ++n) {
    const u32 i = table[n];
    if (i >= q - 1 || seen[i]) {
      ++bad;
    } else {
      seen[i] = true;
    }
  }
  if (bad) problems.push_back("bijectivity violated: " + std::to_string(bad) + " bad entries");
  if (table[1] != 0) problems.push_back("ind[1] != 0");
  if (ctx.generator() % q == 0 || table[ctx.generator() % q] != 1) problems.push_back("ind[g] != 1");
  CounterRng rng(seed);
  u64 mismatches = 0;
  for (u64 s = 0; s < samples; ++s) {
    const u64 n = 1 + rng.below(q - 1);
    if (pow_mod(ctx.generator(), table[n], q) != n) ++mismatches;
  }
  if (mismatches) {
    problems.push_back("round trip g^ind[n] != n for " + std::to_string(mismatches) + " of " +
                       std::to_string(samples) + " samples");
  }
  return problems;
}

}  // namespace charsum
