#include <cmath>
#include <complex>
#include <numbers>

#include "charsum/characters.hpp"
#include "charsum/errors.hpp"
#include "charsum/modarith.hpp"
#include "doctest.h"

using namespace charsum;

namespace {

std::shared_ptr<const PrimeContext> ctx_for(u64 q) {
  return std::make_shared<const PrimeContext>(PrimeContext::create(q));
}

// e(k ind(n) / (q-1)) straight from the definition.
std::complex<double> oracle(const PrimeContext& c, u64 k, u64 n) {
  if (n % c.modulus() == 0) return {};
  const double phase = 2.0 * std::numbers::pi * static_cast<double>(k * c.index(n) % (c.modulus() - 1)) /
                       static_cast<double>(c.modulus() - 1);
  return std::polar(1.0, phase);
}

}  // namespace

TEST_CASE("character values match the definition for every k mod 101") {
  const auto ctx = ctx_for(101);
  for (u64 k = 1; k <= 99; ++k) {
    const Character chi(ctx, k);
    for (u64 n = 0; n < 202; ++n) CHECK(std::abs(chi(n) - oracle(*ctx, k, n)) <= 1e-14);
  }
}

TEST_CASE("complete multiplicativity and periodicity") {
  const auto ctx = ctx_for(101);
  for (u64 k : {1ull, 7ull, 25ull, 50ull}) {
    const Character chi(ctx, k);
    for (u64 m = 0; m < 101; ++m) {
      CHECK(chi(m + 101) == chi(m));
      for (u64 n = 0; n < 101; ++n) CHECK(std::abs(chi(m * n) - chi(m) * chi(n)) <= 1e-13);
    }
  }
}

TEST_CASE("class labels are exact and multiplicative") {
  const auto ctx = ctx_for(10007);
  const Character chi(ctx, 3);
  CHECK(chi.value_class(0) == Character::kZeroClass);
  for (u64 m = 1; m < 200; ++m) {
    for (u64 n = 1; n < 50; ++n) {
      CHECK(chi.value_class(m * n) == (chi.value_class(m) + chi.value_class(n)) % chi.order());
    }
  }
}

TEST_CASE("Legendre symbol equals Euler's criterion") {
  const auto ctx = ctx_for(10007);
  const Character chi(ctx, legendre_exponent(*ctx));
  CHECK(chi.is_real());
  CHECK(chi.order() == 2);
  for (u64 n = 1; n < 10007; ++n) {
    const double euler = pow_mod(n, 5003, 10007) == 1 ? 1.0 : -1.0;
    CHECK(chi(n) == std::complex<double>(euler, 0.0));
  }
}

TEST_CASE("order is (q-1)/gcd(k, q-1)") {
  const auto ctx = ctx_for(101);
  CHECK(Character(ctx, 25).order() == 4);
  CHECK(Character(ctx, 1).order() == 100);
  CHECK(Character(ctx, 20).order() == 5);
}

TEST_CASE("orthogonality sum vanishes exactly") {
  const auto ctx = ctx_for(101);
  for (u64 k = 1; k <= 99; ++k) CHECK(orthogonality_check(Character(ctx, k)) == 0.0);
  const auto big = ctx_for(10007);
  CHECK(orthogonality_check(Character(big, 1)) == 0.0);
}

TEST_CASE("conjugate character is the exact complex conjugate") {
  const auto ctx = ctx_for(10007);
  for (u64 k : {1ull, 2ull, 3ull, 1234ull}) {
    const Character chi(ctx, k);
    const Character bar = chi.conjugate();
    CHECK(bar.exponent() == 10006 - k);
    for (u64 n = 0; n < 10007; n += 7) CHECK(bar(n) == std::conj(chi(n)));
  }
}

TEST_CASE("unit roots are exact at quarter turns and conjugate-symmetric") {
  CHECK(unit_root(0, 7) == std::complex<double>(1.0, 0.0));
  CHECK(unit_root(1, 4) == std::complex<double>(0.0, 1.0));
  CHECK(unit_root(2, 4) == std::complex<double>(-1.0, 0.0));
  CHECK(unit_root(3, 4) == std::complex<double>(0.0, -1.0));
  for (u64 d : {6ull, 100ull, 5003ull, 10006ull}) {
    for (u64 j = 1; j < d; j += 1 + d / 97) {
      CHECK(unit_root(d - j, d) == std::conj(unit_root(j, d)));
      CHECK(std::abs(unit_root(j, d) - std::polar(1.0, 2.0 * std::numbers::pi * j / d)) <= 1e-15);
    }
  }
}

TEST_CASE("principal and out-of-range exponents are rejected") {
  const auto ctx = ctx_for(101);
  CHECK_THROWS_AS(Character(ctx, 0), PreconditionError);
  CHECK_THROWS_AS(Character(ctx, 100), PreconditionError);
}
