#include <cmath>
#include <numbers>

#include "charsum/distribution.hpp"
#include "charsum/errors.hpp"
#include "charsum/modarith.hpp"
#include "doctest.h"

using namespace charsum;

namespace {

std::shared_ptr<const PrimeContext> ctx_for(u64 q) {
  return std::make_shared<const PrimeContext>(PrimeContext::create(q));
}

}  // namespace

TEST_CASE("q=7 order-6 frequencies by hand") {
  const auto ctx = ctx_for(7);
  const Character chi(ctx, 1);
  const WindowSource src(chi, 2);
  const Rectangle R(-0.5, 1.2, -2.0, 0.3);
  int hits = 0;
  for (u64 x = 0; x < 7; ++x) {
    const auto S = window_sum_direct(chi, 2, x);  // sqrt(H/2) = 1
    hits += R.contains(S.real(), S.imag());
  }
  CHECK(rect_frequency(src, R) == hits / 7.0);
}

TEST_CASE("full support and disjoint partitions") {
  const auto ctx = ctx_for(10007);
  const WindowSource src(Character(ctx, 1), 100);
  CHECK(rect_frequency(src, Rectangle(-1e6, 1e6, -1e6, 1e6)) == 1.0);
  // Cells with edges off the lattice of attainable values and a tiny gap between them.
  std::vector<Rectangle> cells;
  const double e = 1e-9 * std::numbers::pi;
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) {
      cells.emplace_back(-16 + 2 * i + e, -14 + 2 * i - e, -16 + 2 * j + e, -14 + 2 * j - e);
    }
  }
  u64 total = 0;
  for (u64 c : rect_counts(src, cells)) total += c;
  CHECK(total <= 10007);
  CHECK(total >= 10000);
}

TEST_CASE("conjugate character mirrors the distribution exactly") {
  const auto family = default_rectangle_family();
  std::vector<Rectangle> mirrored;
  for (const auto& r : family) mirrored.emplace_back(r.a(), r.b(), -r.d(), -r.c());
  for (auto [q, k] : {std::pair{10007ull, 1ull}, std::pair{10007ull, 2ull}, std::pair{101ull, 25ull}}) {
    const Character chi(ctx_for(q), k);
    const auto a = rect_counts(WindowSource(chi, 40), family);
    const auto b = rect_counts(WindowSource(chi.conjugate(), 40), mirrored);
    CHECK(a == b);
  }
}

TEST_CASE("default family") {
  const auto f = default_rectangle_family();
  CHECK(f.size() == 28 + 144);
  for (const auto& r : f) {
    CHECK(r.a() >= -3.0);
    CHECK(r.d() <= 3.0);
    CHECK(std::fmod(r.a() * 2, 1.0) == 0.0);
  }
}

TEST_CASE("discrepancy report") {
  const auto ctx = ctx_for(10007);
  const WindowSource src(Character(ctx, 1), 50);
  const auto family = default_rectangle_family();
  const auto rep = discrepancy(src, family, "complex");
  REQUIRE(rep.rows.size() == family.size());
  for (const auto& row : rep.rows) {
    CHECK(row.empirical >= 0.0);
    CHECK(row.empirical <= 1.0);
    CHECK(std::fabs(row.gauss - gauss_rect_prob(row.rect)) <= 1e-10);
  }
  CHECK(rep.max_gap() < 0.1);
  CHECK(rep.exploratory);
  CHECK(thm1_bound(Rectangle(-1, 1, -1, 1), 100, 10000019) ==
        doctest::Approx(5.0 * (std::pow(100.0, -0.25) + std::sqrt(std::log(100.0) / std::log(10000019.0)))));
  CHECK(thm1_bound(Rectangle(-1, 1, -1, 1), 100, 10000019) == doctest::Approx(4.26).epsilon(0.01));
}

TEST_CASE("one-dimensional KS distance") {
  const auto ctx = ctx_for(10007);
  SUBCASE("H=1 is a three-point law far from normal") {
    const double ks = ks_1d_real(WindowSource(Character(ctx, 5003), 1));
    CHECK(std::fabs(ks - (0.5 - gauss_cdf(-1.0))) <= 2e-3);
  }
  SUBCASE("non-real series are rejected") {
    CHECK_THROWS_AS(ks_1d_real(WindowSource(Character(ctx, 1), 10)), PreconditionError);
  }
  CHECK(ks_distance_normal({0.0}) == 0.5);
  CHECK(ks_distance_normal({-1e9, 1e9}) == doctest::Approx(0.5));
}

TEST_CASE("exploratory preset beyond the established range") {
  const auto ctx = ctx_for(10007);
  const auto family = default_rectangle_family();
  const auto rep = conjecture1_preset(Character(ctx, 1), 100, family);
  CHECK(rep.exploratory);
  CHECK(rep.label.find("EXPLORATORY") == 0);
  CHECK_THROWS_AS(conjecture1_preset(Character(ctx, 1), 1000, family), PreconditionError);
}
