#include <cmath>
#include <filesystem>

#include "charsum/charfn.hpp"
#include "charsum/errors.hpp"
#include "charsum/modarith.hpp"
#include "doctest.h"

using namespace charsum;

namespace {

std::shared_ptr<const PrimeContext> ctx_for(u64 q) {
  return std::make_shared<const PrimeContext>(PrimeContext::create(q));
}

std::complex<double> direct_cf(const NormalizedSeries& s, double u, double v) {
  std::complex<double> acc;
  for (u64 x = 0; x < s.q; ++x) acc += std::polar(1.0, u * s.re[x] + v * s.im[x]);
  return acc / static_cast<double>(s.q);
}

}  // namespace

TEST_CASE("q=7 order-6 character against direct summation") {
  const auto ctx = ctx_for(7);
  const Character chi(ctx, 1);
  const WindowSource src(chi, 2);
  const auto s = materialize(src);
  const auto g = empirical_cf(src, {{0.7, -1.3}}, 1);
  std::complex<double> brute;
  const double scale = 1.0;  // sqrt(H/2) with H = 2
  for (u64 x = 0; x < 7; ++x) {
    const auto S = window_sum_direct(chi, 2, x) / scale;
    brute += std::polar(1.0, 0.7 * S.real() - 1.3 * S.imag());
  }
  CHECK(std::abs(g.entries[0].value - brute / 7.0) <= 1e-15);
  CHECK(g.entries[0].gauss == doctest::Approx(std::exp(-(0.49 + 1.69) / 2)));
}

TEST_CASE("grid invariants at q=10007") {
  const auto ctx = ctx_for(10007);
  const WindowSource src(Character(ctx, 1), 30);
  const auto nodes = uniform_grid(-2.0, 2.0, 17);
  const auto g = empirical_cf(src, nodes, 1);
  const auto s = materialize(src);
  REQUIRE(g.entries.size() == 289);
  for (std::size_t i = 0; i < g.entries.size(); ++i) {
    const auto& e = g.entries[i];
    CHECK(std::abs(e.value) <= 1.0 + 1e-15);
    if (e.node.u == 0.0 && e.node.v == 0.0) CHECK(e.value == std::complex<double>(1.0, 0.0));
    const auto& mirror = g.entries[288 - i];
    CHECK(mirror.node.u == -e.node.u);
    CHECK(std::abs(mirror.value - std::conj(e.value)) <= 1e-14);
  }
  for (std::size_t i : {0u, 40u, 144u, 200u}) {
    CHECK(std::abs(g.entries[i].value - direct_cf(s, nodes[i].u, nodes[i].v)) <= 1e-12);
  }
}

TEST_CASE("factorized grid equals scattered evaluation") {
  const auto ctx = ctx_for(10007);
  const WindowSource src(Character(ctx, 3), 12);
  const auto grid = empirical_cf(src, uniform_grid(-1.0, 1.5, 5), 1);
  for (const auto& e : grid.entries) {
    const auto single = empirical_cf(src, {e.node, {0.123, 0.456}}, 1);
    CHECK(std::abs(single.entries[0].value - e.value) <= 1e-13);
  }
}

TEST_CASE("Legendre: Phi(u, v) = Phi(u, 0) exactly") {
  const auto ctx = ctx_for(10007);
  const WindowSource src(Character(ctx, 5003), 40);
  const auto g = empirical_cf(src, uniform_grid(-2.0, 2.0, 9), 1);
  for (std::size_t i = 0; i < 9; ++i) {
    const auto base = g.entries[i * 9 + 4].value;  // v = 0 column
    for (std::size_t j = 0; j < 9; ++j) CHECK(g.entries[i * 9 + j].value == base);
  }
}

TEST_CASE("thread count does not change a single bit") {
  const auto ctx = ctx_for(10007);
  WindowOptions o;
  o.chunk_length = 1024;
  const WindowSource src(Character(ctx, 17), 25, o);
  const auto nodes = uniform_grid(-2.0, 2.0, 7);
  const auto a = empirical_cf(src, nodes, 1);
  const auto b = empirical_cf(src, nodes, 4);
  for (std::size_t i = 0; i < nodes.size(); ++i) CHECK(a.entries[i].value == b.entries[i].value);
}

TEST_CASE("dump and stream agree to float rounding") {
  const auto ctx = ctx_for(10007);
  const WindowSource src(Character(ctx, 2), 50);
  const auto path = std::filesystem::temp_directory_path() / "charsum_test_cf.bin";
  write_dump(path, src);
  const auto dump = read_dump(path);
  std::filesystem::remove(path);
  const auto nodes = uniform_grid(-2.0, 2.0, 5);
  const auto a = empirical_cf(src, nodes, 1);
  const auto b = empirical_cf(dump, nodes, 1);
  for (std::size_t i = 0; i < nodes.size(); ++i) CHECK(std::abs(a.entries[i].value - b.entries[i].value) <= 1e-6);
}

TEST_CASE("cost guard") {
  const auto ctx = ctx_for(10007);
  const WindowSource src(Character(ctx, 2), 50);
  CHECK_THROWS_AS(empirical_cf(src, uniform_grid(-1, 1, 10), 1, 1e5), PreconditionError);
}

TEST_CASE("factorized contraction equals the evaluate-then-contract default") {
  const auto ctx = ctx_for(10007);
  auto series = std::make_shared<const NormalizedSeries>(materialize(WindowSource(Character(ctx, 9), 20)));
  const EmpiricalCf cf(series);
  const std::vector<double> u = {0.1, -0.5, 1.2}, v = {0.3, 2.0};
  const std::vector<std::complex<double>> a = {{1, 0}, {0.5, -0.2}, {0, 1}}, b = {{0.3, 0.3}, {-1, 0.1}};
  const TensorContraction job{u, a, v, b};
  const auto fast = cf.contract({&job, 1});
  const auto slow = cf.CfProvider::contract({&job, 1});
  CHECK(std::abs(fast[0] - slow[0]) <= 1e-13);
}

TEST_CASE("Gaussian and model providers") {
  const GaussianCf g;
  const CfNode n[] = {{0, 0}, {1, 1}};
  const auto gv = g.evaluate(n);
  CHECK(gv[0] == 1.0);
  CHECK(gv[1].real() == doctest::Approx(std::exp(-1.0)));
  const ModelCf m(100);
  CHECK(m.evaluate(n)[0] == 1.0);
}

TEST_CASE("theorem report") {
  const auto ctx = ctx_for(10007);
  const WindowSource src(Character(ctx, 2), 10);
  const auto grid = empirical_cf(src, uniform_grid(-2.0, 2.0, 5), 1);
  CHECK_THROWS_AS(theorem31_report(grid, 0, 10, 10007), PreconditionError);
  CHECK_THROWS_AS(theorem31_report(grid, 9, 10, 10007), PreconditionError);
  const auto rep = theorem31_report(grid, 1, 10, 10007);
  CHECK(rep.rows[12].gap == 0.0);  // node (0,0)
  CHECK(rep.n_admissible == (20.0 * std::log(10.0) <= std::log(10007.0)));
  CHECK(rep.rows[12].budget == doctest::Approx(10.0 * std::pow(10007.0, -0.25)));
  CHECK(truncation_budget(1.0, 0.0, 1) == 2.0);
}

TEST_CASE("truncated expansion F_N") {
  const auto ctx = ctx_for(10007);
  const WindowSource src(Character(ctx, 2), 10);
  const auto table = prop22_compare(src, moment_indices(2));
  CHECK_THROWS_AS(truncated_cf_FN(table, 2, 0.1, 0.1, 10), PreconditionError);
  CHECK(truncated_cf_FN(table, 1, 0.0, 0.0, 10) == std::complex<double>(1.0, 0.0));
  const auto f1 = truncated_cf_FN(table, 1, 0.3, 0.2, 10);
  CHECK(std::abs(f1 - 1.0) <= 0.05);
}
