#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "charsum/characters.hpp"
#include "charsum/errors.hpp"
#include "charsum/modarith.hpp"
#include "charsum/window.hpp"
#include "doctest.h"

using namespace charsum;

namespace {

std::shared_ptr<const PrimeContext> ctx_for(u64 q) {
  return std::make_shared<const PrimeContext>(PrimeContext::create(q));
}

WindowOptions raw() {
  WindowOptions o;
  o.normalization = Normalization::none;
  return o;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("charsum_test_" + name);
}

}  // namespace

TEST_CASE("q=7 Legendre series for H=2") {
  const auto ctx = ctx_for(7);
  const WindowSource src(Character(ctx, 3), 2, raw());
  const auto s = materialize(src);
  const double expect[7] = {2, 0, 0, 0, -2, -1, 1};
  for (int x = 0; x < 7; ++x) {
    CHECK(s.re[x] == expect[x]);
    CHECK(s.im[x] == 0.0);
  }
  CHECK(exact_second_moment(7, 2) == Fraction{10, 7});
  const auto sum = summarize_series(src);
  CHECK(sum.exact_sum_zero());
  CHECK(sum.second_moment() == doctest::Approx(10.0 / 7.0).epsilon(1e-15));
}

TEST_CASE("streamed sums match direct summation in both modes") {
  const auto ctx = ctx_for(101);
  for (u64 k : {1ull, 4ull, 25ull, 50ull}) {
    for (u64 H : {1ull, 2ull, 7ull, 50ull, 100ull}) {
      for (u64 limit : {0ull, 64ull, 1000ull}) {
        WindowOptions o = raw();
        o.exact_order_limit = limit;
        o.chunk_length = 16;
        o.resync_period = 5;
        const Character chi(ctx, k);
        const auto s = materialize(WindowSource(chi, H, o));
        for (u64 x = 0; x < 101; ++x) {
          const auto d = window_sum_direct(chi, H, x);
          CHECK(std::abs(std::complex<double>(s.re[x], s.im[x]) - d) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("exact identities: zero mean and second moment H(q-H)/q") {
  for (u64 q : {7ull, 101ull, 10007ull}) {
    const auto ctx = ctx_for(q);
    for (u64 k : std::vector<u64>{1, (q - 1) / 2, q - 2}) {
      for (u64 H : std::vector<u64>{1, 2, (q + 1) / 2, q - 1}) {
        const WindowSource src(Character(ctx, k), H, raw());
        const auto sum = summarize_series(src);
        const double expect = exact_second_moment(q, H).value();
        CHECK(std::fabs(sum.second_moment() - expect) <= 1e-10 * expect);
        if (src.exact_mode()) CHECK(sum.exact_sum_zero());
      }
    }
  }
}

TEST_CASE("chunking and threads do not change a single bit") {
  const auto ctx = ctx_for(10007);
  for (u64 k : {1ull, 2501ull}) {
    WindowOptions a;
    WindowOptions b;
    b.chunk_length = 1000;
    b.threads = 4;
    WindowOptions c = a;
    c.threads = 3;
    const Character chi(ctx, k);
    const auto sa = materialize(WindowSource(chi, 77, a));
    const auto sc = materialize(WindowSource(chi, 77, c));
    CHECK(sa.re == sc.re);
    CHECK(sa.im == sc.im);
    const auto sb = materialize(WindowSource(chi, 77, b));
    for (u64 x = 0; x < 10007; ++x) CHECK(std::fabs(sa.re[x] - sb.re[x]) <= 1e-12);
  }
}

TEST_CASE("natural normalization") {
  const auto ctx = ctx_for(101);
  CHECK(natural_normalization(Character(ctx, 50)) == Normalization::real);
  CHECK(natural_normalization(Character(ctx, 1)) == Normalization::complex);
  CHECK(normalization_scale(Normalization::real, 9) == 3.0);
  CHECK(normalization_scale(Normalization::complex, 8) == 2.0);
  CHECK(normalization_scale(Normalization::none, 8) == 1.0);
}

TEST_CASE("component variances are H/2 each on average for a non-real character") {
  const auto ctx = ctx_for(10007);
  const auto st = mean_and_component_variances(WindowSource(Character(ctx, 5002), 40, raw()));
  CHECK(st.var_re + st.var_im == doctest::Approx(exact_second_moment(10007, 40).value()).epsilon(1e-12));
}

TEST_CASE("binary dump round trip") {
  const auto ctx = ctx_for(10007);
  const Character chi(ctx, 3);
  const WindowSource src(chi, 20);
  const auto path = temp_path("dump.bin");
  write_dump(path, src);
  CHECK(std::filesystem::file_size(path) == kDumpHeaderBytes + 8 * 10007);
  {
    std::ifstream in(path, std::ios::binary);
    char magic[4];
    in.read(magic, 4);
    CHECK(std::memcmp(magic, "CSUM", 4) == 0);
  }
  const auto d = read_dump(path);
  CHECK(d.q == 10007);
  CHECK(d.H == 20);
  CHECK(d.k == 3);
  const auto s = materialize(src);
  for (u64 x = 0; x < 10007; ++x) {
    CHECK(d.re[x] == static_cast<float>(s.re[x]));
    CHECK(d.im[x] == static_cast<float>(s.im[x]));
  }
  {
    std::fstream io(path, std::ios::binary | std::ios::in | std::ios::out);
    io.write("XXXX", 4);
  }
  CHECK_THROWS_AS(read_dump(path), FormatError);
  std::filesystem::remove(path);
}

TEST_CASE("window length must satisfy 1 <= H < q") {
  const auto ctx = ctx_for(101);
  CHECK_THROWS_AS(WindowSource(Character(ctx, 1), 0), PreconditionError);
  CHECK_THROWS_AS(WindowSource(Character(ctx, 1), 101), PreconditionError);
}
