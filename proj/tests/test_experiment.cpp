#include <filesystem>
#include <fstream>
#include <sstream>

#include "charsum/errors.hpp"
#include "charsum/experiment.hpp"
#include "doctest.h"

using namespace charsum;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("charsum_exp_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("modulus and character resolution") {
  CHECK(resolve_modulus("auto:10000000") == 10000019);
  CHECK(resolve_modulus("10007") == 10007);
  CHECK_THROWS_AS(resolve_modulus("10"), PreconditionError);
  CHECK_THROWS_AS(resolve_modulus("abc"), PreconditionError);
  CHECK(resolve_exponent(10007, "legendre") == 5003);
  CHECK(resolve_exponent(10000019, "order:7") == 10000018 / 7);
  CHECK_THROWS_AS(resolve_exponent(10000019, "order:3"), PreconditionError);
  CHECK(resolve_exponent(101, "17") == 17);
  CHECK_THROWS_AS(resolve_exponent(101, "100"), PreconditionError);
  const u64 k = resolve_exponent(10007, "random-nonreal:4");
  CHECK(k == resolve_exponent(10007, "random-nonreal:4"));
  CHECK(k != 5003);
}

TEST_CASE("formatting and hashing") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2.0) == "2");
  ExperimentConfig a;
  ExperimentConfig b = a;
  b.threads = 8;
  b.out = "elsewhere";
  CHECK(config_hash(a, 10007, 5003) == config_hash(b, 10007, 5003));
  b.seed = 2;
  CHECK(config_hash(a, 10007, 5003) != config_hash(b, 10007, 5003));
  CHECK(multiset_count_brute(2, 3) == 15);
}

TEST_CASE("rectangle and grid specs") {
  CHECK(parse_rectangles("auto", "selberg").size() == 1);
  CHECK(parse_rectangles("auto", "discrepancy").size() == 172);
  CHECK(parse_rectangles("named", "discrepancy").size() == 28);
  CHECK(parse_rectangles("0,1,0,1;-1,1,-2,2", "discrepancy").size() == 2);
  CHECK_THROWS_AS(parse_rectangles("0,1,0", "discrepancy"), PreconditionError);
  CHECK(parse_grid("-2:2:17").size() == 289);
}

TEST_CASE("runs are reproducible across thread counts") {
  ExperimentConfig cfg;
  cfg.q = "10007";
  cfg.character = "1";
  cfg.H = {10, 40};
  cfg.experiment = "all";
  cfg.grid = "-2:2:5";
  cfg.weil_samples = 20;
  std::ostringstream log;
  const auto first = scratch("t1");
  cfg.out = first.string();
  REQUIRE(run_experiment(cfg, log) == kExitOk);
  cfg.threads = 4;
  cfg.out = scratch("t4").string();
  REQUIRE(run_experiment(cfg, log) == kExitOk);
  for (const char* f : {"moments.csv", "weil.csv", "cfgrid.csv", "selberg.csv", "discrepancy.csv"}) {
    const auto a = slurp(first / f);
    CHECK_MESSAGE(!a.empty(), f);
    CHECK_MESSAGE(a == slurp(std::filesystem::path(cfg.out) / f), f);
  }
}

TEST_CASE("exit codes") {
  std::ostringstream log;
  ExperimentConfig cfg;
  cfg.out = scratch("codes").string();
  cfg.H = {10007};
  CHECK(run_experiment(cfg, log) == kExitPrecondition);
  cfg.H = {10};
  cfg.character = "order:3";
  CHECK(run_experiment(cfg, log) == kExitPrecondition);
  cfg.character = "legendre";
  cfg.experiment = "cf";
  CHECK(run_experiment(cfg, log) == kExitPrecondition);
  cfg.experiment = "moments";
  cfg.q = "2147483659";
  CHECK(run_experiment(cfg, log) == kExitMemoryCap);
  cfg.q = "10007";
  cfg.check = true;
  CHECK(run_experiment(cfg, log) == kExitOk);
  cfg.inject_fault = "corrupt-index";
  CHECK(run_experiment(cfg, log) == kExitCheckFailed);
  CHECK(log.str().find("bijectivity") != std::string::npos);
}
