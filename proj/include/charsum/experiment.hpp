#pragma once

/**
 * @file experiment.hpp
 * @brief Configuration resolution and orchestration behind the command-line
 * runner: one run resolves (q, chi), validates every precondition up front,
 * then streams the requested experiments and writes CSV tables plus a
 * manifest.
 */

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "charsum/characters.hpp"
#include "charsum/charfn.hpp"
#include "charsum/specfun.hpp"

namespace charsum {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitParse = 2,
  kExitPrecondition = 3,
  kExitMemoryCap = 4,
  kExitQuadrature = 5,
  kExitCheckFailed = 6,
};

struct ExperimentConfig {
  std::string q = "10007";
  std::string character = "legendre";
  std::vector<std::uint64_t> H{50};
  std::string experiment = "all";
  std::optional<int> N;
  std::optional<double> t;
  bool paper_preset = false;
  std::string rects = "auto";
  std::string grid = "-2:2:17";
  unsigned threads = 1;
  std::uint64_t seed = 1;
  std::string out = "charsum-out";
  bool dump = false;
  bool check = false;
  /// 0 selects clamp(2e8 / q, 10, 200).
  std::size_t weil_samples = 0;
  int moment_order = 4;
  /// Test hook: "corrupt-index" swaps two table entries before use.
  std::string inject_fault;
};

/// "N" or "auto:N" (smallest prime >= N). Throws PreconditionError when the
/// result is not prime.
std::uint64_t resolve_modulus(const std::string& spec);

/// Exponent k for "k", "legendre", "order:d" or "random-nonreal:seed".
std::uint64_t resolve_exponent(std::uint64_t q, const std::string& spec);

std::vector<Rectangle> parse_rectangles(const std::string& spec, const std::string& experiment);

/// "lo:hi:n" -> n x n uniform grid.
std::vector<CfNode> parse_grid(const std::string& spec);

/// %.17g.
std::string format_double(double v);

/// Canonical text of every output-affecting field (threads and paths excluded).
std::string canonical_config(const ExperimentConfig& cfg, std::uint64_t q, std::uint64_t k);

/// FNV-1a of canonical_config, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg, std::uint64_t q, std::uint64_t k);

/// Brute-force number of pairs of m-tuples from {1..H} equal as multisets.
std::uint64_t multiset_count_brute(int m, std::uint64_t H);

/// Runs the configured experiments; returns an ExitCode. Diagnostics go to `log`.
int run_experiment(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace charsum
