// Command-line runner for the character-sum experiments.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "charsum/experiment.hpp"

int main(int argc, char** argv) {
  charsum::ExperimentConfig cfg;
  CLI::App app{"Distribution of short Dirichlet character sums"};
  app.set_config("--config", "", "Flat key=value file; command-line flags win");

  std::string H = "50";
  std::string N, t;
  app.add_option("--q", cfg.q, "Prime modulus, or auto:N for the smallest prime >= N")->capture_default_str();
  app.add_option("--char", cfg.character, "Exponent k | legendre | order:d | random-nonreal:seed")
      ->capture_default_str();
  app.add_option("--H", H, "Comma-separated window lengths")->capture_default_str();
  app.add_option("--experiment", cfg.experiment,
                 "moments | weil | cf | selberg | discrepancy | ks1d | conjecture1 | all (comma-separated)")
      ->capture_default_str();
  app.add_option("--N", N, "Truncation order for the characteristic-function budget");
  app.add_option("--t", t, "Smoothing parameter");
  app.add_flag("--paper-preset", cfg.paper_preset, "Derive N from the preset (t always defaults to it)");
  app.add_option("--rects", cfg.rects, "auto | default | named | cells | unit | a,b,c,d;...")->capture_default_str();
  app.add_option("--grid", cfg.grid, "Characteristic-function grid lo:hi:n")->capture_default_str();
  app.add_option("--threads", cfg.threads, "Worker threads (0 = hardware)")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Seed for sampled checks")->capture_default_str();
  app.add_option("--out", cfg.out, "Output directory")->capture_default_str();
  app.add_flag("--dump", cfg.dump, "Write the normalized series as a binary dump per H");
  app.add_flag("--check", cfg.check, "Evaluate pass/fail checks; exit 6 on any failure");
  app.add_option("--weil-samples", cfg.weil_samples, "Off-diagonal tuples per H (0 = auto)");
  app.add_option("--moment-order", cfg.moment_order, "Largest r + s in moments.csv")->capture_default_str();
  app.add_option("--inject-fault", cfg.inject_fault, "Test hook: corrupt-index")->group("");

  try {
    app.parse(argc, argv);
    cfg.H.clear();
    std::size_t pos = 0;
    while (pos <= H.size()) {
      const std::size_t next = std::min(H.find(',', pos), H.size());
      cfg.H.push_back(std::stoull(H.substr(pos, next - pos)));
      pos = next + 1;
    }
    if (!N.empty()) cfg.N = std::stoi(N);
    if (!t.empty()) cfg.t = std::stod(t);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : charsum::kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return charsum::kExitParse;
  }
  return charsum::run_experiment(cfg, std::cerr);
}
