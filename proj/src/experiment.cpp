#include "charsum/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "charsum/distribution.hpp"
#include "charsum/errors.hpp"
#include "charsum/modarith.hpp"
#include "charsum/moments.hpp"
#include "charsum/random.hpp"
#include "charsum/selberg.hpp"
#include "charsum/window.hpp"

namespace charsum {

namespace {

const std::set<std::string> kExperiments = {"moments", "weil",     "cf",          "selberg",
                                            "discrepancy", "ks1d", "conjecture1", "all"};

std::uint64_t parse_u64(const std::string& s, const char* what) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty() || s[0] == '-') {
    throw PreconditionError(std::string(what) + ": not a non-negative integer: '" + s + "'");
  }
  return v;
}

double parse_double(const std::string& s, const char* what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty()) throw PreconditionError(std::string(what) + ": not a number: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

std::string join_u64(const std::vector<u64>& v, char sep = ' ') {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(v[i]);
  }
  return s;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& hash, const std::string& header)
      : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open " + path.string());
    out_ << "# config_hash=" << hash << '\n' << header << '\n';
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

std::string b(bool v) { return v ? "1" : "0"; }
std::string f(double v) { return format_double(v); }

struct Check {
  std::string name;
  std::string value;
  bool pass;
};

struct Run {
  Run(const ExperimentConfig& c, std::ostream& l) : cfg(c), log(l) {}
  const ExperimentConfig& cfg;
  std::ostream& log;
  u64 q = 0;
  u64 k = 0;
  std::shared_ptr<const PrimeContext> ctx;
  std::optional<Character> chi;
  std::string hash;
  std::filesystem::path out;
  std::set<std::string> experiments;
  std::vector<std::pair<std::string, double>> timings;
  std::vector<Check> checks;
  std::vector<std::string> outputs;
  std::map<std::string, std::unique_ptr<CsvWriter>> csv;

  CsvWriter& table(const std::string& name, const std::string& header) {
    auto& w = csv[name];
    if (!w) {
      w = std::make_unique<CsvWriter>(out / name, hash, header);
      outputs.push_back(name);
    }
    return *w;
  }

  template <class Fn>
  void phase(const std::string& name, Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    timings.emplace_back(name, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }

  void check(std::string name, std::string value, bool pass) {
    log << (pass ? "PASS " : "FAIL ") << name << " " << value << '\n';
    checks.push_back({std::move(name), std::move(value), pass});
  }
};

WindowSource make_source(const Run& run, u64 H) {
  WindowOptions opts;
  opts.threads = run.cfg.threads;
  return WindowSource(*run.chi, H, opts);
}

std::size_t weil_samples(const ExperimentConfig& cfg, u64 q) {
  if (cfg.weil_samples) return cfg.weil_samples;
  return static_cast<std::size_t>(std::clamp(2e8 / static_cast<double>(q), 10.0, 200.0));
}

void run_moments(Run& run, u64 H) {
  auto source = make_source(run, H);
  const auto table = prop22_compare(source, moment_indices(run.cfg.moment_order));
  auto& w = run.table("moments.csv", "H,r,s,empirical,model,diff,bound,ratio,hypothesis_ok");
  for (const auto& e : table.entries) {
    w.row({std::to_string(H), std::to_string(e.r), std::to_string(e.s), f(e.empirical), f(e.model), f(e.diff),
           f(e.bound), f(e.ratio), b(e.hypothesis_ok)});
  }
}

void run_weil(Run& run, u64 H) {
  auto& w = run.table("weil.csv", "H,k,l,y,z,sum_re,sum_im,abs_sum,bound,diagonal,degenerate,ok");
  const std::size_t total = weil_samples(run.cfg, run.q);
  std::vector<std::pair<int, int>> pairs;
  for (int n = 2; n <= 6; ++n) {
    for (int kk = 1; kk < n; ++kk) {
      if (kk == n - kk && H == 1) continue;
      pairs.emplace_back(kk, n - kk);
    }
  }
  std::size_t violations = 0, diag_bad = 0, checked = 0;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [kk, ll] = pairs[p];
    const std::size_t samples = total / pairs.size() + (p < total % pairs.size() ? 1 : 0);
    const auto rep = weil_check(*run.chi, samples, kk, ll, H, run.cfg.seed);
    for (const auto& c : rep.checks) {
      const bool ok = c.degenerate || std::abs(c.sum) <= c.bound;
      w.row({std::to_string(H), std::to_string(kk), std::to_string(ll), join_u64(c.y), join_u64(c.z),
             f(c.sum.real()), f(c.sum.imag()), f(std::abs(c.sum)), f(c.bound), "0", b(c.degenerate), b(ok)});
    }
    violations += rep.violations;
    checked += rep.off_diagonal;
    if (kk == ll) {
      // Diagonal: z a rotation of y; the sum counts the x where no factor vanishes.
      CounterRng rng(run.cfg.seed, 0xd1a9 + static_cast<u64>(kk));
      std::vector<u64> y(kk);
      for (auto& v : y) v = 1 + rng.below(H);
      std::vector<u64> z = y;
      std::rotate(z.begin(), z.begin() + 1, z.end());
      const auto c = shifted_product_sum(*run.chi, y, z, run.cfg.threads);
      const std::set<u64> distinct(y.begin(), y.end());
      const double expect = static_cast<double>(run.q - distinct.size());
      const bool ok = c.sum == std::complex<double>(expect, 0.0);
      diag_bad += !ok;
      w.row({std::to_string(H), std::to_string(kk), std::to_string(ll), join_u64(y), join_u64(z), f(c.sum.real()),
             f(c.sum.imag()), f(std::abs(c.sum)), f(expect), "1", "0", b(ok)});
    }
  }
  if (run.cfg.check) {
    run.check("weil_bound_H" + std::to_string(H), std::to_string(violations) + "/" + std::to_string(checked),
              violations == 0);
    run.check("weil_diagonal_exact_H" + std::to_string(H), std::to_string(diag_bad) + " mismatches", diag_bad == 0);
  }
}

int cf_order(const Run& run, u64 H) {
  if (run.cfg.N) return *run.cfg.N;
  if (run.cfg.paper_preset && H >= 2) return std::clamp(paper_preset_t_N(run.q, H).N, 1, 8);
  return 1;
}

double selberg_t(const Run& run, u64 H) {
  if (run.cfg.t) return *run.cfg.t;
  return paper_preset_t_N(run.q, H).t;
}

void run_cf(Run& run, u64 H) {
  auto source = make_source(run, H);
  const auto nodes = parse_grid(run.cfg.grid);
  const auto grid = empirical_cf(source, nodes, run.cfg.threads);
  const int N = cf_order(run, H);
  const auto rep = theorem31_report(grid, N, H, run.q);
  auto& w = run.table("cfgrid.csv", "H,N,u,v,re_cf,im_cf,gauss_ref,gap,budget,hypothesis_ok");
  std::size_t over = 0;
  for (const auto& r : rep.rows) {
    over += r.gap > r.budget;
    w.row({std::to_string(H), std::to_string(N), f(r.node.u), f(r.node.v), f(r.value.real()), f(r.value.imag()),
           f(r.gauss), f(r.gap), f(r.budget), b(r.hypothesis_ok)});
  }
  if (run.cfg.check) {
    run.check("cf_budget_H" + std::to_string(H), "max_gap=" + f(rep.max_gap()) + " over=" + std::to_string(over),
              over == 0);
  }
}

void run_selberg(Run& run, u64 H, const std::vector<Rectangle>& rects) {
  auto source = make_source(run, H);
  auto series = std::make_shared<const NormalizedSeries>(materialize(source));
  EmpiricalCf cf(series, run.cfg.threads);
  const double t = selberg_t(run, H);
  auto& w = run.table("selberg.csv",
                      "H,rect_a,rect_b,rect_c,rect_d,t,smoothed,direct,gap,fejer_budget,fejer_direct,within_slack");
  const auto counts = rect_counts(*series, rects, run.cfg.threads);
  std::size_t bad = 0;
  for (std::size_t i = 0; i < rects.size(); ++i) {
    const auto& R = rects[i];
    const double smoothed = smoothed_rect_frequency(cf, R, t);
    const double direct = static_cast<double>(counts[i]) / static_cast<double>(run.q);
    const double budget = fejer_rect_budget(cf, R, t);
    const double oracle = fejer_direct(*series, t, R.a(), Axis::real, run.cfg.threads) +
                          fejer_direct(*series, t, R.b(), Axis::real, run.cfg.threads) +
                          fejer_direct(*series, t, R.c(), Axis::imag, run.cfg.threads) +
                          fejer_direct(*series, t, R.d(), Axis::imag, run.cfg.threads);
    const double gap = std::fabs(smoothed - direct);
    const bool ok = gap <= 3.0 * budget;
    bad += !ok;
    w.row({std::to_string(H), f(R.a()), f(R.b()), f(R.c()), f(R.d()), f(t), f(smoothed), f(direct), f(gap),
           f(budget), f(oracle), b(ok)});
  }
  if (run.cfg.check) run.check("selberg_slack_H" + std::to_string(H), std::to_string(bad) + " outside", bad == 0);
}

void write_discrepancy(CsvWriter& w, const DiscrepancyReport& rep) {
  for (const auto& r : rep.rows) {
    w.row({std::to_string(rep.H), f(r.rect.a()), f(r.rect.b()), f(r.rect.c()), f(r.rect.d()), f(r.mu2),
           f(r.empirical), f(r.gauss), f(r.gap), f(r.bound), b(rep.exploratory)});
  }
}

const char* kDiscrepancyHeader =
    "H,rect_a,rect_b,rect_c,rect_d,mu2,emp_freq,gauss_prob,gap,thm1_bound,exploratory_flag";

void run_discrepancy(Run& run, u64 H, const std::vector<Rectangle>& rects) {
  auto source = make_source(run, H);
  const auto rep = discrepancy(source, rects, to_string(source.normalization()), run.cfg.threads);
  write_discrepancy(run.table("discrepancy.csv", kDiscrepancyHeader), rep);
  run.log << "discrepancy H=" << H << " max_gap=" << f(rep.max_gap()) << " mean_gap=" << f(rep.mean_gap())
          << '\n';
}

void run_conjecture1(Run& run, u64 H, const std::vector<Rectangle>& rects) {
  const auto rep = conjecture1_preset(*run.chi, H, rects, run.cfg.threads);
  write_discrepancy(run.table("conjecture1.csv", kDiscrepancyHeader), rep);
}

struct IntervalSink {
  std::vector<std::pair<double, double>> iv;
  using partial_type = std::vector<u64>;
  partial_type init() const { return partial_type(iv.size(), 0); }
  void consume(partial_type& acc, const SeriesBlock& blk) const {
    for (double x : blk.re) {
      for (std::size_t i = 0; i < iv.size(); ++i) acc[i] += x >= iv[i].first && x <= iv[i].second;
    }
  }
  void merge(partial_type& a, const partial_type& o) const {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += o[i];
  }
};

void run_ks1d(Run& run, u64 H) {
  auto source = make_source(run, H);
  const double ks = ks_1d_real(source);
  run.table("ks1d.csv", "H,ks,points").row({std::to_string(H), f(ks), std::to_string(run.q)});
  // Interval frequencies on the real line, in the rectangle table layout.
  IntervalSink sink;
  for (double h : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) sink.iv.emplace_back(-h, h);
  for (int i = 0; i < 12; ++i) sink.iv.emplace_back(-3.0 + 0.5 * i, -2.5 + 0.5 * i);
  const auto counts = reduce_series(source, sink, run.cfg.threads);
  auto& w = run.table("discrepancy.csv", kDiscrepancyHeader);
  const bool exploratory = outside_theorem_range(H, run.q);
  const double rate = std::pow(static_cast<double>(H), -0.25) +
                      std::sqrt(std::log(static_cast<double>(H)) / std::log(static_cast<double>(run.q)));
  for (std::size_t i = 0; i < sink.iv.size(); ++i) {
    const auto [a, bb] = sink.iv[i];
    const double emp = static_cast<double>(counts[i]) / static_cast<double>(run.q);
    const double g = gauss_interval_prob(a, bb);
    w.row({std::to_string(H), f(a), f(bb), "0", "0", "0", f(emp), f(g), f(std::fabs(emp - g)), f(rate),
           b(exploratory)});
  }
  run.log << "ks1d H=" << H << " ks=" << f(ks) << '\n';
}

void run_checks(Run& run) {
  const auto violations = verify_index_table(*run.ctx, 1000, run.cfg.seed);
  run.check("index_table", violations.empty() ? "sound" : violations.front(), violations.empty());
  if (!violations.empty()) return;
  for (u64 H : run.cfg.H) {
    auto source = make_source(run, H);
    const auto summary = summarize_series(source);
    const auto exact = exact_second_moment(run.q, H);
    const double expect = static_cast<double>(exact.numerator) / static_cast<double>(exact.denominator);
    const double rel = std::fabs(summary.second_moment() - expect) / expect;
    if (summary.exact_mode) {
      run.check("sum_zero_H" + std::to_string(H), summary.exact_sum_zero() ? "exact" : "nonzero",
                summary.exact_sum_zero());
    }
    run.check("second_moment_H" + std::to_string(H), "rel_err=" + f(rel), rel <= 1e-10);
  }
  bool ok = true;
  for (int m = 1; m <= 4; ++m) {
    for (u64 H = 1; H <= 6; ++H) ok &= multiset_count_B(m, H) == BigInt(multiset_count_brute(m, H));
  }
  run.check("multiset_count_oracle", ok ? "m<=4,H<=6" : "mismatch", ok);
}

std::set<std::string> expand_experiments(const std::string& spec, bool real) {
  std::set<std::string> out;
  for (const auto& e : split(spec, ',')) {
    if (!kExperiments.count(e)) throw PreconditionError("unknown experiment '" + e + "'");
    if (e == "all") {
      out.insert({"moments", "weil"});
      if (real) {
        out.insert("ks1d");
      } else {
        out.insert({"cf", "selberg", "discrepancy"});
      }
    } else {
      out.insert(e);
    }
  }
  return out;
}

void write_manifest(const Run& run, const std::vector<std::pair<std::string, std::string>>& extra) {
  std::ofstream m(run.out / "manifest.txt", std::ios::binary);
  m << "version=" << CHARSUM_VERSION << '\n';
  m << "config_hash=" << run.hash << '\n';
  for (const auto& [k, v] : extra) m << k << '=' << v << '\n';
  for (const auto& [name, sec] : run.timings) m << "phase_seconds." << name << '=' << format_double(sec) << '\n';
  std::string outs;
  for (const auto& o : run.outputs) outs += (outs.empty() ? "" : ",") + o;
  m << "outputs=" << outs << '\n';
  if (run.cfg.check) {
    std::size_t failed = 0;
    for (const auto& c : run.checks) failed += !c.pass;
    m << "checks_failed=" << failed << '\n';
  }
}

}  // namespace

std::uint64_t resolve_modulus(const std::string& spec) {
  u64 q = 0;
  if (spec.rfind("auto:", 0) == 0) {
    const u64 n = parse_u64(spec.substr(5), "q");
    if (n >= (u64{1} << 62)) throw PreconditionError("q: auto value too large");
    q = next_prime(std::max<u64>(n, 3));
  } else {
    q = parse_u64(spec, "q");
    if (q < 3 || !is_prime(q)) throw PreconditionError("q=" + spec + " is not an odd prime");
  }
  return q;
}

std::uint64_t resolve_exponent(std::uint64_t q, const std::string& spec) {
  const u64 n = q - 1;
  if (spec == "legendre") return n / 2;
  if (spec.rfind("order:", 0) == 0) {
    const u64 d = parse_u64(spec.substr(6), "order");
    if (d < 2 || n % d != 0) {
      throw PreconditionError("no character of order " + spec.substr(6) + " modulo " + std::to_string(q) +
                              " (order must divide q-1 = " + std::to_string(n) + ")");
    }
    return n / d;
  }
  if (spec.rfind("random-nonreal:", 0) == 0) {
    if (q < 5) throw PreconditionError("no non-real character modulo " + std::to_string(q));
    CounterRng rng(parse_u64(spec.substr(15), "seed"), 0x63686172);
    for (;;) {
      const u64 k = 1 + rng.below(n - 1);
      if (2 * k != n) return k;
    }
  }
  const u64 k = parse_u64(spec, "character");
  if (k < 1 || k > q - 2) throw PreconditionError("character exponent must lie in [1, q-2]");
  return k;
}

std::vector<Rectangle> parse_rectangles(const std::string& spec, const std::string& experiment) {
  const auto family = default_rectangle_family();
  if (spec == "auto") {
    if (experiment == "selberg") return {Rectangle(-1, 1, -1, 1)};
    return family;
  }
  if (spec == "default") return family;
  if (spec == "named") return {family.begin(), family.begin() + 28};
  if (spec == "cells") return {family.begin() + 28, family.end()};
  if (spec == "unit") return {Rectangle(-1, 1, -1, 1)};
  std::vector<Rectangle> out;
  for (const auto& item : split(spec, ';')) {
    const auto c = split(item, ',');
    if (c.size() != 4) throw PreconditionError("rectangle '" + item + "' needs four corners a,b,c,d");
    out.emplace_back(parse_double(c[0], "rect"), parse_double(c[1], "rect"), parse_double(c[2], "rect"),
                     parse_double(c[3], "rect"));
  }
  if (out.empty()) throw PreconditionError("empty rectangle list");
  return out;
}

std::vector<CfNode> parse_grid(const std::string& spec) {
  const auto p = split(spec, ':');
  if (p.size() != 3) throw PreconditionError("grid must be lo:hi:n");
  return uniform_grid(parse_double(p[0], "grid"), parse_double(p[1], "grid"), parse_u64(p[2], "grid"));
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string canonical_config(const ExperimentConfig& cfg, std::uint64_t q, std::uint64_t k) {
  std::ostringstream s;
  s << "q=" << q << ";k=" << k << ";H=" << join_u64(cfg.H, ',') << ";experiment=" << cfg.experiment
    << ";N=" << (cfg.N ? std::to_string(*cfg.N) : "-") << ";t=" << (cfg.t ? format_double(*cfg.t) : "-")
    << ";preset=" << cfg.paper_preset << ";rects=" << cfg.rects << ";grid=" << cfg.grid << ";seed=" << cfg.seed
    << ";dump=" << cfg.dump << ";check=" << cfg.check << ";weil_samples=" << weil_samples(cfg, q)
    << ";moment_order=" << cfg.moment_order << ";fault=" << cfg.inject_fault;
  return s.str();
}

std::string config_hash(const ExperimentConfig& cfg, std::uint64_t q, std::uint64_t k) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : canonical_config(cfg, q, k)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t multiset_count_brute(int m, std::uint64_t H) {
  std::map<std::vector<u64>, std::uint64_t> freq;
  std::vector<u64> t(static_cast<std::size_t>(m), 1);
  for (;;) {
    auto sorted = t;
    std::sort(sorted.begin(), sorted.end());
    ++freq[sorted];
    int i = m - 1;
    while (i >= 0 && t[i] == H) t[i--] = 1;
    if (i < 0) break;
    ++t[i];
  }
  std::uint64_t total = 0;
  for (const auto& [key, c] : freq) total += c * c;
  return total;
}

int run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
  Run run(cfg, log);
  try {
    // Everything below up to the index table is O(1) or O(log q) validation.
    run.q = resolve_modulus(cfg.q);
    run.k = resolve_exponent(run.q, cfg.character);
    if (run.q > PrimeContext::kDefaultMaxModulus) {
      throw MemoryCapError("q=" + std::to_string(run.q) + " exceeds the index-table cap");
    }
    const u64 d = (run.q - 1) / std::gcd(run.k, run.q - 1);
    const bool real = d == 2;
    if (cfg.H.empty()) throw PreconditionError("no window lengths given");
    for (u64 H : cfg.H) {
      if (H < 1 || H >= run.q) throw PreconditionError("window length H=" + std::to_string(H) + " must satisfy 1 <= H < q");
    }
    run.experiments = expand_experiments(cfg.experiment, real);
    for (const char* e : {"cf", "selberg", "discrepancy"}) {
      if (run.experiments.count(e) && real) throw PreconditionError(std::string(e) + " needs a non-real character");
    }
    if (run.experiments.count("ks1d") && !real) throw PreconditionError("ks1d needs the real (Legendre) character");
    if (run.experiments.count("conjecture1")) {
      for (u64 H : cfg.H) {
        if (static_cast<double>(H) > static_cast<double>(run.q) / (10.0 * std::log(static_cast<double>(run.q)))) {
          throw PreconditionError("conjecture1 needs H <= q / (10 log q)");
        }
      }
    }
    if (cfg.N && (*cfg.N < 1 || *cfg.N > 8)) throw PreconditionError("N must lie in [1, 8]");
    if (cfg.t && !(*cfg.t > 0.0)) throw PreconditionError("t must be positive");
    if (cfg.moment_order < 1 || cfg.moment_order > 8) throw PreconditionError("moment order must lie in [1, 8]");
    if (run.experiments.count("selberg") && !cfg.t) {
      for (u64 H : cfg.H) {
        if (H < 2) throw PreconditionError("the preset smoothing parameter needs H >= 2");
      }
    }
    const auto nodes = parse_grid(cfg.grid);
    std::map<std::string, std::vector<Rectangle>> rects;
    for (const char* e : {"selberg", "discrepancy", "conjecture1"}) {
      if (run.experiments.count(e)) rects[e] = parse_rectangles(cfg.rects, e);
    }
    run.hash = config_hash(cfg, run.q, run.k);
    run.out = cfg.out;
    std::filesystem::create_directories(run.out);

    run.phase("index_table", [&] {
      auto ctx = PrimeContext::create(run.q);
      if (cfg.inject_fault == "corrupt-index") {
        std::vector<u32> table(ctx.table().begin(), ctx.table().end());
        table[2] = table[3];
        ctx = PrimeContext::from_table(run.q, ctx.generator(), std::move(table));
      } else if (!cfg.inject_fault.empty()) {
        throw PreconditionError("unknown fault '" + cfg.inject_fault + "'");
      }
      run.ctx = std::make_shared<const PrimeContext>(std::move(ctx));
      run.chi.emplace(run.ctx, run.k);
    });
    log << "q=" << run.q << " g=" << run.ctx->generator() << " k=" << run.k << " d=" << d
        << " config_hash=" << run.hash << '\n';

    if (cfg.check) run.phase("checks", [&] { run_checks(run); });
    const bool table_sound = !cfg.check || run.checks.empty() || run.checks.front().pass;
    if (table_sound) {
      for (u64 H : cfg.H) {
        const std::string tag = "_H" + std::to_string(H);
        if (cfg.dump) {
          run.phase("dump" + tag, [&] {
            const std::string name = "series_H" + std::to_string(H) + ".bin";
            write_dump(run.out / name, make_source(run, H));
            run.outputs.push_back(name);
          });
        }
        if (run.experiments.count("moments")) run.phase("moments" + tag, [&] { run_moments(run, H); });
        if (run.experiments.count("weil")) run.phase("weil" + tag, [&] { run_weil(run, H); });
        if (run.experiments.count("cf")) run.phase("cf" + tag, [&] { run_cf(run, H); });
        if (run.experiments.count("selberg")) run.phase("selberg" + tag, [&] { run_selberg(run, H, rects["selberg"]); });
        if (run.experiments.count("discrepancy")) {
          run.phase("discrepancy" + tag, [&] { run_discrepancy(run, H, rects["discrepancy"]); });
        }
        if (run.experiments.count("ks1d")) run.phase("ks1d" + tag, [&] { run_ks1d(run, H); });
        if (run.experiments.count("conjecture1")) {
          run.phase("conjecture1" + tag, [&] { run_conjecture1(run, H, rects["conjecture1"]); });
        }
      }
    }
    run.csv.clear();

    std::string exps;
    for (const auto& e : run.experiments) exps += (exps.empty() ? "" : ",") + e;
    std::vector<std::pair<std::string, std::string>> extra = {
        {"q", std::to_string(run.q)},
        {"q_spec", cfg.q},
        {"g", std::to_string(run.ctx->generator())},
        {"k", std::to_string(run.k)},
        {"d", std::to_string(d)},
        {"character_spec", cfg.character},
        {"normalization", real ? "real" : "complex"},
        {"H", join_u64(cfg.H, ',')},
        {"experiments", exps},
        {"seed", std::to_string(cfg.seed)},
        {"threads", std::to_string(resolve_threads(cfg.threads))},
    };
    for (u64 H : cfg.H) {
      if (run.experiments.count("cf")) extra.emplace_back("N_H" + std::to_string(H), std::to_string(cf_order(run, H)));
      if (run.experiments.count("selberg")) extra.emplace_back("t_H" + std::to_string(H), format_double(selberg_t(run, H)));
    }
    write_manifest(run, extra);

    if (cfg.check) {
      std::ofstream c(run.out / "check.txt", std::ios::binary);
      bool all = true;
      for (const auto& ch : run.checks) {
        c << (ch.pass ? "PASS " : "FAIL ") << ch.name << ' ' << ch.value << '\n';
        all &= ch.pass;
      }
      if (!all) return kExitCheckFailed;
    }
    return kExitOk;
  } catch (const PreconditionError& e) {
    log << "precondition violated: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const MemoryCapError& e) {
    log << "memory cap: " << e.what() << '\n';
    return kExitMemoryCap;
  } catch (const QuadratureError& e) {
    log << "quadrature failure: " << e.what() << '\n';
    return kExitQuadrature;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace charsum
