#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "charsum/charfn.hpp"
#include "charsum/distribution.hpp"
#include "charsum/errors.hpp"
#include "charsum/experiment.hpp"
#include "charsum/modarith.hpp"
#include "charsum/moments.hpp"
#include "charsum/randmodel.hpp"
#include "charsum/selberg.hpp"
#include "charsum/window.hpp"

namespace py = pybind11;
using namespace charsum;

namespace {

Normalization parse_normalization(const std::string& s, const Character& chi) {
  if (s == "natural") return natural_normalization(chi);
  if (s == "none") return Normalization::none;
  if (s == "real") return Normalization::real;
  if (s == "complex") return Normalization::complex;
  throw PreconditionError("normalization must be natural, none, real or complex");
}

WindowSource source(const Character& chi, u64 H, const std::string& norm, unsigned threads) {
  WindowOptions o;
  o.normalization = parse_normalization(norm, chi);
  o.threads = threads;
  return WindowSource(chi, H, o);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Short Dirichlet character sums modulo a prime";

  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<MemoryCapError>(m, "MemoryCapError", PyExc_MemoryError);
  py::register_exception<QuadratureError>(m, "QuadratureError", PyExc_ArithmeticError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_IOError);

  m.def("is_prime", &is_prime);
  m.def("next_prime", &next_prime);
  m.def("primitive_root", &find_primitive_root);
  m.def("factorize", [](u64 n) {
    std::vector<std::pair<u64, int>> out;
    for (const auto& p : factorize(n)) out.emplace_back(p.prime, p.multiplicity);
    return out;
  });

  py::class_<PrimeContext, std::shared_ptr<PrimeContext>>(m, "Modulus")
      .def(py::init([](u64 q) { return std::make_shared<PrimeContext>(PrimeContext::create(q)); }), py::arg("q"))
      .def_property_readonly("q", &PrimeContext::modulus)
      .def_property_readonly("generator", &PrimeContext::generator)
      .def("index", &PrimeContext::index)
      .def("verify", [](const PrimeContext& c) { return verify_index_table(c); });

  py::class_<Character>(m, "Character")
      .def(py::init([](std::shared_ptr<PrimeContext> ctx, u64 k) { return Character(ctx, k); }), py::arg("modulus"),
           py::arg("k"))
      .def("__call__", &Character::operator())
      .def_property_readonly("q", &Character::modulus)
      .def_property_readonly("k", &Character::exponent)
      .def_property_readonly("order", &Character::order)
      .def_property_readonly("is_real", &Character::is_real)
      .def("conjugate", &Character::conjugate);

  m.def(
      "series",
      [](const Character& chi, u64 H, const std::string& norm, unsigned threads) {
        const auto s = materialize(source(chi, H, norm, threads));
        py::array_t<double> re(s.re.size(), s.re.data()), im(s.im.size(), s.im.data());
        return py::make_tuple(re, im);
      },
      py::arg("chi"), py::arg("H"), py::arg("normalization") = "natural", py::arg("threads") = 1,
      "Window sums S(x), x = 0..q-1, as (re, im) arrays.");
  m.def(
      "summary",
      [](const Character& chi, u64 H) {
        const auto s = summarize_series(source(chi, H, "none", 1));
        py::dict d;
        d["mean"] = s.mean();
        d["second_moment"] = s.second_moment();
        d["exact_mode"] = s.exact_mode;
        d["sum_is_exactly_zero"] = s.exact_mode && s.exact_sum_zero();
        const auto f = exact_second_moment(chi.modulus(), H);
        d["exact_second_moment"] = py::make_tuple(f.numerator, f.denominator);
        return d;
      },
      py::arg("chi"), py::arg("H"));
  m.def(
      "moment",
      [](const Character& chi, u64 H, int r, int s) { return empirical_moment(source(chi, H, "natural", 1), r, s); },
      py::arg("chi"), py::arg("H"), py::arg("r"), py::arg("s"), "Empirical mean of Re(S)^r Im(S)^s.");
  m.def(
      "multiset_count_B",
      [](int m_, u64 H) {
        std::ostringstream s;
        s << multiset_count_B(m_, H);
        return py::int_(py::str(s.str()));
      },
      py::arg("m"), py::arg("H"));
  m.def("model_moment", &model_moment, py::arg("r"), py::arg("s"), py::arg("H"));
  m.def("model_cf", &model_cf, py::arg("u"), py::arg("v"), py::arg("H"));
  m.def(
      "empirical_cf",
      [](const Character& chi, u64 H, const std::vector<std::pair<double, double>>& nodes, unsigned threads) {
        std::vector<CfNode> n;
        for (auto [u, v] : nodes) n.push_back({u, v});
        std::vector<std::complex<double>> out;
        for (const auto& e : empirical_cf(source(chi, H, "natural", threads), n, threads).entries) out.push_back(e.value);
        return out;
      },
      py::arg("chi"), py::arg("H"), py::arg("nodes"), py::arg("threads") = 1);

  m.def("gauss_cdf", &gauss_cdf);
  m.def("gauss_rect_prob", [](double a, double b, double c, double d) { return gauss_rect_prob(Rectangle(a, b, c, d)); });
  m.def("bessel_j0", &bessel_j0);
  m.def("selberg_G", &selberg_G);
  m.def("gaussian_smoothed_interval", [](double a, double b, double t) { return gaussian_smoothed_interval(a, b, t); },
        py::arg("a"), py::arg("b"), py::arg("t"));
  m.def("paper_preset", [](u64 q, u64 H) {
    const auto p = paper_preset_t_N(q, H);
    return py::make_tuple(p.t, p.N);
  });

  m.def(
      "discrepancy",
      [](const Character& chi, u64 H, unsigned threads) {
        const auto rep = discrepancy(source(chi, H, "natural", threads), default_rectangle_family(), "", threads);
        py::dict d;
        d["max_gap"] = rep.max_gap();
        d["mean_gap"] = rep.mean_gap();
        d["exploratory"] = rep.exploratory;
        py::list rows;
        for (const auto& r : rep.rows) {
          rows.append(py::make_tuple(r.rect.a(), r.rect.b(), r.rect.c(), r.rect.d(), r.empirical, r.gauss, r.gap));
        }
        d["rows"] = rows;
        return d;
      },
      py::arg("chi"), py::arg("H"), py::arg("threads") = 1);
  m.def(
      "ks_1d_real", [](const Character& chi, u64 H) { return ks_1d_real(source(chi, H, "natural", 1)); },
      py::arg("chi"), py::arg("H"));

  m.def(
      "run",
      [](const std::string& q, const std::string& character, const std::vector<u64>& H, const std::string& experiment,
         const std::string& out, unsigned threads, u64 seed, bool check) {
        ExperimentConfig cfg;
        cfg.q = q;
        cfg.character = character;
        cfg.H = H;
        cfg.experiment = experiment;
        cfg.out = out;
        cfg.threads = threads;
        cfg.seed = seed;
        cfg.check = check;
        std::ostringstream log;
        const int rc = run_experiment(cfg, log);
        return py::make_tuple(rc, log.str());
      },
      py::arg("q"), py::arg("character"), py::arg("H"), py::arg("experiment"), py::arg("out"), py::arg("threads") = 1,
      py::arg("seed") = 1, py::arg("check") = false, "Runs the experiment pipeline; returns (exit_code, log).");
}
