#include "needle/asymptotics.hpp"
#include "needle/birth_death.hpp"
#include "needle/needle.hpp"
#include "needle/report.hpp"
#include "needle/simulator.hpp"
#include "needle/verify.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace needle;

namespace {

py::object to_fraction(const ExactRational& q) {
  static const py::object fraction = py::module_::import("fractions").attr("Fraction");
  return fraction(to_fraction_string(q));
}

py::list to_fractions(const std::vector<ExactRational>& values) {
  py::list out;
  for (const auto& v : values) out.append(to_fraction(v));
  return out;
}

// Accepts Fraction, int, float-free strings like "1/3"; anything whose str() parses.
std::vector<ExactRational> from_python(const py::sequence& seq) {
  std::vector<ExactRational> out;
  out.reserve(seq.size());
  for (const auto& item : seq) out.push_back(parse_rational(py::str(item).cast<std::string>()));
  return out;
}

BirthDeathChain chain_from(const py::sequence& p_minus, const py::sequence& p_plus) {
  return BirthDeathChain(static_cast<std::int64_t>(p_plus.size()), from_python(p_minus), from_python(p_plus));
}

RegimeThresholds thresholds(double c1, double c2, double c3) { return {c1, c2, c3}; }

py::dict interval_dict(const std::optional<Interval>& iv) {
  py::dict d;
  if (iv) {
    d["low"] = static_cast<double>(iv->low);
    d["high"] = static_cast<double>(iv->high);
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact and simulated runtimes of randomized local search on generalized Needle functions";

  py::register_exception<UnreachableError>(m, "UnreachableError", PyExc_ValueError);
  py::register_exception<SingularSystemError>(m, "SingularSystemError", PyExc_ValueError);

  m.def("binomial", [](std::int64_t n, std::int64_t k) { return py::int_(py::str(binomial(n, k).str())); },
        py::arg("n"), py::arg("k"));
  m.def("binomial_cum", [](std::int64_t n, std::int64_t j) { return py::int_(py::str(binomial_cum(n, j).str())); },
        py::arg("n"), py::arg("j"));

  m.def(
      "expected_runtime",
      [](std::int64_t n, std::int64_t k, std::optional<std::int64_t> start_ones) {
        const NeedleInstance inst(n, k);
        return to_fraction(start_ones ? expected_runtime_from(inst, *start_ones) : expected_runtime(inst));
      },
      py::arg("n"), py::arg("k"), py::arg("start_ones") = py::none(),
      "Exact E[T] from a uniform start, or E[T(i)] from a start with i ones.");
  m.def("runtime_profile", [](std::int64_t n, std::int64_t k) { return to_fractions(runtime_profile({n, k})); },
        py::arg("n"), py::arg("k"));
  m.def("hitting_times", [](std::int64_t n) { return to_fractions(hitting_times_all(needle_chain(n)).up_times); },
        py::arg("n"), "E[T_i^+] for i = 0..n-1 on the Needle ones-count chain.");
  m.def(
      "chain_hitting_times",
      [](const py::sequence& p_minus, const py::sequence& p_plus) {
        return to_fractions(hitting_times_all(chain_from(p_minus, p_plus)).up_times);
      },
      py::arg("p_minus"), py::arg("p_plus"),
      "Up-crossing times of a birth-death chain; p_minus for states 1..n, p_plus for states 0..n-1.");
  m.def(
      "chain_hitting_time_oracle",
      [](const py::sequence& p_minus, const py::sequence& p_plus, const std::set<std::int64_t>& target,
         std::int64_t start) { return to_fraction(hitting_time_oracle(chain_from(p_minus, p_plus), target, start)); },
      py::arg("p_minus"), py::arg("p_plus"), py::arg("target"), py::arg("start"));

  m.def(
      "start_distribution_stats",
      [](std::int64_t n, std::int64_t k) {
        const auto s = start_distribution_stats({n, k});
        py::dict d;
        d["w"] = to_fraction(s.w);
        d["a"] = s.a;
        d["u"] = to_fraction(s.u);
        d["lower"] = to_fraction(s.lower);
        d["upper"] = to_fraction(s.upper);
        return d;
      },
      py::arg("n"), py::arg("k"));

  m.def(
      "bound",
      [](std::int64_t n, std::int64_t k) {
        const auto b = doerr_krejca_bound(n, k);
        py::dict d;
        d["valid"] = b.params.valid;
        d["reason"] = b.params.reason;
        d["r"] = b.params.r;
        d["lambda"] = b.params.valid ? to_fraction(b.params.lambda_exact) : py::none();
        d["value"] = b.params.valid ? py::object(py::float_(static_cast<double>(b.value))) : py::none();
        return d;
      },
      py::arg("n"), py::arg("k"), "The earlier drift-based upper bound.");

  m.def(
      "classify",
      [](std::int64_t n, std::int64_t k, double c1, double c2, double c3) {
        const auto e = classify_regime(n, k, thresholds(c1, c2, c3));
        py::dict d;
        d["regime"] = std::string(regime_name(e.regime));
        d["estimate"] = e.estimate ? py::object(interval_dict(e.estimate)) : py::none();
        d["basis"] = e.theorem_tag;
        return d;
      },
      py::arg("n"), py::arg("k"), py::arg("c1") = 1.0, py::arg("c2") = 0.1, py::arg("c3") = 0.9);

  m.def(
      "simulate",
      [](std::int64_t n, std::int64_t k, std::uint64_t trials, std::uint64_t seed, const std::string& variant,
         std::optional<std::int64_t> start_ones, std::optional<std::uint64_t> trial_cap, unsigned threads) {
        RunConfig config;
        config.instance = NeedleInstance(n, k);
        const auto v = parse_variant(variant);
        if (!v) throw py::value_error("variant must be 'standard' or 'symmetric'");
        config.variant = *v;
        config.fixed_ones = start_ones;
        config.seed = seed;
        if (trial_cap) config.trial_cap = trial_cap;
        config.validate();
        std::string text;
        {
          py::gil_scoped_release release;
          text = batch_to_json(monte_carlo(config, trials, threads));
        }
        return py::module_::import("json").attr("loads")(text);
      },
      py::arg("n"), py::arg("k"), py::arg("trials"), py::arg("seed") = 0, py::arg("variant") = "standard",
      py::arg("start_ones") = py::none(), py::arg("trial_cap") = py::none(), py::arg("threads") = 0,
      "Monte Carlo batch as a dict; identical for identical arguments.");

  m.def(
      "sweep",
      [](const std::string& n_values, const std::string& k_rule, const std::string& outputs, std::uint64_t trials,
         std::uint64_t seed, int digits, unsigned threads) {
        SweepSpec spec;
        spec.n_values = parse_n_values(n_values);
        spec.k_rule = KRule::parse(k_rule);
        spec.outputs = SweepOutputs::parse(outputs);
        if (spec.outputs.simulate) *spec.outputs.simulate = {trials, seed};
        spec.digits = digits;
        spec.threads = threads;
        std::vector<SweepRow> rows;
        {
          py::gil_scoped_release release;
          rows = run_sweep(spec);
        }
        return write_csv({{}, rows});
      },
      py::arg("n_values"), py::arg("k_rule") = "all", py::arg("outputs") = "exact,bound,estimate",
      py::arg("trials") = 0, py::arg("seed") = 0, py::arg("digits") = 12, py::arg("threads") = 0,
      "Grid sweep rendered as CSV text.");

  m.def(
      "verify",
      [](std::int64_t max_n) {
        const auto report = run_verification(max_n);
        py::dict d;
        d["passed"] = report.passed();
        py::list props;
        for (const auto& p : report.properties) {
          py::dict row;
          row["name"] = p.name;
          row["checked"] = p.checked;
          row["failures"] = p.failures;
          row["first_counterexample"] = p.first_counterexample ? py::object(py::str(*p.first_counterexample)) : py::none();
          props.append(row);
        }
        d["properties"] = props;
        return d;
      },
      py::arg("max_n") = 12);
}
