// needle: exact runtimes, simulations and bound comparisons for randomized
// local search on generalized Needle functions.
//
// Exit codes: 0 success, 1 usage, 2 verification failure, 3 I/O.

#include "CLI11.hpp"
#include "json.hpp"

#include "needle/asymptotics.hpp"
#include "needle/birth_death.hpp"
#include "needle/exact.hpp"
#include "needle/needle.hpp"
#include "needle/report.hpp"
#include "needle/simulator.hpp"
#include "needle/verify.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerifyFailed = 2;
constexpr int kExitIo = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path + "'");
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path + "'");
}

// Flat "key = value" document; '#' starts a comment line.
class ConfigFile {
 public:
  void load(const std::string& path) {
    std::istringstream in(read_file(path));
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw UsageError(path + ":" + std::to_string(line_no) + ": expected key = value");
      }
      values_[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
    }
  }

  const std::string* find(const std::string& key) const {
    auto it = values_.find(key);
    return it == values_.end() ? nullptr : &it->second;
  }

 private:
  static std::string strip(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  std::map<std::string, std::string> values_;
};

// CLI flag > config file > environment > built-in default.
template <typename T>
void resolve(const CLI::Option* flag, T& target, const ConfigFile& config, const std::string& key,
             const char* env_var = nullptr) {
  if (flag != nullptr && flag->count() > 0) return;
  const std::string* text = config.find(key);
  std::string env_text;
  if (text == nullptr && env_var != nullptr) {
    if (const char* env = std::getenv(env_var); env != nullptr && *env != '\0') {
      env_text = env;
      text = &env_text;
    }
  }
  if (text == nullptr) return;
  if (!CLI::detail::lexical_conversion<T, T>({*text}, target)) {
    throw UsageError("invalid value '" + *text + "' for " + key);
  }
}

std::string trimmed_decimal(const needle::ExactRational& q, int digits) {
  std::string s = needle::to_decimal(q, digits);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  return s;
}

std::string render_exact(const needle::ExactRational& q, int digits) {
  if (denominator(q) == 1) return numerator(q).str();
  return needle::to_short_string(q) + " (" + trimmed_decimal(q, digits) + ")";
}

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and simulated runtimes of randomized local search on generalized Needle functions"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "Flat key = value config file (regime.c1, seed, digits, ...)");

  // exact
  auto* exact_cmd = app.add_subcommand("exact", "Exact E[T] (random start) or E[T(i)]");
  std::int64_t ex_n = 0;
  std::int64_t ex_k = 0;
  std::int64_t ex_start = -1;
  int ex_digits = 12;
  exact_cmd->add_option("--n", ex_n, "Problem size")->required();
  exact_cmd->add_option("--k", ex_k, "Needle radius")->required();
  exact_cmd->add_option("--start-ones", ex_start, "Start from a string with this many ones");
  auto* ex_digits_opt = exact_cmd->add_option("--digits", ex_digits, "Decimal digits");

  // hit
  auto* hit_cmd = app.add_subcommand("hit", "Per-state expected up-crossing times E[T_i^+]");
  std::int64_t hit_n = 0;
  std::int64_t hit_i = -1;
  int hit_digits = 12;
  std::string hit_file;
  auto* hit_n_opt = hit_cmd->add_option("--n", hit_n, "Problem size (Needle chain)");
  hit_cmd->add_option("--i", hit_i, "Single state");
  auto* hit_digits_opt = hit_cmd->add_option("--digits", hit_digits, "Decimal digits");
  auto* hit_file_opt = hit_cmd->add_option("--from-file", hit_file, "Chain JSON {n, p_minus, p_plus}");
  hit_n_opt->excludes(hit_file_opt);

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo runs, emitted as JSON");
  std::int64_t sim_n = 0;
  std::int64_t sim_k = 0;
  std::uint64_t sim_trials = 10000;
  std::uint64_t sim_seed = 0;
  std::string sim_variant = "standard";
  std::int64_t sim_start = -1;
  std::uint64_t sim_cap = needle::kDefaultTrialCap;
  unsigned sim_threads = 0;
  bool sim_check = false;
  std::string sim_file;
  int sim_digits = 12;
  auto* sim_n_opt = sim_cmd->add_option("--n", sim_n, "Problem size");
  auto* sim_k_opt = sim_cmd->add_option("--k", sim_k, "Needle radius");
  auto* sim_trials_opt = sim_cmd->add_option("--trials", sim_trials, "Number of independent trials");
  auto* sim_seed_opt = sim_cmd->add_option("--seed", sim_seed, "Master seed (default: NEEDLE_SEED or 0)");
  auto* sim_variant_opt = sim_cmd->add_option("--variant", sim_variant, "standard | symmetric");
  sim_cmd->add_option("--start-ones", sim_start, "Fixed start ones-count (default: uniform random)");
  auto* sim_cap_opt = sim_cmd->add_option("--trial-cap", sim_cap, "Max iterations per trial");
  auto* sim_threads_opt = sim_cmd->add_option("--threads", sim_threads, "Worker threads (0 = all cores)");
  sim_cmd->add_flag("--check-exact", sim_check, "Add the exact value and the z-score of the deviation");
  auto* sim_digits_opt = sim_cmd->add_option("--digits", sim_digits, "Decimal digits for the exact value");
  sim_cmd->add_option("--from-file", sim_file, "Re-read a batch JSON and emit it again");

  // bound
  auto* bound_cmd = app.add_subcommand("bound", "The earlier drift-based upper bound");
  std::int64_t bd_n = 0;
  std::int64_t bd_k = 0;
  bound_cmd->add_option("--n", bd_n, "Problem size")->required();
  bound_cmd->add_option("--k", bd_k, "Needle radius")->required();

  // classify
  auto* cls_cmd = app.add_subcommand("classify", "Asymptotic regime and estimate for (n, k)");
  std::int64_t cl_n = 0;
  std::int64_t cl_k = 0;
  needle::RegimeThresholds cl_thr;
  cls_cmd->add_option("--n", cl_n, "Problem size")->required();
  cls_cmd->add_option("--k", cl_k, "Needle radius")->required();
  auto* cl_c1 = cls_cmd->add_option("--c1", cl_thr.c1, "sqrt(n) window factor");
  auto* cl_c2 = cls_cmd->add_option("--c2", cl_thr.c2, "linear distance factor");
  auto* cl_c3 = cls_cmd->add_option("--c3", cl_thr.c3, "sublinear exponent");

  // compare and sweep share their grid options.
  struct GridOptions {
    std::string n_values;
    std::string k_rule = "all";
    int digits = 12;
    unsigned threads = 0;
    needle::RegimeThresholds thr;
    std::string output;
    std::string from_file;
    CLI::Option* digits_opt = nullptr;
    CLI::Option* threads_opt = nullptr;
    CLI::Option* c1 = nullptr;
    CLI::Option* c2 = nullptr;
    CLI::Option* c3 = nullptr;
  };
  auto add_grid = [](CLI::App* cmd, GridOptions& g) {
    cmd->add_option("--n-values", g.n_values, "n grid: 40,60,80 | 10..30 | 10..30:2");
    cmd->add_option("--k-rule", g.k_rule, "all | list:.. | fraction:.. | offset:.. | above:..");
    g.digits_opt = cmd->add_option("--digits", g.digits, "Decimal digits in exact_decimal");
    g.threads_opt = cmd->add_option("--threads", g.threads, "Worker threads (0 = all cores)");
    g.c1 = cmd->add_option("--c1", g.thr.c1, "Regime threshold c1");
    g.c2 = cmd->add_option("--c2", g.thr.c2, "Regime threshold c2");
    g.c3 = cmd->add_option("--c3", g.thr.c3, "Regime threshold c3");
    cmd->add_option("--output,-o", g.output, "Write CSV here instead of stdout");
    cmd->add_option("--from-file", g.from_file, "Re-read a CSV produced by this tool and emit it again");
  };
  auto* cmp_cmd = app.add_subcommand("compare", "Exact E[T] against the earlier bound and the estimates (CSV)");
  GridOptions cmp;
  add_grid(cmp_cmd, cmp);

  auto* sweep_cmd = app.add_subcommand("sweep", "Grid sweep with selectable outputs (CSV)");
  GridOptions sw;
  add_grid(sweep_cmd, sw);
  std::string sw_outputs = "exact,bound,estimate";
  std::uint64_t sw_trials = 10000;
  std::uint64_t sw_seed = 0;
  sweep_cmd->add_option("--outputs", sw_outputs, "exact,bound,estimate,simulate");
  auto* sw_trials_opt = sweep_cmd->add_option("--trials", sw_trials, "Trials per cell when simulating");
  auto* sw_seed_opt = sweep_cmd->add_option("--seed", sw_seed, "Master seed (default: NEEDLE_SEED or 0)");

  // verify
  auto* ver_cmd = app.add_subcommand("verify", "Check the exact formulas against the elimination oracle");
  std::int64_t ver_max_n = 12;
  std::string ver_fault;
  ver_cmd->add_option("--max-n", ver_max_n, "Largest n to check (1..20)");
  ver_cmd->add_option("--inject-fault", ver_fault, "Test the harness: off-by-one-cum")
      ->check(CLI::IsMember({"off-by-one-cum"}))
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    ConfigFile config;
    if (!config_path.empty()) config.load(config_path);

    if (exact_cmd->parsed()) {
      resolve(ex_digits_opt, ex_digits, config, "digits");
      require(ex_n >= 1, "--n must be >= 1");
      require(ex_k >= 0 && ex_k <= ex_n, "--k must lie in [0..n]");
      require(ex_digits >= 0, "--digits must be >= 0");
      const needle::NeedleInstance instance(ex_n, ex_k);
      needle::ExactRational value;
      if (ex_start >= 0 || exact_cmd->get_option("--start-ones")->count() > 0) {
        require(ex_start >= 0 && ex_start <= ex_n, "--start-ones must lie in [0..n]");
        value = needle::expected_runtime_from(instance, ex_start);
      } else {
        value = needle::expected_runtime(instance);
      }
      std::cout << render_exact(value, ex_digits) << "\n";
      return kExitOk;
    }

    if (hit_cmd->parsed()) {
      resolve(hit_digits_opt, hit_digits, config, "digits");
      std::optional<needle::BirthDeathChain> chain;
      if (hit_file_opt->count() > 0) {
        const std::string text = read_file(hit_file);
        try {
          chain = needle::chain_from_json(text);
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
      } else {
        require(hit_n_opt->count() > 0, "hit: give --n or --from-file");
        require(hit_n >= 1, "--n must be >= 1");
      }
      const std::int64_t n = chain ? chain->n() : hit_n;
      if (hit_i >= 0 || hit_cmd->get_option("--i")->count() > 0) {
        require(hit_i >= 0 && hit_i <= n - 1, "--i must lie in [0..n-1]");
      }
      std::vector<needle::ExactRational> times;
      if (chain) {
        times = needle::hitting_times_all(*chain).up_times;
      } else {
        for (std::int64_t i = 0; i < n; ++i) times.push_back(needle::hitting_time_plus_closed(n, i));
      }
      std::cout << "i,up_time,decimal\n";
      for (std::int64_t i = 0; i < n; ++i) {
        if (hit_i >= 0 && i != hit_i) continue;
        const auto& t = times[static_cast<std::size_t>(i)];
        std::cout << i << "," << needle::to_short_string(t) << "," << needle::to_decimal(t, hit_digits) << "\n";
      }
      return kExitOk;
    }

    if (sim_cmd->parsed()) {
      resolve(sim_digits_opt, sim_digits, config, "digits");
      needle::SimulationBatch batch;
      std::optional<needle::ExactRational> exact;
      if (!sim_file.empty()) {
        const std::string text = read_file(sim_file);
        try {
          batch = needle::batch_from_json(text);
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
      } else {
        require(sim_n_opt->count() > 0 && sim_k_opt->count() > 0, "simulate: --n and --k are required");
        resolve(sim_trials_opt, sim_trials, config, "trials");
        resolve(sim_seed_opt, sim_seed, config, "seed", "NEEDLE_SEED");
        resolve(sim_variant_opt, sim_variant, config, "variant");
        resolve(sim_cap_opt, sim_cap, config, "trial_cap");
        resolve(sim_threads_opt, sim_threads, config, "threads");
        require(sim_n >= 1, "--n must be >= 1");
        require(sim_k >= 0 && sim_k <= sim_n, "--k must lie in [0..n]");
        require(sim_trials >= 1, "--trials must be >= 1");
        require(sim_cap >= 1, "--trial-cap must be >= 1");
        const auto variant = needle::parse_variant(sim_variant);
        require(variant.has_value(), "--variant must be standard or symmetric");

        needle::RunConfig run;
        run.instance = needle::NeedleInstance(sim_n, sim_k);
        run.variant = *variant;
        run.seed = sim_seed;
        run.trial_cap = sim_cap;
        if (sim_cmd->get_option("--start-ones")->count() > 0) {
          require(sim_start >= 0 && sim_start <= sim_n, "--start-ones must lie in [0..n]");
          run.fixed_ones = sim_start;
        }
        batch = needle::monte_carlo(run, sim_trials, sim_threads);
      }
      if (sim_check) {
        require(batch.config.variant == needle::Variant::kStandard,
                "--check-exact: no exact formula for the symmetric variant");
        const auto& cfg = batch.config;
        exact = cfg.fixed_ones ? needle::expected_runtime_from(cfg.instance, *cfg.fixed_ones)
                               : needle::expected_runtime(cfg.instance);
      }
      auto doc = nlohmann::ordered_json::parse(needle::batch_to_json(batch));
      if (exact) {
        doc["exact"] = needle::to_fraction_string(*exact);
        doc["exact_decimal"] = needle::to_decimal(*exact, sim_digits);
        const double value = needle::to_real(*exact).convert_to<double>();
        if (batch.censored == 0 && !std::isnan(batch.mean)) {
          const double diff = batch.mean - value;
          doc["z_score"] = batch.std_error > 0 ? diff / batch.std_error : (diff == 0 ? 0.0 : INFINITY);
          if (!std::isfinite(doc["z_score"].get<double>())) doc["z_score"] = nullptr;
        } else {
          doc["z_score"] = nullptr;
        }
      }
      std::cout << doc.dump() << "\n";
      return kExitOk;
    }

    if (bound_cmd->parsed()) {
      require(bd_n >= 1 && bd_k >= 0 && bd_k <= bd_n, "need n >= 1 and 0 <= k <= n");
      const auto dk = needle::doerr_krejca_bound(bd_n, bd_k);
      if (!dk.params.valid) {
        std::cout << "invalid: " << dk.params.reason << "\n";
        return kExitOk;
      }
      std::cout << "bound=" << needle::format_real(dk.value, 15) << "\n"
                << "r=" << dk.params.r << "\n"
                << "lambda=" << needle::to_short_string(dk.params.lambda_exact) << "\n";
      return kExitOk;
    }

    if (cls_cmd->parsed()) {
      resolve(cl_c1, cl_thr.c1, config, "regime.c1");
      resolve(cl_c2, cl_thr.c2, config, "regime.c2");
      resolve(cl_c3, cl_thr.c3, config, "regime.c3");
      require(cl_n >= 1 && cl_k >= 0 && cl_k <= cl_n, "need n >= 1 and 0 <= k <= n");
      const auto est = needle::classify_regime(cl_n, cl_k, cl_thr);
      std::cout << "regime=" << needle::regime_name(est.regime) << "\n";
      if (est.estimate) {
        std::cout << "estimate_low=" << needle::format_real(est.estimate->low) << "\n"
                  << "estimate_high=" << needle::format_real(est.estimate->high) << "\n";
      }
      std::cout << "basis=" << est.theorem_tag << "\n";
      return kExitOk;
    }

    if (cmp_cmd->parsed() || sweep_cmd->parsed()) {
      const bool is_sweep = sweep_cmd->parsed();
      GridOptions& g = is_sweep ? sw : cmp;
      needle::SweepTable table;
      if (!g.from_file.empty()) {
        const std::string text = read_file(g.from_file);
        try {
          table = needle::read_csv(text);
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
      } else {
        require(!g.n_values.empty(), "--n-values is required");
        resolve(g.digits_opt, g.digits, config, "digits");
        resolve(g.threads_opt, g.threads, config, "threads");
        resolve(g.c1, g.thr.c1, config, "regime.c1");
        resolve(g.c2, g.thr.c2, config, "regime.c2");
        resolve(g.c3, g.thr.c3, config, "regime.c3");
        require(g.digits >= 0, "--digits must be >= 0");
        needle::SweepSpec spec;
        try {
          spec.n_values = needle::parse_n_values(g.n_values);
          spec.k_rule = needle::KRule::parse(g.k_rule);
          if (is_sweep) spec.outputs = needle::SweepOutputs::parse(sw_outputs);
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
        spec.thresholds = g.thr;
        spec.digits = g.digits;
        spec.threads = g.threads;
        if (spec.outputs.simulate) {
          resolve(sw_trials_opt, sw_trials, config, "trials");
          resolve(sw_seed_opt, sw_seed, config, "seed", "NEEDLE_SEED");
          require(sw_trials >= 1, "--trials must be >= 1");
          spec.outputs.simulate = needle::SimulateOutput{sw_trials, sw_seed};
          table.metadata.push_back("seed=" + std::to_string(sw_seed) + ";rng_name=" + std::string(needle::kRngName));
        }
        table.rows = needle::run_sweep(spec);
      }
      write_output(g.output, needle::write_csv(table));
      return kExitOk;
    }

    if (ver_cmd->parsed()) {
      require(ver_max_n >= 1 && ver_max_n <= needle::kMaxVerifyN,
              "--max-n must lie in [1.." + std::to_string(needle::kMaxVerifyN) + "]");
      needle::VerifyHooks hooks;
      if (ver_fault == "off-by-one-cum") hooks.runtime_from = needle::runtime_from_off_by_one;
      const auto report = needle::run_verification(ver_max_n, hooks);
      std::uint64_t counterexamples = 0;
      for (const auto& p : report.properties) {
        counterexamples += p.failures;
        std::cout << (p.failures == 0 ? "PASS " : "FAIL ") << p.name << " checked=" << p.checked
                  << " failures=" << p.failures;
        if (p.first_counterexample) std::cout << " first=" << *p.first_counterexample;
        std::cout << "\n";
      }
      if (report.passed()) {
        std::cout << "PASS max_n=" << ver_max_n << " counterexamples=0\n";
        return kExitOk;
      }
      std::cout << "FAIL max_n=" << ver_max_n << " counterexamples=" << counterexamples
                << " first=" << report.first_counterexample().value_or("?") << "\n";
      return kExitVerifyFailed;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
