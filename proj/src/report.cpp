#include "needle/report.hpp"

#include "needle/needle.hpp"
#include "needle/simulator.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace needle {

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.emplace_back(text.substr(start, pos == std::string_view::npos ? text.size() - start : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::int64_t to_int(std::string_view s) {
  s = trim(s);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument("expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

double to_double(std::string_view s) {
  s = trim(s);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument("expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

std::string format_double(double x) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out.precision(12);
  out << x;
  return out.str();
}

}  // namespace

KRule KRule::parse(std::string_view text) {
  text = trim(text);
  KRule rule;
  if (text == "all") return rule;
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("k rule: expected kind:params or 'all'");
  const std::string_view kind = text.substr(0, colon);
  if (kind == "list") {
    rule.kind = KRuleKind::kExplicit;
  } else if (kind == "fraction") {
    rule.kind = KRuleKind::kFraction;
  } else if (kind == "offset") {
    rule.kind = KRuleKind::kOffset;
  } else if (kind == "above") {
    rule.kind = KRuleKind::kAbove;
  } else {
    throw std::invalid_argument("k rule: unknown kind '" + std::string(kind) + "'");
  }
  for (const auto& part : split(text.substr(colon + 1), ',')) {
    if (rule.kind == KRuleKind::kExplicit) {
      rule.params.push_back(static_cast<double>(to_int(part)));
    } else {
      rule.params.push_back(to_double(part));
    }
  }
  return rule;
}

std::vector<std::int64_t> KRule::k_values(std::int64_t n) const {
  std::vector<std::int64_t> ks;
  const double nd = static_cast<double>(n);
  switch (kind) {
    case KRuleKind::kAll:
      for (std::int64_t k = 0; k <= n; ++k) ks.push_back(k);
      break;
    case KRuleKind::kExplicit:
      for (double p : params) ks.push_back(static_cast<std::int64_t>(p));
      break;
    case KRuleKind::kFraction:
      for (double rho : params) ks.push_back(static_cast<std::int64_t>(std::floor(rho * nd)));
      break;
    case KRuleKind::kOffset:
      for (double c : params) ks.push_back(n / 2 - static_cast<std::int64_t>(c));
      break;
    case KRuleKind::kAbove:
      for (double c : params) {
        ks.push_back(static_cast<std::int64_t>(std::ceil(nd / 2.0 + c * std::sqrt(nd * std::log(nd)))));
      }
      break;
  }
  return ks;
}

std::vector<std::int64_t> parse_n_values(std::string_view text) {
  text = trim(text);
  std::vector<std::int64_t> values;
  if (const auto dots = text.find(".."); dots != std::string_view::npos) {
    const std::int64_t lo = to_int(text.substr(0, dots));
    std::string_view rest = text.substr(dots + 2);
    std::int64_t step = 1;
    if (const auto colon = rest.find(':'); colon != std::string_view::npos) {
      step = to_int(rest.substr(colon + 1));
      rest = rest.substr(0, colon);
    }
    const std::int64_t hi = to_int(rest);
    if (step < 1) throw std::invalid_argument("n range: step must be >= 1");
    for (std::int64_t n = lo; n <= hi; n += step) values.push_back(n);
  } else {
    for (const auto& part : split(text, ',')) values.push_back(to_int(part));
  }
  for (auto n : values) {
    if (n < 1) throw std::invalid_argument("n values must be >= 1");
  }
  if (values.empty()) throw std::invalid_argument("empty n range");
  return values;
}

SweepOutputs SweepOutputs::parse(std::string_view text) {
  SweepOutputs out;
  out.exact = out.bound_eq1 = out.estimate = false;
  for (const auto& raw : split(text, ',')) {
    const auto part = trim(raw);
    if (part == "exact") {
      out.exact = true;
    } else if (part == "bound" || part == "bound_eq1") {
      out.bound_eq1 = true;
    } else if (part == "estimate") {
      out.estimate = true;
    } else if (part == "simulate") {
      out.simulate = SimulateOutput{};
    } else {
      throw std::invalid_argument("unknown output '" + std::string(part) + "'");
    }
  }
  return out;
}

bool SweepRow::has_flag(std::string_view prefix) const {
  for (const auto& f : flags) {
    if (std::string_view(f).starts_with(prefix)) return true;
  }
  return false;
}

namespace {

// The estimate each regime reports, as an exact value where one exists.
std::optional<ExactRational> reference_estimate(std::int64_t n, std::int64_t k, Regime regime) {
  switch (regime) {
    case Regime::kSublinearK:
    case Regime::kLinearK:
    case Regime::kNearHalfWide:
      return estimate_small_k_exact(n, k).exact();
    case Regime::kNearHalfSqrt:
      return ExactRational(n);
    case Regime::kAboveHalfLarge:
      return above_half_bound_exact(n, k);
    case Regime::kUnclassified:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

SweepRow evaluate_cell(std::int64_t n, std::int64_t k, const SweepSpec& spec) {
  SweepRow row;
  row.n = n;
  row.k = k;
  if (n < 1 || k < 0 || k > n) {
    row.flags.push_back("skipped: k out of range");
    return row;
  }
  try {
    const NeedleInstance instance(n, k);
    row.r = majority_radius(instance);
    const RegimeEstimate regime = classify_regime(n, k, spec.thresholds);
    row.regime = std::string(regime_name(regime.regime));

    if (spec.outputs.exact) {
      row.exact = expected_runtime(instance);
      row.exact_decimal = to_decimal(*row.exact, spec.digits);
      if (*row.exact == 0) row.flags.push_back("EXACT_ZERO");
    }

    std::optional<Real> bound;
    if (spec.outputs.bound_eq1) {
      const DKBound dk = doerr_krejca_bound(n, k);
      if (dk.params.valid) {
        bound = dk.value;
        row.eq1_bound = format_real(dk.value);
        row.eq1_valid = "valid";
      } else {
        row.eq1_valid = "invalid: " + dk.params.reason;
      }
    }

    if (spec.outputs.estimate && regime.estimate) {
      row.estimate_low = format_real(regime.estimate->low);
      row.estimate_high = format_real(regime.estimate->high);
    }

    if (row.exact) {
      if (bound) {
        if (*row.exact == 0) {
          row.ratio_bound_exact = "undefined";
        } else {
          row.ratio_bound_exact = format_real(*bound / to_real(*row.exact));
          if (*bound < to_real(*row.exact)) row.flags.push_back("BOUND_BELOW_EXACT");
        }
      }
      if (spec.outputs.estimate) {
        const auto reference = reference_estimate(n, k, regime.regime);
        if (!reference || *reference == 0 || *row.exact == 0) {
          row.ratio_exact_estimate = "undefined";
        } else {
          row.ratio_exact_estimate = format_real(to_real(*row.exact / *reference));
        }
      }
    }

    if (spec.outputs.simulate) {
      RunConfig config;
      config.instance = instance;
      config.seed = spec.outputs.simulate->seed;
      const auto batch = monte_carlo(config, spec.outputs.simulate->trials, 1);
      row.sim_mean = format_double(batch.mean);
      row.sim_stderr = format_double(batch.std_error);
      row.sim_trials = std::to_string(batch.trials);
      if (batch.censored > 0) row.flags.push_back("CENSORED=" + std::to_string(batch.censored));
      if (row.exact && batch.censored == 0) {
        const double exact = to_real(*row.exact).convert_to<double>();
        const double diff = batch.mean - exact;
        const double z = batch.std_error > 0 ? diff / batch.std_error : (diff == 0 ? 0.0 : INFINITY);
        row.flags.push_back("sim_z=" + format_double(z));
        if (std::abs(z) > 4) row.flags.push_back("SIM_OUTSIDE_4SE");
      }
    }
  } catch (const std::exception& e) {
    row.flags.push_back(std::string("error: ") + e.what());
  }
  return row;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  std::vector<std::pair<std::int64_t, std::int64_t>> cells;
  for (std::int64_t n : spec.n_values) {
    for (std::int64_t k : spec.k_rule.k_values(n)) cells.emplace_back(n, k);
  }
  std::vector<SweepRow> rows(cells.size());
  unsigned threads = spec.threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : spec.threads;
  threads = static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(threads, cells.size())));
  auto worker = [&](unsigned id) {
    for (std::size_t c = id; c < cells.size(); c += threads) {
      rows[c] = evaluate_cell(cells[c].first, cells[c].second, spec);
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned id = 0; id < threads; ++id) pool.emplace_back(worker, id);
  }
  return rows;
}

namespace {

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> parse_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (quoted) throw std::invalid_argument("CSV: unterminated quoted field");
  fields.push_back(std::move(current));
  return fields;
}

std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (const auto& f : flags) {
    if (!out.empty()) out += ';';
    out += f;
  }
  return out;
}

}  // namespace

std::string write_csv(const SweepTable& table) {
  std::string out;
  for (const auto& m : table.metadata) out += "# " + m + "\n";
  out += kCsvHeader;
  out += '\n';
  for (const auto& row : table.rows) {
    const std::string fields[] = {
        std::to_string(row.n),
        std::to_string(row.k),
        row.r ? std::to_string(*row.r) : "",
        row.regime,
        row.exact ? numerator(*row.exact).str() : "",
        row.exact ? denominator(*row.exact).str() : "",
        row.exact_decimal,
        row.eq1_bound,
        row.eq1_valid,
        row.estimate_low,
        row.estimate_high,
        row.sim_mean,
        row.sim_stderr,
        row.sim_trials,
        join_flags(row.flags),
        row.ratio_bound_exact,
        row.ratio_exact_estimate,
    };
    bool first = true;
    for (const auto& f : fields) {
      if (!first) out += ',';
      out += quote(f);
      first = false;
    }
    out += '\n';
  }
  return out;
}

SweepTable read_csv(std::string_view text) {
  SweepTable table;
  bool header_seen = false;
  std::size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      line.remove_prefix(1);
      if (!line.empty() && line.front() == ' ') line.remove_prefix(1);
      table.metadata.emplace_back(line);
      continue;
    }
    if (!header_seen) {
      if (line != kCsvHeader) throw std::invalid_argument("CSV: unexpected header");
      header_seen = true;
      continue;
    }
    const auto f = parse_csv_line(line);
    if (f.size() != 17) {
      throw std::invalid_argument("CSV line " + std::to_string(line_no) + ": expected 17 fields, got " +
                                  std::to_string(f.size()));
    }
    try {
      SweepRow row;
      row.n = to_int(f[0]);
      row.k = to_int(f[1]);
      if (!f[2].empty()) row.r = to_int(f[2]);
      row.regime = f[3];
      if (!row.regime.empty() && !parse_regime(row.regime)) throw std::invalid_argument("unknown regime");
      if (f[4].empty() != f[5].empty()) throw std::invalid_argument("exact_num/exact_den must both be set");
      if (!f[4].empty()) row.exact = parse_rational(f[4] + "/" + f[5]);
      row.exact_decimal = f[6];
      row.eq1_bound = f[7];
      row.eq1_valid = f[8];
      row.estimate_low = f[9];
      row.estimate_high = f[10];
      row.sim_mean = f[11];
      row.sim_stderr = f[12];
      row.sim_trials = f[13];
      if (!f[14].empty()) row.flags = split(f[14], ';');
      row.ratio_bound_exact = f[15];
      row.ratio_exact_estimate = f[16];
      for (const std::string* numeric : {&row.eq1_bound, &row.estimate_low, &row.estimate_high, &row.sim_mean,
                                         &row.sim_stderr}) {
        if (!numeric->empty()) to_double(*numeric);
      }
      table.rows.push_back(std::move(row));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("CSV line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!header_seen) throw std::invalid_argument("CSV: missing header");
  return table;
}

}  // namespace needle
