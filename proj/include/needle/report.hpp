#ifndef NEEDLE_REPORT_HPP
#define NEEDLE_REPORT_HPP

// Grid sweeps over (n, k) and their CSV form.
//
// Column order is fixed:
//   n,k,r,regime,exact_num,exact_den,exact_decimal,eq1_bound,eq1_valid,
//   estimate_low,estimate_high,sim_mean,sim_stderr,sim_trials,flags,
//   ratio_bound_exact,ratio_exact_estimate
// Lines starting with '#' carry metadata (seed, rng name) and are skipped
// by the reader. Empty cells mean "not requested" or "undefined".

#include "needle/asymptotics.hpp"
#include "needle/exact.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace needle {

enum class KRuleKind { kAll, kExplicit, kFraction, kOffset, kAbove };

/// How k is derived from n: every k, a fixed list, floor(rho n),
/// floor(n/2) - c, or ceil(n/2 + c sqrt(n ln n)). One k per parameter.
struct KRule {
  KRuleKind kind = KRuleKind::kAll;
  std::vector<double> params;

  /// "all", "list:0,1,2", "fraction:0.1,0.25", "offset:2,3", "above:1".
  static KRule parse(std::string_view text);
  std::vector<std::int64_t> k_values(std::int64_t n) const;
};

/// "40,60,80", "10..20" or "10..20:2".
std::vector<std::int64_t> parse_n_values(std::string_view text);

struct SimulateOutput {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

struct SweepOutputs {
  bool exact = true;
  bool bound_eq1 = true;
  bool estimate = true;
  std::optional<SimulateOutput> simulate;

  /// Comma list of "exact", "bound", "estimate", "simulate".
  static SweepOutputs parse(std::string_view text);
};

struct SweepSpec {
  std::vector<std::int64_t> n_values;
  KRule k_rule;
  SweepOutputs outputs;
  RegimeThresholds thresholds;
  int digits = 12;
  unsigned threads = 0;
};

/// One CSV row. Numeric columns are kept as the rendered text that goes
/// into the file, next to typed values where callers need them.
struct SweepRow {
  std::int64_t n = 0;
  std::int64_t k = 0;
  std::optional<std::int64_t> r;
  std::string regime;
  std::optional<ExactRational> exact;
  std::string exact_decimal;
  std::string eq1_bound;
  std::string eq1_valid;
  std::string estimate_low;
  std::string estimate_high;
  std::string sim_mean;
  std::string sim_stderr;
  std::string sim_trials;
  std::vector<std::string> flags;
  std::string ratio_bound_exact;
  std::string ratio_exact_estimate;

  bool has_flag(std::string_view prefix) const;
};

inline constexpr std::string_view kCsvHeader =
    "n,k,r,regime,exact_num,exact_den,exact_decimal,eq1_bound,eq1_valid,estimate_low,estimate_high,"
    "sim_mean,sim_stderr,sim_trials,flags,ratio_bound_exact,ratio_exact_estimate";

/// Rows in grid order (n outer, k inner). Failures in one cell are recorded
/// in that row's flags; the sweep itself does not throw for them.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

/// Rows for a single (n, k) cell, as run_sweep produces them.
SweepRow evaluate_cell(std::int64_t n, std::int64_t k, const SweepSpec& spec);

struct SweepTable {
  std::vector<std::string> metadata;  // without the leading '#'
  std::vector<SweepRow> rows;
};

std::string write_csv(const SweepTable& table);
SweepTable read_csv(std::string_view text);

}  // namespace needle

#endif  // NEEDLE_REPORT_HPP
