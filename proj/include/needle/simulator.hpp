#ifndef NEEDLE_SIMULATOR_HPP
#define NEEDLE_SIMULATOR_HPP

// Monte Carlo runs of randomized local search: flip one uniformly random bit,
// keep the flip iff fitness does not decrease, stop at the first optimum.
//
// On Needle every non-optimal point has fitness 0, so the accept rule never
// rejects before the run ends and the walk is the unbiased hypercube walk.

#include "needle/needle.hpp"
#include "needle/rng.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace needle {

enum class Variant { kStandard, kSymmetric };

std::string_view variant_name(Variant variant);
std::optional<Variant> parse_variant(std::string_view name);

inline constexpr std::uint64_t kDefaultTrialCap = std::uint64_t{1} << 40;

struct RunConfig {
  NeedleInstance instance{1, 0};
  Variant variant = Variant::kStandard;
  std::optional<std::int64_t> fixed_ones;  // empty: uniform random start
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> trial_cap = kDefaultTrialCap;

  /// Throws std::invalid_argument when fixed_ones or trial_cap is out of range.
  void validate() const;
};

/// 1 iff min(ones, n - ones) <= k.
int symmetric_fitness(const NeedleInstance& instance, std::span<const std::uint8_t> bits);

/// Fitness from a ones-count for either variant.
int variant_fitness(const NeedleInstance& instance, Variant variant, std::int64_t ones);

/// Bit string packed into 64-bit words, with the ones-count kept up to date.
class PackedBits {
 public:
  explicit PackedBits(std::int64_t n);

  std::int64_t size() const { return n_; }
  std::int64_t ones() const { return ones_; }
  bool get(std::int64_t pos) const;
  void flip(std::int64_t pos);
  void fill_uniform(Xoshiro256& rng);
  void set_first(std::int64_t count);  // first `count` bits 1, rest 0

 private:
  std::int64_t n_;
  std::int64_t ones_ = 0;
  std::vector<std::uint64_t> words_;
};

/// One RLS search on a packed string.
class RlsWalker {
 public:
  RlsWalker(const NeedleInstance& instance, Variant variant, PackedBits start);

  bool optimal() const { return fitness_ == 1; }
  std::int64_t ones() const { return bits_.ones(); }

  /// One iteration; returns true iff the flip was accepted.
  bool step(Xoshiro256& rng);

 private:
  NeedleInstance instance_;
  Variant variant_;
  PackedBits bits_;
  int fitness_;
};

struct TrialResult {
  std::uint64_t iterations = 0;
  bool censored = false;
};

/// Iterations until the first optimum; deterministic in (config.seed, trial_index).
TrialResult rls_run(const RunConfig& config, std::uint64_t trial_index);

struct SimulationBatch {
  RunConfig config;
  std::uint64_t trials = 0;
  double mean = 0;
  double variance = 0;  // sample variance over completed trials
  double std_error = 0; // sqrt(variance / completed)
  double min = 0;
  double max = 0;
  double ci_low = 0;
  double ci_high = 0;
  double ci_z = 1.959963984540054;
  std::uint64_t censored = 0;
  std::uint64_t seed = 0;
  std::string rng_name{kRngName};
};

/// `threads` == 0 picks the hardware concurrency. The batch does not depend on it.
SimulationBatch monte_carlo(const RunConfig& config, std::uint64_t trials, unsigned threads = 0);

/// Summary of an already collected set of trial results, in index order.
SimulationBatch summarize(const RunConfig& config, std::span<const TrialResult> results);

std::string batch_to_json(const SimulationBatch& batch);
SimulationBatch batch_from_json(std::string_view json_text);

/// One-step transition counts of the ones-count observed on the plateau of
/// Needle_{n,0}, restarting from a fresh uniform string after every optimum.
struct TransitionCounts {
  std::int64_t n = 0;
  std::uint64_t steps = 0;
  std::vector<std::array<std::uint64_t, 2>> by_state;  // [state] -> {down, up}
};

TransitionCounts plateau_transition_counts(std::int64_t n, std::uint64_t steps, std::uint64_t seed);

struct ChiSquareResult {
  double statistic = 0;
  int degrees_of_freedom = 0;
  double p_value = 1;
  bool impossible_move = false;  // a move with zero model probability was observed
};

/// Pearson test of the counts against p_i^- = i/n, p_i^+ = (n-i)/n.
ChiSquareResult chi_square_against_needle_chain(const TransitionCounts& counts);

}  // namespace needle

#endif  // NEEDLE_SIMULATOR_HPP
