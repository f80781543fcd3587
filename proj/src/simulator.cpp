#include "needle/simulator.hpp"

#include "json.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace needle {

std::string_view variant_name(Variant variant) {
  return variant == Variant::kSymmetric ? "symmetric" : "standard";
}

std::optional<Variant> parse_variant(std::string_view name) {
  if (name == "standard") return Variant::kStandard;
  if (name == "symmetric") return Variant::kSymmetric;
  return std::nullopt;
}

void RunConfig::validate() const {
  if (fixed_ones && (*fixed_ones < 0 || *fixed_ones > instance.n)) {
    throw std::invalid_argument("RunConfig: fixed start ones-count must lie in [0..n]");
  }
  if (trial_cap && *trial_cap < 1) throw std::invalid_argument("RunConfig: trial_cap must be >= 1");
}

int variant_fitness(const NeedleInstance& instance, Variant variant, std::int64_t ones) {
  if (variant == Variant::kSymmetric) return std::min(ones, instance.n - ones) <= instance.k ? 1 : 0;
  return ones >= instance.threshold() ? 1 : 0;
}

int symmetric_fitness(const NeedleInstance& instance, std::span<const std::uint8_t> bits) {
  if (std::ssize(bits) != instance.n) {
    throw std::invalid_argument("symmetric_fitness: bit string length does not match n");
  }
  const auto ones = std::count_if(bits.begin(), bits.end(), [](std::uint8_t b) { return b != 0; });
  return variant_fitness(instance, Variant::kSymmetric, ones);
}

PackedBits::PackedBits(std::int64_t n) : n_(n), words_(static_cast<std::size_t>((n + 63) / 64), 0) {
  if (n < 1) throw std::invalid_argument("PackedBits: n must be >= 1");
}

bool PackedBits::get(std::int64_t pos) const {
  return ((words_[static_cast<std::size_t>(pos >> 6)] >> (pos & 63)) & 1U) != 0;
}

void PackedBits::flip(std::int64_t pos) {
  auto& word = words_[static_cast<std::size_t>(pos >> 6)];
  const std::uint64_t mask = std::uint64_t{1} << (pos & 63);
  word ^= mask;
  ones_ += (word & mask) != 0 ? 1 : -1;
}

void PackedBits::fill_uniform(Xoshiro256& rng) {
  ones_ = 0;
  for (auto& word : words_) word = rng();
  if (const auto tail = n_ & 63; tail != 0) words_.back() &= (std::uint64_t{1} << tail) - 1;
  for (auto word : words_) ones_ += std::popcount(word);
}

void PackedBits::set_first(std::int64_t count) {
  std::fill(words_.begin(), words_.end(), 0);
  for (std::int64_t pos = 0; pos < count; ++pos) {
    words_[static_cast<std::size_t>(pos >> 6)] |= std::uint64_t{1} << (pos & 63);
  }
  ones_ = count;
}

RlsWalker::RlsWalker(const NeedleInstance& instance, Variant variant, PackedBits start)
    : instance_(instance),
      variant_(variant),
      bits_(std::move(start)),
      fitness_(variant_fitness(instance, variant, bits_.ones())) {}

bool RlsWalker::step(Xoshiro256& rng) {
  const auto pos = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(instance_.n)));
  bits_.flip(pos);
  const int candidate = variant_fitness(instance_, variant_, bits_.ones());
  if (candidate >= fitness_) {
    fitness_ = candidate;
    return true;
  }
  bits_.flip(pos);
  return false;
}

TrialResult rls_run(const RunConfig& config, std::uint64_t trial_index) {
  config.validate();
  auto rng = Xoshiro256::for_trial(config.seed, trial_index);
  PackedBits start(config.instance.n);
  if (config.fixed_ones) {
    start.set_first(*config.fixed_ones);
  } else {
    start.fill_uniform(rng);
  }
  RlsWalker walker(config.instance, config.variant, std::move(start));

  const std::uint64_t cap = config.trial_cap.value_or(std::numeric_limits<std::uint64_t>::max());
  TrialResult result;
  while (!walker.optimal()) {
    if (result.iterations >= cap) {
      result.censored = true;
      break;
    }
    walker.step(rng);
    ++result.iterations;
  }
  return result;
}

SimulationBatch summarize(const RunConfig& config, std::span<const TrialResult> results) {
  SimulationBatch batch;
  batch.config = config;
  batch.seed = config.seed;
  batch.trials = results.size();

  std::uint64_t completed = 0;
  double sum = 0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& r : results) {
    if (r.censored) {
      ++batch.censored;
      continue;
    }
    const auto x = static_cast<double>(r.iterations);
    ++completed;
    sum += x;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (completed == 0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    batch.mean = batch.variance = batch.std_error = batch.min = batch.max = nan;
    batch.ci_low = batch.ci_high = nan;
    return batch;
  }
  batch.mean = sum / static_cast<double>(completed);
  double squares = 0;
  for (const auto& r : results) {
    if (r.censored) continue;
    const double d = static_cast<double>(r.iterations) - batch.mean;
    squares += d * d;
  }
  batch.variance = completed > 1 ? squares / static_cast<double>(completed - 1) : 0.0;
  batch.std_error = std::sqrt(batch.variance / static_cast<double>(completed));
  batch.min = lo;
  batch.max = hi;
  batch.ci_low = batch.mean - batch.ci_z * batch.std_error;
  batch.ci_high = batch.mean + batch.ci_z * batch.std_error;
  return batch;
}

SimulationBatch monte_carlo(const RunConfig& config, std::uint64_t trials, unsigned threads) {
  if (trials < 1) throw std::invalid_argument("monte_carlo: trials must be >= 1");
  config.validate();
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, trials));

  std::vector<TrialResult> results(trials);
  auto worker = [&](unsigned id) {
    for (std::uint64_t t = id; t < trials; t += threads) results[t] = rls_run(config, t);
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned id = 0; id < threads; ++id) pool.emplace_back(worker, id);
  }
  return summarize(config, results);
}

namespace {

nlohmann::json number_or_null(double x) {
  if (std::isnan(x)) return nullptr;
  return x;
}

double read_number(const nlohmann::json& doc, const char* key) {
  const auto& v = doc.at(key);
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return v.get<double>();
}

}  // namespace

std::string batch_to_json(const SimulationBatch& batch) {
  nlohmann::ordered_json config;
  config["n"] = batch.config.instance.n;
  config["k"] = batch.config.instance.k;
  config["variant"] = std::string(variant_name(batch.config.variant));
  if (batch.config.fixed_ones) {
    config["start"] = {{"fixed_ones", *batch.config.fixed_ones}};
  } else {
    config["start"] = "uniform";
  }
  config["seed"] = batch.config.seed;
  if (batch.config.trial_cap) {
    config["trial_cap"] = *batch.config.trial_cap;
  } else {
    config["trial_cap"] = nullptr;
  }

  nlohmann::ordered_json doc;
  doc["config"] = config;
  doc["trials"] = batch.trials;
  doc["mean"] = number_or_null(batch.mean);
  doc["variance"] = number_or_null(batch.variance);
  doc["stderr"] = number_or_null(batch.std_error);
  doc["min"] = number_or_null(batch.min);
  doc["max"] = number_or_null(batch.max);
  doc["ci_low"] = number_or_null(batch.ci_low);
  doc["ci_high"] = number_or_null(batch.ci_high);
  doc["ci_z"] = batch.ci_z;
  doc["censored"] = batch.censored;
  doc["seed"] = batch.seed;
  doc["rng_name"] = batch.rng_name;
  return doc.dump();
}

SimulationBatch batch_from_json(std::string_view json_text) {
  try {
    const auto doc = nlohmann::json::parse(json_text);
    const auto& config = doc.at("config");
    SimulationBatch batch;
    batch.config.instance = NeedleInstance(config.at("n").get<std::int64_t>(), config.at("k").get<std::int64_t>());
    const auto variant = parse_variant(config.at("variant").get<std::string>());
    if (!variant) throw std::invalid_argument("unknown variant");
    batch.config.variant = *variant;
    const auto& start = config.at("start");
    if (start.is_string()) {
      if (start.get<std::string>() != "uniform") throw std::invalid_argument("unknown start rule");
    } else {
      batch.config.fixed_ones = start.at("fixed_ones").get<std::int64_t>();
    }
    batch.config.seed = config.at("seed").get<std::uint64_t>();
    if (config.at("trial_cap").is_null()) {
      batch.config.trial_cap.reset();
    } else {
      batch.config.trial_cap = config.at("trial_cap").get<std::uint64_t>();
    }
    batch.config.validate();
    batch.trials = doc.at("trials").get<std::uint64_t>();
    batch.mean = read_number(doc, "mean");
    batch.variance = read_number(doc, "variance");
    batch.std_error = read_number(doc, "stderr");
    batch.min = read_number(doc, "min");
    batch.max = read_number(doc, "max");
    batch.ci_low = read_number(doc, "ci_low");
    batch.ci_high = read_number(doc, "ci_high");
    batch.ci_z = doc.at("ci_z").get<double>();
    batch.censored = doc.at("censored").get<std::uint64_t>();
    batch.seed = doc.at("seed").get<std::uint64_t>();
    batch.rng_name = doc.at("rng_name").get<std::string>();
    return batch;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("batch JSON: ") + e.what());
  }
}

TransitionCounts plateau_transition_counts(std::int64_t n, std::uint64_t steps, std::uint64_t seed) {
  const NeedleInstance instance(n, 0);
  TransitionCounts counts;
  counts.n = n;
  counts.by_state.assign(static_cast<std::size_t>(n + 1), {0, 0});

  std::uint64_t restart = 0;
  auto rng = Xoshiro256::for_trial(seed, restart);
  auto fresh_walker = [&] {
    PackedBits start(n);
    start.fill_uniform(rng);
    return RlsWalker(instance, Variant::kStandard, std::move(start));
  };
  RlsWalker walker = fresh_walker();
  while (counts.steps < steps) {
    if (walker.optimal()) {
      rng = Xoshiro256::for_trial(seed, ++restart);
      walker = fresh_walker();
      continue;
    }
    const std::int64_t before = walker.ones();
    walker.step(rng);
    const std::int64_t after = walker.ones();
    auto& slot = counts.by_state[static_cast<std::size_t>(before)];
    if (after == before + 1) {
      ++slot[1];
    } else if (after == before - 1) {
      ++slot[0];
    } else {
      throw std::logic_error("plateau walk: rejected or non-unit move");
    }
    ++counts.steps;
  }
  return counts;
}

ChiSquareResult chi_square_against_needle_chain(const TransitionCounts& counts) {
  ChiSquareResult out;
  const auto n = static_cast<double>(counts.n);
  for (std::int64_t state = 0; state <= counts.n; ++state) {
    const auto [down, up] = counts.by_state[static_cast<std::size_t>(state)];
    const std::uint64_t visits = down + up;
    if (visits == 0) continue;
    const double p_down = static_cast<double>(state) / n;
    const double p_up = 1.0 - p_down;
    if ((p_down == 0 && down > 0) || (p_up == 0 && up > 0)) out.impossible_move = true;
    if (p_down == 0 || p_up == 0) continue;  // deterministic state, nothing to test
    const double e_down = static_cast<double>(visits) * p_down;
    const double e_up = static_cast<double>(visits) * p_up;
    const double dd = static_cast<double>(down) - e_down;
    const double du = static_cast<double>(up) - e_up;
    out.statistic += dd * dd / e_down + du * du / e_up;
    ++out.degrees_of_freedom;
  }
  if (out.impossible_move) {
    out.p_value = 0;
  } else if (out.degrees_of_freedom > 0) {
    const boost::math::chi_squared dist(out.degrees_of_freedom);
    out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
  }
  return out;
}

}  // namespace needle
