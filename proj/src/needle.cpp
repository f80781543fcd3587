#include "needle/needle.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace needle {

NeedleInstance::NeedleInstance(std::int64_t n_, std::int64_t k_) : n(n_), k(k_) {
  if (n < 1) throw std::invalid_argument("NeedleInstance: n must be >= 1");
  if (k < 0 || k > n) throw std::invalid_argument("NeedleInstance: k must lie in [0..n]");
}

std::vector<std::uint8_t> parse_bits(std::string_view text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') throw std::invalid_argument("parse_bits: expected only '0' and '1'");
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return bits;
}

int needle_fitness(const NeedleInstance& instance, std::span<const std::uint8_t> bits) {
  if (std::ssize(bits) != instance.n) {
    throw std::invalid_argument("needle_fitness: bit string length " + std::to_string(bits.size()) +
                                " does not match n = " + std::to_string(instance.n));
  }
  const auto ones = std::count_if(bits.begin(), bits.end(), [](std::uint8_t b) { return b != 0; });
  return ones >= instance.threshold() ? 1 : 0;
}

BirthDeathChain needle_chain(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("needle_chain: n must be >= 1");
  std::vector<ExactRational> p_minus;
  std::vector<ExactRational> p_plus;
  p_minus.reserve(static_cast<std::size_t>(n));
  p_plus.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 1; i <= n; ++i) p_minus.emplace_back(ExactInteger(i), ExactInteger(n));
  for (std::int64_t i = 0; i < n; ++i) p_plus.emplace_back(ExactInteger(n - i), ExactInteger(n));
  return BirthDeathChain(n, std::move(p_minus), std::move(p_plus));
}

ExactRational hitting_time_plus_closed(std::int64_t n, std::int64_t i) {
  if (n < 1) throw std::invalid_argument("hitting_time_plus_closed: n must be >= 1");
  if (i < 0 || i > n - 1) throw std::out_of_range("hitting_time_plus_closed: i must lie in [0..n-1]");
  return ExactRational(binomial_cum(n, i), binomial(n - 1, i));
}

namespace {

// Walks j upward keeping C(n, j), C(n, <=j) and C(n-1, j) current.
class UpTimeCursor {
 public:
  UpTimeCursor(std::int64_t n, std::int64_t j)
      : n_(n), j_(j), row_(binomial(n, j)), cum_(binomial_cum(n, j)), lower_row_(binomial(n - 1, j)) {}

  ExactRational value() const { return ExactRational(cum_, lower_row_); }

  void advance() {
    row_ = row_ * (n_ - j_) / (j_ + 1);
    lower_row_ = lower_row_ * (n_ - 1 - j_) / (j_ + 1);
    ++j_;
    cum_ += row_;
  }

 private:
  std::int64_t n_;
  std::int64_t j_;
  ExactInteger row_;
  ExactInteger cum_;
  ExactInteger lower_row_;
};

}  // namespace

ExactRational expected_runtime_from(const NeedleInstance& instance, std::int64_t i) {
  if (i < 0 || i > instance.n) throw std::out_of_range("expected_runtime_from: i must lie in [0..n]");
  const std::int64_t last = instance.threshold() - 1;
  if (i > last) return 0;
  ExactRational sum = 0;
  UpTimeCursor cursor(instance.n, i);
  for (std::int64_t j = i; j <= last; ++j) {
    sum += cursor.value();
    if (j < last) cursor.advance();
  }
  return sum;
}

std::vector<ExactRational> runtime_profile(const NeedleInstance& instance) {
  const std::int64_t n = instance.n;
  const std::int64_t last = instance.threshold() - 1;
  std::vector<ExactRational> profile(static_cast<std::size_t>(n + 1), ExactRational(0));
  if (last < 0) return profile;

  std::vector<ExactRational> up_times;
  up_times.reserve(static_cast<std::size_t>(last + 1));
  UpTimeCursor cursor(n, 0);
  for (std::int64_t j = 0; j <= last; ++j) {
    up_times.push_back(cursor.value());
    if (j < last) cursor.advance();
  }
  ExactRational suffix = 0;
  for (std::int64_t i = last; i >= 0; --i) {
    suffix += up_times[static_cast<std::size_t>(i)];
    profile[static_cast<std::size_t>(i)] = suffix;
  }
  return profile;
}

ExactRational expected_runtime(const NeedleInstance& instance) {
  const std::int64_t last = instance.threshold() - 1;
  if (last < 0) return 0;
  const auto profile = runtime_profile(instance);
  const BinomialRow row(instance.n);
  ExactRational weighted = 0;
  for (std::int64_t i = 0; i <= last; ++i) {
    weighted += row.at(i) * profile[static_cast<std::size_t>(i)];
  }
  return weighted / pow2(instance.n);
}

StartDistributionStats start_distribution_stats(const NeedleInstance& instance) {
  const std::int64_t n = instance.n;
  const std::int64_t top = instance.threshold();
  const BinomialRow row(n);
  const ExactInteger total = pow2(n);

  ExactInteger mass = 0;
  ExactInteger first_moment = 0;
  for (std::int64_t i = 0; i <= top; ++i) {
    mass += row.at(i);
    first_moment += row.at(i) * i;
  }

  StartDistributionStats stats;
  stats.w = ExactRational(mass, total);
  // Both operands are nonnegative, so integer division is the floor.
  const ExactInteger a = first_moment / mass;
  stats.a = a.convert_to<std::int64_t>();
  stats.u = ExactRational(row.cumulative(stats.a), total);
  const ExactRational at_a = expected_runtime_from(instance, stats.a);
  stats.lower = stats.u * at_a;
  stats.upper = stats.w * at_a;
  return stats;
}

ConditionalMeanCheck conditional_mean_identity(std::int64_t n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("conditional_mean_identity: n must be even and >= 2");
  const std::int64_t half = n / 2;
  const ExactInteger total = pow2(n);

  // Route 1: enumerate the truncated distribution term by term.
  ExactInteger c = 1;
  ExactInteger mass = 0;
  ExactInteger first_moment = 0;
  for (std::int64_t i = 0; i <= half; ++i) {
    mass += c;
    first_moment += c * i;
    c = c * (n - i) / (i + 1);
  }

  // Route 2: symmetry of the row gives Pr[X <= n/2] from the central coefficient alone.
  const ExactRational closed_probability =
      (ExactRational(1) + ExactRational(binomial(n, half), total)) / 2;

  ConditionalMeanCheck check;
  check.enumerated_probability = ExactRational(mass, total);
  check.closed_probability = closed_probability;
  check.enumerated_mean = ExactRational(first_moment, mass);
  check.identity_mean = ExactRational(n) / (4 * closed_probability);
  return check;
}

std::optional<std::int64_t> majority_radius(const NeedleInstance& instance) {
  if (instance.n % 2 != 0 || instance.k > instance.n / 2) return std::nullopt;
  return instance.n / 2 - instance.k;
}

}  // namespace needle
