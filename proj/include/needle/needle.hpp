#ifndef NEEDLE_NEEDLE_HPP
#define NEEDLE_NEEDLE_HPP

// The generalized Needle benchmark and the exact expected runtime of
// randomized local search on it.
//
// Needle_{n,k}(x) = 1 iff x has at least n-k ones. Until an optimum is
// found RLS accepts every move, so the ones-count performs the unbiased
// walk with p_i^- = i/n and p_i^+ = (n-i)/n. Everything here is exact.

#include "needle/birth_death.hpp"
#include "needle/exact.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace needle {

struct NeedleInstance {
  std::int64_t n;  // problem size (bits)
  std::int64_t k;  // needle radius

  NeedleInstance(std::int64_t n_, std::int64_t k_);

  /// Smallest ones-count that is optimal.
  std::int64_t threshold() const { return n - k; }

  friend bool operator==(const NeedleInstance&, const NeedleInstance&) = default;
};

/// Bits as 0/1 bytes; parse_bits("1101") gives {1,1,0,1}.
std::vector<std::uint8_t> parse_bits(std::string_view text);

int needle_fitness(const NeedleInstance& instance, std::span<const std::uint8_t> bits);

/// The reduced ones-count chain of the unbiased hypercube walk.
BirthDeathChain needle_chain(std::int64_t n);

/// E[T_i^+] = C(n, <=i) / C(n-1, i) for the reduced chain.
ExactRational hitting_time_plus_closed(std::int64_t n, std::int64_t i);

/// E[T(i)]: expected iterations from a start with i ones. Zero once i >= n-k.
ExactRational expected_runtime_from(const NeedleInstance& instance, std::int64_t i);

/// E[T(i)] for every i in [0..n] in one O(n) pass.
std::vector<ExactRational> runtime_profile(const NeedleInstance& instance);

/// E[T] from a uniformly random start: sum_i C(n,i) 2^-n E[T(i)].
ExactRational expected_runtime(const NeedleInstance& instance);

/// With X ~ Bin(n, 1/2):
///   w = Pr[X <= n-k], a = floor(E[X | X <= n-k]), u = Pr[X <= a],
///   lower = u E[T(a)], upper = w E[T(a)]; lower <= E[T] <= upper.
struct StartDistributionStats {
  ExactRational w;
  std::int64_t a = 0;
  ExactRational u;
  ExactRational lower;
  ExactRational upper;
};

StartDistributionStats start_distribution_stats(const NeedleInstance& instance);

/// E[X | X <= n/2] for X ~ Bin(n, 1/2), n even, by enumeration and by the
/// identity n / (4 Pr[X <= n/2]) with Pr[X <= n/2] = (1 + 2^-n C(n, n/2)) / 2.
struct ConditionalMeanCheck {
  ExactRational enumerated_mean;
  ExactRational identity_mean;
  ExactRational enumerated_probability;
  ExactRational closed_probability;
};

ConditionalMeanCheck conditional_mean_identity(std::int64_t n);

/// r = n/2 - k, defined for even n and k <= n/2.
std::optional<std::int64_t> majority_radius(const NeedleInstance& instance);

}  // namespace needle

#endif  // NEEDLE_NEEDLE_HPP
