#ifndef NEEDLE_BIRTH_DEATH_HPP
#define NEEDLE_BIRTH_DEATH_HPP

// Hitting times of nearest-neighbour Markov chains on [0..n].
//
// Three independent routes to the same numbers:
//   * hitting_time_up     sum-product closed form for E[T_i^+]
//   * hitting_times_all   one-pass recurrence over all states
//   * hitting_time_oracle dense first-step equations solved by exact
//                         Gaussian elimination (no use of either route above)

#include "needle/exact.hpp"

#include <cstdint>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace needle {

/// Some state on the way up has p_plus == 0.
class UnreachableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The first-step system has no unique solution: some non-target region is closed.
class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BirthDeathChain {
 public:
  /// p_minus[m] is the down probability of state m+1 (states 1..n);
  /// p_plus[m] is the up probability of state m (states 0..n-1).
  BirthDeathChain(std::int64_t n, std::vector<ExactRational> p_minus,
                  std::vector<ExactRational> p_plus);

  std::int64_t n() const { return n_; }

  // Per-state probabilities; zero where the move leaves [0..n].
  ExactRational down(std::int64_t state) const;
  ExactRational up(std::int64_t state) const;
  ExactRational stay(std::int64_t state) const;

  std::span<const ExactRational> p_minus() const { return p_minus_; }
  std::span<const ExactRational> p_plus() const { return p_plus_; }

  friend bool operator==(const BirthDeathChain&, const BirthDeathChain&) = default;

 private:
  std::int64_t n_;
  std::vector<ExactRational> p_minus_;
  std::vector<ExactRational> p_plus_;
};

struct HittingTimeTable {
  std::vector<ExactRational> up_times;  // entry i = E[T_i^+], i in [0..n-1]
};

/// E[T_i^+] = sum_{k=0}^{i} (1/p_k^+) prod_{l=k+1}^{i} p_l^- / p_l^+.
ExactRational hitting_time_up(const BirthDeathChain& chain, std::int64_t i);

/// All E[T_i^+] via E[T_i^+] = 1/p_i^+ + (p_i^-/p_i^+) E[T_{i-1}^+].
HittingTimeTable hitting_times_all(const BirthDeathChain& chain);

/// Expected steps from `start` until the chain first enters `target`.
ExactRational hitting_time_oracle(const BirthDeathChain& chain,
                                  const std::set<std::int64_t>& target,
                                  std::int64_t start);

/// Same system, returning h_s for every state s in [0..n] (0 on the target).
std::vector<ExactRational> hitting_time_oracle_all(const BirthDeathChain& chain,
                                                   const std::set<std::int64_t>& target);

/// {"n": int, "p_minus": ["a/b", ...], "p_plus": ["a/b", ...]}
BirthDeathChain chain_from_json(std::string_view json_text);
std::string chain_to_json(const BirthDeathChain& chain);

}  // namespace needle

#endif  // NEEDLE_BIRTH_DEATH_HPP
