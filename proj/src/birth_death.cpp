#include "needle/birth_death.hpp"

#include "json.hpp"

#include <algorithm>
#include <utility>

namespace needle {

BirthDeathChain::BirthDeathChain(std::int64_t n, std::vector<ExactRational> p_minus,
                                 std::vector<ExactRational> p_plus)
    : n_(n), p_minus_(std::move(p_minus)), p_plus_(std::move(p_plus)) {
  if (n < 1) throw std::invalid_argument("BirthDeathChain: n must be >= 1");
  if (std::ssize(p_minus_) != n || std::ssize(p_plus_) != n) {
    throw std::invalid_argument("BirthDeathChain: p_minus and p_plus must each have n entries");
  }
  for (std::int64_t s = 0; s <= n; ++s) {
    const ExactRational d = down(s);
    const ExactRational u = up(s);
    if (d < 0 || d > 1 || u < 0 || u > 1) {
      throw std::invalid_argument("BirthDeathChain: probability outside [0,1] at state " +
                                  std::to_string(s));
    }
    if (d + u > 1) {
      throw std::invalid_argument("BirthDeathChain: p_minus + p_plus > 1 at state " +
                                  std::to_string(s));
    }
  }
}

ExactRational BirthDeathChain::down(std::int64_t state) const {
  if (state < 1 || state > n_) return 0;
  return p_minus_[static_cast<std::size_t>(state - 1)];
}

ExactRational BirthDeathChain::up(std::int64_t state) const {
  if (state < 0 || state >= n_) return 0;
  return p_plus_[static_cast<std::size_t>(state)];
}

ExactRational BirthDeathChain::stay(std::int64_t state) const {
  return ExactRational(1) - down(state) - up(state);
}

namespace {

void require_up_state(const BirthDeathChain& chain, std::int64_t i) {
  if (i < 0 || i >= chain.n()) {
    throw std::out_of_range("hitting time: state " + std::to_string(i) + " outside [0.." +
                            std::to_string(chain.n() - 1) + "]");
  }
}

}  // namespace

ExactRational hitting_time_up(const BirthDeathChain& chain, std::int64_t i) {
  require_up_state(chain, i);
  for (std::int64_t l = 0; l <= i; ++l) {
    if (chain.up(l) == 0) {
      throw UnreachableError("state " + std::to_string(i + 1) + " unreachable: p_plus[" +
                             std::to_string(l) + "] = 0");
    }
  }
  // Walk k downward so the product over l in [k+1..i] grows by one factor per step.
  ExactRational sum = 0;
  ExactRational product = 1;
  for (std::int64_t k = i; k >= 0; --k) {
    sum += product / chain.up(k);
    product *= chain.down(k) / chain.up(k);
  }
  return sum;
}

HittingTimeTable hitting_times_all(const BirthDeathChain& chain) {
  HittingTimeTable table;
  table.up_times.reserve(static_cast<std::size_t>(chain.n()));
  ExactRational previous = 0;
  for (std::int64_t i = 0; i < chain.n(); ++i) {
    const ExactRational up = chain.up(i);
    if (up == 0) {
      throw UnreachableError("state " + std::to_string(i + 1) + " unreachable: p_plus[" +
                             std::to_string(i) + "] = 0");
    }
    previous = (ExactRational(1) + chain.down(i) * previous) / up;
    table.up_times.push_back(previous);
  }
  return table;
}

std::vector<ExactRational> hitting_time_oracle_all(const BirthDeathChain& chain,
                                                   const std::set<std::int64_t>& target) {
  const std::int64_t n = chain.n();
  if (target.empty()) throw std::invalid_argument("hitting_time_oracle: empty target set");
  for (std::int64_t t : target) {
    if (t < 0 || t > n) throw std::out_of_range("hitting_time_oracle: target state out of range");
  }

  // Unknowns are the non-target states; column index per state, -1 on the target.
  std::vector<std::int64_t> column(static_cast<std::size_t>(n + 1), -1);
  std::vector<std::int64_t> states;
  for (std::int64_t s = 0; s <= n; ++s) {
    if (!target.contains(s)) {
      column[static_cast<std::size_t>(s)] = std::ssize(states);
      states.push_back(s);
    }
  }
  const std::size_t m = states.size();

  // Row r: h_s - sum_{s' not in target} P(s, s') h_{s'} = 1, augmented in column m.
  std::vector<std::vector<ExactRational>> a(m, std::vector<ExactRational>(m + 1, ExactRational(0)));
  for (std::size_t r = 0; r < m; ++r) {
    const std::int64_t s = states[r];
    a[r][r] = 1;
    a[r][m] = 1;
    const std::pair<std::int64_t, ExactRational> moves[] = {
        {s - 1, chain.down(s)}, {s, chain.stay(s)}, {s + 1, chain.up(s)}};
    for (const auto& [next, p] : moves) {
      if (next < 0 || next > n || p == 0) continue;
      const std::int64_t c = column[static_cast<std::size_t>(next)];
      if (c >= 0) a[r][static_cast<std::size_t>(c)] -= p;
    }
  }

  // Gauss-Jordan; any nonzero pivot is as good as any other over the rationals.
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    while (pivot < m && a[pivot][col] == 0) ++pivot;
    if (pivot == m) {
      throw SingularSystemError("absorbing non-target region: first-step system is singular");
    }
    std::swap(a[pivot], a[col]);
    const ExactRational inv = ExactRational(1) / a[col][col];
    for (std::size_t c = col; c <= m; ++c) a[col][c] *= inv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const ExactRational factor = a[r][col];
      for (std::size_t c = col; c <= m; ++c) a[r][c] -= factor * a[col][c];
    }
  }

  std::vector<ExactRational> h(static_cast<std::size_t>(n + 1), ExactRational(0));
  for (std::size_t r = 0; r < m; ++r) h[static_cast<std::size_t>(states[r])] = a[r][m];
  return h;
}

ExactRational hitting_time_oracle(const BirthDeathChain& chain,
                                  const std::set<std::int64_t>& target, std::int64_t start) {
  if (start < 0 || start > chain.n()) throw std::out_of_range("hitting_time_oracle: bad start");
  if (target.contains(start)) return 0;
  return hitting_time_oracle_all(chain, target)[static_cast<std::size_t>(start)];
}

BirthDeathChain chain_from_json(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("chain JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("p_minus") ||
      !doc.contains("p_plus")) {
    throw std::invalid_argument("chain JSON: expected object with n, p_minus, p_plus");
  }
  auto read_list = [&](const char* key) {
    const auto& list = doc.at(key);
    if (!list.is_array()) throw std::invalid_argument(std::string("chain JSON: ") + key + " must be an array");
    std::vector<ExactRational> out;
    for (const auto& item : list) {
      if (item.is_string()) {
        out.push_back(parse_rational(item.get<std::string>()));
      } else if (item.is_number_integer()) {
        out.emplace_back(item.get<std::int64_t>());
      } else {
        throw std::invalid_argument(std::string("chain JSON: ") + key +
                                    " entries must be \"a/b\" strings or integers");
      }
    }
    return out;
  };
  if (!doc.at("n").is_number_integer()) throw std::invalid_argument("chain JSON: n must be an integer");
  return BirthDeathChain(doc.at("n").get<std::int64_t>(), read_list("p_minus"), read_list("p_plus"));
}

std::string chain_to_json(const BirthDeathChain& chain) {
  nlohmann::json doc;
  doc["n"] = chain.n();
  doc["p_minus"] = nlohmann::json::array();
  doc["p_plus"] = nlohmann::json::array();
  for (const auto& p : chain.p_minus()) doc["p_minus"].push_back(to_fraction_string(p));
  for (const auto& p : chain.p_plus()) doc["p_plus"].push_back(to_fraction_string(p));
  return doc.dump();
}

}  // namespace needle
