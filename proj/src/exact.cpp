#include "needle/exact.hpp"

#include <cctype>
#include <stdexcept>

namespace needle {

ExactInteger binomial(std::int64_t n, std::int64_t k) {
  if (n < 0) throw std::invalid_argument("binomial: n must be nonnegative");
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  // After step i the accumulator holds C(n, i+1), so each division is exact.
  ExactInteger c = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    c *= n - i;
    c /= i + 1;
  }
  return c;
}

ExactInteger binomial_cum(std::int64_t n, std::int64_t j) {
  if (n < 0) throw std::invalid_argument("binomial_cum: n must be nonnegative");
  if (j < 0) return 0;
  if (j >= n) return pow2(n);
  ExactInteger c = 1;
  ExactInteger sum = 1;
  for (std::int64_t m = 0; m < j; ++m) {
    c *= n - m;
    c /= m + 1;
    sum += c;
  }
  return sum;
}

ExactInteger pow2(std::int64_t n) {
  if (n < 0) throw std::invalid_argument("pow2: negative exponent");
  ExactInteger one = 1;
  return one << static_cast<unsigned>(n);
}

BinomialRow::BinomialRow(std::int64_t n) : n_(n) {
  if (n < 0) throw std::invalid_argument("BinomialRow: n must be nonnegative");
  row_.assign(static_cast<std::size_t>(n + 1), ExactInteger(1));
  // Pascal recurrence, updated in place from the right.
  for (std::int64_t m = 1; m <= n; ++m) {
    for (std::int64_t k = m - 1; k >= 1; --k) row_[k] += row_[k - 1];
  }
  prefix_.resize(row_.size());
  ExactInteger acc = 0;
  for (std::size_t k = 0; k < row_.size(); ++k) {
    acc += row_[k];
    prefix_[k] = acc;
  }
}

const ExactInteger& BinomialRow::at(std::int64_t k) const {
  if (k < 0 || k > n_) throw std::out_of_range("BinomialRow::at");
  return row_[static_cast<std::size_t>(k)];
}

ExactInteger BinomialRow::coefficient(std::int64_t k) const {
  if (k < 0 || k > n_) return 0;
  return row_[static_cast<std::size_t>(k)];
}

ExactInteger BinomialRow::cumulative(std::int64_t j) const {
  if (j < 0) return 0;
  if (j >= n_) return prefix_.back();
  return prefix_[static_cast<std::size_t>(j)];
}

ExactRational make_rational(const ExactInteger& num, const ExactInteger& den) {
  if (den == 0) throw std::domain_error("make_rational: zero denominator");
  return ExactRational(num, den);
}

std::string to_fraction_string(const ExactRational& q) {
  return numerator(q).str() + "/" + denominator(q).str();
}

std::string to_short_string(const ExactRational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return to_fraction_string(q);
}

std::string to_decimal(const ExactRational& q, int digits) {
  if (digits < 0) throw std::invalid_argument("to_decimal: negative digit count");
  const ExactInteger num = numerator(q);
  const ExactInteger& den = denominator(q);
  const bool negative = num < 0;

  ExactInteger scale = 1;
  for (int d = 0; d < digits; ++d) scale *= 10;
  ExactInteger scaled = abs(num) * scale;
  ExactInteger quot = scaled / den;
  ExactInteger rem = scaled - quot * den;

  const ExactInteger twice = rem * 2;
  if (twice > den || (twice == den && (quot & 1) != 0)) quot += 1;

  std::string body = quot.str();
  if (digits > 0) {
    if (body.size() <= static_cast<std::size_t>(digits)) {
      body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
    }
    body.insert(body.size() - static_cast<std::size_t>(digits), ".");
  }
  if (negative && quot != 0) body.insert(0, "-");
  return body;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// GMP auto-detects the base, so a leading zero would mean octal.
ExactInteger decimal_digits(std::string_view digits) {
  while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
  return ExactInteger(std::string(digits));
}

ExactInteger parse_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw std::invalid_argument("malformed integer");
  ExactInteger v = decimal_digits(s);
  return negative ? ExactInteger(-v) : v;
}

}  // namespace

ExactRational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("parse_rational: empty input");

  try {
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
      ExactInteger num = parse_integer(text.substr(0, slash));
      ExactInteger den = parse_integer(text.substr(slash + 1));
      if (den == 0) throw std::invalid_argument("zero denominator");
      return ExactRational(num, den);
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
      std::string_view head = text.substr(0, dot);
      std::string_view frac = text.substr(dot + 1);
      bool negative = false;
      if (!head.empty() && (head.front() == '-' || head.front() == '+')) {
        negative = head.front() == '-';
        head.remove_prefix(1);
      }
      if (head.empty() && frac.empty()) throw std::invalid_argument("bare dot");
      if ((!head.empty() && !all_digits(head)) || (!frac.empty() && !all_digits(frac))) {
        throw std::invalid_argument("malformed decimal");
      }
      ExactInteger scale = 1;
      for (std::size_t d = 0; d < frac.size(); ++d) scale *= 10;
      ExactInteger whole = head.empty() ? ExactInteger(0) : decimal_digits(head);
      ExactInteger part = frac.empty() ? ExactInteger(0) : decimal_digits(frac);
      ExactInteger num = whole * scale + part;
      if (negative) num = -num;
      return ExactRational(num, scale);
    }
    return ExactRational(parse_integer(text));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("parse_rational: " + std::string(e.what()) + " in '" +
                                std::string(text) + "'");
  }
}

}  // namespace needle
