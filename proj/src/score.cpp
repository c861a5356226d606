#include "reviewbomb/score.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace reviewbomb {

namespace {

// Integer division rounding halves away from zero; den > 0.
std::int64_t div_round(std::int64_t num, std::int64_t den) {
  if (num >= 0) return (2 * num + den) / (2 * den);
  return -((-2 * num + den) / (2 * den));
}

}  // namespace

Score Score::from_double(double value) {
  return Score(static_cast<int>(std::lround(value * 10.0)));
}

std::string Score::str() const {
  int t = tenths_ < 0 ? -tenths_ : tenths_;
  std::string s = std::to_string(t / 10) + "." + std::to_string(t % 10);
  return tenths_ < 0 ? "-" + s : s;
}

std::optional<Score> parse_score(std::string_view text, int divisor) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty() || divisor <= 0) return std::nullopt;

  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  std::int64_t numerator = 0;
  std::int64_t denominator = 1;
  bool seen_digit = false;
  bool seen_point = false;
  for (char c : text) {
    if (c == '.' && !seen_point) {
      seen_point = true;
      continue;
    }
    if (c < '0' || c > '9') return std::nullopt;
    seen_digit = true;
    if (numerator > 100'000'000'000LL) return std::nullopt;
    numerator = numerator * 10 + (c - '0');
    if (seen_point) {
      if (denominator > 100'000'000'000LL) return std::nullopt;
      denominator *= 10;
    }
  }
  if (!seen_digit) return std::nullopt;
  if (negative) numerator = -numerator;
  std::int64_t tenths = div_round(numerator * 10, denominator * divisor);
  return Score::from_tenths(static_cast<int>(tenths));
}

Score mean_score(std::int64_t sum_tenths, std::int64_t count) {
  return Score::from_tenths(static_cast<int>(div_round(sum_tenths, count)));
}

}  // namespace reviewbomb
