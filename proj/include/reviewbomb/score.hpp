#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace reviewbomb {

/// A 0-10 score held as an integer count of tenths, so threshold comparisons
/// such as "gap >= 4.0" or "score <= 1.0" are exact.
class Score {
 public:
  constexpr Score() = default;

  static constexpr Score from_tenths(int tenths) { return Score(tenths); }

  /// Rounds to the nearest tenth, halves away from zero.
  static Score from_double(double value);

  constexpr int tenths() const { return tenths_; }
  constexpr double value() const { return tenths_ / 10.0; }

  constexpr bool in_range() const { return tenths_ >= 0 && tenths_ <= 100; }

  /// "7.9", "10.0", "0.0".
  std::string str() const;

  constexpr auto operator<=>(const Score&) const = default;

 private:
  constexpr explicit Score(int tenths) : tenths_(tenths) {}
  int tenths_ = 0;
};

/// Parses a decimal literal ("7", "7.5", " 79 ") and rounds it to tenths of
/// the given scale divisor: parse_score("79", 10) yields 7.9.
std::optional<Score> parse_score(std::string_view text, int divisor = 1);

/// Mean of tenths values rounded to one decimal, halves away from zero.
Score mean_score(std::int64_t sum_tenths, std::int64_t count);

}  // namespace reviewbomb
