#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace reviewbomb {

/// Binary class label. The enumerator values double as the class index,
/// so RB is always listed first in class order.
enum class Label : std::uint8_t { RB = 0, NonRB = 1 };

inline constexpr std::size_t kNumClasses = 2;
inline constexpr std::array<Label, kNumClasses> kClassOrder{Label::RB, Label::NonRB};

constexpr std::size_t class_index(Label l) { return static_cast<std::size_t>(l); }

constexpr std::string_view label_name(Label l) {
  return l == Label::RB ? "RB" : "NonRB";
}

inline std::optional<Label> parse_label(std::string_view s) {
  if (s == "RB") return Label::RB;
  if (s == "NonRB") return Label::NonRB;
  return std::nullopt;
}

}  // namespace reviewbomb
