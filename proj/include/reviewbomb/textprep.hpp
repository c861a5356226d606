#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace reviewbomb {

enum class Stemming : std::uint8_t { None, SuffixStrip };

struct TokenStream {
  /// Lowercase terms matching [a-z][a-z0-9']*, stopwords removed.
  std::vector<std::string> tokens;
  /// Code points in the text the tokens came from.
  std::size_t source_length = 0;
};

class StopwordSet {
 public:
  StopwordSet() = default;
  explicit StopwordSet(std::unordered_set<std::string> words) : words_(std::move(words)) {}

  /// One token per line; blank lines and '#' comments ignored; lowercased.
  static StopwordSet parse(std::string_view text);
  static StopwordSet load(const std::filesystem::path& path);
  /// The bundled English list.
  static const StopwordSet& english();

  bool contains(std::string_view w) const { return words_.contains(std::string(w)); }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  const std::unordered_set<std::string>& words() const { return words_; }

 private:
  std::unordered_set<std::string> words_;
};

/// NFC, lowercase, whitespace runs collapsed to one space, URLs removed,
/// HTML entities replaced by a space, runs of 4+ identical characters cut
/// to 3. Invalid UTF-8 is replaced by U+FFFD.
std::string normalize_text(std::string_view raw);

/// Splits on anything outside [a-z0-9] (an apostrophe is kept only between
/// two alphanumerics). Drops tokens that are shorter than 2, start with a
/// digit, or are stopwords.
TokenStream tokenize(std::string_view normalized, const StopwordSet& stopwords,
                     Stemming stemming = Stemming::None);

/// Conservative suffix stripping. The first matching rule applies:
///   -ing, -ed : stem keeps >= 3 chars and a vowel; a doubled final
///               consonant (other than l, s, z) is undoubled
///   -ly       : stem keeps >= 3 chars
///   -es       : stem ends in s, x, z, ch or sh and keeps >= 3 chars
///   -s        : not after s, u or i; stem keeps >= 3 chars
std::string strip_suffix(std::string_view token);

/// normalize_text followed by tokenize.
TokenStream prepare(std::string_view raw, const StopwordSet& stopwords, Stemming stemming = Stemming::None);

}  // namespace reviewbomb
