#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "json.hpp"
#include "reviewbomb/textprep.hpp"

namespace reviewbomb {

/// Character-trigram frequencies plus a stopword list for one language.
/// Trigrams are taken over lowercase letter runs padded with one space on
/// each side, so " th", "the" and "he " all come from "the".
struct LanguageProfile {
  std::string language_tag;
  std::map<std::string, double> trigram_weights;  // relative frequencies, sum 1
  StopwordSet stopwords;
};

struct DetectorConfig {
  double accept = 0.5;
  std::size_t min_chars = 20;

  bool operator==(const DetectorConfig&) const = default;
};

enum class LanguageDecision : std::uint8_t { English, NonEnglish, Undetermined };

struct Detection {
  LanguageDecision decision = LanguageDecision::Undetermined;
  double confidence = 0.0;
  double trigram_cosine = 0.0;
  double stopword_ratio = 0.0;
};

/// Trigram counts of a text, keyed by UTF-8 trigram.
std::map<std::string, std::size_t> count_trigrams(std::string_view text);

LanguageProfile build_profile(std::string_view sample, std::string language_tag, StopwordSet stopwords);

/// Built once from the bundled English sample; its word list is the
/// stopword list plus a list of high-frequency English words.
const LanguageProfile& english_profile();

/// confidence = max(trigram cosine, stopword hit ratio). Texts with fewer
/// than min_chars letters are undetermined with confidence 0.
Detection detect_english(std::string_view text, const LanguageProfile& profile, const DetectorConfig& config = {});

nlohmann::json profile_to_json(const LanguageProfile& profile);
LanguageProfile profile_from_json(const nlohmann::json& j);
LanguageProfile load_profile(const std::filesystem::path& path);

void to_json(nlohmann::json& j, const DetectorConfig& c);
void from_json(const nlohmann::json& j, DetectorConfig& c);

}  // namespace reviewbomb
