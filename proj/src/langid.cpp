#include "reviewbomb/langid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "reviewbomb/errors.hpp"
#include "reviewbomb/resources.hpp"

namespace reviewbomb {

namespace {

// Lowercase letter runs; every other code point separates words.
std::vector<std::u32string> letter_words(std::string_view text, std::size_t* letters = nullptr) {
  std::vector<std::u32string> words;
  std::u32string cur;
  std::size_t n_letters = 0;
  int32_t i = 0;
  const auto len = static_cast<int32_t>(text.size());
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  while (i < len) {
    UChar32 c;
    U8_NEXT(s, i, len, c);
    if (c >= 0 && u_isalpha(c)) {
      cur.push_back(static_cast<char32_t>(u_tolower(c)));
      ++n_letters;
    } else if (c == '\'' && !cur.empty()) {
      cur.push_back(U'\'');
    } else if (!cur.empty()) {
      words.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  for (auto& w : words)
    while (!w.empty() && w.back() == U'\'') w.pop_back();
  std::erase_if(words, [](const std::u32string& w) { return w.empty(); });
  if (letters) *letters = n_letters;
  return words;
}

void append_utf8(std::string& out, char32_t c) {
  uint8_t buf[4];
  int32_t len = 0;
  UBool err = false;
  U8_APPEND(buf, len, 4, static_cast<UChar32>(c), err);
  if (!err) out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(len));
}

std::string to_utf8(std::u32string_view s) {
  std::string out;
  for (char32_t c : s) append_utf8(out, c);
  return out;
}

}  // namespace

std::map<std::string, std::size_t> count_trigrams(std::string_view text) {
  std::map<std::string, std::size_t> counts;
  for (const auto& word : letter_words(text)) {
    std::u32string padded = U" " + word + U" ";
    for (std::size_t i = 0; i + 3 <= padded.size(); ++i) ++counts[to_utf8(std::u32string_view(padded).substr(i, 3))];
  }
  return counts;
}

LanguageProfile build_profile(std::string_view sample, std::string language_tag, StopwordSet stopwords) {
  auto counts = count_trigrams(sample);
  double total = 0.0;
  for (const auto& [_, n] : counts) total += static_cast<double>(n);
  if (total == 0.0) throw UserError("language sample contains no letters");
  LanguageProfile p;
  p.language_tag = std::move(language_tag);
  p.stopwords = std::move(stopwords);
  for (const auto& [tri, n] : counts) p.trigram_weights.emplace(tri, static_cast<double>(n) / total);
  return p;
}

const LanguageProfile& english_profile() {
  static const LanguageProfile profile = [] {
    auto words = StopwordSet::english().words();
    const StopwordSet common = StopwordSet::parse(resources::english_common_words());
    words.insert(common.words().begin(), common.words().end());
    return build_profile(resources::english_sample(), "en", StopwordSet(std::move(words)));
  }();
  return profile;
}

Detection detect_english(std::string_view text, const LanguageProfile& profile, const DetectorConfig& config) {
  Detection d;
  std::size_t letters = 0;
  auto words = letter_words(text, &letters);
  if (letters < config.min_chars || words.empty()) return d;

  auto counts = count_trigrams(text);
  double dot = 0.0;
  double text_norm2 = 0.0;
  for (const auto& [tri, n] : counts) {
    double v = static_cast<double>(n);
    text_norm2 += v * v;
    auto it = profile.trigram_weights.find(tri);
    if (it != profile.trigram_weights.end()) dot += v * it->second;
  }
  double profile_norm2 = 0.0;
  for (const auto& [_, w] : profile.trigram_weights) profile_norm2 += w * w;
  if (text_norm2 > 0.0 && profile_norm2 > 0.0) d.trigram_cosine = dot / std::sqrt(text_norm2 * profile_norm2);

  std::size_t hits = 0;
  for (const auto& w : words)
    if (profile.stopwords.contains(to_utf8(w))) ++hits;
  d.stopword_ratio = static_cast<double>(hits) / static_cast<double>(words.size());

  d.confidence = std::clamp(std::max(d.trigram_cosine, d.stopword_ratio), 0.0, 1.0);
  d.decision = d.confidence >= config.accept ? LanguageDecision::English : LanguageDecision::NonEnglish;
  return d;
}

nlohmann::json profile_to_json(const LanguageProfile& profile) {
  nlohmann::json trigrams = nlohmann::json::array();
  for (const auto& [tri, w] : profile.trigram_weights) trigrams.push_back({tri, w});
  std::vector<std::string> stop(profile.stopwords.words().begin(), profile.stopwords.words().end());
  std::sort(stop.begin(), stop.end());
  return {{"language_tag", profile.language_tag}, {"trigrams", trigrams}, {"stopwords", stop}};
}

LanguageProfile profile_from_json(const nlohmann::json& j) {
  LanguageProfile p;
  p.language_tag = j.at("language_tag").get<std::string>();
  double total = 0.0;
  for (const auto& entry : j.at("trigrams")) {
    double w = entry.at(1).get<double>();
    if (!(w >= 0.0)) throw UserError("profile trigram weight must be non-negative");
    p.trigram_weights[entry.at(0).get<std::string>()] = w;
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw UserError("profile trigram weights must sum to 1");
  std::unordered_set<std::string> stop;
  for (const auto& w : j.at("stopwords")) stop.insert(w.get<std::string>());
  p.stopwords = StopwordSet(std::move(stop));
  return p;
}

LanguageProfile load_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UserError("cannot read language profile: " + path.string());
  try {
    return profile_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw UserError("invalid language profile " + path.string() + ": " + e.what());
  }
}

void to_json(nlohmann::json& j, const DetectorConfig& c) {
  j = {{"accept", c.accept}, {"min_chars", c.min_chars}};
}

void from_json(const nlohmann::json& j, DetectorConfig& c) {
  DetectorConfig d;
  c.accept = j.value("accept", d.accept);
  c.min_chars = j.value("min_chars", d.min_chars);
}

}  // namespace reviewbomb
