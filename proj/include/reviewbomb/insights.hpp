#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "reviewbomb/models.hpp"
#include "reviewbomb/vectorize.hpp"

namespace reviewbomb {

enum class RankingMode : std::uint8_t {
  Conditional,  // theta(t | RB), descending
  Distinctive,  // ln(theta(t | RB) / theta(t | NonRB)), descending
};

std::string_view ranking_mode_name(RankingMode m);
std::optional<RankingMode> parse_ranking_mode(std::string_view s);

struct TermScore {
  std::string term;
  double rb_conditional_prob = 0.0;
  double distinctiveness = 0.0;

  double key(RankingMode m) const { return m == RankingMode::Conditional ? rb_conditional_prob : distinctiveness; }
};

struct TermRanking {
  std::vector<TermScore> entries;
  RankingMode mode = RankingMode::Conditional;
};

/// Ties are broken by term, ascending. Throws UserError when the model was
/// trained against a different vocabulary.
TermRanking rank_terms(const MnbParams& params, const TfidfModel& vocabulary, RankingMode mode, std::size_t top_k);

/// Ordered categories; a term belongs to the first category listing it.
class ConceptLexicon {
 public:
  ConceptLexicon() = default;
  explicit ConceptLexicon(std::vector<std::pair<std::string, std::set<std::string>>> categories);

  /// companies, originality, economic, sentiment, frustration.
  static ConceptLexicon defaults();
  /// {"category": ["term", ...], ...}; file order is category order.
  static ConceptLexicon from_json(const nlohmann::ordered_json& j);
  static ConceptLexicon load(const std::filesystem::path& path);

  const std::vector<std::pair<std::string, std::set<std::string>>>& categories() const { return categories_; }
  /// Category name or "uncategorized".
  std::string category_of(const std::string& term) const;

 private:
  std::vector<std::pair<std::string, std::set<std::string>>> categories_;
};

inline constexpr std::string_view kUncategorized = "uncategorized";

struct CategoryShare {
  std::string category;
  std::vector<std::string> terms;  // in ranking order
  double share = 0.0;              // of the ranked terms
};

/// One entry per lexicon category in lexicon order, then "uncategorized".
std::vector<CategoryShare> categorize_terms(const TermRanking& ranking, const ConceptLexicon& lexicon);

struct WordcloudOptions {
  std::size_t top_k = 50;
  double width = 1200.0;
  double height = 800.0;
  double min_font_px = 14.0;
  double max_font_px = 72.0;
  double padding_px = 6.0;
  /// Estimated glyph advance as a fraction of the font size.
  double char_width_factor = 0.62;

  bool operator==(const WordcloudOptions&) const = default;
};

struct PlacedTerm {
  std::string term;
  std::string category;
  double weight = 0.0;
  double font_px = 0.0;
  // Bounding box, top-left origin.
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;
};

struct WeightedTerm {
  std::string term;
  double weight = 0.0;  // min-max normalized over the exported terms
  std::string category;
};

struct Wordcloud {
  std::vector<WeightedTerm> weights;
  std::vector<PlacedTerm> placed;
  std::size_t omitted = 0;
  std::string svg;
};

/// Terms are laid out greedily in descending weight on centered horizontal
/// rows. When the canvas fills up the remaining terms are omitted.
Wordcloud export_wordcloud(const TermRanking& ranking, const ConceptLexicon& lexicon, const WordcloudOptions& options);

nlohmann::json weights_to_json(const std::vector<WeightedTerm>& weights);

void to_json(nlohmann::json& j, const TermRanking& r);
void to_json(nlohmann::json& j, const CategoryShare& c);
void to_json(nlohmann::json& j, const WordcloudOptions& o);
void from_json(const nlohmann::json& j, WordcloudOptions& o);

}  // namespace reviewbomb
