#include "reviewbomb/insights.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "reviewbomb/errors.hpp"

namespace reviewbomb {

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

constexpr std::array<std::string_view, 6> kPalette{"#1b6ca8", "#c0392b", "#27ae60", "#8e44ad", "#d35400", "#5d6d7e"};

}  // namespace

std::string_view ranking_mode_name(RankingMode m) {
  return m == RankingMode::Conditional ? "conditional" : "distinctive";
}

std::optional<RankingMode> parse_ranking_mode(std::string_view s) {
  if (s == "conditional") return RankingMode::Conditional;
  if (s == "distinctive") return RankingMode::Distinctive;
  return std::nullopt;
}

TermRanking rank_terms(const MnbParams& params, const TfidfModel& vocabulary, RankingMode mode, std::size_t top_k) {
  if (params.vocabulary_hash != vocabulary.vocabulary_hash() || params.n_features() != vocabulary.size())
    throw UserError("model vocabulary hash " + params.vocabulary_hash + " does not match TF-IDF vocabulary " +
                    vocabulary.vocabulary_hash());
  const auto rb = class_index(Label::RB);
  const auto non = class_index(Label::NonRB);
  TermRanking r;
  r.mode = mode;
  r.entries.reserve(vocabulary.size());
  for (std::size_t t = 0; t < vocabulary.size(); ++t) {
    r.entries.push_back({vocabulary.terms()[t], std::exp(params.feature_log_prob[rb][t]),
                         params.feature_log_prob[rb][t] - params.feature_log_prob[non][t]});
  }
  std::sort(r.entries.begin(), r.entries.end(), [mode](const TermScore& a, const TermScore& b) {
    if (a.key(mode) != b.key(mode)) return a.key(mode) > b.key(mode);
    return a.term < b.term;
  });
  if (r.entries.size() > top_k) r.entries.resize(top_k);
  return r;
}

ConceptLexicon::ConceptLexicon(std::vector<std::pair<std::string, std::set<std::string>>> categories)
    : categories_(std::move(categories)) {}

ConceptLexicon ConceptLexicon::defaults() {
  return ConceptLexicon({
      {"companies", {"blizzard", "activision", "rockstar", "company"}},
      {"originality", {"original", "classic", "new", "old", "remaster", "childhood"}},
      {"economic", {"money", "refund", "spend", "cash"}},
      {"sentiment", {"garbage", "terrible", "disgusting", "trash"}},
      {"frustration", {"false", "promise", "shame", "hope", "lie"}},
  });
}

ConceptLexicon ConceptLexicon::from_json(const nlohmann::ordered_json& j) {
  if (!j.is_object()) throw UserError("lexicon must be a JSON object of category -> [terms]");
  std::vector<std::pair<std::string, std::set<std::string>>> cats;
  for (const auto& [name, terms] : j.items()) {
    if (!terms.is_array()) throw UserError("lexicon category '" + name + "' must list terms in an array");
    std::set<std::string> set;
    for (const auto& t : terms) set.insert(t.get<std::string>());
    cats.emplace_back(name, std::move(set));
  }
  return ConceptLexicon(std::move(cats));
}

ConceptLexicon ConceptLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UserError("cannot read lexicon: " + path.string());
  try {
    return from_json(nlohmann::ordered_json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw UserError("invalid lexicon " + path.string() + ": " + e.what());
  }
}

std::string ConceptLexicon::category_of(const std::string& term) const {
  for (const auto& [name, terms] : categories_)
    if (terms.contains(term)) return name;
  return std::string(kUncategorized);
}

std::vector<CategoryShare> categorize_terms(const TermRanking& ranking, const ConceptLexicon& lexicon) {
  if (ranking.entries.empty()) throw UserError("cannot categorize an empty ranking");
  std::vector<CategoryShare> out;
  for (const auto& [name, _] : lexicon.categories()) out.push_back({name, {}, 0.0});
  out.push_back({std::string(kUncategorized), {}, 0.0});
  for (const auto& e : ranking.entries) {
    std::string cat = lexicon.category_of(e.term);
    auto it = std::find_if(out.begin(), out.end(), [&](const CategoryShare& c) { return c.category == cat; });
    it->terms.push_back(e.term);
  }
  const auto n = static_cast<double>(ranking.entries.size());
  for (auto& c : out) c.share = static_cast<double>(c.terms.size()) / n;
  return out;
}

Wordcloud export_wordcloud(const TermRanking& ranking, const ConceptLexicon& lexicon, const WordcloudOptions& opt) {
  if (opt.top_k < 1) throw UserError("wordcloud top_k must be >= 1");
  if (!(opt.min_font_px > 0.0 && opt.max_font_px >= opt.min_font_px))
    throw UserError("wordcloud font sizes must satisfy 0 < min <= max");
  Wordcloud wc;
  const std::size_t n = std::min(opt.top_k, ranking.entries.size());
  if (n == 0) throw UserError("wordcloud needs at least one ranked term");

  double lo = ranking.entries[0].key(ranking.mode);
  double hi = lo;
  for (std::size_t i = 0; i < n; ++i) {
    lo = std::min(lo, ranking.entries[i].key(ranking.mode));
    hi = std::max(hi, ranking.entries[i].key(ranking.mode));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = ranking.entries[i];
    double w = hi > lo ? (e.key(ranking.mode) - lo) / (hi - lo) : 1.0;
    wc.weights.push_back({e.term, w, lexicon.category_of(e.term)});
  }

  // Greedy rows. Row height is set by its first (largest) term.
  struct Row {
    std::vector<PlacedTerm> terms;
    double width = 0.0;
    double height = 0.0;
  };
  std::vector<Row> rows;
  const double usable_w = opt.width - 2.0 * opt.padding_px;
  const double usable_h = opt.height - 2.0 * opt.padding_px;
  double used_h = 0.0;
  std::size_t placed = 0;
  for (; placed < n; ++placed) {
    const auto& wt = wc.weights[placed];
    PlacedTerm p;
    p.term = wt.term;
    p.category = wt.category;
    p.weight = wt.weight;
    p.font_px = opt.min_font_px + wt.weight * (opt.max_font_px - opt.min_font_px);
    p.w = opt.char_width_factor * p.font_px * static_cast<double>(p.term.size());
    p.h = p.font_px * 1.2;
    if (p.w > usable_w) break;

    bool fits_row = !rows.empty() && rows.back().width + opt.padding_px + p.w <= usable_w;
    if (!fits_row) {
      double needed = used_h + (rows.empty() ? 0.0 : opt.padding_px) + p.h;
      if (needed > usable_h) break;
      used_h = needed;
      rows.push_back({{}, 0.0, p.h});
    }
    Row& row = rows.back();
    p.x = row.terms.empty() ? 0.0 : row.width + opt.padding_px;
    row.width = p.x + p.w;
    row.terms.push_back(std::move(p));
  }
  wc.omitted = n - placed;

  double y = opt.padding_px + (usable_h - used_h) / 2.0;
  for (auto& row : rows) {
    const double x0 = opt.padding_px + (usable_w - row.width) / 2.0;
    for (auto& p : row.terms) {
      p.x += x0;
      // Smaller terms sit on the row's vertical center line.
      p.y = y + (row.height - p.h) / 2.0;
      wc.placed.push_back(p);
    }
    y += row.height + opt.padding_px;
  }

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(opt.width) << "\" height=\""
      << num(opt.height) << "\" viewBox=\"0 0 " << num(opt.width) << ' ' << num(opt.height) << "\">\n"
      << "  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  for (const auto& p : wc.placed) {
    std::size_t color = lexicon.categories().size();
    for (std::size_t c = 0; c < lexicon.categories().size(); ++c)
      if (lexicon.categories()[c].first == p.category) color = c;
    std::string_view fill = color < lexicon.categories().size() ? kPalette[color % (kPalette.size() - 1)] : kPalette.back();
    // Baseline at roughly 80% of the line box.
    svg << "  <text x=\"" << num(p.x) << "\" y=\"" << num(p.y + p.h * 0.8) << "\" font-family=\"monospace\" font-size=\""
        << num(p.font_px) << "\" fill=\"" << fill << "\" data-weight=\"" << num(p.weight) << "\">"
        << xml_escape(p.term) << "</text>\n";
  }
  svg << "</svg>\n";
  wc.svg = svg.str();
  return wc;
}

nlohmann::json weights_to_json(const std::vector<WeightedTerm>& weights) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& w : weights) arr.push_back({{"term", w.term}, {"weight", w.weight}, {"category", w.category}});
  return arr;
}

void to_json(nlohmann::json& j, const TermRanking& r) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : r.entries)
    entries.push_back(
        {{"term", e.term}, {"rb_conditional_prob", e.rb_conditional_prob}, {"distinctiveness", e.distinctiveness}});
  j = {{"mode", ranking_mode_name(r.mode)}, {"entries", entries}};
}

void to_json(nlohmann::json& j, const CategoryShare& c) {
  j = {{"category", c.category}, {"terms", c.terms}, {"share", c.share}};
}

void to_json(nlohmann::json& j, const WordcloudOptions& o) {
  j = {{"top_k", o.top_k},         {"width", o.width},           {"height", o.height},
       {"min_font_px", o.min_font_px}, {"max_font_px", o.max_font_px}, {"padding_px", o.padding_px},
       {"char_width_factor", o.char_width_factor}};
}

void from_json(const nlohmann::json& j, WordcloudOptions& o) {
  WordcloudOptions d;
  o.top_k = j.value("top_k", d.top_k);
  o.width = j.value("width", d.width);
  o.height = j.value("height", d.height);
  o.min_font_px = j.value("min_font_px", d.min_font_px);
  o.max_font_px = j.value("max_font_px", d.max_font_px);
  o.padding_px = j.value("padding_px", d.padding_px);
  o.char_width_factor = j.value("char_width_factor", d.char_width_factor);
}

}  // namespace reviewbomb
