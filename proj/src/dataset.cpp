#include "reviewbomb/dataset.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "reviewbomb/errors.hpp"
#include "reviewbomb/jsonio.hpp"

namespace reviewbomb {

namespace {

bool has_text(std::string_view s) {
  for (unsigned char c : s)
    if (!std::isspace(c)) return true;
  return false;
}

bool is_english_user(const ReviewRecord& r, std::span<const std::uint8_t> english, std::size_t i) {
  return r.reviewer_kind == ReviewerKind::User && i < english.size() && english[i];
}

std::string csv_field(std::string_view s) {
  bool quote = s.find_first_of(",\"\n\r") != std::string_view::npos;
  if (!quote) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void CandidateCriteria::validate() const {
  if (!(gap_threshold > 0.0)) throw UserError("gap_threshold must be > 0");
  if (min_english_reviews < 1) throw UserError("min_english_reviews must be >= 1");
  if (!require_both_scores) throw UserError("require_both_scores=false is not supported: the gap needs both scores");
}

int CandidateCriteria::gap_tenths() const { return static_cast<int>(std::lround(gap_threshold * 10.0)); }

std::string_view zone_name(Zone z) {
  switch (z) {
    case Zone::UserPreferred:
      return "user_preferred";
    case Zone::CriticPreferred:
      return "critic_preferred";
    case Zone::RbCandidate:
      return "rb_candidate";
  }
  return "unknown";
}

std::string_view mode_name(ConstructionMode m) {
  return m == ConstructionMode::WithinCandidates ? "within_candidates" : "controls";
}

std::optional<ConstructionMode> parse_mode(std::string_view s) {
  if (s == "within_candidates") return ConstructionMode::WithinCandidates;
  if (s == "controls" || s == "candidates_vs_negative_controls") return ConstructionMode::CandidatesVsControls;
  return std::nullopt;
}

CandidateSelection select_candidates(std::span<const GameAggregate> aggregates, const CandidateCriteria& criteria) {
  criteria.validate();
  const int gap = criteria.gap_tenths();
  CandidateSelection sel;
  sel.zones.reserve(aggregates.size());
  for (const auto& g : aggregates) {
    if (!g.metascore || !g.avg_user_score) {
      sel.zones.emplace_back();
      continue;
    }
    const int diff = g.metascore->tenths() - g.avg_user_score->tenths();
    const bool candidate = g.n_english_user_reviews >= criteria.min_english_reviews && diff >= gap;
    if (candidate) {
      sel.candidates.insert(g.game_id);
      sel.zones.emplace_back(Zone::RbCandidate);
    } else if (diff < 0) {
      sel.zones.emplace_back(Zone::UserPreferred);
    } else {
      sel.zones.emplace_back(Zone::CriticPreferred);
    }
  }
  return sel;
}

Label label_review(Score score, const CorpusConfig& config) {
  return score <= config.label_threshold ? Label::RB : Label::NonRB;
}

std::array<std::size_t, kNumClasses> LabeledCorpus::label_counts() const {
  std::array<std::size_t, kNumClasses> counts{};
  for (const auto& e : entries) ++counts[class_index(e.label)];
  return counts;
}

std::vector<std::uint8_t> english_flags(std::span<const ReviewRecord> records, const LanguageProfile& profile,
                                        const DetectorConfig& config) {
  std::vector<std::uint8_t> flags(records.size(), 0);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.reviewer_kind != ReviewerKind::User || !has_text(r.review_text)) continue;
    flags[i] = detect_english(r.review_text, profile, config).decision == LanguageDecision::English;
  }
  return flags;
}

LabeledCorpus build_corpus(std::span<const ReviewRecord> records, std::span<const std::uint8_t> english,
                           const CandidateSelection& selection, const CorpusConfig& config) {
  if (english.size() != records.size()) throw InvariantError("english flags do not align with records");
  LabeledCorpus corpus;
  corpus.label_rule_threshold = config.label_threshold;
  corpus.construction_mode = config.mode;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (!is_english_user(r, english, i) || !has_text(r.review_text)) continue;
    const bool candidate = selection.is_candidate(r.game_id);
    Label label;
    if (config.mode == ConstructionMode::WithinCandidates) {
      if (!candidate) continue;
      label = label_review(r.score, config);
    } else if (candidate) {
      if (label_review(r.score, config) != Label::RB) continue;
      label = Label::RB;
    } else {
      if (r.score > config.control_max_score) continue;
      label = Label::NonRB;
    }
    corpus.entries.push_back({r.review_text, r.score, r.game_id, label});
  }
  return corpus;
}

StatsReport corpus_stats(std::span<const ReviewRecord> records, std::span<const std::uint8_t> english,
                         std::span<const GameAggregate> aggregates, const CandidateSelection& selection) {
  if (english.size() != records.size()) throw InvariantError("english flags do not align with records");
  StatsReport s;
  std::unordered_map<std::string, std::uint64_t> reviews_per_game;
  std::uint64_t below3 = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (!is_english_user(r, english, i)) continue;
    ++reviews_per_game[r.game_id];
    if (selection.is_candidate(r.game_id)) {
      ++s.n_candidate_reviews;
    } else {
      ++s.n_noncandidate_reviews;
      if (r.score < Score::from_tenths(30)) ++below3;
    }
  }
  std::unordered_set<std::string> seen;
  for (const auto& g : aggregates) {
    if (!seen.insert(g.game_id).second) continue;
    if (selection.is_candidate(g.game_id)) {
      ++s.n_candidate_games;
      if (g.release_year)
        ++s.candidates_per_year[*g.release_year];
      else
        ++s.candidates_without_year;
    } else if (reviews_per_game[g.game_id] > 0) {
      ++s.n_noncandidate_games;
    }
  }
  if (s.n_candidate_games > 0)
    s.mean_reviews_per_candidate_game = static_cast<double>(s.n_candidate_reviews) / static_cast<double>(s.n_candidate_games);
  if (s.n_noncandidate_games > 0)
    s.mean_reviews_per_noncandidate_game =
        static_cast<double>(s.n_noncandidate_reviews) / static_cast<double>(s.n_noncandidate_games);
  if (s.n_noncandidate_reviews > 0)
    s.noncandidate_share_below_3 = static_cast<double>(below3) / static_cast<double>(s.n_noncandidate_reviews);
  return s;
}

std::vector<ScatterRow> export_scatter_data(std::span<const GameAggregate> aggregates,
                                            const CandidateSelection& selection) {
  if (selection.zones.size() != aggregates.size()) throw InvariantError("zones do not align with aggregates");
  std::vector<ScatterRow> rows;
  for (std::size_t i = 0; i < aggregates.size(); ++i) {
    const auto& g = aggregates[i];
    if (!selection.zones[i]) continue;
    rows.push_back({g.game_id, g.game_title, *g.metascore, *g.avg_user_score, g.release_year, *selection.zones[i]});
  }
  return rows;
}

ScorePopulations collect_score_populations(std::span<const ReviewRecord> records,
                                           std::span<const std::uint8_t> english,
                                           const CandidateSelection& selection) {
  ScorePopulations p;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (!is_english_user(r, english, i)) continue;
    (selection.is_candidate(r.game_id) ? p.candidate : p.control).push_back(r.score);
  }
  return p;
}

ScoreHistogram score_histogram(std::span<const Score> scores) {
  ScoreHistogram h{};
  for (Score s : scores) {
    if (!s.in_range()) throw InvariantError("score outside [0, 10]: " + s.str());
    ++h[static_cast<std::size_t>(s.tenths() / 10)];
  }
  return h;
}

ScoreHistograms export_score_histograms(const ScorePopulations& populations) {
  return {score_histogram(populations.candidate), score_histogram(populations.control)};
}

void write_scatter_csv(std::ostream& out, std::span<const ScatterRow> rows) {
  out << "game_id,game_title,release_year,metascore,avg_user_score,zone\n";
  for (const auto& r : rows) {
    out << csv_field(r.game_id) << ',' << csv_field(r.game_title) << ','
        << (r.release_year ? std::to_string(*r.release_year) : "") << ',' << r.metascore.str() << ','
        << r.avg_user_score.str() << ',' << zone_name(r.zone) << '\n';
  }
}

void write_histograms_csv(std::ostream& out, const ScoreHistograms& h) {
  out << "bin,candidate,control\n";
  for (std::size_t b = 0; b < h.candidate.size(); ++b) out << b << ',' << h.candidate[b] << ',' << h.control[b] << '\n';
}

void write_corpus_jsonl(std::ostream& out, const LabeledCorpus& corpus) {
  nlohmann::json header = {{"kind", "labeled_corpus"},
                           {"label_rule_threshold", corpus.label_rule_threshold.value()},
                           {"construction_mode", mode_name(corpus.construction_mode)}};
  out << dump_json(header, false) << '\n';
  for (const auto& e : corpus.entries) {
    nlohmann::json j = {{"game_id", e.game_id},
                        {"score", e.score.value()},
                        {"label", label_name(e.label)},
                        {"review_text", e.review_text}};
    out << dump_json(j, false) << '\n';
  }
}

LabeledCorpus read_corpus_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UserError("cannot open corpus file: " + path.string());
  LabeledCorpus corpus;
  std::string line;
  std::size_t n = 0;
  try {
    while (std::getline(in, line)) {
      ++n;
      if (line.empty()) continue;
      auto j = nlohmann::json::parse(line);
      if (n == 1) {
        if (j.value("kind", "") != "labeled_corpus") throw UserError(path.string() + ": missing corpus header line");
        corpus.label_rule_threshold = Score::from_double(j.at("label_rule_threshold").get<double>());
        auto mode = parse_mode(j.at("construction_mode").get<std::string>());
        if (!mode) throw UserError(path.string() + ": unknown construction_mode");
        corpus.construction_mode = *mode;
        continue;
      }
      auto label = parse_label(j.at("label").get<std::string>());
      if (!label) throw UserError(path.string() + ":" + std::to_string(n) + ": unknown label");
      corpus.entries.push_back({j.at("review_text").get<std::string>(), Score::from_double(j.at("score").get<double>()),
                                j.at("game_id").get<std::string>(), *label});
    }
  } catch (const nlohmann::json::exception& e) {
    throw UserError(path.string() + ":" + std::to_string(n) + ": " + e.what());
  }
  if (n == 0) throw UserError(path.string() + ": empty corpus file");
  return corpus;
}

void to_json(nlohmann::json& j, const CandidateCriteria& c) {
  j = {{"min_english_reviews", c.min_english_reviews},
       {"gap_threshold", c.gap_threshold},
       {"require_both_scores", c.require_both_scores}};
}

void from_json(const nlohmann::json& j, CandidateCriteria& c) {
  CandidateCriteria d;
  c.min_english_reviews = j.value("min_english_reviews", d.min_english_reviews);
  c.gap_threshold = j.value("gap_threshold", d.gap_threshold);
  c.require_both_scores = j.value("require_both_scores", d.require_both_scores);
}

void to_json(nlohmann::json& j, const CorpusConfig& c) {
  j = {{"label_threshold", c.label_threshold.value()},
       {"construction_mode", mode_name(c.mode)},
       {"control_max_score", c.control_max_score.value()}};
}

void from_json(const nlohmann::json& j, CorpusConfig& c) {
  CorpusConfig d;
  c.label_threshold = Score::from_double(j.value("label_threshold", d.label_threshold.value()));
  c.control_max_score = Score::from_double(j.value("control_max_score", d.control_max_score.value()));
  std::string mode = j.value("construction_mode", std::string(mode_name(d.mode)));
  auto m = parse_mode(mode);
  if (!m) throw UserError("unknown construction_mode '" + mode + "'");
  c.mode = *m;
}

void to_json(nlohmann::json& j, const StatsReport& s) {
  nlohmann::json per_year = nlohmann::json::object();
  for (const auto& [year, n] : s.candidates_per_year) per_year[std::to_string(year)] = n;
  j = {{"n_candidate_games", s.n_candidate_games},
       {"n_candidate_reviews", s.n_candidate_reviews},
       {"mean_reviews_per_candidate_game", s.mean_reviews_per_candidate_game},
       {"n_noncandidate_games", s.n_noncandidate_games},
       {"n_noncandidate_reviews", s.n_noncandidate_reviews},
       {"mean_reviews_per_noncandidate_game", s.mean_reviews_per_noncandidate_game},
       {"noncandidate_share_below_3", s.noncandidate_share_below_3},
       {"candidates_per_year", per_year},
       {"candidates_without_year", s.candidates_without_year}};
}

void to_json(nlohmann::json& j, const ScatterRow& r) {
  j = {{"game_id", r.game_id},
       {"game_title", r.game_title},
       {"metascore", r.metascore.value()},
       {"avg_user_score", r.avg_user_score.value()},
       {"release_year", r.release_year ? nlohmann::json(*r.release_year) : nlohmann::json(nullptr)},
       {"zone", zone_name(r.zone)}};
}

void to_json(nlohmann::json& j, const ScoreHistograms& h) {
  j = {{"bins", {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10}}, {"candidate", h.candidate}, {"control", h.control}};
}

void to_json(nlohmann::json& j, const ScorePopulations& p) {
  auto tenths = [](const std::vector<Score>& v) {
    std::vector<int> out;
    out.reserve(v.size());
    for (Score s : v) out.push_back(s.tenths());
    return out;
  };
  j = {{"unit", "tenths"}, {"candidate", tenths(p.candidate)}, {"control", tenths(p.control)}};
}

void from_json(const nlohmann::json& j, ScorePopulations& p) {
  auto scores = [](const nlohmann::json& arr) {
    std::vector<Score> out;
    out.reserve(arr.size());
    for (const auto& v : arr) out.push_back(Score::from_tenths(v.get<int>()));
    return out;
  };
  p.candidate = scores(j.at("candidate"));
  p.control = scores(j.at("control"));
}

}  // namespace reviewbomb
