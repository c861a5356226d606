#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "reviewbomb/ingest.hpp"
#include "reviewbomb/label.hpp"
#include "reviewbomb/langid.hpp"
#include "reviewbomb/score.hpp"

namespace reviewbomb {

struct CandidateCriteria {
  std::size_t min_english_reviews = 5;
  double gap_threshold = 4.0;
  /// The gap is undefined without both scores, so validate() rejects false.
  bool require_both_scores = true;

  void validate() const;
  int gap_tenths() const;

  bool operator==(const CandidateCriteria&) const = default;
};

enum class Zone : std::uint8_t { UserPreferred, CriticPreferred, RbCandidate };

std::string_view zone_name(Zone z);

struct CandidateSelection {
  std::set<std::string> candidates;
  /// Aligned with the aggregates passed to select_candidates; empty when the
  /// game lacks a metascore or a user score.
  std::vector<std::optional<Zone>> zones;

  bool is_candidate(const std::string& game_id) const { return candidates.contains(game_id); }
};

CandidateSelection select_candidates(std::span<const GameAggregate> aggregates, const CandidateCriteria& criteria = {});

enum class ConstructionMode : std::uint8_t { WithinCandidates, CandidatesVsControls };

std::string_view mode_name(ConstructionMode m);
std::optional<ConstructionMode> parse_mode(std::string_view s);

struct CorpusConfig {
  Score label_threshold = Score::from_tenths(10);
  ConstructionMode mode = ConstructionMode::WithinCandidates;
  /// Controls mode: NonRB reviews come from non-candidate games scored at or
  /// below this.
  Score control_max_score = Score::from_tenths(30);

  bool operator==(const CorpusConfig&) const = default;
};

/// RB iff score <= threshold.
Label label_review(Score score, const CorpusConfig& config = {});
inline Label label_review(const ReviewRecord& record, const CorpusConfig& config = {}) {
  return label_review(record.score, config);
}

struct CorpusEntry {
  std::string review_text;
  Score score;
  std::string game_id;
  Label label = Label::NonRB;

  bool operator==(const CorpusEntry&) const = default;
};

struct LabeledCorpus {
  std::vector<CorpusEntry> entries;
  Score label_rule_threshold = Score::from_tenths(10);
  ConstructionMode construction_mode = ConstructionMode::WithinCandidates;

  std::array<std::size_t, kNumClasses> label_counts() const;
};

/// Per-record English flag: 1 for user reviews the detector accepts.
/// Critic reviews and empty texts are 0.
std::vector<std::uint8_t> english_flags(std::span<const ReviewRecord> records, const LanguageProfile& profile,
                                        const DetectorConfig& config = {});

/// Keeps English user reviews with non-empty text, in record order.
LabeledCorpus build_corpus(std::span<const ReviewRecord> records, std::span<const std::uint8_t> english,
                           const CandidateSelection& selection, const CorpusConfig& config = {});

struct StatsReport {
  std::uint64_t n_candidate_games = 0;
  std::uint64_t n_candidate_reviews = 0;
  double mean_reviews_per_candidate_game = 0.0;
  std::uint64_t n_noncandidate_games = 0;
  std::uint64_t n_noncandidate_reviews = 0;
  double mean_reviews_per_noncandidate_game = 0.0;
  /// Share of non-candidate review scores strictly below 3.0.
  double noncandidate_share_below_3 = 0.0;
  std::map<int, std::uint64_t> candidates_per_year;
  std::uint64_t candidates_without_year = 0;
};

/// Review counts are English user reviews. Non-candidate games are those
/// with at least one English user review.
StatsReport corpus_stats(std::span<const ReviewRecord> records, std::span<const std::uint8_t> english,
                         std::span<const GameAggregate> aggregates, const CandidateSelection& selection);

struct ScatterRow {
  std::string game_id;
  std::string game_title;
  Score metascore;
  Score avg_user_score;
  std::optional<int> release_year;
  Zone zone = Zone::CriticPreferred;
};

/// One row per game that has both scores.
std::vector<ScatterRow> export_scatter_data(std::span<const GameAggregate> aggregates,
                                            const CandidateSelection& selection);

struct ScorePopulations {
  std::vector<Score> candidate;  // English user reviews of candidate games
  std::vector<Score> control;    // English user reviews of the other games
};

ScorePopulations collect_score_populations(std::span<const ReviewRecord> records,
                                           std::span<const std::uint8_t> english,
                                           const CandidateSelection& selection);

using ScoreHistogram = std::array<std::uint64_t, 11>;

/// Bin k holds scores in [k, k+1); 10.0 lands in bin 10.
ScoreHistogram score_histogram(std::span<const Score> scores);

struct ScoreHistograms {
  ScoreHistogram candidate{};
  ScoreHistogram control{};
};

ScoreHistograms export_score_histograms(const ScorePopulations& populations);

void write_scatter_csv(std::ostream& out, std::span<const ScatterRow> rows);
void write_histograms_csv(std::ostream& out, const ScoreHistograms& h);
void write_corpus_jsonl(std::ostream& out, const LabeledCorpus& corpus);
LabeledCorpus read_corpus_jsonl(const std::filesystem::path& path);

void to_json(nlohmann::json& j, const CandidateCriteria& c);
void from_json(const nlohmann::json& j, CandidateCriteria& c);
void to_json(nlohmann::json& j, const CorpusConfig& c);
void from_json(const nlohmann::json& j, CorpusConfig& c);
void to_json(nlohmann::json& j, const StatsReport& s);
void to_json(nlohmann::json& j, const ScatterRow& r);
void to_json(nlohmann::json& j, const ScoreHistograms& h);
void to_json(nlohmann::json& j, const ScorePopulations& p);
void from_json(const nlohmann::json& j, ScorePopulations& p);

}  // namespace reviewbomb
