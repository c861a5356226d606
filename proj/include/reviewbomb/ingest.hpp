#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "reviewbomb/score.hpp"

namespace reviewbomb {

enum class ReviewerKind : std::uint8_t { User, Critic };

struct ReviewRecord {
  std::string game_id;
  std::string game_title;
  std::optional<int> release_year;
  ReviewerKind reviewer_kind = ReviewerKind::User;
  /// Critic scores are stored already divided by 10.
  Score score;
  std::string review_text;
  std::optional<std::chrono::year_month_day> review_date;
  // Per-title values some dumps repeat on every row.
  std::optional<Score> dataset_metascore;
  std::optional<Score> dataset_user_score;

  bool operator==(const ReviewRecord&) const = default;
};

/// Logical-to-physical column names. Empty optional names mean "not mapped".
struct ColumnMapping {
  std::string title = "Game Title";
  std::string score = "Rating Given By The Reviewer";
  std::string text = "Review";
  std::string reviewer_kind = "Reviewer Type";
  std::string game_id;
  std::string release_date = "Game Release Date";
  std::string review_date = "Review Date";
  std::string metascore = "Overall Metascore";
  std::string user_score = "Overall User Rating";

  bool operator==(const ColumnMapping&) const = default;
};

struct IngestOptions {
  ColumnMapping columns;
  std::string placeholder = "TBD";
  /// Fraction of rows with unparseable scores above which input is rejected.
  double max_skip_rate = 0.5;

  bool operator==(const IngestOptions&) const = default;
};

struct IngestReport {
  std::uint64_t rows_read = 0;
  std::uint64_t records_emitted = 0;
  std::uint64_t tbd_skipped = 0;
  std::uint64_t parse_skipped = 0;
  std::vector<std::string> unmapped_optional_columns;
};

struct IngestResult {
  std::vector<ReviewRecord> records;
  IngestReport report;
};

IngestResult parse_reviews_csv(const std::filesystem::path& path, const IngestOptions& options = {});
IngestResult parse_reviews_csv(std::istream& in, const IngestOptions& options = {});

enum class MetascoreSource : std::uint8_t { DatasetFirst, ComputedFirst };
enum class UserScoreSource : std::uint8_t { Computed, DatasetFirst };

struct AggregateOptions {
  MetascoreSource metascore_source = MetascoreSource::DatasetFirst;
  UserScoreSource user_score_source = UserScoreSource::Computed;
  /// Minimum number of ratings before a score is published.
  std::size_t min_ratings = 4;

  bool operator==(const AggregateOptions&) const = default;
};

struct GameAggregate {
  std::string game_id;
  std::string game_title;
  std::optional<int> release_year;
  std::optional<Score> metascore;
  std::optional<Score> avg_user_score;
  std::uint64_t n_user_reviews = 0;
  std::uint64_t n_english_user_reviews = 0;

  bool operator==(const GameAggregate&) const = default;
};

/// One aggregate per distinct game_id, in order of first appearance.
/// `english` flags align with `records`; when empty, English counts stay 0.
std::vector<GameAggregate> aggregate_games(std::span<const ReviewRecord> records,
                                           std::span<const std::uint8_t> english = {},
                                           const AggregateOptions& options = {});

std::string format_date(const std::chrono::year_month_day& date);
/// Accepts "2020-01-31", "Jan 31, 2020" and "January 31, 2020".
std::optional<std::chrono::year_month_day> parse_date(std::string_view text);
/// First plausible 4-digit year (1900-2099) in the text.
std::optional<int> parse_year(std::string_view text);

void write_records_jsonl(std::ostream& out, std::span<const ReviewRecord> records);
std::vector<ReviewRecord> read_records_jsonl(const std::filesystem::path& path);

void to_json(nlohmann::json& j, const ReviewRecord& r);
void from_json(const nlohmann::json& j, ReviewRecord& r);
void to_json(nlohmann::json& j, const IngestReport& r);
void to_json(nlohmann::json& j, const GameAggregate& g);
void from_json(const nlohmann::json& j, GameAggregate& g);
void to_json(nlohmann::json& j, const ColumnMapping& m);
void from_json(const nlohmann::json& j, ColumnMapping& m);
void to_json(nlohmann::json& j, const IngestOptions& o);
void from_json(const nlohmann::json& j, IngestOptions& o);
void to_json(nlohmann::json& j, const AggregateOptions& o);
void from_json(const nlohmann::json& j, AggregateOptions& o);

}  // namespace reviewbomb
