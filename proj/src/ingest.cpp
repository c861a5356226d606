#include "reviewbomb/ingest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <unordered_map>

#include "reviewbomb/csv.hpp"
#include "reviewbomb/errors.hpp"
#include "reviewbomb/jsonio.hpp"

namespace reviewbomb {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && lower(a) == lower(b);
}

std::optional<ReviewerKind> parse_kind(std::string_view raw) {
  std::string k = lower(trim(raw));
  if (k.find("critic") != std::string::npos) return ReviewerKind::Critic;
  if (k.find("user") != std::string::npos) return ReviewerKind::User;
  return std::nullopt;
}

std::optional<Score> parse_ranged(std::string_view text, int divisor) {
  auto s = parse_score(text, divisor);
  if (!s || !s->in_range()) return std::nullopt;
  return s;
}

constexpr std::array<std::string_view, 12> kMonths{"jan", "feb", "mar", "apr", "may", "jun",
                                                  "jul", "aug", "sep", "oct", "nov", "dec"};

class Row {
 public:
  explicit Row(const std::vector<std::string>& fields) : fields_(fields) {}
  std::string_view operator[](std::optional<std::size_t> col) const {
    if (!col || *col >= fields_.size()) return {};
    return fields_[*col];
  }

 private:
  const std::vector<std::string>& fields_;
};

}  // namespace

std::string format_date(const std::chrono::year_month_day& date) {
  std::array<char, 16> buf{};
  std::snprintf(buf.data(), buf.size(), "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf.data();
}

std::optional<std::chrono::year_month_day> parse_date(std::string_view text) {
  text = trim(text);
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  std::string s(text);
  char month_name[16] = {};
  if (std::sscanf(s.c_str(), "%4d-%2u-%2u", &y, &m, &d) == 3) {
    // ISO form
  } else if (std::sscanf(s.c_str(), "%15[A-Za-z] %u, %d", month_name, &d, &y) == 3) {
    std::string name = lower(month_name);
    if (name.size() < 3) return std::nullopt;
    auto it = std::find(kMonths.begin(), kMonths.end(), std::string_view(name).substr(0, 3));
    if (it == kMonths.end()) return std::nullopt;
    m = static_cast<unsigned>(it - kMonths.begin()) + 1;
  } else {
    return std::nullopt;
  }
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!ymd.ok()) return std::nullopt;
  return ymd;
}

std::optional<int> parse_year(std::string_view text) {
  for (std::size_t i = 0; i + 4 <= text.size(); ++i) {
    auto digit = [&](std::size_t k) { return std::isdigit(static_cast<unsigned char>(text[k])) != 0; };
    if (!(digit(i) && digit(i + 1) && digit(i + 2) && digit(i + 3))) continue;
    if (i > 0 && digit(i - 1)) continue;
    if (i + 4 < text.size() && digit(i + 4)) continue;
    int year = std::stoi(std::string(text.substr(i, 4)));
    if (year >= 1900 && year <= 2099) return year;
  }
  return std::nullopt;
}

IngestResult parse_reviews_csv(const std::filesystem::path& path, const IngestOptions& options) {
  if (!std::filesystem::is_regular_file(path)) throw UserError("input file not found: " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UserError("cannot open input file: " + path.string());
  return parse_reviews_csv(in, options);
}

IngestResult parse_reviews_csv(std::istream& in, const IngestOptions& options) {
  CsvReader reader(in);
  std::vector<std::string> header;
  if (!reader.next(header)) throw UserError("input CSV is empty (no header row)");
  if (!header.empty() && header[0].starts_with("\xEF\xBB\xBF")) header[0].erase(0, 3);

  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.size(); ++i) index.emplace(std::string(trim(header[i])), i);

  const ColumnMapping& cm = options.columns;
  std::vector<std::string> missing;
  auto required = [&](const std::string& name) -> std::optional<std::size_t> {
    auto it = index.find(name);
    if (it == index.end()) {
      missing.push_back(name);
      return std::nullopt;
    }
    return it->second;
  };
  IngestResult result;
  auto optional = [&](const std::string& name) -> std::optional<std::size_t> {
    if (name.empty()) return std::nullopt;
    auto it = index.find(name);
    if (it == index.end()) {
      result.report.unmapped_optional_columns.push_back(name);
      return std::nullopt;
    }
    return it->second;
  };

  const auto col_title = required(cm.title);
  const auto col_score = required(cm.score);
  const auto col_text = required(cm.text);
  const auto col_kind = required(cm.reviewer_kind);
  if (!missing.empty()) {
    std::string msg = "input CSV is missing mapped column(s):";
    for (const auto& m : missing) msg += " '" + m + "'";
    throw UserError(msg);
  }
  const auto col_id = optional(cm.game_id);
  const auto col_release = optional(cm.release_date);
  const auto col_date = optional(cm.review_date);
  const auto col_meta = optional(cm.metascore);
  const auto col_user = optional(cm.user_score);

  IngestReport& report = result.report;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    // A lone empty line is not a row.
    if (fields.size() == 1 && fields[0].empty()) continue;
    ++report.rows_read;
    Row row(fields);

    std::string_view score_raw = trim(row[col_score]);
    std::string_view text_raw = trim(row[col_text]);
    if (iequals(score_raw, options.placeholder) || iequals(text_raw, options.placeholder)) {
      ++report.tbd_skipped;
      continue;
    }
    auto kind = parse_kind(row[col_kind]);
    std::string_view title = trim(row[col_title]);
    if (!kind || title.empty()) {
      ++report.parse_skipped;
      continue;
    }
    auto score = parse_ranged(score_raw, *kind == ReviewerKind::Critic ? 10 : 1);
    if (!score) {
      ++report.parse_skipped;
      continue;
    }

    ReviewRecord rec;
    rec.game_title = std::string(title);
    rec.release_year = parse_year(row[col_release]);
    rec.reviewer_kind = *kind;
    rec.score = *score;
    rec.review_text = std::string(row[col_text]);
    rec.review_date = parse_date(row[col_date]);
    rec.dataset_metascore = parse_ranged(row[col_meta], 10);
    rec.dataset_user_score = parse_ranged(row[col_user], 1);
    std::string_view id = trim(row[col_id]);
    if (!id.empty()) {
      rec.game_id = std::string(id);
    } else {
      rec.game_id = rec.game_title;
      if (rec.release_year) rec.game_id += " (" + std::to_string(*rec.release_year) + ")";
    }
    result.records.push_back(std::move(rec));
  }
  report.records_emitted = result.records.size();

  if (report.rows_read > 0 &&
      static_cast<double>(report.parse_skipped) / static_cast<double>(report.rows_read) > options.max_skip_rate) {
    throw UserError("malformed input: " + std::to_string(report.parse_skipped) + " of " +
                    std::to_string(report.rows_read) + " rows have unparseable fields");
  }
  return result;
}

std::vector<GameAggregate> aggregate_games(std::span<const ReviewRecord> records,
                                           std::span<const std::uint8_t> english,
                                           const AggregateOptions& options) {
  if (!english.empty() && english.size() != records.size())
    throw InvariantError("english flags do not align with records");

  struct Acc {
    std::int64_t user_sum = 0;
    std::int64_t critic_sum = 0;
    std::int64_t n_critic = 0;
    std::optional<Score> dataset_meta;
    std::optional<Score> dataset_user;
  };
  std::vector<GameAggregate> games;
  std::vector<Acc> acc;
  std::unordered_map<std::string, std::size_t> slot;

  for (std::size_t i = 0; i < records.size(); ++i) {
    const ReviewRecord& r = records[i];
    auto [it, inserted] = slot.try_emplace(r.game_id, games.size());
    if (inserted) {
      GameAggregate g;
      g.game_id = r.game_id;
      g.game_title = r.game_title;
      games.push_back(std::move(g));
      acc.emplace_back();
    }
    GameAggregate& g = games[it->second];
    Acc& a = acc[it->second];
    if (!g.release_year) g.release_year = r.release_year;
    if (!a.dataset_meta) a.dataset_meta = r.dataset_metascore;
    if (!a.dataset_user) a.dataset_user = r.dataset_user_score;
    if (r.reviewer_kind == ReviewerKind::User) {
      ++g.n_user_reviews;
      a.user_sum += r.score.tenths();
      if (!english.empty() && english[i]) ++g.n_english_user_reviews;
    } else {
      ++a.n_critic;
      a.critic_sum += r.score.tenths();
    }
  }

  const auto min_ratings = static_cast<std::int64_t>(options.min_ratings);
  for (std::size_t k = 0; k < games.size(); ++k) {
    GameAggregate& g = games[k];
    const Acc& a = acc[k];
    std::optional<Score> computed_meta;
    if (a.n_critic >= min_ratings) computed_meta = mean_score(a.critic_sum, a.n_critic);
    if (options.metascore_source == MetascoreSource::DatasetFirst)
      g.metascore = a.dataset_meta ? a.dataset_meta : computed_meta;
    else
      g.metascore = computed_meta ? computed_meta : a.dataset_meta;

    std::optional<Score> computed_user;
    const auto n_user = static_cast<std::int64_t>(g.n_user_reviews);
    if (n_user >= min_ratings) computed_user = mean_score(a.user_sum, n_user);
    if (options.user_score_source == UserScoreSource::DatasetFirst && a.dataset_user)
      g.avg_user_score = a.dataset_user;
    else
      g.avg_user_score = computed_user;
  }
  return games;
}

namespace {

std::string_view kind_name(ReviewerKind k) { return k == ReviewerKind::User ? "user" : "critic"; }

template <typename T>
void put_optional(nlohmann::json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

void put_score(nlohmann::json& j, const char* key, const std::optional<Score>& s) {
  if (s) j[key] = s->value();
}

std::optional<Score> get_score(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return Score::from_double(it->get<double>());
}

}  // namespace

void to_json(nlohmann::json& j, const ReviewRecord& r) {
  j = nlohmann::json::object();
  j["game_id"] = r.game_id;
  j["game_title"] = r.game_title;
  put_optional(j, "release_year", r.release_year);
  j["reviewer_kind"] = kind_name(r.reviewer_kind);
  j["score"] = r.score.value();
  j["review_text"] = r.review_text;
  if (r.review_date) j["review_date"] = format_date(*r.review_date);
  put_score(j, "dataset_metascore", r.dataset_metascore);
  put_score(j, "dataset_user_score", r.dataset_user_score);
}

void from_json(const nlohmann::json& j, ReviewRecord& r) {
  r.game_id = j.at("game_id").get<std::string>();
  r.game_title = j.value("game_title", r.game_id);
  r.release_year = j.contains("release_year") ? std::optional<int>(j["release_year"].get<int>()) : std::nullopt;
  auto kind = parse_kind(j.at("reviewer_kind").get<std::string>());
  if (!kind) throw UserError("record has unknown reviewer_kind");
  r.reviewer_kind = *kind;
  r.score = Score::from_double(j.at("score").get<double>());
  if (!r.score.in_range()) throw UserError("record score out of range");
  r.review_text = j.value("review_text", std::string());
  r.review_date = j.contains("review_date") ? parse_date(j["review_date"].get<std::string>()) : std::nullopt;
  r.dataset_metascore = get_score(j, "dataset_metascore");
  r.dataset_user_score = get_score(j, "dataset_user_score");
  if (r.game_id.empty()) throw UserError("record has empty game_id");
}

void to_json(nlohmann::json& j, const IngestReport& r) {
  j = {{"rows_read", r.rows_read},
       {"records_emitted", r.records_emitted},
       {"tbd_skipped", r.tbd_skipped},
       {"parse_skipped", r.parse_skipped},
       {"unmapped_optional_columns", r.unmapped_optional_columns}};
}

void to_json(nlohmann::json& j, const GameAggregate& g) {
  j = nlohmann::json::object();
  j["game_id"] = g.game_id;
  j["game_title"] = g.game_title;
  put_optional(j, "release_year", g.release_year);
  put_score(j, "metascore", g.metascore);
  put_score(j, "avg_user_score", g.avg_user_score);
  j["n_user_reviews"] = g.n_user_reviews;
  j["n_english_user_reviews"] = g.n_english_user_reviews;
}

void from_json(const nlohmann::json& j, GameAggregate& g) {
  g.game_id = j.at("game_id").get<std::string>();
  g.game_title = j.value("game_title", g.game_id);
  g.release_year = j.contains("release_year") ? std::optional<int>(j["release_year"].get<int>()) : std::nullopt;
  g.metascore = get_score(j, "metascore");
  g.avg_user_score = get_score(j, "avg_user_score");
  g.n_user_reviews = j.at("n_user_reviews").get<std::uint64_t>();
  g.n_english_user_reviews = j.at("n_english_user_reviews").get<std::uint64_t>();
}

void to_json(nlohmann::json& j, const ColumnMapping& m) {
  j = {{"title", m.title},
       {"score", m.score},
       {"text", m.text},
       {"reviewer_kind", m.reviewer_kind},
       {"game_id", m.game_id},
       {"release_date", m.release_date},
       {"review_date", m.review_date},
       {"metascore", m.metascore},
       {"user_score", m.user_score}};
}

void from_json(const nlohmann::json& j, ColumnMapping& m) {
  ColumnMapping d;
  m.title = j.value("title", d.title);
  m.score = j.value("score", d.score);
  m.text = j.value("text", d.text);
  m.reviewer_kind = j.value("reviewer_kind", d.reviewer_kind);
  m.game_id = j.value("game_id", d.game_id);
  m.release_date = j.value("release_date", d.release_date);
  m.review_date = j.value("review_date", d.review_date);
  m.metascore = j.value("metascore", d.metascore);
  m.user_score = j.value("user_score", d.user_score);
}

void to_json(nlohmann::json& j, const IngestOptions& o) {
  j = {{"columns", o.columns}, {"placeholder", o.placeholder}, {"max_skip_rate", o.max_skip_rate}};
}

void from_json(const nlohmann::json& j, IngestOptions& o) {
  IngestOptions d;
  o.columns = j.value("columns", d.columns);
  o.placeholder = j.value("placeholder", d.placeholder);
  o.max_skip_rate = j.value("max_skip_rate", d.max_skip_rate);
}

void to_json(nlohmann::json& j, const AggregateOptions& o) {
  j = {{"metascore_source", o.metascore_source == MetascoreSource::DatasetFirst ? "dataset_first" : "computed_first"},
       {"user_score_source", o.user_score_source == UserScoreSource::Computed ? "computed" : "dataset_first"},
       {"min_ratings", o.min_ratings}};
}

void from_json(const nlohmann::json& j, AggregateOptions& o) {
  AggregateOptions d;
  std::string meta = j.value("metascore_source", std::string("dataset_first"));
  if (meta == "dataset_first")
    o.metascore_source = MetascoreSource::DatasetFirst;
  else if (meta == "computed_first")
    o.metascore_source = MetascoreSource::ComputedFirst;
  else
    throw UserError("unknown metascore_source '" + meta + "'");
  std::string user = j.value("user_score_source", std::string("computed"));
  if (user == "computed")
    o.user_score_source = UserScoreSource::Computed;
  else if (user == "dataset_first")
    o.user_score_source = UserScoreSource::DatasetFirst;
  else
    throw UserError("unknown user_score_source '" + user + "'");
  o.min_ratings = j.value("min_ratings", d.min_ratings);
}

void write_records_jsonl(std::ostream& out, std::span<const ReviewRecord> records) {
  for (const auto& r : records) out << dump_json(nlohmann::json(r), false) << '\n';
}

std::vector<ReviewRecord> read_records_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UserError("cannot open records file: " + path.string());
  std::vector<ReviewRecord> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (trim(line).empty()) continue;
    try {
      out.push_back(nlohmann::json::parse(line).get<ReviewRecord>());
    } catch (const nlohmann::json::exception& e) {
      throw UserError(path.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace reviewbomb
