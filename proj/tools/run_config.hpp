#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "reviewbomb/dataset.hpp"
#include "reviewbomb/eval.hpp"
#include "reviewbomb/ingest.hpp"
#include "reviewbomb/insights.hpp"
#include "reviewbomb/langid.hpp"
#include "reviewbomb/textprep.hpp"

namespace reviewbomb::cli {

struct TextprepConfig {
  bool remove_stopwords = true;
  Stemming stemming = Stemming::None;
  /// Empty: bundled English list.
  std::string stopwords_path;

  bool operator==(const TextprepConfig&) const = default;
};

struct RunConfig {
  std::string input;
  std::string out_dir = "out";
  std::uint64_t seed = 42;

  IngestOptions ingest;
  AggregateOptions aggregate;
  DetectorConfig langid;
  /// Empty: built-in English profile.
  std::string language_profile_path;
  CandidateCriteria criteria;
  CorpusConfig corpus;
  TextprepConfig textprep;
  std::size_t max_features = 1000;

  double test_fraction = 0.2;
  bool stratified = true;
  std::size_t cv_folds = 5;
  std::vector<std::string> models{"mnb", "logreg"};
  std::vector<double> mnb_alpha_grid{1.0, 0.5, 0.1, 0.01, 0.001};
  std::vector<double> logreg_lambda_grid{1.0, 0.1, 0.01};
  double logreg_tolerance = 1e-6;
  std::size_t logreg_max_iterations = 1000;

  RankingMode ranking_mode = RankingMode::Conditional;
  std::size_t top_k = 50;
  /// Empty: shipped five-category lexicon.
  std::string lexicon_path;
  WordcloudOptions wordcloud;
  /// Model used by `predict`.
  std::string predict_model = "mnb";

  bool operator==(const RunConfig&) const = default;

  /// Throws UserError on out-of-range values.
  void validate() const;
  SplitSpec split_spec() const { return {test_fraction, seed, stratified}; }
};

nlohmann::json config_to_json(const RunConfig& c);
/// Missing keys keep their defaults; unknown top-level keys are rejected.
RunConfig config_from_json(const nlohmann::json& j);

}  // namespace reviewbomb::cli
