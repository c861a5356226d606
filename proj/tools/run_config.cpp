#include "run_config.hpp"

#include <set>

#include "reviewbomb/errors.hpp"

namespace reviewbomb::cli {

namespace {

const std::set<std::string> kKnownKeys{
    "input",         "out_dir",          "seed",           "ingest",         "aggregate",
    "langid",        "language_profile", "criteria",       "corpus",         "textprep",
    "max_features",  "split",            "cv_folds",       "models",         "grids",
    "logreg",        "ranking_mode",     "top_k",          "lexicon",        "wordcloud",
    "predict_model"};

}  // namespace

void RunConfig::validate() const {
  criteria.validate();
  split_spec().validate();
  if (max_features < 1) throw UserError("max_features must be >= 1");
  if (cv_folds < 2) throw UserError("cv_folds must be >= 2");
  if (top_k < 1) throw UserError("top_k must be >= 1");
  if (models.empty()) throw UserError("at least one model is required");
  for (const auto& m : models)
    if (!parse_model_kind(m)) throw UserError("unknown model '" + m + "' (expected mnb or logreg)");
  if (!parse_model_kind(predict_model)) throw UserError("unknown predict_model '" + predict_model + "'");
  if (mnb_alpha_grid.empty() || logreg_lambda_grid.empty()) throw UserError("hyperparameter grids must be non-empty");
  for (double a : mnb_alpha_grid)
    if (!(a > 0.0)) throw UserError("MNB alpha grid values must be > 0");
  for (double l : logreg_lambda_grid)
    if (!(l >= 0.0)) throw UserError("LogReg lambda grid values must be >= 0");
  if (!(langid.accept >= 0.0 && langid.accept <= 1.0)) throw UserError("langid.accept must be in [0, 1]");
  if (!corpus.label_threshold.in_range()) throw UserError("corpus.label_threshold must be in [0, 10]");
}

nlohmann::json config_to_json(const RunConfig& c) {
  return {
      {"input", c.input},
      {"out_dir", c.out_dir},
      {"seed", c.seed},
      {"ingest", c.ingest},
      {"aggregate", c.aggregate},
      {"langid", c.langid},
      {"language_profile", c.language_profile_path},
      {"criteria", c.criteria},
      {"corpus", c.corpus},
      {"textprep",
       {{"remove_stopwords", c.textprep.remove_stopwords},
        {"stemming", c.textprep.stemming == Stemming::None ? "none" : "suffix_strip"},
        {"stopwords_path", c.textprep.stopwords_path}}},
      {"max_features", c.max_features},
      {"split", {{"test_fraction", c.test_fraction}, {"stratified", c.stratified}}},
      {"cv_folds", c.cv_folds},
      {"models", c.models},
      {"grids", {{"mnb_alpha", c.mnb_alpha_grid}, {"logreg_lambda", c.logreg_lambda_grid}}},
      {"logreg", {{"tolerance", c.logreg_tolerance}, {"max_iterations", c.logreg_max_iterations}}},
      {"ranking_mode", ranking_mode_name(c.ranking_mode)},
      {"top_k", c.top_k},
      {"lexicon", c.lexicon_path},
      {"wordcloud", c.wordcloud},
      {"predict_model", c.predict_model},
  };
}

RunConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw UserError("config must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!kKnownKeys.contains(key)) throw UserError("unknown config key '" + key + "'");
  RunConfig c;
  try {
    c.input = j.value("input", c.input);
    c.out_dir = j.value("out_dir", c.out_dir);
    c.seed = j.value("seed", c.seed);
    if (j.contains("ingest")) c.ingest = j["ingest"].get<IngestOptions>();
    if (j.contains("aggregate")) c.aggregate = j["aggregate"].get<AggregateOptions>();
    if (j.contains("langid")) c.langid = j["langid"].get<DetectorConfig>();
    c.language_profile_path = j.value("language_profile", c.language_profile_path);
    if (j.contains("criteria")) c.criteria = j["criteria"].get<CandidateCriteria>();
    if (j.contains("corpus")) c.corpus = j["corpus"].get<CorpusConfig>();
    if (j.contains("textprep")) {
      const auto& t = j["textprep"];
      c.textprep.remove_stopwords = t.value("remove_stopwords", c.textprep.remove_stopwords);
      std::string stem = t.value("stemming", std::string("none"));
      if (stem == "none")
        c.textprep.stemming = Stemming::None;
      else if (stem == "suffix_strip")
        c.textprep.stemming = Stemming::SuffixStrip;
      else
        throw UserError("unknown textprep.stemming '" + stem + "'");
      c.textprep.stopwords_path = t.value("stopwords_path", c.textprep.stopwords_path);
    }
    c.max_features = j.value("max_features", c.max_features);
    if (j.contains("split")) {
      c.test_fraction = j["split"].value("test_fraction", c.test_fraction);
      c.stratified = j["split"].value("stratified", c.stratified);
    }
    c.cv_folds = j.value("cv_folds", c.cv_folds);
    c.models = j.value("models", c.models);
    if (j.contains("grids")) {
      c.mnb_alpha_grid = j["grids"].value("mnb_alpha", c.mnb_alpha_grid);
      c.logreg_lambda_grid = j["grids"].value("logreg_lambda", c.logreg_lambda_grid);
    }
    if (j.contains("logreg")) {
      c.logreg_tolerance = j["logreg"].value("tolerance", c.logreg_tolerance);
      c.logreg_max_iterations = j["logreg"].value("max_iterations", c.logreg_max_iterations);
    }
    if (j.contains("ranking_mode")) {
      auto m = parse_ranking_mode(j["ranking_mode"].get<std::string>());
      if (!m) throw UserError("unknown ranking_mode");
      c.ranking_mode = *m;
    }
    c.top_k = j.value("top_k", c.top_k);
    c.lexicon_path = j.value("lexicon", c.lexicon_path);
    if (j.contains("wordcloud")) c.wordcloud = j["wordcloud"].get<WordcloudOptions>();
    c.predict_model = j.value("predict_model", c.predict_model);
  } catch (const nlohmann::json::exception& e) {
    throw UserError(std::string("invalid config: ") + e.what());
  }
  return c;
}

}  // namespace reviewbomb::cli
