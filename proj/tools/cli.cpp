#include "cli.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "reviewbomb/dataset.hpp"
#include "reviewbomb/errors.hpp"
#include "reviewbomb/eval.hpp"
#include "reviewbomb/hashing.hpp"
#include "reviewbomb/ingest.hpp"
#include "reviewbomb/insights.hpp"
#include "reviewbomb/jsonio.hpp"
#include "reviewbomb/langid.hpp"
#include "reviewbomb/models.hpp"
#include "reviewbomb/textprep.hpp"
#include "reviewbomb/vectorize.hpp"
#include "run_config.hpp"

namespace reviewbomb::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "0.1.0";
constexpr const char* kLockName = ".rbomb.lock";

void require_file(const fs::path& p, const std::string& what) {
  if (p.empty()) throw UserError(what + " path is required (--input)");
  std::error_code ec;
  if (!fs::is_regular_file(p, ec)) throw UserError(what + " not found: " + p.string());
}

/// Exclusive lock on an output directory. Creates the directory if needed
/// and removes it again on failure when it was created here and is empty.
class OutputDir {
 public:
  explicit OutputDir(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    if (!fs::exists(dir_, ec)) {
      fs::create_directories(dir_, ec);
      if (ec) throw UserError("cannot create output directory " + dir_.string() + ": " + ec.message());
      created_ = true;
    } else if (!fs::is_directory(dir_, ec)) {
      throw UserError("output path is not a directory: " + dir_.string());
    }
    const fs::path lock = dir_ / kLockName;
    fd_ = ::open(lock.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd_ < 0) {
      cleanup_dir();
      throw UserError("output directory is locked by another run (remove " + lock.string() + " if stale)");
    }
  }
  OutputDir(const OutputDir&) = delete;
  OutputDir& operator=(const OutputDir&) = delete;
  ~OutputDir() {
    ::close(fd_);
    std::error_code ec;
    fs::remove(dir_ / kLockName, ec);
    cleanup_dir();
  }

  const fs::path& path() const { return dir_; }

 private:
  void cleanup_dir() {
    std::error_code ec;
    if (created_ && fs::is_empty(dir_, ec)) fs::remove(dir_, ec);
  }

  fs::path dir_;
  bool created_ = false;
  int fd_ = -1;
};

/// Config as recorded in artifacts; the output location is left out so that
/// runs into different directories produce identical bytes.
json config_echo(const RunConfig& cfg) {
  json j = config_to_json(cfg);
  j.erase("out_dir");
  return j;
}

std::string display_path(const fs::path& p, const fs::path& out_dir) {
  const fs::path rel = p.lexically_relative(out_dir);
  if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
  return p.generic_string();
}

/// Artifacts of one stage. Files go through a temporary name and rename;
/// unless finish() succeeds, everything written is removed again.
class Stage {
 public:
  Stage(const OutputDir& out, std::string name) : dir_(out.path()), name_(std::move(name)) {}
  Stage(const Stage&) = delete;
  Stage& operator=(const Stage&) = delete;
  ~Stage() {
    if (finished_) return;
    std::error_code ec;
    for (const auto& f : written_) fs::remove(dir_ / f, ec);
  }

  void input(const std::string& role, const fs::path& p) {
    inputs_.push_back({{"role", role}, {"path", display_path(p, dir_)}, {"hash", hash_file(p)}});
  }

  void write(const std::string& file, const std::string& content) {
    const fs::path target = dir_ / file;
    const fs::path tmp = dir_ / (file + ".tmp");
    {
      std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
      if (!os) throw UserError("cannot write " + tmp.string());
      os.write(content.data(), static_cast<std::streamsize>(content.size()));
      if (!os) {
        os.close();
        std::error_code ec;
        fs::remove(tmp, ec);
        throw UserError("cannot write " + tmp.string());
      }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
      fs::remove(tmp, ec);
      throw UserError("cannot rename into " + target.string());
    }
    written_.push_back(file);
    artifacts_.push_back({{"path", file}, {"hash", hash_hex(content)}, {"bytes", content.size()}});
  }

  void write_json(const std::string& file, const json& j) { write(file, dump_json(j)); }

  /// Writes manifest-<stage>.json and returns its file name.
  std::string finish(const RunConfig& cfg, json summary) {
    const std::string manifest = "manifest-" + name_ + ".json";
    json m = {{"stage", name_},       {"tool_version", kToolVersion}, {"seed", cfg.seed},
              {"config", config_echo(cfg)}, {"inputs", inputs_},   {"artifacts", artifacts_},
              {"summary", std::move(summary)}};
    write_json(manifest, m);
    finished_ = true;
    return manifest;
  }

 private:
  fs::path dir_;
  std::string name_;
  json inputs_ = json::array();
  json artifacts_ = json::array();
  std::vector<std::string> written_;
  bool finished_ = false;
};

StopwordSet stopwords_for(const TextprepConfig& t) {
  if (!t.remove_stopwords) return StopwordSet{};
  if (t.stopwords_path.empty()) return StopwordSet::english();
  return StopwordSet::load(t.stopwords_path);
}

json textprep_json(const TextprepConfig& t, const StopwordSet& sw) {
  std::vector<std::string> words(sw.words().begin(), sw.words().end());
  std::sort(words.begin(), words.end());
  return {{"version", 1},
          {"stemming", t.stemming == Stemming::None ? "none" : "suffix_strip"},
          {"stopwords", words}};
}

std::pair<StopwordSet, Stemming> textprep_from_json(const json& j) {
  try {
    std::unordered_set<std::string> words;
    for (const auto& w : j.at("stopwords")) words.insert(w.get<std::string>());
    const std::string stem = j.at("stemming").get<std::string>();
    if (stem != "none" && stem != "suffix_strip") throw UserError("textprep.json: unknown stemming '" + stem + "'");
    return {StopwordSet(std::move(words)), stem == "none" ? Stemming::None : Stemming::SuffixStrip};
  } catch (const json::exception& e) {
    throw UserError(std::string("textprep.json: ") + e.what());
  }
}

std::string csv_number(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

// ---- stages ---------------------------------------------------------------

std::string stage_ingest(const RunConfig& cfg, const OutputDir& out, const fs::path& csv, std::ostream& log) {
  Stage st(out, "ingest");
  st.input("reviews_csv", csv);
  const IngestResult r = parse_reviews_csv(csv, cfg.ingest);

  std::ostringstream records;
  write_records_jsonl(records, r.records);
  st.write("records.jsonl", records.str());
  st.write_json("ingest_report.json", r.report);
  log << "ingest: " << r.report.records_emitted << " records from " << r.report.rows_read << " rows ("
      << r.report.tbd_skipped << " placeholder, " << r.report.parse_skipped << " malformed)\n";
  return st.finish(cfg, r.report);
}

LanguageProfile profile_for(const RunConfig& cfg) {
  if (cfg.language_profile_path.empty()) return english_profile();
  return load_profile(cfg.language_profile_path);
}

std::string stage_build_dataset(const RunConfig& cfg, const OutputDir& out, const fs::path& records_path,
                                std::ostream& log) {
  Stage st(out, "build-dataset");
  st.input("records", records_path);
  const std::vector<ReviewRecord> records = read_records_jsonl(records_path);
  const LanguageProfile profile = profile_for(cfg);
  const std::vector<std::uint8_t> english = english_flags(records, profile, cfg.langid);
  const std::vector<GameAggregate> aggregates = aggregate_games(records, english, cfg.aggregate);
  const CandidateSelection selection = select_candidates(aggregates, cfg.criteria);
  const LabeledCorpus corpus = build_corpus(records, english, selection, cfg.corpus);
  const StatsReport stats = corpus_stats(records, english, aggregates, selection);
  const ScorePopulations populations = collect_score_populations(records, english, selection);

  json agg = json::array();
  for (std::size_t i = 0; i < aggregates.size(); ++i) {
    json a = aggregates[i];
    a["zone"] = selection.zones[i] ? json(zone_name(*selection.zones[i])) : json(nullptr);
    a["is_candidate"] = selection.is_candidate(aggregates[i].game_id);
    agg.push_back(std::move(a));
  }
  st.write_json("aggregates.json", agg);
  st.write_json("candidates.json", {{"criteria", cfg.criteria},
                                    {"candidates", std::vector<std::string>(selection.candidates.begin(),
                                                                            selection.candidates.end())}});

  std::ostringstream corpus_out;
  write_corpus_jsonl(corpus_out, corpus);
  st.write("corpus.jsonl", corpus_out.str());

  const auto counts = corpus.label_counts();
  const auto n_english = static_cast<std::uint64_t>(std::count(english.begin(), english.end(), 1));
  json report = stats;
  report["n_records"] = records.size();
  report["n_english_user_reviews"] = n_english;
  report["corpus_size"] = corpus.entries.size();
  report["label_counts"] = {{"RB", counts[class_index(Label::RB)]}, {"NonRB", counts[class_index(Label::NonRB)]}};
  st.write_json("stats_report.json", report);

  std::ostringstream csv;
  csv << "metric,value\n";
  for (const auto& [key, value] : report.items())
    if (value.is_number()) csv << key << ',' << value.dump() << '\n';
  for (const auto& [year, n] : stats.candidates_per_year) csv << "candidates_" << year << ',' << n << '\n';
  csv << "label_RB," << counts[class_index(Label::RB)] << '\n';
  csv << "label_NonRB," << counts[class_index(Label::NonRB)] << '\n';
  st.write("stats_report.csv", csv.str());
  st.write_json("score_populations.json", populations);

  log << "build-dataset: " << aggregates.size() << " games, " << stats.n_candidate_games << " candidates, corpus "
      << corpus.entries.size() << " (RB " << counts[0] << ", NonRB " << counts[1] << ")\n";
  return st.finish(cfg, report);
}

std::vector<Hyperparameters> grid_for(const RunConfig& cfg, ModelKind kind) {
  std::vector<Hyperparameters> grid;
  if (kind == ModelKind::Mnb) {
    for (double a : cfg.mnb_alpha_grid) grid.push_back({{"alpha", a}});
  } else {
    for (double l : cfg.logreg_lambda_grid)
      grid.push_back({{"lambda", l},
                      {"tolerance", cfg.logreg_tolerance},
                      {"max_iterations", static_cast<double>(cfg.logreg_max_iterations)}});
  }
  return grid;
}

std::string stage_train(const RunConfig& cfg, const OutputDir& out, const fs::path& corpus_path, std::ostream& log) {
  Stage st(out, "train");
  st.input("corpus", corpus_path);
  const std::string input_hash = hash_file(corpus_path);
  const LabeledCorpus corpus = read_corpus_jsonl(corpus_path);
  if (corpus.entries.empty()) throw UserError("corpus is empty: " + corpus_path.string());

  const StopwordSet stopwords = stopwords_for(cfg.textprep);
  std::vector<TokenStream> docs;
  std::vector<Label> y;
  docs.reserve(corpus.entries.size());
  y.reserve(corpus.entries.size());
  for (const auto& e : corpus.entries) {
    docs.push_back(prepare(e.review_text, stopwords, cfg.textprep.stemming));
    y.push_back(e.label);
  }

  const SplitIndices split = stratified_split(y, cfg.split_spec());
  std::vector<TokenStream> train_docs, test_docs;
  for (auto i : split.train) train_docs.push_back(docs[i]);
  for (auto i : split.test) test_docs.push_back(docs[i]);
  const std::vector<Label> y_train = take(y, split.train);
  const std::vector<Label> y_test = take(y, split.test);

  // The vocabulary sees only the training split.
  const TfidfModel tfidf = TfidfModel::fit(train_docs, cfg.max_features);
  const DocTermMatrix x_train = tfidf.transform(train_docs);
  const DocTermMatrix x_test = tfidf.transform(test_docs);

  st.write_json("textprep.json", textprep_json(cfg.textprep, stopwords));
  st.write_json("tfidf_model.json", tfidf.to_json());
  st.write_json("split.json", {{"spec", cfg.split_spec()}, {"train", split.train}, {"test", split.test}});

  json summary = {{"n_documents", docs.size()},
                  {"n_train", split.train.size()},
                  {"n_test", split.test.size()},
                  {"vocabulary_size", tfidf.size()},
                  {"vocabulary_hash", tfidf.vocabulary_hash()},
                  {"models", json::object()}};

  for (const auto& name : cfg.models) {
    const ModelKind kind = *parse_model_kind(name);
    GridSearchResult gs = grid_search(x_train, y_train, kind, grid_for(cfg, kind), cfg.cv_folds, cfg.seed);
    gs.model->set_vocabulary_hash(tfidf.vocabulary_hash());
    const Metrics m = compute_metrics(y_test, gs.model->predict(x_test));

    EvalReport report;
    report.model_kind = name;
    report.holdout = m;
    report.n_train = split.train.size();
    report.n_test = split.test.size();
    report.chosen_hyperparameters = gs.best();
    report.cv_mean_scores = gs.points;
    report.cv_best_accuracy = gs.points[gs.best_index].mean_accuracy;
    report.provenance = {{"seed", cfg.seed},
                         {"input_hash", input_hash},
                         {"split", cfg.split_spec()},
                         {"cv_folds", cfg.cv_folds},
                         {"vocabulary_hash", tfidf.vocabulary_hash()},
                         {"config", config_echo(cfg)}};

    st.write_json("model_" + name + ".json", gs.model->to_json());
    st.write_json("eval_report_" + name + ".json", report);
    const std::string text = format_report(report);
    st.write("eval_report_" + name + ".txt", text);
    log << text;
    summary["models"][name] = {{"accuracy", m.accuracy},
                               {"macro_f1", m.macro_f1},
                               {"hyperparameters", gs.best()},
                               {"cv_best_accuracy", report.cv_best_accuracy}};
  }
  return st.finish(cfg, summary);
}

std::string stage_rank_terms(const RunConfig& cfg, const OutputDir& out, const fs::path& model_path,
                             const fs::path& tfidf_path, std::ostream& log) {
  Stage st(out, "rank-terms");
  st.input("model", model_path);
  st.input("tfidf_model", tfidf_path);
  const TfidfModel tfidf = TfidfModel::from_json(read_json_file(tfidf_path));
  const auto model = load_classifier(read_json_file(model_path));
  const auto* mnb = dynamic_cast<const MnbClassifier*>(model.get());
  if (mnb == nullptr) throw UserError("rank-terms needs an MNB model artifact: " + model_path.string());

  const TermRanking ranking = rank_terms(mnb->params(), tfidf, cfg.ranking_mode, cfg.top_k);
  ConceptLexicon lexicon = ConceptLexicon::defaults();
  if (!cfg.lexicon_path.empty()) {
    st.input("lexicon", cfg.lexicon_path);
    lexicon = ConceptLexicon::load(cfg.lexicon_path);
  }
  const std::vector<CategoryShare> categories = categorize_terms(ranking, lexicon);
  const Wordcloud cloud = export_wordcloud(ranking, lexicon, cfg.wordcloud);

  st.write_json("term_ranking.json", ranking);
  std::ostringstream csv;
  csv << "rank,term,rb_conditional_prob,distinctiveness,category\n";
  for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
    const auto& e = ranking.entries[i];
    csv << (i + 1) << ',' << e.term << ',' << csv_number(e.rb_conditional_prob) << ','
        << csv_number(e.distinctiveness) << ',' << lexicon.category_of(e.term) << '\n';
  }
  st.write("term_ranking.csv", csv.str());
  st.write_json("categories.json", categories);
  st.write_json("wordcloud_weights.json", weights_to_json(cloud.weights));
  st.write("wordcloud.svg", cloud.svg);

  log << "rank-terms (" << ranking_mode_name(cfg.ranking_mode) << "):";
  for (std::size_t i = 0; i < std::min<std::size_t>(10, ranking.entries.size()); ++i)
    log << ' ' << ranking.entries[i].term;
  log << '\n';
  json summary = {{"mode", ranking_mode_name(cfg.ranking_mode)},
                  {"n_terms", ranking.entries.size()},
                  {"wordcloud_placed", cloud.placed.size()},
                  {"wordcloud_omitted", cloud.omitted}};
  return st.finish(cfg, summary);
}

std::string stage_export_figures(const RunConfig& cfg, const OutputDir& out, std::ostream& log) {
  const fs::path agg_path = out.path() / "aggregates.json";
  const fs::path pop_path = out.path() / "score_populations.json";
  require_file(agg_path, "aggregates (run build-dataset first)");
  require_file(pop_path, "score populations (run build-dataset first)");

  Stage st(out, "export-figures");
  st.input("aggregates", agg_path);
  st.input("score_populations", pop_path);
  std::vector<GameAggregate> aggregates;
  try {
    aggregates = read_json_file(agg_path).get<std::vector<GameAggregate>>();
  } catch (const json::exception& e) {
    throw UserError(std::string("aggregates.json: ") + e.what());
  }
  ScorePopulations populations;
  try {
    populations = read_json_file(pop_path).get<ScorePopulations>();
  } catch (const json::exception& e) {
    throw UserError(std::string("score_populations.json: ") + e.what());
  }
  const CandidateSelection selection = select_candidates(aggregates, cfg.criteria);
  const std::vector<ScatterRow> scatter = export_scatter_data(aggregates, selection);
  const ScoreHistograms hist = export_score_histograms(populations);

  st.write_json("scatter.json", scatter);
  std::ostringstream scsv;
  write_scatter_csv(scsv, scatter);
  st.write("scatter.csv", scsv.str());
  st.write_json("score_histograms.json", hist);
  std::ostringstream hcsv;
  write_histograms_csv(hcsv, hist);
  st.write("score_histograms.csv", hcsv.str());

  json confusions = json::object();
  for (const auto& name : cfg.models) {
    const fs::path report = out.path() / ("eval_report_" + name + ".json");
    std::error_code ec;
    if (!fs::is_regular_file(report, ec)) continue;
    st.input("eval_report_" + name, report);
    const Metrics m = metrics_from_json(read_json_file(report).at("holdout"));
    confusions[name] = {{"counts", m.confusion}, {"normalized", m.normalized_confusion}};
    std::ostringstream conf;
    write_confusion_csv(conf, m);
    st.write("confusion_" + name + ".csv", conf.str());
  }
  st.write_json("confusion_matrices.json", confusions);

  log << "export-figures: " << scatter.size() << " scatter points, " << populations.candidate.size()
      << " candidate and " << populations.control.size() << " control review scores\n";
  return st.finish(cfg, {{"scatter_points", scatter.size()}, {"confusion_models", confusions.size()}});
}

std::string stage_predict(const RunConfig& cfg, const OutputDir& out, const fs::path& text_path, std::ostream& log) {
  const fs::path prep_path = out.path() / "textprep.json";
  const fs::path tfidf_path = out.path() / "tfidf_model.json";
  const fs::path model_path = out.path() / ("model_" + cfg.predict_model + ".json");
  require_file(prep_path, "textprep settings (run train first)");
  require_file(tfidf_path, "TF-IDF model (run train first)");
  require_file(model_path, "model artifact (run train first)");

  Stage st(out, "predict");
  st.input("texts", text_path);
  st.input("textprep", prep_path);
  st.input("tfidf_model", tfidf_path);
  st.input("model", model_path);
  const auto [stopwords, stemming] = textprep_from_json(read_json_file(prep_path));
  const TfidfModel tfidf = TfidfModel::from_json(read_json_file(tfidf_path));
  const auto model = load_classifier(read_json_file(model_path));
  if (model->vocabulary_hash() != tfidf.vocabulary_hash())
    throw UserError("model was trained against a different vocabulary than " + tfidf_path.string());

  std::ifstream in(text_path, std::ios::binary);
  if (!in) throw UserError("cannot read " + text_path.string());
  std::ostringstream csv;
  csv << "line,label,rb_score\n";
  std::string line;
  std::size_t n = 0;
  std::array<std::size_t, kNumClasses> counts{};
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ++n;
    const SparseVector x = tfidf.transform(prepare(line, stopwords, stemming));
    const Label label = model->predict(x);
    ++counts[class_index(label)];
    std::ostringstream row;
    row << n << ',' << label_name(label) << ',' << std::fixed << std::setprecision(6) << model->rb_score(x) << '\n';
    csv << row.str();
    log << row.str();
  }
  st.write("predictions.csv", csv.str());
  return st.finish(cfg, {{"model", cfg.predict_model}, {"n_texts", n}, {"RB", counts[0]}, {"NonRB", counts[1]}});
}

// ---- argument handling ------------------------------------------------------

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> input;
  std::optional<std::string> out;
  std::optional<std::string> mode;
  std::optional<std::size_t> max_features;
  std::optional<std::size_t> top_k;
  std::optional<std::string> stopwords;
  std::optional<std::string> lexicon;
  std::optional<std::string> model;
  std::optional<std::string> ranking;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON run configuration");
  sub->add_option("--seed", f.seed, "Random seed for split and folds");
  sub->add_option("--input", f.input, "Input file");
  sub->add_option("--out", f.out, "Output directory");
  sub->add_option("--mode", f.mode, "Corpus construction: within_candidates or controls");
  sub->add_option("--max-features", f.max_features, "TF-IDF vocabulary cap");
  sub->add_option("--top-k", f.top_k, "Number of ranked terms");
  sub->add_option("--stopwords", f.stopwords, "Stop-word list, one word per line");
  sub->add_option("--lexicon", f.lexicon, "Concept lexicon JSON");
  sub->add_option("--model", f.model, "Model used by predict: mnb or logreg");
  sub->add_option("--ranking", f.ranking, "Term ranking: conditional or distinctive");
}

RunConfig resolve_config(const Flags& f) {
  RunConfig cfg;
  if (!f.config.empty()) cfg = config_from_json(read_json_file(f.config));
  if (f.seed) cfg.seed = *f.seed;
  if (f.input) cfg.input = *f.input;
  if (f.out) cfg.out_dir = *f.out;
  if (f.mode) {
    const auto m = parse_mode(*f.mode);
    if (!m) throw UserError("unknown --mode '" + *f.mode + "' (expected within_candidates or controls)");
    cfg.corpus.mode = *m;
  }
  if (f.max_features) cfg.max_features = *f.max_features;
  if (f.top_k) cfg.top_k = *f.top_k;
  if (f.stopwords) cfg.textprep.stopwords_path = *f.stopwords;
  if (f.lexicon) cfg.lexicon_path = *f.lexicon;
  if (f.model) cfg.predict_model = *f.model;
  if (f.ranking) {
    const auto r = parse_ranking_mode(*f.ranking);
    if (!r) throw UserError("unknown --ranking '" + *f.ranking + "' (expected conditional or distinctive)");
    cfg.ranking_mode = *r;
  }
  cfg.validate();
  return cfg;
}

fs::path input_or(const RunConfig& cfg, const fs::path& fallback) {
  return cfg.input.empty() ? fallback : fs::path(cfg.input);
}

bool has_model(const RunConfig& cfg, const std::string& name) {
  return std::find(cfg.models.begin(), cfg.models.end(), name) != cfg.models.end();
}

int dispatch(const std::string& command, const RunConfig& cfg, std::ostream& log) {
  const fs::path out_dir = cfg.out_dir;
  if (command == "ingest") {
    require_file(cfg.input, "reviews CSV");
    OutputDir out(out_dir);
    stage_ingest(cfg, out, cfg.input, log);
  } else if (command == "build-dataset") {
    const fs::path in = input_or(cfg, out_dir / "records.jsonl");
    require_file(in, "records");
    OutputDir out(out_dir);
    stage_build_dataset(cfg, out, in, log);
  } else if (command == "train") {
    const fs::path in = input_or(cfg, out_dir / "corpus.jsonl");
    require_file(in, "corpus");
    OutputDir out(out_dir);
    stage_train(cfg, out, in, log);
  } else if (command == "rank-terms") {
    const fs::path model = input_or(cfg, out_dir / "model_mnb.json");
    require_file(model, "MNB model");
    require_file(out_dir / "tfidf_model.json", "TF-IDF model");
    OutputDir out(out_dir);
    stage_rank_terms(cfg, out, model, out_dir / "tfidf_model.json", log);
  } else if (command == "export-figures") {
    OutputDir out(out_dir);
    stage_export_figures(cfg, out, log);
  } else if (command == "predict") {
    require_file(cfg.input, "review text file");
    OutputDir out(out_dir);
    stage_predict(cfg, out, cfg.input, log);
  } else if (command == "pipeline") {
    require_file(cfg.input, "reviews CSV");
    OutputDir out(out_dir);
    json stages = json::array();
    auto record = [&](const std::string& manifest) {
      stages.push_back({{"manifest", manifest}, {"hash", hash_file(out_dir / manifest)}});
    };
    record(stage_ingest(cfg, out, cfg.input, log));
    record(stage_build_dataset(cfg, out, out_dir / "records.jsonl", log));
    record(stage_train(cfg, out, out_dir / "corpus.jsonl", log));
    if (has_model(cfg, "mnb"))
      record(stage_rank_terms(cfg, out, out_dir / "model_mnb.json", out_dir / "tfidf_model.json", log));
    record(stage_export_figures(cfg, out, log));
    Stage st(out, "pipeline");
    st.finish(cfg, {{"stages", stages}});
  } else {
    throw InvariantError("unhandled command " + command);
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Review-bombing detection pipeline", "rbomb"};
  app.require_subcommand(1, 1);
  Flags flags;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"ingest", "Parse the reviews CSV into normalized records"},
      {"build-dataset", "Detect language, aggregate games, select candidates and label the corpus"},
      {"train", "Fit TF-IDF, grid-search the classifiers and evaluate on the held-out split"},
      {"rank-terms", "Rank RB-indicative terms, categorize them and lay out the word cloud"},
      {"export-figures", "Write scatter, histogram and confusion-matrix tables"},
      {"predict", "Classify one review per line of a text file"},
      {"pipeline", "Run ingest through export-figures"},
  };
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help), flags);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUserError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const RunConfig cfg = resolve_config(flags);
    return dispatch(command, cfg, out);
  } catch (const UserError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUserError;
  } catch (const std::logic_error& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON: " << e.what() << '\n';
    return kExitUserError;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUserError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInvariant;
  }
}

}  // namespace reviewbomb::cli
