#include "reviewbomb/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "reviewbomb/errors.hpp"
#include "reviewbomb/rng.hpp"

namespace reviewbomb {

namespace {

// Independent PCG streams per use so a split and its folds never share draws.
constexpr std::uint64_t kSplitStream = 1;
constexpr std::uint64_t kFoldStream = 2;

std::array<std::vector<std::size_t>, kNumClasses> indices_by_class(std::span<const Label> y) {
  std::array<std::vector<std::size_t>, kNumClasses> by_class;
  for (std::size_t i = 0; i < y.size(); ++i) by_class[class_index(y[i])].push_back(i);
  return by_class;
}

double safe_div(double num, double den, const std::string& name, std::vector<std::string>& flags) {
  if (den == 0.0) {
    flags.push_back(name);
    return 0.0;
  }
  return num / den;
}

Metrics metrics_from_confusion(const std::array<std::array<std::uint64_t, kNumClasses>, kNumClasses>& counts) {
  Metrics m;
  m.confusion = counts;
  std::uint64_t correct = 0;
  for (std::size_t t = 0; t < kNumClasses; ++t) {
    for (std::size_t p = 0; p < kNumClasses; ++p) m.n += counts[t][p];
    correct += counts[t][t];
  }
  m.accuracy = safe_div(static_cast<double>(correct), static_cast<double>(m.n), "accuracy", m.zero_division);

  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const std::string name(label_name(kClassOrder[c]));
    double tp = static_cast<double>(counts[c][c]);
    double predicted = 0.0;
    double actual = 0.0;
    for (std::size_t o = 0; o < kNumClasses; ++o) {
      predicted += static_cast<double>(counts[o][c]);
      actual += static_cast<double>(counts[c][o]);
    }
    m.precision[c] = safe_div(tp, predicted, "precision_" + name, m.zero_division);
    m.recall[c] = safe_div(tp, actual, "recall_" + name, m.zero_division);
    m.f1[c] = safe_div(2.0 * m.precision[c] * m.recall[c], m.precision[c] + m.recall[c], "f1_" + name,
                       m.zero_division);
    for (std::size_t p = 0; p < kNumClasses; ++p)
      m.normalized_confusion[c][p] = actual > 0.0 ? static_cast<double>(counts[c][p]) / actual : 0.0;
  }
  m.macro_precision = (m.precision[0] + m.precision[1]) / 2.0;
  m.macro_recall = (m.recall[0] + m.recall[1]) / 2.0;
  m.macro_f1 = (m.f1[0] + m.f1[1]) / 2.0;
  return m;
}

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

void SplitSpec::validate() const {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw UserError("test_fraction must be in (0, 1)");
}

SplitIndices stratified_split(std::span<const Label> y, const SplitSpec& spec) {
  spec.validate();
  Pcg32 rng(spec.seed, kSplitStream);
  SplitIndices out;
  auto assign = [&](std::vector<std::size_t> idx) {
    const auto n_test = static_cast<std::size_t>(std::llround(static_cast<double>(idx.size()) * spec.test_fraction));
    shuffle(std::span<std::size_t>(idx), rng);
    out.test.insert(out.test.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
    out.train.insert(out.train.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
  };
  if (spec.stratified) {
    auto by_class = indices_by_class(y);
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      if (by_class[c].size() < 2)
        throw UserError("stratified split needs at least 2 samples of class " +
                        std::string(label_name(kClassOrder[c])) + ", found " + std::to_string(by_class[c].size()));
    }
    for (auto& idx : by_class) assign(std::move(idx));
  } else {
    if (y.size() < 2) throw UserError("split needs at least 2 samples");
    std::vector<std::size_t> all(y.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    assign(std::move(all));
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::vector<std::vector<std::size_t>> kfold_indices(std::span<const Label> y, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw UserError("k-fold needs k >= 2");
  auto by_class = indices_by_class(y);
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (!by_class[c].empty() && by_class[c].size() < k)
      throw UserError("cannot form " + std::to_string(k) + " cross-validation folds: class " +
                      std::string(label_name(kClassOrder[c])) + " has only " + std::to_string(by_class[c].size()) +
                      " samples");
  }
  if (y.size() < k) throw UserError("fewer samples than folds");

  Pcg32 rng(seed, kFoldStream);
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t next = 0;
  for (auto& idx : by_class) {
    shuffle(std::span<std::size_t>(idx), rng);
    for (std::size_t i : idx) {
      folds[next].push_back(i);
      next = (next + 1) % k;
    }
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

DocTermMatrix take_rows(const DocTermMatrix& x, std::span<const std::size_t> rows) {
  DocTermMatrix out;
  out.n_cols = x.n_cols;
  out.rows.reserve(rows.size());
  for (std::size_t r : rows) out.rows.push_back(x.rows.at(r));
  return out;
}

std::vector<Label> take(std::span<const Label> y, std::span<const std::size_t> rows) {
  std::vector<Label> out;
  out.reserve(rows.size());
  for (std::size_t r : rows) out.push_back(y[r]);
  return out;
}

Metrics compute_metrics(std::span<const Label> y_true, std::span<const Label> y_pred) {
  if (y_true.size() != y_pred.size())
    throw InvariantError("compute_metrics: " + std::to_string(y_true.size()) + " labels vs " +
                         std::to_string(y_pred.size()) + " predictions");
  if (y_true.empty()) throw InvariantError("compute_metrics: no samples");
  std::array<std::array<std::uint64_t, kNumClasses>, kNumClasses> counts{};
  for (std::size_t i = 0; i < y_true.size(); ++i) ++counts[class_index(y_true[i])][class_index(y_pred[i])];
  return metrics_from_confusion(counts);
}

GridSearchResult grid_search(const DocTermMatrix& x, std::span<const Label> y, const ClassifierFactory& factory,
                             const std::vector<Hyperparameters>& grid, std::size_t k, std::uint64_t seed,
                             const FoldObserver& observer) {
  if (grid.empty()) throw UserError("grid search needs at least one setting");
  if (x.n_rows() != y.size()) throw InvariantError("grid search: rows and labels differ in length");
  const auto folds = kfold_indices(y, k, seed);

  // Training rows for fold f are every fold but f, in ascending order.
  std::vector<std::vector<std::size_t>> train_rows(k);
  for (std::size_t f = 0; f < k; ++f) {
    for (std::size_t g = 0; g < k; ++g)
      if (g != f) train_rows[f].insert(train_rows[f].end(), folds[g].begin(), folds[g].end());
    std::sort(train_rows[f].begin(), train_rows[f].end());
  }

  GridSearchResult result;
  std::optional<std::size_t> best;
  for (std::size_t s = 0; s < grid.size(); ++s) {
    GridPoint point;
    point.hyperparameters = grid[s];
    try {
      for (std::size_t f = 0; f < k; ++f) {
        if (observer) observer(s, f, train_rows[f], folds[f]);
        auto model = factory(grid[s]);
        model->fit(take_rows(x, train_rows[f]), take(y, train_rows[f]));
        auto pred = model->predict(take_rows(x, folds[f]));
        point.fold_accuracy.push_back(compute_metrics(take(y, folds[f]), pred).accuracy);
      }
      double sum = 0.0;
      for (double a : point.fold_accuracy) sum += a;
      point.mean_accuracy = sum / static_cast<double>(k);
      if (!best || point.mean_accuracy > result.points[*best].mean_accuracy) best = s;
    } catch (const std::runtime_error& e) {
      point.failure = e.what();
      point.fold_accuracy.clear();
      point.mean_accuracy = 0.0;
    }
    result.points.push_back(std::move(point));
  }
  if (!best) throw UserError("grid search: every setting failed to train");
  result.best_index = *best;
  result.model = factory(result.best());
  result.model->fit(x, y);
  return result;
}

GridSearchResult grid_search(const DocTermMatrix& x, std::span<const Label> y, ModelKind kind,
                             const std::vector<Hyperparameters>& grid, std::size_t k, std::uint64_t seed,
                             const FoldObserver& observer) {
  return grid_search(
      x, y, [kind](const Hyperparameters& hp) { return make_classifier(kind, hp); }, grid, k, seed, observer);
}

std::string format_report(const EvalReport& r) {
  std::ostringstream out;
  const Metrics& m = r.holdout;
  out << "model: " << r.model_kind << "  (train " << r.n_train << ", test " << r.n_test << ")\n";
  out << "chosen:";
  for (const auto& [k, v] : r.chosen_hyperparameters) out << ' ' << k << '=' << v;
  out << "  cv accuracy " << fmt2(r.cv_best_accuracy) << '\n';
  out << "accuracy " << fmt2(m.accuracy) << "  macro precision " << fmt2(m.macro_precision) << "  macro recall "
      << fmt2(m.macro_recall) << "  macro F1 " << fmt2(m.macro_f1) << '\n';
  out << "normalized confusion (rows true, cols predicted RB/NonRB):\n";
  for (std::size_t t = 0; t < kNumClasses; ++t)
    out << "  " << label_name(kClassOrder[t]) << (t == 0 ? "    " : " ") << fmt2(m.normalized_confusion[t][0]) << ' '
        << fmt2(m.normalized_confusion[t][1]) << '\n';
  return out.str();
}

void write_confusion_csv(std::ostream& out, const Metrics& m) {
  out << "true_label,pred_RB,pred_NonRB,norm_pred_RB,norm_pred_NonRB\n";
  for (std::size_t t = 0; t < kNumClasses; ++t) {
    out << label_name(kClassOrder[t]) << ',' << m.confusion[t][0] << ',' << m.confusion[t][1] << ','
        << nlohmann::json(m.normalized_confusion[t][0]).dump() << ','
        << nlohmann::json(m.normalized_confusion[t][1]).dump() << '\n';
  }
}

void to_json(nlohmann::json& j, const SplitSpec& s) {
  j = {{"test_fraction", s.test_fraction}, {"seed", s.seed}, {"stratified", s.stratified}};
}

void from_json(const nlohmann::json& j, SplitSpec& s) {
  SplitSpec d;
  s.test_fraction = j.value("test_fraction", d.test_fraction);
  s.seed = j.value("seed", d.seed);
  s.stratified = j.value("stratified", d.stratified);
}

void to_json(nlohmann::json& j, const Metrics& m) {
  auto per_class = [](const std::array<double, kNumClasses>& v) { return nlohmann::json{{"RB", v[0]}, {"NonRB", v[1]}}; };
  j = {{"class_order", {"RB", "NonRB"}},
       {"n", m.n},
       {"accuracy", m.accuracy},
       {"precision", per_class(m.precision)},
       {"recall", per_class(m.recall)},
       {"f1", per_class(m.f1)},
       {"macro_precision", m.macro_precision},
       {"macro_recall", m.macro_recall},
       {"macro_f1", m.macro_f1},
       {"confusion", m.confusion},
       {"normalized_confusion", m.normalized_confusion},
       {"zero_division", m.zero_division}};
}

Metrics metrics_from_json(const nlohmann::json& j) {
  try {
    return metrics_from_confusion(
        j.at("confusion").get<std::array<std::array<std::uint64_t, kNumClasses>, kNumClasses>>());
  } catch (const nlohmann::json::exception& e) {
    throw UserError(std::string("invalid metrics JSON: ") + e.what());
  }
}

void to_json(nlohmann::json& j, const GridPoint& g) {
  j = {{"hyperparameters", g.hyperparameters}, {"fold_accuracy", g.fold_accuracy}, {"mean_accuracy", g.mean_accuracy}};
  if (g.failure) j["failure"] = *g.failure;
}

void to_json(nlohmann::json& j, const EvalReport& r) {
  j = {{"model_kind", r.model_kind},
       {"holdout", r.holdout},
       {"n_train", r.n_train},
       {"n_test", r.n_test},
       {"chosen_hyperparameters", r.chosen_hyperparameters},
       {"cv_best_accuracy", r.cv_best_accuracy},
       {"cv_mean_scores", r.cv_mean_scores},
       {"provenance", r.provenance}};
}

}  // namespace reviewbomb
