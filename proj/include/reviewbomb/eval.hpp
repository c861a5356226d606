#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "reviewbomb/label.hpp"
#include "reviewbomb/models.hpp"
#include "reviewbomb/vectorize.hpp"

namespace reviewbomb {

struct SplitSpec {
  double test_fraction = 0.2;
  std::uint64_t seed = 42;
  bool stratified = true;

  void validate() const;
  bool operator==(const SplitSpec&) const = default;
};

/// Both index lists sorted ascending.
struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Per class, round(class_size * test_fraction) indices go to test, chosen by
/// a PCG32 shuffle of that class's indices in ascending order.
SplitIndices stratified_split(std::span<const Label> y, const SplitSpec& spec);

/// k disjoint folds covering every index; each class is shuffled and dealt
/// round-robin, continuing where the previous class stopped, so per-class
/// and total fold sizes differ by at most one. Each fold is sorted.
std::vector<std::vector<std::size_t>> kfold_indices(std::span<const Label> y, std::size_t k, std::uint64_t seed);

DocTermMatrix take_rows(const DocTermMatrix& x, std::span<const std::size_t> rows);
std::vector<Label> take(std::span<const Label> y, std::span<const std::size_t> rows);

struct Metrics {
  /// counts[true][predicted] in class order (RB, NonRB).
  std::array<std::array<std::uint64_t, kNumClasses>, kNumClasses> confusion{};
  /// Each true-class row divided by its sum; an empty row stays all zero.
  std::array<std::array<double, kNumClasses>, kNumClasses> normalized_confusion{};
  double accuracy = 0.0;
  std::array<double, kNumClasses> precision{};
  std::array<double, kNumClasses> recall{};
  std::array<double, kNumClasses> f1{};
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  std::uint64_t n = 0;
  /// Names of quantities whose denominator was zero and were set to 0.
  std::vector<std::string> zero_division;
};

Metrics compute_metrics(std::span<const Label> y_true, std::span<const Label> y_pred);

struct GridPoint {
  Hyperparameters hyperparameters;
  std::vector<double> fold_accuracy;
  double mean_accuracy = 0.0;
  std::optional<std::string> failure;
};

struct GridSearchResult {
  std::size_t best_index = 0;
  std::vector<GridPoint> points;
  /// Refit on all supplied rows with the best setting.
  std::unique_ptr<Classifier> model;

  const Hyperparameters& best() const { return points[best_index].hyperparameters; }
};

using ClassifierFactory = std::function<std::unique_ptr<Classifier>(const Hyperparameters&)>;

/// Called once per (setting, fold) before training, with the row indices
/// used for training and for validation.
using FoldObserver = std::function<void(std::size_t setting, std::size_t fold, std::span<const std::size_t> train,
                                        std::span<const std::size_t> validation)>;

/// Mean k-fold validation accuracy per setting; the best is the highest mean,
/// ties going to the earliest setting. A setting whose training throws is
/// recorded as failed and skipped. Throws UserError when every setting fails.
GridSearchResult grid_search(const DocTermMatrix& x, std::span<const Label> y, const ClassifierFactory& factory,
                             const std::vector<Hyperparameters>& grid, std::size_t k, std::uint64_t seed,
                             const FoldObserver& observer = {});
GridSearchResult grid_search(const DocTermMatrix& x, std::span<const Label> y, ModelKind kind,
                             const std::vector<Hyperparameters>& grid, std::size_t k, std::uint64_t seed,
                             const FoldObserver& observer = {});

struct EvalReport {
  std::string model_kind;
  Metrics holdout;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  Hyperparameters chosen_hyperparameters;
  std::vector<GridPoint> cv_mean_scores;
  double cv_best_accuracy = 0.0;
  /// Seed, config echo and input hashes.
  nlohmann::json provenance = nlohmann::json::object();
};

/// Two-decimal human-readable summary.
std::string format_report(const EvalReport& report);

void write_confusion_csv(std::ostream& out, const Metrics& m);

void to_json(nlohmann::json& j, const SplitSpec& s);
void from_json(const nlohmann::json& j, SplitSpec& s);
void to_json(nlohmann::json& j, const Metrics& m);
void to_json(nlohmann::json& j, const GridPoint& g);
void to_json(nlohmann::json& j, const EvalReport& r);
/// Reads back the confusion counts; derived fields are recomputed.
Metrics metrics_from_json(const nlohmann::json& j);

}  // namespace reviewbomb
