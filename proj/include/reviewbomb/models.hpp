#pragma once

#include <array>
#include <map>
#include <optional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "reviewbomb/label.hpp"
#include "reviewbomb/vectorize.hpp"

namespace reviewbomb {

// ---------------------------------------------------------------------------
// Multinomial Naive Bayes over TF-IDF pseudo-counts.
//
//   theta[c][t] = (W[c][t] + alpha) / (W[c] + alpha * V)
//
// where W[c][t] sums the TF-IDF weight of term t over class-c rows, W[c] sums
// W[c][t] over terms and V is the vocabulary size. Class order is (RB, NonRB)
// and exact score ties go to RB.
// ---------------------------------------------------------------------------

struct MnbParams {
  double alpha = 1.0;
  std::array<double, kNumClasses> class_log_prior{};
  std::array<std::vector<double>, kNumClasses> feature_log_prob;
  std::string vocabulary_hash;

  std::size_t n_features() const { return feature_log_prob[0].size(); }
};

struct MnbPrediction {
  Label label = Label::RB;
  std::array<double, kNumClasses> log_joint{};
};

MnbParams train_mnb(const DocTermMatrix& x, std::span<const Label> y, double alpha);
MnbPrediction predict_mnb(const MnbParams& params, const SparseVector& x);
/// Normalized class posteriors from the log joint scores.
std::array<double, kNumClasses> posterior(const MnbPrediction& p);

// ---------------------------------------------------------------------------
// L2-regularized logistic regression, RB encoded as +1:
//
//   L(w, b) = (1/n) sum_i ln(1 + exp(-y_i (w.x_i + b))) + lambda ||w||^2
//
// minimized from zero by gradient descent with Armijo backtracking.
// ---------------------------------------------------------------------------

struct LogRegParams {
  std::vector<double> weights;
  double bias = 0.0;
  double lambda = 0.0;
  double tolerance = 1e-6;
  std::size_t max_iterations = 1000;
  std::size_t achieved_iterations = 0;
  bool converged = false;
  /// Objective at the start and after every accepted step.
  std::vector<double> loss_history;
  std::string vocabulary_hash;
};

struct LogRegPrediction {
  Label label = Label::RB;
  double probability = 0.5;  // P(RB)
};

double logreg_objective(const DocTermMatrix& x, std::span<const Label> y, std::span<const double> weights, double bias,
                        double lambda);
/// Writes dL/dw into grad_w (resized to n_cols) and returns dL/db.
double logreg_gradient(const DocTermMatrix& x, std::span<const Label> y, std::span<const double> weights, double bias,
                       double lambda, std::vector<double>& grad_w);

LogRegParams train_logreg(const DocTermMatrix& x, std::span<const Label> y, double lambda, double tolerance = 1e-6,
                          std::size_t max_iterations = 1000);
LogRegPrediction predict_logreg(const LogRegParams& params, const SparseVector& x);

// ---------------------------------------------------------------------------
// Pluggable classifier interface used by grid search and the CLI.
// ---------------------------------------------------------------------------

enum class ModelKind : std::uint8_t { Mnb, LogReg };

std::string_view model_kind_name(ModelKind k);
std::optional<ModelKind> parse_model_kind(std::string_view s);

using Hyperparameters = std::map<std::string, double>;

class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual ModelKind kind() const = 0;
  virtual void fit(const DocTermMatrix& x, std::span<const Label> y) = 0;
  virtual Label predict(const SparseVector& x) const = 0;
  /// Score for RB in [0, 1].
  virtual double rb_score(const SparseVector& x) const = 0;
  virtual const Hyperparameters& hyperparameters() const = 0;
  /// {version, model_kind, hyperparameters, parameters, vocabulary_hash}
  virtual nlohmann::json to_json() const = 0;
  virtual const std::string& vocabulary_hash() const = 0;
  virtual void set_vocabulary_hash(std::string hash) = 0;

  std::vector<Label> predict(const DocTermMatrix& x) const;
};

/// MNB reads "alpha"; LogReg reads "lambda" and optionally "tolerance" and
/// "max_iterations". Unknown keys are rejected.
std::unique_ptr<Classifier> make_classifier(ModelKind kind, const Hyperparameters& hp);
std::unique_ptr<Classifier> load_classifier(const nlohmann::json& j);

class MnbClassifier final : public Classifier {
 public:
  explicit MnbClassifier(Hyperparameters hp);
  explicit MnbClassifier(MnbParams params);
  ModelKind kind() const override { return ModelKind::Mnb; }
  void fit(const DocTermMatrix& x, std::span<const Label> y) override;
  Label predict(const SparseVector& x) const override;
  using Classifier::predict;
  double rb_score(const SparseVector& x) const override;
  const Hyperparameters& hyperparameters() const override { return hp_; }
  nlohmann::json to_json() const override;
  const std::string& vocabulary_hash() const override { return params_.vocabulary_hash; }
  void set_vocabulary_hash(std::string h) override { params_.vocabulary_hash = std::move(h); }
  const MnbParams& params() const { return params_; }

 private:
  Hyperparameters hp_;
  MnbParams params_;
};

class LogRegClassifier final : public Classifier {
 public:
  explicit LogRegClassifier(Hyperparameters hp);
  /// `hp` defaults to the values recorded in `params`.
  explicit LogRegClassifier(LogRegParams params, std::optional<Hyperparameters> hp = std::nullopt);
  ModelKind kind() const override { return ModelKind::LogReg; }
  void fit(const DocTermMatrix& x, std::span<const Label> y) override;
  Label predict(const SparseVector& x) const override;
  using Classifier::predict;
  double rb_score(const SparseVector& x) const override;
  const Hyperparameters& hyperparameters() const override { return hp_; }
  nlohmann::json to_json() const override;
  const std::string& vocabulary_hash() const override { return params_.vocabulary_hash; }
  void set_vocabulary_hash(std::string h) override { params_.vocabulary_hash = std::move(h); }
  const LogRegParams& params() const { return params_; }

 private:
  Hyperparameters hp_;
  LogRegParams params_;
};

}  // namespace reviewbomb
