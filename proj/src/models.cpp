#include "reviewbomb/models.hpp"

#include <algorithm>
#include <cmath>

#include "reviewbomb/errors.hpp"

namespace reviewbomb {

namespace {

constexpr int kModelFormatVersion = 1;

void check_training_input(const DocTermMatrix& x, std::span<const Label> y) {
  if (x.n_rows() != y.size())
    throw UserError("training rows (" + std::to_string(x.n_rows()) + ") do not match labels (" +
                    std::to_string(y.size()) + ")");
  std::array<std::size_t, kNumClasses> counts{};
  for (Label l : y) ++counts[class_index(l)];
  if (counts[0] == 0 || counts[1] == 0) throw UserError("training data must contain both classes");
  for (const auto& row : x.rows)
    for (const auto& e : row) {
      if (!std::isfinite(e.weight)) throw UserError("training matrix has a non-finite weight");
      if (e.index >= x.n_cols) throw InvariantError("sparse index outside matrix width");
    }
}

double sign(Label l) { return l == Label::RB ? 1.0 : -1.0; }

// ln(1 + exp(-m)) without overflow.
double log_loss(double margin) {
  if (margin > 0.0) return std::log1p(std::exp(-margin));
  return -margin + std::log1p(std::exp(margin));
}

// sigma(-m) = 1 / (1 + exp(m))
double sigmoid_neg(double margin) {
  if (margin >= 0.0) {
    double e = std::exp(-margin);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(margin));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

double get_hp(const Hyperparameters& hp, const std::string& key) {
  auto it = hp.find(key);
  if (it == hp.end()) throw UserError("missing hyperparameter '" + key + "'");
  return it->second;
}

void reject_unknown(const Hyperparameters& hp, std::initializer_list<std::string_view> allowed) {
  for (const auto& [k, _] : hp)
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw UserError("unknown hyperparameter '" + k + "'");
}

}  // namespace

MnbParams train_mnb(const DocTermMatrix& x, std::span<const Label> y, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw UserError("MNB alpha must be a positive finite number");
  check_training_input(x, y);
  for (const auto& row : x.rows)
    for (const auto& e : row)
      if (e.weight < 0.0) throw UserError("MNB requires non-negative feature weights");

  const std::size_t v = x.n_cols;
  if (v == 0) throw UserError("MNB requires a non-empty vocabulary");
  std::array<std::vector<double>, kNumClasses> w;
  for (auto& row : w) row.assign(v, 0.0);
  std::array<std::size_t, kNumClasses> n_class{};
  for (std::size_t i = 0; i < x.n_rows(); ++i) {
    const std::size_t c = class_index(y[i]);
    ++n_class[c];
    for (const auto& e : x.rows[i]) w[c][e.index] += e.weight;
  }

  MnbParams p;
  p.alpha = alpha;
  const double n = static_cast<double>(y.size());
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    p.class_log_prior[c] = std::log(static_cast<double>(n_class[c]) / n);
    double total = 0.0;
    for (double wt : w[c]) total += wt;
    const double log_denominator = std::log(total + alpha * static_cast<double>(v));
    p.feature_log_prob[c].resize(v);
    for (std::size_t t = 0; t < v; ++t) p.feature_log_prob[c][t] = std::log(w[c][t] + alpha) - log_denominator;
  }
  return p;
}

MnbPrediction predict_mnb(const MnbParams& params, const SparseVector& x) {
  MnbPrediction out;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    double s = params.class_log_prior[c];
    for (const auto& e : x) {
      if (e.index >= params.n_features()) throw InvariantError("feature index outside MNB vocabulary");
      s += e.weight * params.feature_log_prob[c][e.index];
    }
    out.log_joint[c] = s;
  }
  out.label = out.log_joint[1] > out.log_joint[0] ? Label::NonRB : Label::RB;
  return out;
}

std::array<double, kNumClasses> posterior(const MnbPrediction& p) {
  const double m = std::max(p.log_joint[0], p.log_joint[1]);
  const double e0 = std::exp(p.log_joint[0] - m);
  const double e1 = std::exp(p.log_joint[1] - m);
  return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

double logreg_objective(const DocTermMatrix& x, std::span<const Label> y, std::span<const double> weights, double bias,
                        double lambda) {
  double loss = 0.0;
  for (std::size_t i = 0; i < x.n_rows(); ++i) loss += log_loss(sign(y[i]) * (dot(x.rows[i], weights) + bias));
  return loss / static_cast<double>(x.n_rows()) + lambda * norm2(weights);
}

double logreg_gradient(const DocTermMatrix& x, std::span<const Label> y, std::span<const double> weights, double bias,
                       double lambda, std::vector<double>& grad_w) {
  grad_w.assign(x.n_cols, 0.0);
  double grad_b = 0.0;
  const double inv_n = 1.0 / static_cast<double>(x.n_rows());
  for (std::size_t i = 0; i < x.n_rows(); ++i) {
    const double yi = sign(y[i]);
    const double coef = -yi * sigmoid_neg(yi * (dot(x.rows[i], weights) + bias)) * inv_n;
    for (const auto& e : x.rows[i]) grad_w[e.index] += coef * e.weight;
    grad_b += coef;
  }
  for (std::size_t t = 0; t < grad_w.size(); ++t) grad_w[t] += 2.0 * lambda * weights[t];
  return grad_b;
}

LogRegParams train_logreg(const DocTermMatrix& x, std::span<const Label> y, double lambda, double tolerance,
                          std::size_t max_iterations) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw UserError("LogReg lambda must be >= 0");
  if (!(tolerance > 0.0)) throw UserError("LogReg tolerance must be > 0");
  check_training_input(x, y);

  const std::size_t n = x.n_rows();
  const double inv_n = 1.0 / static_cast<double>(n);
  LogRegParams p;
  p.lambda = lambda;
  p.tolerance = tolerance;
  p.max_iterations = max_iterations;
  p.weights.assign(x.n_cols, 0.0);

  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = sign(y[i]);

  // Linear scores z_i = w.x_i + b are kept up to date so each line-search
  // trial costs O(n + V) instead of a full pass over the matrix.
  std::vector<double> z(n, 0.0);
  auto objective_at = [&](std::span<const double> zz, double wnorm2) {
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) loss += log_loss(ys[i] * zz[i]);
    return loss * inv_n + lambda * wnorm2;
  };

  double loss = objective_at(z, 0.0);
  p.loss_history.push_back(loss);
  std::vector<double> grad_w;
  std::vector<double> dz(n);
  std::vector<double> z_trial(n);
  std::vector<double> w_trial(x.n_cols);
  double step = 1.0;
  constexpr double kArmijo = 1e-4;

  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    const double grad_b = logreg_gradient(x, y, p.weights, p.bias, lambda, grad_w);
    double inf_norm = std::abs(grad_b);
    for (double g : grad_w) inf_norm = std::max(inf_norm, std::abs(g));
    if (inf_norm < tolerance) {
      p.converged = true;
      break;
    }
    const double g2 = norm2(grad_w) + grad_b * grad_b;
    for (std::size_t i = 0; i < n; ++i) dz[i] = dot(x.rows[i], grad_w) + grad_b;

    bool accepted = false;
    double trial_loss = loss;
    step = std::min(step * 2.0, 1e6);
    while (step > 1e-20) {
      for (std::size_t t = 0; t < w_trial.size(); ++t) w_trial[t] = p.weights[t] - step * grad_w[t];
      for (std::size_t i = 0; i < n; ++i) z_trial[i] = z[i] - step * dz[i];
      trial_loss = objective_at(z_trial, norm2(w_trial));
      if (trial_loss <= loss - kArmijo * step * g2) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no descent possible at double precision
    p.weights.swap(w_trial);
    p.bias -= step * grad_b;
    z.swap(z_trial);
    loss = trial_loss;
    p.loss_history.push_back(loss);
    ++p.achieved_iterations;
  }
  if (!p.converged) {
    const double grad_b = logreg_gradient(x, y, p.weights, p.bias, lambda, grad_w);
    double inf_norm = std::abs(grad_b);
    for (double g : grad_w) inf_norm = std::max(inf_norm, std::abs(g));
    p.converged = inf_norm < tolerance;
  }
  return p;
}

LogRegPrediction predict_logreg(const LogRegParams& params, const SparseVector& x) {
  for (const auto& e : x)
    if (e.index >= params.weights.size()) throw InvariantError("feature index outside LogReg vocabulary");
  LogRegPrediction out;
  out.probability = sigmoid(dot(x, params.weights) + params.bias);
  out.label = out.probability >= 0.5 ? Label::RB : Label::NonRB;
  return out;
}

std::string_view model_kind_name(ModelKind k) { return k == ModelKind::Mnb ? "mnb" : "logreg"; }

std::optional<ModelKind> parse_model_kind(std::string_view s) {
  if (s == "mnb") return ModelKind::Mnb;
  if (s == "logreg") return ModelKind::LogReg;
  return std::nullopt;
}

std::vector<Label> Classifier::predict(const DocTermMatrix& x) const {
  std::vector<Label> out;
  out.reserve(x.n_rows());
  for (const auto& row : x.rows) out.push_back(predict(row));
  return out;
}

MnbClassifier::MnbClassifier(Hyperparameters hp) : hp_(std::move(hp)) {
  reject_unknown(hp_, {"alpha"});
  params_.alpha = get_hp(hp_, "alpha");
  if (!(params_.alpha > 0.0)) throw UserError("MNB alpha must be > 0");
}

MnbClassifier::MnbClassifier(MnbParams params) : hp_{{"alpha", params.alpha}}, params_(std::move(params)) {}

void MnbClassifier::fit(const DocTermMatrix& x, std::span<const Label> y) {
  std::string hash = params_.vocabulary_hash;
  params_ = train_mnb(x, y, get_hp(hp_, "alpha"));
  params_.vocabulary_hash = std::move(hash);
}

Label MnbClassifier::predict(const SparseVector& x) const { return predict_mnb(params_, x).label; }

double MnbClassifier::rb_score(const SparseVector& x) const { return posterior(predict_mnb(params_, x))[0]; }

nlohmann::json MnbClassifier::to_json() const {
  return {{"version", kModelFormatVersion},
          {"model_kind", "mnb"},
          {"hyperparameters", hp_},
          {"parameters",
           {{"class_order", {"RB", "NonRB"}},
            {"class_log_prior", params_.class_log_prior},
            {"feature_log_prob", params_.feature_log_prob}}},
          {"vocabulary_hash", params_.vocabulary_hash}};
}

LogRegClassifier::LogRegClassifier(Hyperparameters hp) : hp_(std::move(hp)) {
  reject_unknown(hp_, {"lambda", "tolerance", "max_iterations"});
  params_.lambda = get_hp(hp_, "lambda");
  if (!(params_.lambda >= 0.0)) throw UserError("LogReg lambda must be >= 0");
  if (hp_.contains("tolerance")) params_.tolerance = hp_.at("tolerance");
  if (hp_.contains("max_iterations")) params_.max_iterations = static_cast<std::size_t>(hp_.at("max_iterations"));
}

LogRegClassifier::LogRegClassifier(LogRegParams params, std::optional<Hyperparameters> hp)
    : params_(std::move(params)) {
  if (hp) {
    reject_unknown(*hp, {"lambda", "tolerance", "max_iterations"});
    hp_ = std::move(*hp);
  } else {
    hp_ = {{"lambda", params_.lambda},
           {"tolerance", params_.tolerance},
           {"max_iterations", static_cast<double>(params_.max_iterations)}};
  }
}

void LogRegClassifier::fit(const DocTermMatrix& x, std::span<const Label> y) {
  std::string hash = params_.vocabulary_hash;
  params_ = train_logreg(x, y, params_.lambda, params_.tolerance, params_.max_iterations);
  params_.vocabulary_hash = std::move(hash);
}

Label LogRegClassifier::predict(const SparseVector& x) const { return predict_logreg(params_, x).label; }

double LogRegClassifier::rb_score(const SparseVector& x) const { return predict_logreg(params_, x).probability; }

nlohmann::json LogRegClassifier::to_json() const {
  return {{"version", kModelFormatVersion},
          {"model_kind", "logreg"},
          {"hyperparameters", hp_},
          {"parameters",
           {{"weights", params_.weights},
            {"bias", params_.bias},
            {"convergence",
             {{"tolerance", params_.tolerance},
              {"max_iterations", params_.max_iterations},
              {"achieved_iterations", params_.achieved_iterations},
              {"converged", params_.converged},
              {"final_loss", params_.loss_history.empty() ? 0.0 : params_.loss_history.back()}}}}},
          {"vocabulary_hash", params_.vocabulary_hash}};
}

std::unique_ptr<Classifier> make_classifier(ModelKind kind, const Hyperparameters& hp) {
  if (kind == ModelKind::Mnb) return std::make_unique<MnbClassifier>(hp);
  return std::make_unique<LogRegClassifier>(hp);
}

std::unique_ptr<Classifier> load_classifier(const nlohmann::json& j) {
  try {
    if (j.at("version").get<int>() != kModelFormatVersion) throw UserError("unsupported model artifact version");
    auto kind = parse_model_kind(j.at("model_kind").get<std::string>());
    if (!kind) throw UserError("unknown model_kind in model artifact");
    const auto& params = j.at("parameters");
    const auto hash = j.at("vocabulary_hash").get<std::string>();
    if (*kind == ModelKind::Mnb) {
      MnbParams p;
      p.alpha = j.at("hyperparameters").at("alpha").get<double>();
      p.class_log_prior = params.at("class_log_prior").get<std::array<double, kNumClasses>>();
      p.feature_log_prob = params.at("feature_log_prob").get<std::array<std::vector<double>, kNumClasses>>();
      p.vocabulary_hash = hash;
      if (p.feature_log_prob[0].size() != p.feature_log_prob[1].size())
        throw UserError("MNB artifact has ragged feature_log_prob");
      for (const auto& row : p.feature_log_prob) {
        double s = 0.0;
        for (double lp : row) s += std::exp(lp);
        if (std::abs(s - 1.0) > 1e-9) throw UserError("MNB artifact theta row does not sum to 1");
      }
      return std::make_unique<MnbClassifier>(std::move(p));
    }
    LogRegParams p;
    p.weights = params.at("weights").get<std::vector<double>>();
    p.bias = params.at("bias").get<double>();
    const auto& conv = params.at("convergence");
    p.lambda = j.at("hyperparameters").at("lambda").get<double>();
    p.tolerance = conv.at("tolerance").get<double>();
    p.max_iterations = conv.at("max_iterations").get<std::size_t>();
    p.achieved_iterations = conv.at("achieved_iterations").get<std::size_t>();
    p.converged = conv.at("converged").get<bool>();
    p.loss_history = {conv.at("final_loss").get<double>()};
    p.vocabulary_hash = hash;
    return std::make_unique<LogRegClassifier>(std::move(p), j.at("hyperparameters").get<Hyperparameters>());
  } catch (const nlohmann::json::exception& e) {
    throw UserError(std::string("invalid model artifact: ") + e.what());
  }
}

}  // namespace reviewbomb
