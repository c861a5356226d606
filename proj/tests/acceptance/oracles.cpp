#include "acceptance/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>

using reviewbomb::Label;

namespace oracle {

Tfidf tfidf(const std::vector<std::vector<std::string>>& docs, std::size_t cap) {
  std::map<std::string, long> total;
  for (const auto& d : docs)
    for (const auto& t : d) ++total[t];
  std::vector<std::pair<std::string, long>> by_count(total.begin(), total.end());
  std::stable_sort(by_count.begin(), by_count.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (by_count.size() > cap) by_count.resize(cap);

  Tfidf out;
  for (const auto& [t, n] : by_count) out.terms.push_back(t);
  std::sort(out.terms.begin(), out.terms.end());

  const double n_docs = static_cast<double>(docs.size());
  for (const auto& term : out.terms) {
    double df = 0;
    for (const auto& d : docs) df += std::count(d.begin(), d.end(), term) > 0 ? 1 : 0;
    out.idf.push_back(std::log((1.0 + n_docs) / (1.0 + df)) + 1.0);
  }
  for (const auto& d : docs) {
    std::vector<double> row(out.terms.size(), 0.0);
    double norm = 0;
    for (std::size_t j = 0; j < out.terms.size(); ++j) {
      row[j] = static_cast<double>(std::count(d.begin(), d.end(), out.terms[j])) * out.idf[j];
      norm += row[j] * row[j];
    }
    if (norm > 0)
      for (auto& v : row) v /= std::sqrt(norm);
    out.rows.push_back(row);
  }
  return out;
}

Mnb mnb_fit(const Dense& x, const std::vector<Label>& y, double alpha) {
  const std::size_t v = x.empty() ? 0 : x[0].size();
  Mnb m;
  for (std::size_t c = 0; c < 2; ++c) {
    double n_c = 0;
    std::vector<double> w(v, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (static_cast<std::size_t>(y[i]) != c) continue;
      n_c += 1;
      for (std::size_t t = 0; t < v; ++t) w[t] += x[i][t];
    }
    double w_total = 0;
    for (double a : w) w_total += a;
    m.prior[c] = n_c / static_cast<double>(x.size());
    for (std::size_t t = 0; t < v; ++t) m.theta[c].push_back((w[t] + alpha) / (w_total + alpha * static_cast<double>(v)));
  }
  return m;
}

std::array<double, 2> mnb_posterior(const Mnb& m, const std::vector<double>& x) {
  std::array<double, 2> joint{};
  for (std::size_t c = 0; c < 2; ++c) {
    double p = m.prior[c];
    for (std::size_t t = 0; t < x.size(); ++t) p *= std::pow(m.theta[c][t], x[t]);
    joint[c] = p;
  }
  const double z = joint[0] + joint[1];
  return {joint[0] / z, joint[1] / z};
}

double logreg_loss(const Dense& x, const std::vector<Label>& y, const std::vector<double>& w, double b, double lambda) {
  double sum = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double z = b;
    for (std::size_t j = 0; j < w.size(); ++j) z += w[j] * x[i][j];
    const double s = y[i] == Label::RB ? 1.0 : -1.0;
    sum += std::log1p(std::exp(-s * z));
  }
  double reg = 0;
  for (double v : w) reg += v * v;
  return sum / static_cast<double>(x.size()) + lambda * reg;
}

Counts count_metrics(const std::vector<Label>& truth, const std::vector<Label>& pred) {
  Counts c;
  for (std::size_t i = 0; i < truth.size(); ++i)
    ++c.confusion[static_cast<std::size_t>(truth[i])][static_cast<std::size_t>(pred[i])];
  const auto div = [](double a, double b) { return b == 0 ? 0.0 : a / b; };
  const double n = static_cast<double>(truth.size());
  c.accuracy = div(static_cast<double>(c.confusion[0][0] + c.confusion[1][1]), n);
  for (std::size_t k = 0; k < 2; ++k) {
    const double tp = static_cast<double>(c.confusion[k][k]);
    const double fp = static_cast<double>(c.confusion[1 - k][k]);
    const double fn = static_cast<double>(c.confusion[k][1 - k]);
    c.precision[k] = div(tp, tp + fp);
    c.recall[k] = div(tp, tp + fn);
    c.f1[k] = div(2.0 * c.precision[k] * c.recall[k], c.precision[k] + c.recall[k]);
  }
  c.macro_precision = (c.precision[0] + c.precision[1]) / 2.0;
  c.macro_recall = (c.recall[0] + c.recall[1]) / 2.0;
  c.macro_f1 = (c.f1[0] + c.f1[1]) / 2.0;
  return c;
}

}  // namespace oracle
