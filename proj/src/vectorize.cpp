#include "reviewbomb/vectorize.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "reviewbomb/errors.hpp"
#include "reviewbomb/hashing.hpp"

namespace reviewbomb {

double smoothed_idf(std::uint64_t n_documents, std::uint64_t df) {
  return std::log((1.0 + static_cast<double>(n_documents)) / (1.0 + static_cast<double>(df))) + 1.0;
}

double dot(const SparseVector& x, std::span<const double> dense) {
  double s = 0.0;
  for (const auto& e : x) s += e.weight * dense[e.index];
  return s;
}

TfidfModel TfidfModel::fit(std::span<const TokenStream> corpus, std::size_t max_features) {
  if (corpus.empty()) throw UserError("cannot fit a vocabulary on an empty corpus");
  if (max_features == 0) throw UserError("max_features must be >= 1");

  struct Counts {
    std::uint64_t total = 0;
    std::uint64_t df = 0;
    std::size_t last_doc = SIZE_MAX;
  };
  std::unordered_map<std::string, Counts> counts;
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    for (const auto& tok : corpus[d].tokens) {
      Counts& c = counts[tok];
      ++c.total;
      if (c.last_doc != d) {
        ++c.df;
        c.last_doc = d;
      }
    }
  }

  std::vector<std::pair<std::string, Counts>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second.total != b.second.total) return a.second.total > b.second.total;
    return a.first < b.first;
  });
  if (ranked.size() > max_features) ranked.resize(max_features);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  TfidfModel m;
  m.n_documents_ = corpus.size();
  m.max_features_ = max_features;
  for (auto& [term, c] : ranked) {
    m.terms_.push_back(term);
    m.df_.push_back(c.df);
    m.idf_.push_back(smoothed_idf(m.n_documents_, c.df));
  }
  m.build_index();
  return m;
}

void TfidfModel::build_index() {
  index_.clear();
  for (std::size_t i = 0; i < terms_.size(); ++i) index_.emplace(terms_[i], static_cast<std::uint32_t>(i));
}

std::optional<std::uint32_t> TfidfModel::index_of(const std::string& term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SparseVector TfidfModel::transform(const TokenStream& doc) const {
  std::map<std::uint32_t, std::uint64_t> tf;
  for (const auto& tok : doc.tokens) {
    auto it = index_.find(tok);
    if (it != index_.end()) ++tf[it->second];
  }
  SparseVector v;
  v.reserve(tf.size());
  double norm2 = 0.0;
  for (const auto& [idx, count] : tf) {
    double w = static_cast<double>(count) * idf_[idx];
    v.push_back({idx, w});
    norm2 += w * w;
  }
  if (norm2 > 0.0) {
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& e : v) e.weight *= inv;
  }
  return v;
}

DocTermMatrix TfidfModel::transform(std::span<const TokenStream> docs) const {
  DocTermMatrix m;
  m.n_cols = terms_.size();
  m.rows.reserve(docs.size());
  for (const auto& d : docs) m.rows.push_back(transform(d));
  return m;
}

std::string TfidfModel::vocabulary_hash() const {
  Fnv1a64 h;
  for (const auto& t : terms_) {
    h.update(t);
    h.update("\n");
  }
  return h.hex();
}

nlohmann::json TfidfModel::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (std::size_t i = 0; i < terms_.size(); ++i)
    terms.push_back({{"term", terms_[i]}, {"df", df_[i]}, {"idf", idf_[i]}, {"index", i}});
  return {{"version", kFormatVersion},
          {"max_features", max_features_},
          {"n_documents_fitted", n_documents_},
          {"vocabulary_hash", vocabulary_hash()},
          {"terms", terms}};
}

TfidfModel TfidfModel::from_json(const nlohmann::json& j) {
  try {
    if (j.at("version").get<int>() != kFormatVersion) throw UserError("unsupported TF-IDF model version");
    TfidfModel m;
    m.max_features_ = j.at("max_features").get<std::size_t>();
    m.n_documents_ = j.at("n_documents_fitted").get<std::uint64_t>();
    const auto& terms = j.at("terms");
    m.terms_.resize(terms.size());
    m.df_.resize(terms.size());
    m.idf_.resize(terms.size());
    std::vector<bool> seen(terms.size(), false);
    for (const auto& t : terms) {
      auto idx = t.at("index").get<std::size_t>();
      if (idx >= terms.size() || seen[idx]) throw UserError("TF-IDF model indices are not dense");
      seen[idx] = true;
      m.terms_[idx] = t.at("term").get<std::string>();
      m.df_[idx] = t.at("df").get<std::uint64_t>();
      m.idf_[idx] = t.at("idf").get<double>();
      if (std::abs(m.idf_[idx] - smoothed_idf(m.n_documents_, m.df_[idx])) > 1e-9)
        throw UserError("TF-IDF model idf does not match its document frequency");
    }
    if (!std::is_sorted(m.terms_.begin(), m.terms_.end()) ||
        std::adjacent_find(m.terms_.begin(), m.terms_.end()) != m.terms_.end())
      throw UserError("TF-IDF model terms are not in strict lexicographic index order");
    if (m.terms_.size() > m.max_features_) throw UserError("TF-IDF model exceeds its max_features");
    m.build_index();
    if (j.contains("vocabulary_hash") && j["vocabulary_hash"].get<std::string>() != m.vocabulary_hash())
      throw UserError("TF-IDF model vocabulary_hash does not match its terms");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw UserError(std::string("invalid TF-IDF model: ") + e.what());
  }
}

}  // namespace reviewbomb
