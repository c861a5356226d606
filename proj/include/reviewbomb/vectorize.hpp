#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "reviewbomb/textprep.hpp"

namespace reviewbomb {

struct SparseEntry {
  std::uint32_t index;
  double weight;

  bool operator==(const SparseEntry&) const = default;
};

/// Entries sorted by strictly increasing index.
using SparseVector = std::vector<SparseEntry>;

struct DocTermMatrix {
  std::vector<SparseVector> rows;
  std::size_t n_cols = 0;

  std::size_t n_rows() const { return rows.size(); }
};

/// Capped vocabulary with smoothed idf: idf_t = ln((1 + N) / (1 + df_t)) + 1.
class TfidfModel {
 public:
  static constexpr int kFormatVersion = 1;

  TfidfModel() = default;

  /// Keeps the max_features terms with the highest total occurrence count
  /// (ties: lexicographically smaller first), then indexes them in
  /// lexicographic order.
  static TfidfModel fit(std::span<const TokenStream> corpus, std::size_t max_features = 1000);

  /// Raw counts times idf, L2-normalized. Out-of-vocabulary tokens are
  /// ignored; a document with none left maps to the zero vector.
  SparseVector transform(const TokenStream& doc) const;
  DocTermMatrix transform(std::span<const TokenStream> docs) const;

  std::size_t size() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<std::uint64_t>& document_frequency() const { return df_; }
  const std::vector<double>& idf() const { return idf_; }
  std::uint64_t n_documents_fitted() const { return n_documents_; }
  std::size_t max_features() const { return max_features_; }
  std::optional<std::uint32_t> index_of(const std::string& term) const;

  /// Fingerprint of the ordered term list; model artifacts carry it.
  std::string vocabulary_hash() const;

  nlohmann::json to_json() const;
  /// Validates dense indices, lexicographic order and the idf formula.
  static TfidfModel from_json(const nlohmann::json& j);

 private:
  void build_index();

  std::vector<std::string> terms_;
  std::vector<std::uint64_t> df_;
  std::vector<double> idf_;
  std::uint64_t n_documents_ = 0;
  std::size_t max_features_ = 1000;
  std::unordered_map<std::string, std::uint32_t> index_;
};

inline TfidfModel fit_vocabulary(std::span<const TokenStream> corpus, std::size_t max_features = 1000) {
  return TfidfModel::fit(corpus, max_features);
}

inline SparseVector transform_tfidf(const TfidfModel& model, const TokenStream& doc) { return model.transform(doc); }

double smoothed_idf(std::uint64_t n_documents, std::uint64_t df);

double dot(const SparseVector& x, std::span<const double> dense);

}  // namespace reviewbomb
