#pragma once

// Brute-force reference implementations for the acceptance suite. They work
// on dense data and follow the textbook formulas directly, sharing no code
// with the library beyond the label enum.

#include <array>
#include <string>
#include <vector>

#include "reviewbomb/label.hpp"

namespace oracle {

using Dense = std::vector<std::vector<double>>;

struct Tfidf {
  std::vector<std::string> terms;  // lexicographic
  std::vector<double> idf;
  Dense rows;  // one L2-normalized row per document
};

/// Keeps the `cap` terms with the highest total count (ties: smaller term
/// first), then applies idf = ln((1 + N) / (1 + df)) + 1 and L2 normalization.
Tfidf tfidf(const std::vector<std::vector<std::string>>& docs, std::size_t cap);

struct Mnb {
  std::array<double, 2> prior{};
  std::array<std::vector<double>, 2> theta;
};

Mnb mnb_fit(const Dense& x, const std::vector<reviewbomb::Label>& y, double alpha);

/// P(class | x) by summing the unnormalized joint over both classes.
std::array<double, 2> mnb_posterior(const Mnb& m, const std::vector<double>& x);

/// (1/n) sum ln(1 + exp(-y (w.x + b))) + lambda ||w||^2 with RB as +1.
double logreg_loss(const Dense& x, const std::vector<reviewbomb::Label>& y, const std::vector<double>& w, double b,
                   double lambda);

struct Counts {
  std::array<std::array<std::uint64_t, 2>, 2> confusion{};
  double accuracy = 0;
  std::array<double, 2> precision{}, recall{}, f1{};
  double macro_precision = 0, macro_recall = 0, macro_f1 = 0;
};

Counts count_metrics(const std::vector<reviewbomb::Label>& truth, const std::vector<reviewbomb::Label>& pred);

}  // namespace oracle
