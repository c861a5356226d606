#include <set>
#include <sstream>

#include "doctest.h"
#include "reviewbomb/errors.hpp"
#include "reviewbomb/eval.hpp"
#include "reviewbomb/rng.hpp"

using namespace reviewbomb;

namespace {

constexpr Label RB = Label::RB;
constexpr Label NB = Label::NonRB;

std::vector<Label> labels(std::size_t n_rb, std::size_t n_nb) {
  std::vector<Label> y;
  for (std::size_t i = 0; i < n_rb + n_nb; ++i) y.push_back(i < n_rb ? RB : NB);
  return y;
}

std::size_t count(const std::vector<std::size_t>& idx, std::span<const Label> y, Label l) {
  std::size_t n = 0;
  for (auto i : idx) n += y[i] == l;
  return n;
}

// Class-disjoint two-term matrix: RB rows use column 0, NonRB rows column 1.
DocTermMatrix separable(std::span<const Label> y) {
  DocTermMatrix m;
  m.n_cols = 2;
  for (auto l : y) m.rows.push_back({SparseEntry{l == RB ? 0u : 1u, 1.0}});
  return m;
}

}  // namespace

TEST_SUITE("eval") {
  TEST_CASE("stratified split of 80 and 20") {
    auto y = labels(80, 20);
    auto s = stratified_split(y, {0.2, 42, true});
    CHECK(count(s.test, y, RB) == 16);
    CHECK(count(s.test, y, NB) == 4);
    CHECK(s.train.size() == 80);
    CHECK(std::is_sorted(s.test.begin(), s.test.end()));
    auto again = stratified_split(y, {0.2, 42, true});
    CHECK(again.test == s.test);
    CHECK(stratified_split(y, {0.2, 43, true}).test != s.test);
  }

  TEST_CASE("split proportions within one sample on a 1000-label fixture") {
    Pcg32 rng(1, 1);
    std::vector<Label> y;
    for (int i = 0; i < 1000; ++i) y.push_back(rng.uniform() < 0.3 ? RB : NB);
    auto s = stratified_split(y, {0.2, 7, true});
    for (Label l : {RB, NB}) {
      const double n = static_cast<double>(std::count(y.begin(), y.end(), l));
      CHECK(std::abs(static_cast<double>(count(s.test, y, l)) - 0.2 * n) <= 1.0);
    }
    std::set<std::size_t> all(s.train.begin(), s.train.end());
    all.insert(s.test.begin(), s.test.end());
    CHECK(all.size() == 1000);
  }

  TEST_CASE("split errors") {
    CHECK_THROWS_AS(stratified_split(labels(1, 10), {}), UserError);
    SplitSpec bad{1.5, 1, true};
    CHECK_THROWS_AS(bad.validate(), UserError);
  }

  TEST_CASE("k-fold on a single class") {
    auto y = labels(10, 0);
    auto folds = kfold_indices(y, 5, 3);
    REQUIRE(folds.size() == 5);
    for (const auto& f : folds) CHECK(f.size() == 2);
  }

  TEST_CASE("k-fold is a stratified partition") {
    auto y = labels(53, 47);
    auto folds = kfold_indices(y, 5, 11);
    std::set<std::size_t> seen;
    for (const auto& f : folds) {
      CHECK(std::abs(static_cast<long>(count(f, y, RB)) - 53 / 5) <= 1);
      CHECK(std::abs(static_cast<long>(count(f, y, NB)) - 47 / 5) <= 1);
      CHECK((f.size() == 20));
      for (auto i : f) CHECK(seen.insert(i).second);
    }
    CHECK(seen.size() == 100);
    CHECK(kfold_indices(y, 5, 11) == folds);
  }

  TEST_CASE("k-fold errors") {
    CHECK_THROWS_AS(kfold_indices(labels(3, 10), 5, 1), UserError);
    CHECK_THROWS_AS(kfold_indices(labels(10, 10), 1, 1), UserError);
  }

  TEST_CASE("grid of one setting returns it") {
    auto y = labels(10, 10);
    auto r = grid_search(separable(y), y, ModelKind::Mnb, {{{"alpha", 0.3}}}, 5, 1);
    CHECK(r.best().at("alpha") == 0.3);
    CHECK(r.points.size() == 1);
    CHECK(r.points[0].fold_accuracy.size() == 5);
    CHECK(r.model);
  }

  TEST_CASE("identical fold scores pick the first setting") {
    auto y = labels(10, 10);
    std::vector<Hyperparameters> grid{{{"alpha", 1.0}}, {{"alpha", 0.5}}, {{"alpha", 0.1}}};
    auto r = grid_search(separable(y), y, ModelKind::Mnb, grid, 5, 1);
    for (const auto& p : r.points) CHECK(p.mean_accuracy == 1.0);
    CHECK(r.best_index == 0);
  }

  TEST_CASE("validation rows never reach training") {
    auto y = labels(12, 13);
    auto x = separable(y);
    std::size_t calls = 0;
    FoldObserver obs = [&](std::size_t, std::size_t, std::span<const std::size_t> tr,
                           std::span<const std::size_t> va) {
      ++calls;
      std::set<std::size_t> t(tr.begin(), tr.end());
      for (auto v : va) CHECK_FALSE(t.contains(v));
      CHECK(tr.size() + va.size() == y.size());
    };
    grid_search(x, y, ModelKind::Mnb, {{{"alpha", 1.0}}, {{"alpha", 0.1}}}, 5, 2, obs);
    CHECK(calls == 10);
  }

  TEST_CASE("failing settings are recorded and skipped") {
    auto y = labels(10, 10);
    std::vector<Hyperparameters> grid{{{"alpha", -1.0}}, {{"alpha", 1.0}}};
    auto r = grid_search(separable(y), y, ModelKind::Mnb, grid, 5, 1);
    CHECK(r.points[0].failure.has_value());
    CHECK(r.best_index == 1);
    CHECK_THROWS_AS(grid_search(separable(y), y, ModelKind::Mnb, {{{"alpha", -1.0}}}, 5, 1), UserError);
  }

  TEST_CASE("logreg through the grid") {
    auto y = labels(10, 10);
    auto r = grid_search(separable(y), y, ModelKind::LogReg, {{{"lambda", 0.01}}}, 5, 1);
    CHECK(r.points[0].mean_accuracy == 1.0);
  }

  TEST_CASE("perfect and one-class predictions") {
    auto y = labels(5, 5);
    auto m = compute_metrics(y, y);
    CHECK(m.accuracy == 1.0);
    CHECK(m.macro_f1 == 1.0);
    CHECK(m.normalized_confusion[0][0] == 1.0);
    CHECK(m.normalized_confusion[1][1] == 1.0);
    CHECK(m.normalized_confusion[0][1] == 0.0);

    auto all_rb = labels(10, 0);
    auto o = compute_metrics(y, all_rb);
    CHECK(o.accuracy == 0.5);
    CHECK(o.recall[0] == 1.0);
    CHECK(o.recall[1] == 0.0);
    CHECK(o.precision[1] == 0.0);
    CHECK_FALSE(o.zero_division.empty());
  }

  TEST_CASE("metrics against a counting oracle") {
    Pcg32 rng(8, 8);
    std::vector<Label> t, p;
    for (int i = 0; i < 50; ++i) {
      t.push_back(rng.bounded(2) ? RB : NB);
      p.push_back(rng.bounded(2) ? RB : NB);
    }
    long tp = 0, fn = 0, fp = 0, tn = 0;
    for (int i = 0; i < 50; ++i) {
      if (t[i] == RB) (p[i] == RB ? tp : fn)++;
      else (p[i] == RB ? fp : tn)++;
    }
    auto m = compute_metrics(t, p);
    CHECK(m.confusion[0][0] == static_cast<std::uint64_t>(tp));
    CHECK(m.confusion[0][1] == static_cast<std::uint64_t>(fn));
    CHECK(m.confusion[1][0] == static_cast<std::uint64_t>(fp));
    CHECK(m.confusion[1][1] == static_cast<std::uint64_t>(tn));
    CHECK(m.accuracy == static_cast<double>(tp + tn) / 50.0);
    const double prec_rb = double(tp) / double(tp + fp), rec_rb = double(tp) / double(tp + fn);
    CHECK(m.precision[0] == prec_rb);
    CHECK(m.recall[0] == rec_rb);
    CHECK(m.f1[0] == doctest::Approx(2 * prec_rb * rec_rb / (prec_rb + rec_rb)).epsilon(1e-15));
  }

  TEST_CASE("metrics input errors") {
    CHECK_THROWS_AS(compute_metrics(labels(2, 0), labels(3, 0)), InvariantError);
    CHECK_THROWS_AS(compute_metrics({}, {}), InvariantError);
  }

  TEST_CASE("report formatting and metrics json") {
    auto y = labels(3, 1);
    auto p = std::vector<Label>{RB, RB, NB, NB};
    EvalReport r;
    r.model_kind = "mnb";
    r.holdout = compute_metrics(y, p);
    r.chosen_hyperparameters = {{"alpha", 0.01}};
    r.cv_best_accuracy = 0.876;
    auto text = format_report(r);
    CHECK(text.find("accuracy 0.75") != std::string::npos);
    CHECK(text.find("alpha=0.01") != std::string::npos);
    nlohmann::json j = r.holdout;
    auto back = metrics_from_json(j);
    CHECK(back.confusion == r.holdout.confusion);
    CHECK(back.macro_f1 == r.holdout.macro_f1);
    std::ostringstream os;
    write_confusion_csv(os, r.holdout);
    CHECK(os.str().rfind("true_label,pred_RB,pred_NonRB,norm_pred_RB,norm_pred_NonRB\nRB,2,1,", 0) == 0);
  }
}
