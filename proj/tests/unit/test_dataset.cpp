#include <numeric>
#include <sstream>

#include "doctest.h"
#include "reviewbomb/dataset.hpp"
#include "reviewbomb/errors.hpp"
#include "reviewbomb/rng.hpp"
#include "support.hpp"

using namespace reviewbomb;

namespace {

GameAggregate game(const std::string& id, std::optional<int> meta, std::optional<int> user, std::uint64_t english) {
  GameAggregate g;
  g.game_id = id;
  g.game_title = id;
  if (meta) g.metascore = Score::from_tenths(*meta);
  if (user) g.avg_user_score = Score::from_tenths(*user);
  g.n_user_reviews = english;
  g.n_english_user_reviews = english;
  return g;
}

ReviewRecord review(const std::string& game, int tenths, std::string text = "some english text") {
  ReviewRecord r;
  r.game_id = game;
  r.game_title = game;
  r.score = Score::from_tenths(tenths);
  r.review_text = std::move(text);
  return r;
}

}  // namespace

TEST_SUITE("dataset") {
  TEST_CASE("candidate criteria from the worked examples") {
    std::vector<GameAggregate> g{game("gap4", 70, 30, 10), game("gap3", 40, 10, 10), game("gap7", 79, 9, 10)};
    auto sel = select_candidates(g);
    CHECK(sel.is_candidate("gap4"));
    CHECK_FALSE(sel.is_candidate("gap3"));
    CHECK(sel.is_candidate("gap7"));
    CHECK(sel.zones[0] == Zone::RbCandidate);
    CHECK(sel.zones[1] == Zone::CriticPreferred);
  }

  TEST_CASE("candidates need enough english reviews and both scores") {
    std::vector<GameAggregate> g{game("few", 90, 10, 4), game("nometa", std::nullopt, 10, 50),
                                 game("nouser", 90, std::nullopt, 50), game("userpref", 50, 80, 50)};
    auto sel = select_candidates(g);
    CHECK(sel.candidates.empty());
    CHECK(sel.zones[0] == Zone::CriticPreferred);
    CHECK_FALSE(sel.zones[1]);
    CHECK_FALSE(sel.zones[2]);
    CHECK(sel.zones[3] == Zone::UserPreferred);
  }

  TEST_CASE("criteria validation") {
    CandidateCriteria c;
    c.require_both_scores = false;
    CHECK_THROWS_AS(c.validate(), UserError);
    c = {};
    c.gap_threshold = 0.0;
    CHECK_THROWS_AS(c.validate(), UserError);
    c = {};
    c.min_english_reviews = 0;
    CHECK_THROWS_AS(c.validate(), UserError);
    CHECK_NOTHROW(CandidateCriteria{}.validate());
  }

  TEST_CASE("raising the gap threshold never adds candidates") {
    Pcg32 rng(5, 5);
    std::vector<GameAggregate> g;
    for (int i = 0; i < 300; ++i)
      g.push_back(game("g" + std::to_string(i), static_cast<int>(rng.bounded(101)), static_cast<int>(rng.bounded(101)),
                       rng.bounded(20)));
    std::set<std::string> prev;
    bool first = true;
    for (double gap : {0.5, 1.0, 2.0, 3.0, 4.0, 5.5, 8.0}) {
      CandidateCriteria c;
      c.gap_threshold = gap;
      auto sel = select_candidates(g, c);
      if (!first) CHECK(std::includes(prev.begin(), prev.end(), sel.candidates.begin(), sel.candidates.end()));
      prev = sel.candidates;
      first = false;
      // Zones partition the games that have both scores.
      for (std::size_t i = 0; i < g.size(); ++i) CHECK(sel.zones[i].has_value());
    }
  }

  TEST_CASE("label rule boundary") {
    CHECK(label_review(Score::from_tenths(10)) == Label::RB);
    CHECK(label_review(Score::from_tenths(11)) == Label::NonRB);
    CHECK(label_review(Score::from_tenths(0)) == Label::RB);
    CorpusConfig c;
    c.label_threshold = Score::from_tenths(20);
    CHECK(label_review(Score::from_tenths(15), c) == Label::RB);
  }

  TEST_CASE("within-candidates corpus keeps english user reviews of candidates") {
    std::vector<ReviewRecord> recs{review("cand", 0), review("cand", 50), review("cand", 5, "   "),
                                   review("other", 0), review("cand", 10)};
    recs.push_back(review("cand", 0));
    recs.back().reviewer_kind = ReviewerKind::Critic;
    std::vector<std::uint8_t> english{1, 1, 1, 1, 0, 1};
    CandidateSelection sel;
    sel.candidates = {"cand"};
    auto corpus = build_corpus(recs, english, sel);
    REQUIRE(corpus.entries.size() == 2);
    CHECK(corpus.entries[0].label == Label::RB);
    CHECK(corpus.entries[1].label == Label::NonRB);
    for (const auto& e : corpus.entries) CHECK(e.game_id == "cand");
    CHECK(corpus.label_counts() == std::array<std::size_t, 2>{1, 1});
  }

  TEST_CASE("controls mode pairs RB reviews with low non-candidate reviews") {
    std::vector<ReviewRecord> recs{review("cand", 0), review("cand", 50), review("other", 20), review("other", 31),
                                   review("other", 5)};
    std::vector<std::uint8_t> english(recs.size(), 1);
    CandidateSelection sel;
    sel.candidates = {"cand"};
    CorpusConfig c;
    c.mode = ConstructionMode::CandidatesVsControls;
    auto corpus = build_corpus(recs, english, sel, c);
    REQUIRE(corpus.entries.size() == 3);
    CHECK(corpus.entries[0].game_id == "cand");
    CHECK(corpus.entries[0].label == Label::RB);
    CHECK(corpus.entries[1].score.tenths() == 20);
    CHECK(corpus.entries[1].label == Label::NonRB);
    CHECK(corpus.entries[2].score.tenths() == 5);
    CHECK(corpus.entries[2].label == Label::NonRB);
  }

  TEST_CASE("english flags cover only user reviews with text") {
    std::vector<ReviewRecord> recs{review("g", 0, "the game is boring and the servers crash all the time"),
                                   review("g", 0, "este juego es terrible y los servidores no funcionan nunca"),
                                   review("g", 0, "the game is boring and the servers crash all the time")};
    recs[2].reviewer_kind = ReviewerKind::Critic;
    auto flags = english_flags(recs, english_profile());
    CHECK(flags == std::vector<std::uint8_t>{1, 0, 0});
  }

  TEST_CASE("stats for a two-game fixture") {
    std::vector<ReviewRecord> recs{review("a", 0), review("a", 5), review("a", 10), review("a", 90), review("b", 20),
                                   review("b", 80)};
    std::vector<std::uint8_t> english(recs.size(), 1);
    std::vector<GameAggregate> aggs{game("a", 90, 26, 5), game("b", 50, std::nullopt, 2)};
    aggs[0].release_year = 2020;
    auto sel = select_candidates(aggs);
    REQUIRE(sel.is_candidate("a"));
    auto s = corpus_stats(recs, english, aggs, sel);
    CHECK(s.n_candidate_games == 1);
    CHECK(s.n_candidate_reviews == 4);
    CHECK(s.mean_reviews_per_candidate_game == 4.0);
    CHECK(s.n_noncandidate_games == 1);
    CHECK(s.mean_reviews_per_noncandidate_game == 2.0);
    CHECK(s.noncandidate_share_below_3 == 0.5);
    CHECK(s.candidates_per_year.at(2020) == 1);
  }

  TEST_CASE("scatter rows carry zones and skip games without both scores") {
    std::vector<GameAggregate> aggs{game("c", 90, 10, 10), game("u", 50, 80, 10), game("x", std::nullopt, 50, 10)};
    auto sel = select_candidates(aggs);
    auto rows = export_scatter_data(aggs, sel);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].zone == Zone::RbCandidate);
    CHECK(rows[1].zone == Zone::UserPreferred);
    CHECK(export_scatter_data({}, CandidateSelection{}).empty());
    std::ostringstream os;
    write_scatter_csv(os, rows);
    CHECK(os.str() ==
          "game_id,game_title,release_year,metascore,avg_user_score,zone\n"
          "c,c,,9.0,1.0,rb_candidate\nu,u,,5.0,8.0,user_preferred\n");
  }

  TEST_CASE("histogram bins") {
    std::vector<Score> s{Score::from_tenths(0), Score::from_tenths(0), Score::from_tenths(100)};
    auto h = score_histogram(s);
    CHECK(h[0] == 2);
    CHECK(h[10] == 1);
    CHECK(std::accumulate(h.begin(), h.end(), std::uint64_t{0}) == 3);
    std::vector<Score> edge{Score::from_tenths(9), Score::from_tenths(10), Score::from_tenths(99)};
    auto e = score_histogram(edge);
    CHECK(e[0] == 1);
    CHECK(e[1] == 1);
    CHECK(e[9] == 1);
  }

  TEST_CASE("populations split candidate and control english user reviews") {
    std::vector<ReviewRecord> recs{review("c", 0), review("c", 100), review("o", 70), review("o", 10)};
    std::vector<std::uint8_t> english{1, 1, 1, 0};
    CandidateSelection sel;
    sel.candidates = {"c"};
    auto p = collect_score_populations(recs, english, sel);
    CHECK(p.candidate.size() == 2);
    CHECK(p.control.size() == 1);
    auto h = export_score_histograms(p);
    CHECK(h.candidate[0] == 1);
    CHECK(h.control[7] == 1);
  }

  TEST_CASE("corpus jsonl round trip") {
    LabeledCorpus c;
    c.construction_mode = ConstructionMode::CandidatesVsControls;
    c.entries.push_back({"multi\nline \"quoted\" caf\xc3\xa9", Score::from_tenths(5), "g (2020)", Label::RB});
    c.entries.push_back({"fine", Score::from_tenths(25), "h", Label::NonRB});
    rbtest::TempDir dir;
    {
      std::ofstream os(dir / "c.jsonl");
      write_corpus_jsonl(os, c);
    }
    auto back = read_corpus_jsonl(dir / "c.jsonl");
    CHECK(back.entries == c.entries);
    CHECK(back.construction_mode == c.construction_mode);
    CHECK(back.label_rule_threshold == c.label_rule_threshold);
  }

  TEST_CASE("construction mode names") {
    CHECK(parse_mode("within_candidates") == ConstructionMode::WithinCandidates);
    CHECK(parse_mode("controls") == ConstructionMode::CandidatesVsControls);
    CHECK_FALSE(parse_mode("other"));
  }
}
