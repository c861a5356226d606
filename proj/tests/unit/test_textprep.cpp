#include <regex>

#include "doctest.h"
#include "reviewbomb/rng.hpp"
#include "reviewbomb/textprep.hpp"
#include "support.hpp"

using namespace reviewbomb;

namespace {

using Tokens = std::vector<std::string>;

std::string join(const Tokens& t) {
  std::string s;
  for (const auto& x : t) s += (s.empty() ? "" : " ") + x;
  return s;
}

}  // namespace

TEST_SUITE("textprep") {
  TEST_CASE("normalize examples") {
    CHECK(normalize_text("GARBAGE!!!") == "garbage!!!");
    CHECK(normalize_text("soooooo") == "sooo");
    CHECK(normalize_text("huehuehuehuehue") == "huehuehuehuehue");
    CHECK(normalize_text("visit http://x.co now") == "visit  now");
    CHECK(normalize_text("go to www.example.com/page today") == "go to  today");
    CHECK(normalize_text("  a \t\n b  ") == "a b");
    CHECK(normalize_text("fish &amp; chips") == "fish   chips");
    CHECK(normalize_text("").empty());
  }

  TEST_CASE("normalize applies NFC, unicode lowercase and apostrophe folding") {
    // "e" + combining acute composes to U+00E9.
    CHECK(normalize_text("Cafe\xcc\x81") == "caf\xc3\xa9");
    CHECK(normalize_text("\xc3\x89T\xc3\x89") == "\xc3\xa9t\xc3\xa9");
    CHECK(normalize_text("don\xe2\x80\x99t") == "don't");
  }

  TEST_CASE("tokenize examples") {
    auto sw = StopwordSet::parse("for\nmy\n");
    CHECK(tokenize("thanks for ruining my childhood", sw).tokens == Tokens{"thanks", "ruining", "childhood"});
    CHECK(tokenize("", sw).tokens.empty());
    auto t = prepare("Awfuly boring gameplay, primitive graphics, many connections errors, uninspired characters.",
                     StopwordSet::english())
                 .tokens;
    for (const char* w : {"boring", "gameplay", "primitive", "graphics", "awfuly"})
      CHECK(std::find(t.begin(), t.end(), w) != t.end());
  }

  TEST_CASE("token shape rules") {
    StopwordSet none;
    CHECK(tokenize("a b cd 9lives r2d2 it's 'quoted' don''t x-ray", none).tokens ==
          Tokens{"cd", "r2d2", "it's", "quoted", "don", "ray"});
    CHECK(tokenize("10/10 would buy again", none).tokens == Tokens{"would", "buy", "again"});
  }

  TEST_CASE("source length counts code points") {
    CHECK(prepare("caf\xc3\xa9 ok", StopwordSet{}).source_length == 7);
  }

  TEST_CASE("bundled stopword list") {
    const auto& sw = StopwordSet::english();
    CHECK(sw.size() >= 120);
    CHECK(sw.size() <= 200);
    for (const char* w : {"the", "and", "is", "i'm", "don't"}) CHECK(sw.contains(w));
    for (const char* w : {"game", "refund", "bad"}) CHECK_FALSE(sw.contains(w));
  }

  TEST_CASE("stopword file parsing") {
    auto sw = StopwordSet::parse("# comment\nThe\n\n  And  \n");
    CHECK(sw.size() == 2);
    CHECK(sw.contains("the"));
    CHECK(sw.contains("and"));
    rbtest::TempDir dir;
    rbtest::write_file(dir / "sw.txt", "alpha\nbeta\n");
    CHECK(StopwordSet::load(dir / "sw.txt").size() == 2);
  }

  TEST_CASE("suffix stripping table") {
    CHECK(strip_suffix("ruining") == "ruin");
    CHECK(strip_suffix("stopped") == "stop");
    CHECK(strip_suffix("killing") == "kill");
    CHECK(strip_suffix("played") == "play");
    CHECK(strip_suffix("sing") == "sing");
    CHECK(strip_suffix("bring") == "bring");
    CHECK(strip_suffix("really") == "real");
    CHECK(strip_suffix("only") == "only");
    CHECK(strip_suffix("boxes") == "box");
    CHECK(strip_suffix("matches") == "match");
    CHECK(strip_suffix("games") == "game");
    CHECK(strip_suffix("glass") == "glass");
    CHECK(strip_suffix("bonus") == "bonus");
    CHECK(strip_suffix("this") == "this");
    CHECK(strip_suffix("bus") == "bus");
    StopwordSet none;
    CHECK(tokenize("ruining games", none, Stemming::SuffixStrip).tokens == Tokens{"ruin", "game"});
  }

  TEST_CASE("tokens are shaped, stopword-free and idempotent on random text") {
    const std::regex shape("[a-z][a-z0-9']*");
    const auto& sw = StopwordSet::english();
    const std::string alphabet = "abcdeiouxyz019' .,!?-THE\xc3\xa9\n";
    Pcg32 rng(99, 4);
    for (int trial = 0; trial < 300; ++trial) {
      std::string raw;
      const auto len = rng.bounded(80);
      for (std::uint32_t i = 0; i < len; ++i) raw += alphabet[rng.bounded(static_cast<std::uint32_t>(alphabet.size()))];
      raw += " the and game";
      auto t = prepare(raw, sw).tokens;
      for (const auto& tok : t) {
        CAPTURE(tok);
        CHECK(std::regex_match(tok, shape));
        CHECK(tok.size() >= 2);
        CHECK_FALSE(sw.contains(tok));
      }
      CHECK(tokenize(join(t), sw).tokens == t);
    }
  }
}
