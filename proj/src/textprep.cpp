#include "reviewbomb/textprep.hpp"

#include <fstream>
#include <sstream>

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "reviewbomb/errors.hpp"
#include "reviewbomb/resources.hpp"

namespace reviewbomb {

namespace {

bool is_alnum(char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); }
bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y'; }

bool starts_with_at(const std::u32string& s, std::size_t i, std::u32string_view prefix) {
  return s.compare(i, prefix.size(), prefix) == 0;
}

std::u32string collapse_whitespace(const std::u32string& in) {
  std::u32string out;
  out.reserve(in.size());
  bool pending_space = false;
  for (char32_t c : in) {
    if (u_isUWhiteSpace(static_cast<UChar32>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(U' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

// URL: "http://", "https://" or "www." at a word start, through the next whitespace.
// Entity: &name; &#123; &#x1f;
std::u32string strip_urls_and_entities(const std::u32string& in) {
  std::u32string out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    bool word_start = i == 0 || in[i - 1] == U' ';
    if (word_start && (starts_with_at(in, i, U"http://") || starts_with_at(in, i, U"https://") ||
                       starts_with_at(in, i, U"www."))) {
      while (i < in.size() && in[i] != U' ') ++i;
      continue;
    }
    if (in[i] == U'&') {
      std::size_t j = i + 1;
      bool numeric = j < in.size() && in[j] == U'#';
      if (numeric) ++j;
      bool hex = numeric && j < in.size() && in[j] == U'x';
      if (hex) ++j;
      std::size_t body = j;
      while (j < in.size() && j - body < 10) {
        char32_t c = in[j];
        bool ok = numeric ? ((c >= U'0' && c <= U'9') || (hex && c >= U'a' && c <= U'f'))
                          : ((c >= U'a' && c <= U'z') || (c >= U'0' && c <= U'9'));
        if (!ok) break;
        ++j;
      }
      if (j > body && j < in.size() && in[j] == U';') {
        out.push_back(U' ');
        i = j + 1;
        continue;
      }
    }
    out.push_back(in[i++]);
  }
  return out;
}

std::u32string collapse_repeats(const std::u32string& in) {
  std::u32string out;
  out.reserve(in.size());
  std::size_t run = 0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    run = (i > 0 && in[i] == in[i - 1]) ? run + 1 : 1;
    if (run <= 3) out.push_back(in[i]);
  }
  return out;
}

std::size_t count_code_points(std::string_view utf8) {
  std::size_t n = 0;
  for (unsigned char c : utf8)
    if ((c & 0xC0) != 0x80) ++n;
  return n;
}

std::string undouble(std::string stem) {
  std::size_t n = stem.size();
  if (n >= 2 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1]) && stem[n - 1] != 'l' &&
      stem[n - 1] != 's' && stem[n - 1] != 'z')
    stem.pop_back();
  return stem;
}

bool has_vowel(std::string_view s) {
  for (char c : s)
    if (is_vowel(c)) return true;
  return false;
}

}  // namespace

StopwordSet StopwordSet::parse(std::string_view text) {
  std::unordered_set<std::string> words;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    std::size_t e = line.find_last_not_of(" \t\r");
    std::string w = line.substr(b, e - b + 1);
    for (char& c : w) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    words.insert(std::move(w));
  }
  return StopwordSet(std::move(words));
}

StopwordSet StopwordSet::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UserError("cannot read stopword list: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const StopwordSet& StopwordSet::english() {
  static const StopwordSet set = parse(resources::stopwords_en());
  return set;
}

std::string normalize_text(std::string_view raw) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw InvariantError("ICU NFC normalizer unavailable");

  icu::UnicodeString text = icu::UnicodeString::fromUTF8(icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  icu::UnicodeString normalized = nfc->normalize(text, status);
  if (U_FAILURE(status)) throw InvariantError("ICU normalization failed");
  normalized.toLower(icu::Locale::getRoot());
  normalized.findAndReplace(icu::UnicodeString(static_cast<UChar32>(0x2019)), icu::UnicodeString("'"));
  normalized.findAndReplace(icu::UnicodeString(static_cast<UChar32>(0x2018)), icu::UnicodeString("'"));

  std::u32string cps(static_cast<std::size_t>(normalized.countChar32()), U'\0');
  status = U_ZERO_ERROR;
  normalized.toUTF32(reinterpret_cast<UChar32*>(cps.data()), static_cast<int32_t>(cps.size()), status);

  cps = collapse_whitespace(cps);
  cps = strip_urls_and_entities(cps);
  cps = collapse_repeats(cps);

  std::string out;
  icu::UnicodeString::fromUTF32(reinterpret_cast<const UChar32*>(cps.data()), static_cast<int32_t>(cps.size()))
      .toUTF8String(out);
  return out;
}

std::string strip_suffix(std::string_view token) {
  std::string t(token);
  auto ends = [&](std::string_view suf) { return t.size() > suf.size() && t.ends_with(suf); };
  auto stem_len = [&](std::string_view suf) { return t.size() - suf.size(); };

  if (ends("ing") && stem_len("ing") >= 3 && has_vowel(std::string_view(t).substr(0, stem_len("ing"))))
    return undouble(t.substr(0, stem_len("ing")));
  if (ends("ed") && stem_len("ed") >= 3 && has_vowel(std::string_view(t).substr(0, stem_len("ed"))))
    return undouble(t.substr(0, stem_len("ed")));
  if (ends("ly") && stem_len("ly") >= 3) return t.substr(0, stem_len("ly"));
  if (ends("es") && stem_len("es") >= 3) {
    std::string stem = t.substr(0, stem_len("es"));
    if (stem.ends_with('s') || stem.ends_with('x') || stem.ends_with('z') || stem.ends_with("ch") ||
        stem.ends_with("sh"))
      return stem;
  }
  if (ends("s") && stem_len("s") >= 3) {
    char before = t[t.size() - 2];
    if (before != 's' && before != 'u' && before != 'i') return t.substr(0, stem_len("s"));
  }
  return t;
}

TokenStream tokenize(std::string_view normalized, const StopwordSet& stopwords, Stemming stemming) {
  TokenStream out;
  out.source_length = count_code_points(normalized);

  auto emit = [&](std::string tok) {
    if (tok.size() < 2 || !(tok[0] >= 'a' && tok[0] <= 'z')) return;
    if (stopwords.contains(tok)) return;
    if (stemming == Stemming::SuffixStrip) {
      tok = strip_suffix(tok);
      if (stopwords.contains(tok)) return;
    }
    out.tokens.push_back(std::move(tok));
  };

  std::string current;
  const std::size_t n = normalized.size();
  for (std::size_t i = 0; i < n; ++i) {
    char c = normalized[i];
    if (is_alnum(c)) {
      current.push_back(c);
    } else if (c == '\'' && !current.empty() && i + 1 < n && is_alnum(normalized[i + 1])) {
      current.push_back(c);
    } else if (!current.empty()) {
      emit(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) emit(std::move(current));
  return out;
}

TokenStream prepare(std::string_view raw, const StopwordSet& stopwords, Stemming stemming) {
  return tokenize(normalize_text(raw), stopwords, stemming);
}

}  // namespace reviewbomb
