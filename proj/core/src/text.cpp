#include "fasemcom/text.hpp"

#include <istream>
#include <sstream>

#include "fasemcom/errors.hpp"

namespace fasemcom {

// Generated from core/data/stopwords_en.txt at configure time.
extern const char* const kEnglishStopwords;

std::string fold_case(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

StopwordSet parse_stopword_list(std::istream& in) {
  StopwordSet set;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) set.insert(fold_case(line));
  }
  return set;
}

const StopwordSet& english_stopwords() {
  static const StopwordSet set = [] {
    std::istringstream in(kEnglishStopwords);
    return parse_stopword_list(in);
  }();
  return set;
}

namespace {

// Token characters: ASCII letters and digits plus any non-ASCII byte, so
// multi-byte UTF-8 sequences stay whole. Everything else separates.
bool is_token_char(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
         c >= 0x80;
}

}  // namespace

std::vector<Token> tokenize(std::string_view text, const StopwordSet& stopwords) {
  std::vector<Token> tokens;
  std::string current;
  int sentence = 0;
  bool sentence_has_tokens = false;

  auto flush = [&] {
    if (current.empty()) return;
    Token t;
    t.surface = std::move(current);
    t.sentence_index = sentence;
    t.position_index = static_cast<int>(tokens.size());
    t.is_stopword = stopwords.contains(fold_case(t.surface));
    tokens.push_back(std::move(t));
    current.clear();
    sentence_has_tokens = true;
  };

  for (unsigned char c : text) {
    if (is_token_char(c)) {
      current.push_back(static_cast<char>(c));
    } else {
      flush();
      if ((c == '.' || c == '?' || c == '!') && sentence_has_tokens) {
        ++sentence;
        sentence_has_tokens = false;
      }
    }
  }
  flush();

  if (tokens.empty()) fail(Errc::empty_input, "no token survives tokenization");
  return tokens;
}

std::vector<Token> tokenize(std::string_view text) {
  return tokenize(text, english_stopwords());
}

}  // namespace fasemcom
