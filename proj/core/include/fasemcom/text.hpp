#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace fasemcom {

struct Token {
  std::string surface;
  int sentence_index = 0;
  int position_index = 0;
  bool is_stopword = false;
};

/// ASCII lowercase; non-ASCII bytes pass through unchanged.
std::string fold_case(std::string_view s);

using StopwordSet = std::unordered_set<std::string>;

/// One word per line, LF-terminated; lines are case-folded.
StopwordSet parse_stopword_list(std::istream& in);

/// The bundled English list (compiled into the library; the same content
/// ships as core/data/stopwords_en.txt).
const StopwordSet& english_stopwords();

/// Splits on whitespace, punctuation and special characters; '.', '?', '!'
/// close a sentence. Letters, digits and non-ASCII bytes are token
/// characters; punctuation-only fragments vanish by construction.
/// Throws empty_input if nothing survives.
std::vector<Token> tokenize(std::string_view text, const StopwordSet& stopwords);
std::vector<Token> tokenize(std::string_view text);

}  // namespace fasemcom
