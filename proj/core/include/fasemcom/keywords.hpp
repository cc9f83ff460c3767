#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fasemcom/text.hpp"

namespace fasemcom {

/// Per-word statistics. Lower score means more important. The five
/// features combine as
///   S(w) = (w_rel * w_position) / (w_case + w_freq/w_rel + w_difsentence/w_rel)
struct WordStats {
  std::string word;  // case-folded key
  int tf = 0;
  double w_case = 0.0;
  double w_position = 0.0;
  double w_freq = 0.0;
  double w_rel = 1.0;
  double w_difsentence = 0.0;
  double score = 0.0;
};

struct KeywordCandidate {
  std::vector<std::string> words;  // case-folded, 1..3 entries
  double score = 0.0;              // S(Kw), lower is better
  int term_frequency = 0;

  std::string text() const;  // words joined with single spaces
};

/// Feature conventions (fixed; the word-level contract):
///  - w_case counts occurrences starting with an uppercase letter vs
///    all-uppercase tokens of length >= 2, divided by 1 + ln(tf)
///  - w_position = ln(ln(3 + median sentence index))
///  - w_freq = tf / (mean + population stddev of tf over non-stopwords)
///  - w_rel uses a one-token window per side, within the sentence, with
///    tf normalized by the document's max tf (stopwords included)
///  - w_difsentence = sentences containing the word / total sentences
std::map<std::string, WordStats> score_words(const std::vector<Token>& tokens);

/// Sliding-window candidates per sentence (length <= max_len, never
/// starting or ending on a stopword), scored by
///   S(Kw) = prod S(w) / (TF(Kw) * (1 + sum S(w)))
/// over non-stopword members, case-folded duplicates merged with TF
/// accumulated. Returns the top_k lowest scores, ties broken
/// lexicographically on the phrase.
std::vector<KeywordCandidate> extract_keywords(std::string_view text, int top_k,
                                               int max_len = 3);
std::vector<KeywordCandidate> extract_keywords(std::string_view text, int top_k,
                                               int max_len,
                                               const StopwordSet& stopwords);

}  // namespace fasemcom
