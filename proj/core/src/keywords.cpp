#include "fasemcom/keywords.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "fasemcom/errors.hpp"

namespace fasemcom {

std::string KeywordCandidate::text() const {
  std::string out;
  for (const std::string& w : words) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

std::map<std::string, WordStats> score_words(const std::vector<Token>& tokens) {
  if (tokens.empty()) fail(Errc::empty_input, "score_words on empty token list");

  const int n_sentences = tokens.back().sentence_index + 1;

  std::unordered_map<std::string, std::vector<int>> occurrences;  // folded -> token idx
  for (const Token& t : tokens) occurrences[fold_case(t.surface)].push_back(t.position_index);

  int max_tf = 0;
  for (const auto& [w, occ] : occurrences) max_tf = std::max(max_tf, int(occ.size()));

  // Frequency statistics run over the non-stopword vocabulary only.
  double mean_tf = 0.0, std_tf = 0.0;
  {
    std::vector<int> tfs;
    for (const auto& [w, occ] : occurrences)
      if (!tokens[occ.front()].is_stopword) tfs.push_back(int(occ.size()));
    if (tfs.empty()) return {};
    for (int tf : tfs) mean_tf += tf;
    mean_tf /= double(tfs.size());
    for (int tf : tfs) std_tf += (tf - mean_tf) * (tf - mean_tf);
    std_tf = std::sqrt(std_tf / double(tfs.size()));
  }

  std::map<std::string, WordStats> stats;
  for (const auto& [word, occ] : occurrences) {
    if (tokens[occ.front()].is_stopword) continue;

    WordStats s;
    s.word = word;
    s.tf = int(occ.size());

    int n_capitalized = 0, n_acronym = 0;
    for (int idx : occ) {
      const std::string& surf = tokens[idx].surface;
      if (surf[0] >= 'A' && surf[0] <= 'Z') ++n_capitalized;
      if (surf.size() >= 2 &&
          std::all_of(surf.begin(), surf.end(), [](char c) { return c >= 'A' && c <= 'Z'; }))
        ++n_acronym;
    }
    s.w_case = std::max(n_capitalized, n_acronym) / (1.0 + std::log(double(s.tf)));

    std::vector<int> sents;
    for (int idx : occ) sents.push_back(tokens[idx].sentence_index);
    std::sort(sents.begin(), sents.end());
    const std::size_t m = sents.size();
    double median = (m % 2 == 1) ? double(sents[m / 2])
                                 : (sents[m / 2 - 1] + sents[m / 2]) / 2.0;
    s.w_position = std::log(std::log(3.0 + median));

    s.w_freq = s.tf / (mean_tf + std_tf);

    // One-token neighborhood on each side, same sentence only.
    std::vector<std::string> left, right;
    for (int idx : occ) {
      const Token& t = tokens[idx];
      if (idx > 0 && tokens[idx - 1].sentence_index == t.sentence_index)
        left.push_back(fold_case(tokens[idx - 1].surface));
      if (idx + 1 < int(tokens.size()) &&
          tokens[idx + 1].sentence_index == t.sentence_index)
        right.push_back(fold_case(tokens[idx + 1].surface));
    }
    auto distinct_ratio = [](std::vector<std::string>& v) {
      if (v.empty()) return 0.0;
      const std::size_t total = v.size();
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
      return double(v.size()) / double(total);
    };
    s.w_rel = 1.0 + (distinct_ratio(left) + distinct_ratio(right)) * s.tf / double(max_tf);

    std::vector<int> distinct_sents = sents;
    distinct_sents.erase(std::unique(distinct_sents.begin(), distinct_sents.end()),
                         distinct_sents.end());
    s.w_difsentence = double(distinct_sents.size()) / double(n_sentences);

    s.score = (s.w_rel * s.w_position) /
              (s.w_case + s.w_freq / s.w_rel + s.w_difsentence / s.w_rel);

    stats.emplace(word, std::move(s));
  }
  return stats;
}

std::vector<KeywordCandidate> extract_keywords(std::string_view text, int top_k,
                                               int max_len, const StopwordSet& stopwords) {
  if (top_k < 1) fail(Errc::invalid_argument, "top_k must be >= 1");
  if (max_len < 1 || max_len > 3) fail(Errc::invalid_argument, "max_len must be in {1,2,3}");

  const std::vector<Token> tokens = tokenize(text, stopwords);
  const std::map<std::string, WordStats> stats = score_words(tokens);

  std::vector<std::vector<const Token*>> sentences;
  for (const Token& t : tokens) {
    if (sentences.size() <= std::size_t(t.sentence_index))
      sentences.resize(t.sentence_index + 1);
    sentences[t.sentence_index].push_back(&t);
  }

  struct Candidate {
    std::vector<std::string> words;
    int tf = 0;
  };
  std::unordered_map<std::string, Candidate> merged;
  for (const auto& sentence : sentences) {
    for (int n = 1; n <= max_len; ++n) {
      for (std::size_t i = 0; i + n <= sentence.size(); ++i) {
        if (sentence[i]->is_stopword || sentence[i + n - 1]->is_stopword) continue;
        std::vector<std::string> words;
        words.reserve(n);
        for (int k = 0; k < n; ++k) words.push_back(fold_case(sentence[i + k]->surface));
        std::string key;
        for (const std::string& w : words) {
          if (!key.empty()) key.push_back(' ');
          key += w;
        }
        auto [it, inserted] = merged.try_emplace(key, Candidate{std::move(words), 1});
        if (!inserted) ++it->second.tf;
      }
    }
  }
  if (merged.empty())
    fail(Errc::no_candidates, "every candidate window is stopword-bounded");

  std::vector<KeywordCandidate> out;
  out.reserve(merged.size());
  for (auto& [key, cand] : merged) {
    // Interior stopwords stay in the phrase but carry no word score.
    double prod = 1.0, sum = 0.0;
    for (const std::string& w : cand.words) {
      auto it = stats.find(w);
      if (it == stats.end()) continue;
      prod *= it->second.score;
      sum += it->second.score;
    }
    KeywordCandidate kc;
    kc.words = std::move(cand.words);
    kc.term_frequency = cand.tf;
    kc.score = prod / (cand.tf * (1.0 + sum));
    out.push_back(std::move(kc));
  }

  std::sort(out.begin(), out.end(), [](const KeywordCandidate& a, const KeywordCandidate& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.words < b.words;
  });
  if (int(out.size()) > top_k) out.resize(top_k);
  return out;
}

std::vector<KeywordCandidate> extract_keywords(std::string_view text, int top_k,
                                               int max_len) {
  return extract_keywords(text, top_k, max_len, english_stopwords());
}

}  // namespace fasemcom
