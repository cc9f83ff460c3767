#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fasemcom {

/// Word-vector table; keys are case-folded on insert and lookup.
struct EmbeddingTable {
  std::size_t dimension = 0;
  std::unordered_map<std::string, std::vector<float>> entries;

  const std::vector<float>* find(std::string_view word) const;
  std::size_t size() const { return entries.size(); }
};

/// Parses "word v1 v2 ... vd" lines; the first line fixes d. Throws
/// format_error (with the line number) on a malformed or mismatched line,
/// empty_table if no entry was parsed.
EmbeddingTable load_embeddings(std::istream& in);
EmbeddingTable load_embeddings_file(const std::filesystem::path& path);

/// Mean of the in-vocabulary word vectors; out-of-vocabulary words are
/// skipped and do not count toward the divisor. Throws
/// all_out_of_vocabulary when nothing is found.
std::vector<double> phrase_vector(std::span<const std::string> words,
                                  const EmbeddingTable& table);

/// (a.b)/(|a||b|); throws zero_norm if either norm is below 1e-12,
/// dimension_mismatch on unequal sizes.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

}  // namespace fasemcom
