#include "fasemcom/embedding.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "fasemcom/errors.hpp"
#include "fasemcom/text.hpp"

namespace fasemcom {

const std::vector<float>* EmbeddingTable::find(std::string_view word) const {
  auto it = entries.find(fold_case(word));
  return it == entries.end() ? nullptr : &it->second;
}

EmbeddingTable load_embeddings(std::istream& in) {
  EmbeddingTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::istringstream ls(line);
    std::string word;
    ls >> word;
    std::vector<float> vec;
    double v;
    while (ls >> v) vec.push_back(static_cast<float>(v));
    if (!ls.eof())
      fail(Errc::format_error, "embeddings line " + std::to_string(line_no) +
                                   ": non-numeric component");
    if (word.empty() || vec.empty())
      fail(Errc::format_error, "embeddings line " + std::to_string(line_no) +
                                   ": expected 'word v1 ... vd'");
    if (table.dimension == 0)
      table.dimension = vec.size();
    else if (vec.size() != table.dimension)
      fail(Errc::format_error, "embeddings line " + std::to_string(line_no) +
                                   ": dimension " + std::to_string(vec.size()) +
                                   " != " + std::to_string(table.dimension));
    table.entries[fold_case(word)] = std::move(vec);
  }
  if (table.entries.empty()) fail(Errc::empty_table, "no embedding entries parsed");
  return table;
}

EmbeddingTable load_embeddings_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) fail(Errc::io_error, "cannot open " + path.string());
  return load_embeddings(f);
}

std::vector<double> phrase_vector(std::span<const std::string> words,
                                  const EmbeddingTable& table) {
  if (words.empty()) fail(Errc::invalid_argument, "phrase_vector on empty phrase");
  std::vector<double> sum(table.dimension, 0.0);
  std::size_t found = 0;
  for (const std::string& w : words) {
    const std::vector<float>* vec = table.find(w);
    if (!vec) continue;
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += (*vec)[i];
    ++found;
  }
  if (found == 0) fail(Errc::all_out_of_vocabulary, "no phrase word has an embedding");
  for (double& v : sum) v /= double(found);
  return sum;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    fail(Errc::dimension_mismatch, "cosine of vectors with different dimensions");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  na = std::sqrt(na);
  nb = std::sqrt(nb);
  if (na < 1e-12 || nb < 1e-12) fail(Errc::zero_norm, "cosine of a zero vector");
  return dot / (na * nb);
}

}  // namespace fasemcom
