#include "fasemcom/semantic_match.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fasemcom/errors.hpp"
#include "fasemcom/text.hpp"

namespace fasemcom {

namespace {

std::vector<std::string> split_words(std::string_view phrase) {
  std::vector<std::string> words;
  std::string cur;
  for (char c : phrase) {
    if (c == ' ' || c == '\t') {
      if (!cur.empty()) words.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  return words;
}

}  // namespace

std::vector<Detection> load_detections(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::format_error, std::string("detections: ") + e.what());
  }
  if (!doc.is_array()) fail(Errc::format_error, "detections: expected a JSON array");
  std::vector<Detection> out;
  for (const auto& item : doc) {
    Detection d;
    try {
      d.label = item.at("label").get<std::string>();
      const auto& bb = item.at("bbox");
      if (!bb.is_array() || bb.size() != 4)
        fail(Errc::format_error, "detections: bbox must be [x0,y0,x1,y1]");
      d.bbox = Box{bb[0].get<int>(), bb[1].get<int>(), bb[2].get<int>(), bb[3].get<int>()};
      d.confidence = item.value("confidence", 1.0);
    } catch (const nlohmann::json::exception& e) {
      fail(Errc::format_error, std::string("detections: ") + e.what());
    }
    if (d.bbox.x0 >= d.bbox.x1 || d.bbox.y0 >= d.bbox.y1)
      fail(Errc::format_error, "detections: degenerate box for label '" + d.label + "'");
    if (d.confidence < 0.0 || d.confidence > 1.0)
      fail(Errc::format_error, "detections: confidence outside [0,1]");
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<Detection> load_detections_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) fail(Errc::io_error, "cannot open " + path.string());
  return load_detections(f);
}

void validate_detections(std::span<const Detection> detections, ImageSize image_size) {
  for (const Detection& d : detections) {
    if (d.bbox.x0 < 0 || d.bbox.y0 < 0 || d.bbox.x1 > image_size.first ||
        d.bbox.y1 > image_size.second)
      fail(Errc::invalid_argument,
           "detection '" + d.label + "' falls outside the image");
  }
}

std::optional<MatchResult> best_match(std::span<const KeywordCandidate> keywords,
                                      std::span<const Detection> detections,
                                      const EmbeddingTable& table, double threshold) {
  if (keywords.empty() || detections.empty())
    fail(Errc::invalid_argument, "best_match needs keywords and detections");

  struct LabelVec {
    std::string label;
    std::vector<double> vec;
  };
  std::vector<LabelVec> labels;
  for (const Detection& d : detections) {
    std::string folded = fold_case(d.label);
    if (std::any_of(labels.begin(), labels.end(),
                    [&](const LabelVec& lv) { return lv.label == folded; }))
      continue;
    std::vector<std::string> words = split_words(folded);
    try {
      labels.push_back({folded, phrase_vector(words, table)});
    } catch (const Error& e) {
      if (e.code() != Errc::all_out_of_vocabulary) throw;
    }
  }

  bool any_keyword_in_vocab = false;
  const KeywordCandidate* best_kw = nullptr;
  const LabelVec* best_label = nullptr;
  double best_sim = 0.0;
  for (const KeywordCandidate& kw : keywords) {
    std::vector<double> kv;
    try {
      kv = phrase_vector(kw.words, table);
    } catch (const Error& e) {
      if (e.code() != Errc::all_out_of_vocabulary) throw;
      continue;
    }
    any_keyword_in_vocab = true;
    for (const LabelVec& lv : labels) {
      double sim = cosine_similarity(kv, lv.vec);
      bool better = false;
      if (!best_kw || sim > best_sim) {
        better = true;
      } else if (sim == best_sim) {
        if (kw.score < best_kw->score)
          better = true;
        else if (kw.score == best_kw->score && lv.label < best_label->label)
          better = true;
      }
      if (better) {
        best_kw = &kw;
        best_label = &lv;
        best_sim = sim;
      }
    }
  }

  if (!any_keyword_in_vocab || labels.empty())
    fail(Errc::all_out_of_vocabulary, "no (keyword, label) pair is in vocabulary");
  if (!best_kw || best_sim < threshold) return std::nullopt;

  MatchResult result;
  result.matched_label = best_label->label;
  result.similarity = best_sim;
  result.keyword = best_kw->text();
  for (const Detection& d : detections)
    if (fold_case(d.label) == best_label->label) result.matched_boxes.push_back(d.bbox);
  return result;
}

SliceSpec select_slice(ImageSize image_size, std::span<const Box> boxes,
                       int target_resolution) {
  if (boxes.empty()) fail(Errc::empty_boxes, "select_slice with no boxes");
  if (target_resolution < 1) fail(Errc::invalid_argument, "target resolution must be >= 1");
  const auto [img_w, img_h] = image_size;
  for (const Box& b : boxes) {
    if (b.x0 < 0 || b.y0 < 0 || b.x1 > img_w || b.y1 > img_h || b.x0 >= b.x1 ||
        b.y0 >= b.y1)
      fail(Errc::invalid_argument, "slice box outside the image");
  }

  const Box u = union_box(boxes);
  const double uw = u.width(), uh = u.height();
  const double cx = (u.x0 + u.x1) / 2.0, cy = (u.y0 + u.y1) / 2.0;

  // 10% margin per side, then grow the short dimension to a square.
  double side = std::max(uw * 1.2, uh * 1.2);
  int side_i = std::min(int(std::lround(side)), std::min(img_w, img_h));
  side_i = std::max(side_i, 1);

  int x0 = int(std::lround(cx - side_i / 2.0));
  int y0 = int(std::lround(cy - side_i / 2.0));
  x0 = std::clamp(x0, 0, img_w - side_i);
  y0 = std::clamp(y0, 0, img_h - side_i);

  return SliceSpec{Box{x0, y0, x0 + side_i, y0 + side_i}, target_resolution};
}

long long token_count(int num_slices, int patches_per_tile) {
  if (num_slices < 0 || patches_per_tile <= 0)
    fail(Errc::invalid_argument, "token_count arguments out of range");
  return (1LL + num_slices) * patches_per_tile;
}

}  // namespace fasemcom
