#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fasemcom/embedding.hpp"
#include "fasemcom/geometry.hpp"
#include "fasemcom/keywords.hpp"

namespace fasemcom {

struct Detection {
  std::string label;
  Box bbox;
  double confidence = 0.0;
};

/// JSON array of {"label", "bbox": [x0,y0,x1,y1], "confidence"} objects.
std::vector<Detection> load_detections(std::istream& in);
std::vector<Detection> load_detections_file(const std::filesystem::path& path);

/// Throws invalid_argument if any box falls outside the image.
void validate_detections(std::span<const Detection> detections, ImageSize image_size);

struct MatchResult {
  std::string matched_label;
  std::vector<Box> matched_boxes;  // every detection carrying matched_label
  double similarity = 0.0;
  std::string keyword;  // the winning phrase, case-folded
};

inline constexpr double kDefaultSimilarityThreshold = 0.35;

/// Exhaustive (keyword, label) similarity search; multi-word labels are
/// averaged the same way as keyword phrases. Pairs with an
/// out-of-vocabulary side are skipped; if every pair is skipped, throws
/// all_out_of_vocabulary. Returns nullopt when the best similarity is
/// below the threshold. Ties: lower keyword score, then lexicographic
/// label.
std::optional<MatchResult> best_match(std::span<const KeywordCandidate> keywords,
                                      std::span<const Detection> detections,
                                      const EmbeddingTable& table,
                                      double threshold = kDefaultSimilarityThreshold);

struct SliceSpec {
  Box crop_box;               // square, in source-image pixels
  int target_resolution = 0;  // P, pixels per side after rescale
};

/// Union of the boxes, grown by a 10% margin per side, squared up on the
/// shorter dimension, then shifted (not shrunk) to fit the image. A square
/// larger than min(W,H) collapses to a min(W,H) crop centered on the union
/// box center. The result always contains the union-box center.
SliceSpec select_slice(ImageSize image_size, std::span<const Box> boxes,
                       int target_resolution);

/// Visual tokens for one base tile plus num_slices slice tiles.
long long token_count(int num_slices, int patches_per_tile);

}  // namespace fasemcom
