#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "fasemcom/errors.hpp"
#include "fasemcom/rng.hpp"
#include "fasemcom/semantic_match.hpp"
#include "support.hpp"

using namespace fasemcom;

namespace {

EmbeddingTable table_from(const std::string& text) {
  std::istringstream in(text);
  return load_embeddings(in);
}

// 2-d toy vocabulary: axis 0 "text/id-ness", axis 1 "object-ness".
const char* k2dTable =
    "license 0.9 0.1\n"
    "plate 0.95 0.05\n"
    "number 1.0 0.0\n"
    "car 0.0 1.0\n"
    "traffic 0.3 0.7\n"
    "light 0.2 0.8\n";

KeywordCandidate candidate(std::vector<std::string> words, double score) {
  KeywordCandidate c;
  c.words = std::move(words);
  c.score = score;
  c.term_frequency = 1;
  return c;
}

}  // namespace

TEST_CASE("embedding loader") {
  const EmbeddingTable t = table_from("car 1.0 0.0\ntruck 0.0 1.0\n");
  CHECK(t.dimension == 2);
  CHECK(t.size() == 2);
  REQUIRE(t.find("CAR") != nullptr);
  CHECK((*t.find("car"))[0] == doctest::Approx(1.0));

  CHECK_THROWS_WITH_AS(static_cast<void>(table_from("car 1.0 0.0\ntruck 1.0\n")),
                       doctest::Contains("line 2"), Error);
  CHECK_THROWS_WITH_AS(static_cast<void>(table_from("")),
                       doctest::Contains("EmptyTable"), Error);
  CHECK_THROWS_AS(static_cast<void>(table_from("car one two\n")), Error);
}

TEST_CASE("phrase vectors") {
  const EmbeddingTable t = table_from("traffic 1.0 0.0\nlight 0.0 1.0\ncar 0.5 0.5\n");
  const std::vector<std::string> phrase = {"traffic", "light"};
  const auto v = phrase_vector(phrase, t);
  CHECK(v == std::vector<double>{0.5, 0.5});

  const std::vector<std::string> single = {"car"};
  CHECK(phrase_vector(single, t) == std::vector<double>{0.5, 0.5});

  const std::vector<std::string> with_oov = {"zzqx", "car"};
  CHECK(phrase_vector(with_oov, t) == std::vector<double>{0.5, 0.5});

  const std::vector<std::string> all_oov = {"zzqx", "qqzz"};
  CHECK_THROWS_WITH_AS(static_cast<void>(phrase_vector(all_oov, t)),
                       doctest::Contains("AllOutOfVocabulary"), Error);
}

TEST_CASE("cosine similarity basics") {
  const std::vector<double> e1 = {1.0, 0.0}, e2 = {0.0, 1.0}, neg = {-2.0, 0.0};
  CHECK(cosine_similarity(e1, e1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cosine_similarity(e1, e2) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(cosine_similarity(e1, neg) == doctest::Approx(-1.0).epsilon(1e-12));

  const std::vector<double> zero = {0.0, 0.0};
  CHECK_THROWS_WITH_AS(static_cast<void>(cosine_similarity(e1, zero)),
                       doctest::Contains("ZeroNorm"), Error);
  const std::vector<double> three = {1.0, 0.0, 0.0};
  CHECK_THROWS_AS(static_cast<void>(cosine_similarity(e1, three)), Error);
}

TEST_CASE("cosine scale invariance") {
  RngStream rng(7);
  for (int i = 0; i < 500; ++i) {
    std::vector<double> a(4), b(4);
    for (auto& x : a) x = rng.next_gauss();
    for (auto& x : b) x = rng.next_gauss();
    const double lambda = 1e-3 + rng.next_double() * 1e4;
    std::vector<double> scaled = b;
    for (auto& x : scaled) x *= lambda;
    if (std::abs(cosine_similarity(a, a) - 1.0) > 1e-9) continue;  // paranoid norm check
    CHECK(cosine_similarity(a, scaled) ==
          doctest::Approx(cosine_similarity(a, b)).epsilon(1e-9));
  }
}

TEST_CASE("best match picks the plate, with every plate box") {
  const EmbeddingTable t = table_from(k2dTable);
  const std::vector<KeywordCandidate> kws = {
      candidate({"license", "plate", "number"}, 0.004)};
  const std::vector<Detection> dets = {
      {"car", {0, 0, 100, 100}, 0.9},
      {"traffic light", {10, 10, 30, 60}, 0.9},
      {"license plate", {40, 80, 70, 95}, 0.9},
      {"license plate", {5, 5, 20, 12}, 0.8},
  };

  // Independent exhaustive enumeration over all (keyword, label) pairs.
  std::string best_label;
  double best_sim = -2.0;
  for (const auto& kw : kws) {
    const auto kv = phrase_vector(kw.words, t);
    for (const auto& d : dets) {
      std::vector<std::string> words;
      std::istringstream ls(d.label);
      for (std::string w; ls >> w;) words.push_back(w);
      const double sim = cosine_similarity(kv, phrase_vector(words, t));
      if (sim > best_sim) {
        best_sim = sim;
        best_label = d.label;
      }
    }
  }
  REQUIRE(best_label == "license plate");

  const auto result = best_match(kws, dets, t, 0.35);
  REQUIRE(result.has_value());
  CHECK(result->matched_label == "license plate");
  CHECK(result->similarity == doctest::Approx(best_sim).epsilon(1e-12));
  REQUIRE(result->matched_boxes.size() == 2);
  CHECK(result->matched_boxes[0] == Box{40, 80, 70, 95});
  CHECK(result->matched_boxes[1] == Box{5, 5, 20, 12});
  CHECK(result->keyword == "license plate number");
}

TEST_CASE("single-label detections all come back") {
  const EmbeddingTable t = table_from(k2dTable);
  const std::vector<KeywordCandidate> kws = {candidate({"car"}, 0.1)};
  const std::vector<Detection> dets = {
      {"car", {0, 0, 10, 10}, 0.9}, {"car", {20, 20, 30, 30}, 0.8}};
  const auto result = best_match(kws, dets, t, 0.35);
  REQUIRE(result.has_value());
  CHECK(result->matched_boxes.size() == 2);
}

TEST_CASE("below-threshold similarity is no match") {
  const EmbeddingTable t = table_from("weather 0.0 1.0\ncar 1.0 0.1\n");
  const std::vector<KeywordCandidate> kws = {candidate({"weather"}, 0.1)};
  const std::vector<Detection> dets = {{"car", {0, 0, 10, 10}, 0.9}};
  CHECK_FALSE(best_match(kws, dets, t, 0.35).has_value());
}

TEST_CASE("all pairs out of vocabulary") {
  const EmbeddingTable t = table_from("canary 1.0 0.0\n");
  const std::vector<KeywordCandidate> kws = {candidate({"qqzz"}, 0.1)};
  const std::vector<Detection> dets = {{"xyzzy", {0, 0, 10, 10}, 0.9}};
  CHECK_THROWS_WITH_AS(static_cast<void>(best_match(kws, dets, t, 0.35)),
                       doctest::Contains("AllOutOfVocabulary"), Error);
}

TEST_CASE("argmax is invariant under global embedding scaling") {
  const auto expected = testsupport::load_json(testsupport::fixture_dir() / "match_expected.json");
  EmbeddingTable table = load_embeddings_file(testsupport::fixture_dir() / "embeddings.txt");
  const auto dets = load_detections_file(testsupport::fixture_dir() / "detections.json");

  const std::string q = expected["questions"][0]["question"].get<std::string>();
  const auto kws = extract_keywords(q, 5);
  const auto base = best_match(kws, dets, table, 0.35);
  REQUIRE(base.has_value());

  for (double lambda : {0.125, 3.0, 40.0}) {
    EmbeddingTable scaled = table;
    for (auto& [word, vec] : scaled.entries)
      for (float& v : vec) v *= float(lambda);
    const auto result = best_match(kws, dets, scaled, 0.0);
    REQUIRE(result.has_value());
    CHECK(result->matched_label == base->matched_label);
    CHECK(result->keyword == base->keyword);
  }
}

TEST_CASE("slice selection arithmetic") {
  const std::vector<Box> one = {{100, 100, 200, 200}};
  const SliceSpec spec = select_slice({1000, 1000}, one, 336);
  CHECK(spec.crop_box == Box{90, 90, 210, 210});
  CHECK(spec.target_resolution == 336);

  const std::vector<Box> full = {{0, 0, 1000, 1000}};
  CHECK(select_slice({1000, 1000}, full, 336).crop_box == Box{0, 0, 1000, 1000});

  const std::vector<Box> corners = {{0, 0, 10, 10}, {990, 990, 1000, 1000}};
  CHECK(select_slice({1000, 1000}, corners, 336).crop_box == Box{0, 0, 1000, 1000});

  CHECK_THROWS_WITH_AS(static_cast<void>(select_slice({100, 100}, {}, 336)),
                       doctest::Contains("EmptyBoxes"), Error);
}

TEST_CASE("slice is always square, in bounds, and covers the union center") {
  RngStream rng(31);
  for (int i = 0; i < 400; ++i) {
    const int w = 50 + int(rng.next_u64() % 950);
    const int h = 50 + int(rng.next_u64() % 950);
    std::vector<Box> boxes;
    const int n = 1 + int(rng.next_u64() % 4);
    for (int k = 0; k < n; ++k) {
      const int x0 = int(rng.next_u64() % std::uint64_t(w - 1));
      const int y0 = int(rng.next_u64() % std::uint64_t(h - 1));
      const int x1 = x0 + 1 + int(rng.next_u64() % std::uint64_t(w - x0));
      const int y1 = y0 + 1 + int(rng.next_u64() % std::uint64_t(h - y0));
      boxes.push_back({x0, y0, std::min(x1, w), std::min(y1, h)});
    }
    const SliceSpec spec = select_slice({w, h}, boxes, 336);
    const Box c = spec.crop_box;
    CHECK(c.width() == c.height());
    CHECK(c.x0 >= 0);
    CHECK(c.y0 >= 0);
    CHECK(c.x1 <= w);
    CHECK(c.y1 <= h);
    const Box u = union_box(boxes);
    CHECK(c.contains((u.x0 + u.x1) / 2.0 - 0.01, (u.y0 + u.y1) / 2.0 - 0.01));
  }
}

TEST_CASE("token counts") {
  CHECK(token_count(1, 576) == 1152);
  CHECK(token_count(4, 576) == 2880);
  CHECK(token_count(0, 576) == 576);
  for (int s = 0; s < 16; ++s)  // linear in the slice count
    CHECK(token_count(s + 1, 576) - token_count(s, 576) == 576);
}

TEST_CASE("detections loader") {
  std::istringstream good(R"([{"label":"car","bbox":[1,2,3,4],"confidence":0.5}])");
  const auto dets = load_detections(good);
  REQUIRE(dets.size() == 1);
  CHECK(dets[0].label == "car");
  CHECK(dets[0].bbox == Box{1, 2, 3, 4});

  std::istringstream degenerate(R"([{"label":"car","bbox":[5,2,3,4]}])");
  CHECK_THROWS_AS(static_cast<void>(load_detections(degenerate)), Error);
  std::istringstream bad_json("{not json");
  CHECK_THROWS_AS(static_cast<void>(load_detections(bad_json)), Error);

  const std::vector<Detection> outside = {{"car", {0, 0, 200, 50}, 0.9}};
  CHECK_THROWS_AS(validate_detections(outside, {100, 100}), Error);
}
