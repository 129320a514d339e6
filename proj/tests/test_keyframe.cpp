#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "lecmeta/errors.hpp"
#include "lecmeta/frames.hpp"
#include "lecmeta/keyframe.hpp"
#include "support/synthetic.hpp"

using namespace lecmeta;
using namespace lecmeta::keyframe;
using synthetic::constant_frame;
using synthetic::render_slide;
using synthetic::repeat_frame;
using synthetic::slide_stream;

namespace {

std::string fixture_path(const char* name) {
  return std::string(LECMETA_FIXTURE_DIR) + "/" + name;
}

std::vector<long> indices(const KeyframeSet& set) {
  std::vector<long> out;
  for (const auto& e : set.entries) out.push_back(e.frame_index);
  return out;
}

void check_sorted_subset(const KeyframeSet& set,
                         std::span<const frames::FrameBuffer> stream) {
  std::set<long> stream_indices;
  for (const auto& f : stream) stream_indices.insert(f.frame_index);
  long prev = -1;
  for (const auto& e : set.entries) {
    CHECK(e.frame_index > prev);
    prev = e.frame_index;
    CHECK(stream_indices.count(e.frame_index) == 1);
  }
}

}  // namespace

TEST_SUITE("keyframe") {

TEST_CASE("sample_every") {
  auto stream = repeat_frame(constant_frame(8, 8, 100), 10, /*fps=*/1.0);
  SUBCASE("two-second interval on a 1 fps stream") {
    auto set = sample_every(stream, 2.0);
    CHECK(indices(set) == std::vector<long>{0, 2, 4, 6, 8});
    for (const auto& e : set.entries) CHECK(e.reason == SelectionReason::interval);
  }
  SUBCASE("interval longer than the stream keeps only the first frame") {
    auto set = sample_every(stream, 100.0);
    CHECK(indices(set) == std::vector<long>{0});
  }
  SUBCASE("native-rate interval keeps every frame") {
    auto set = sample_every(stream, 1.0);
    CHECK(set.entries.size() == stream.size());
  }
  SUBCASE("empty stream yields an empty set") {
    std::vector<frames::FrameBuffer> empty;
    CHECK(sample_every(empty, 1.0).entries.empty());
  }
}

TEST_CASE("pixel_diff_keyframes") {
  SUBCASE("identical frames keep only the first") {
    auto stream = repeat_frame(constant_frame(8, 8, 50), 20);
    auto set = pixel_diff_keyframes(stream, 12.0);
    CHECK(indices(set) == std::vector<long>{0});
  }
  SUBCASE("alternating black/white keeps everything at threshold 100") {
    std::vector<frames::FrameBuffer> stream;
    for (int i = 0; i < 8; ++i) {
      auto f = constant_frame(8, 8, i % 2 ? 255 : 0, i, i);
      stream.push_back(std::move(f));
    }
    auto set = pixel_diff_keyframes(stream, 100.0);
    CHECK(set.entries.size() == 8);
  }
  SUBCASE("two slides, threshold below their difference") {
    auto a = render_slide(0), b = render_slide(1);
    double gap = frames::mean_abs_diff(a, b);
    REQUIRE(gap > 12.0);
    auto stream = slide_stream({a, b}, 30);
    auto set = pixel_diff_keyframes(stream, 12.0);
    CHECK(indices(set) == std::vector<long>{0, 30});
  }
  SUBCASE("threshold 255 can never be exceeded") {
    auto stream = slide_stream({render_slide(2), render_slide(3)}, 5);
    CHECK(pixel_diff_keyframes(stream, 255.0).entries.size() == 1);
  }
  SUBCASE("dimension change mid-stream is an error") {
    std::vector<frames::FrameBuffer> stream{constant_frame(8, 8, 0, 0, 0),
                                            constant_frame(8, 9, 255, 1, 1)};
    CHECK_THROWS_AS(pixel_diff_keyframes(stream, 10.0), error);
  }
}

TEST_CASE("select_iframes") {
  SUBCASE("filters exactly the I-typed entries") {
    ProbeReport report;
    const char types[] = {'I', 'P', 'B', 'P', 'I', 'B'};
    for (long i = 0; i < 6; ++i)
      report.frames.push_back({i, i / 25.0, static_cast<PictureType>(types[i])});
    auto set = select_iframes(report);
    CHECK(indices(set) == std::vector<long>{0, 4});
    for (const auto& e : set.entries) CHECK(e.reason == SelectionReason::iframe);
  }
  SUBCASE("no I frames yields an empty set") {
    ProbeReport report;
    report.frames.push_back({0, 0.0, PictureType::P});
    CHECK(select_iframes(report).entries.empty());
  }
  SUBCASE("frozen probe fixture has exactly three I frames") {
    std::ifstream in(fixture_path("probe_5s.csv"));
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    auto report = parse_probe_csv(ss.str());
    CHECK(report.frames.size() == 125);
    auto set = select_iframes(report);
    CHECK(indices(set) == std::vector<long>{0, 50, 100});
    CHECK(set.entries[1].timestamp_s == doctest::Approx(2.0));
  }
}

TEST_CASE("parse_probe_csv rejects bad rows") {
  CHECK_THROWS_AS(parse_probe_csv("frame,X,0.5\n"), parse_error);
  CHECK_THROWS_AS(parse_probe_csv("stream,I,0.5\n"), parse_error);
  CHECK_THROWS_AS(parse_probe_csv("frame,I\n"), parse_error);
  CHECK_THROWS_AS(parse_probe_csv("frame,I,-1\n"), parse_error);
  // swapped field order (pts before pict_type) still parses
  auto report = parse_probe_csv("frame,0.000000,I\nframe,0.040000,B\n");
  REQUIRE(report.frames.size() == 2);
  CHECK(report.frames[0].picture_type == PictureType::I);
  CHECK(report.frames[1].timestamp_s == doctest::Approx(0.04));
}

TEST_CASE("candidate_frames") {
  SUBCASE("constant stream ties break to each window's first index") {
    auto stream = repeat_frame(constant_frame(8, 8, 9), 11);
    // 10 diffs, window 5 -> windows [1..5] and [6..10]
    CHECK(candidate_frames(stream, 5) == std::vector<long>{1, 6});
  }
  SUBCASE("spikes win their windows") {
    // 11 frames; levels step at positions 3 and 7, so the diff sequence is
    // 0,0,100,0,0 | 0,145,0,0,0 across two windows of five
    std::vector<frames::FrameBuffer> stream;
    for (int i = 0; i < 11; ++i) {
      std::uint8_t v = i < 3 ? 100 : i < 7 ? 200 : 55;
      stream.push_back(constant_frame(8, 8, v, i, i));
    }
    auto got = candidate_frames(stream, 5);
    CHECK(got == std::vector<long>{3, 7});
  }
  SUBCASE("window at least the diff count emits one candidate") {
    auto a = render_slide(4), b = render_slide(5);
    auto stream = slide_stream({a, b}, 4);  // slide change at index 4
    auto got = candidate_frames(stream, 100);
    CHECK(got == std::vector<long>{4});
  }
  SUBCASE("streams shorter than two frames yield nothing") {
    std::vector<frames::FrameBuffer> one{constant_frame(4, 4, 1)};
    CHECK(candidate_frames(one, 5).empty());
  }
  SUBCASE("candidate count is bounded by ceil(diffs/window)") {
    auto stream = repeat_frame(constant_frame(8, 8, 1), 23);
    auto got = candidate_frames(stream, 5);
    CHECK(got.size() == (22 + 4) / 5);
  }
}

TEST_CASE("average hash and clustering") {
  SUBCASE("identical candidates form one cluster") {
    auto stream = repeat_frame(render_slide(6), 5);
    auto clusters = cluster_candidates(stream, 10);
    REQUIRE(clusters.size() == 1);
    CHECK(clusters[0].members.size() == 5);
  }
  SUBCASE("distinct slides exceed the distance threshold") {
    auto a = render_slide(7), b = render_slide(8);
    CHECK(hamming_distance(average_hash(a), average_hash(b)) > 10);
    std::vector<frames::FrameBuffer> candidates = slide_stream({a, b}, 1);
    CHECK(cluster_candidates(candidates, 10).size() == 2);
  }
  SUBCASE("threshold 64 accepts everything") {
    std::vector<frames::FrameBuffer> candidates =
        slide_stream({render_slide(9), render_slide(10), render_slide(11)}, 2);
    CHECK(cluster_candidates(candidates, 64).size() == 1);
  }
  SUBCASE("cluster count never grows with the threshold on slide streams") {
    std::vector<frames::FrameBuffer> candidates = slide_stream(
        {render_slide(12), render_slide(13), render_slide(14), render_slide(15)}, 3);
    size_t prev = SIZE_MAX;
    for (int t = 0; t <= 64; ++t) {
      size_t count = cluster_candidates(candidates, t).size();
      CHECK(count <= prev);
      prev = count;
    }
  }
}

TEST_CASE("best_per_cluster") {
  SUBCASE("prefers the sharp frame over its blurred copy") {
    auto sharp = render_slide(20);
    sharp.frame_index = 0;
    auto blurred = frames::gaussian_blur(sharp, 2.0);
    blurred.frame_index = 1;
    std::vector<frames::FrameBuffer> frames_list{sharp, blurred};
    std::vector<CandidateCluster> clusters{{{0, 1}, average_hash(sharp)}};
    auto set = best_per_cluster(clusters, frames_list);
    REQUIRE(set.entries.size() == 1);
    CHECK(set.entries[0].frame_index == 0);
    CHECK(set.entries[0].reason == SelectionReason::cluster_best);
  }
  SUBCASE("singleton clusters pass through as unclustered") {
    auto f = render_slide(21);
    f.frame_index = 3;
    std::vector<frames::FrameBuffer> frames_list{f};
    std::vector<CandidateCluster> clusters{{{3}, average_hash(f)}};
    auto set = best_per_cluster(clusters, frames_list);
    REQUIRE(set.entries.size() == 1);
    CHECK(set.entries[0].frame_index == 3);
    CHECK(set.entries[0].reason == SelectionReason::unclustered);
  }
  SUBCASE("identical frames tie to the smaller index") {
    auto f = render_slide(22);
    std::vector<frames::FrameBuffer> frames_list = repeat_frame(f, 3);
    std::vector<CandidateCluster> clusters{{{0, 1, 2}, average_hash(f)}};
    auto set = best_per_cluster(clusters, frames_list);
    REQUIRE(set.entries.size() == 1);
    CHECK(set.entries[0].frame_index == 0);
  }
  SUBCASE("dark frames lose unless every member is dark") {
    auto bright = render_slide(23);
    bright.frame_index = 0;
    auto dark = constant_frame(320, 240, 2);  // sharp nothing, very dark
    dark.at(100, 100) = 255;                  // a speck of contrast
    dark.frame_index = 1;
    // the dark frame has the higher Laplacian variance per pixel count?
    // regardless: it must be excluded by the brightness floor
    std::vector<frames::FrameBuffer> frames_list{bright, dark};
    std::vector<CandidateCluster> clusters{{{0, 1}, average_hash(bright)}};
    auto set = best_per_cluster(clusters, frames_list, /*brightness_floor=*/10.0);
    REQUIRE(set.entries.size() == 1);
    CHECK(set.entries[0].frame_index == 0);

    auto darker = constant_frame(320, 240, 1);
    darker.frame_index = 0;
    std::vector<frames::FrameBuffer> all_dark{darker, dark};
    std::vector<CandidateCluster> dark_cluster{{{0, 1}, average_hash(darker)}};
    auto fallback = best_per_cluster(dark_cluster, all_dark, 10.0);
    REQUIRE(fallback.entries.size() == 1);  // argmax over all when all fail
    CHECK(fallback.entries[0].frame_index == 1);  // the only one with contrast
  }
  SUBCASE("empty cluster is an error") {
    std::vector<CandidateCluster> clusters{{{}, 0}};
    std::vector<frames::FrameBuffer> none;
    CHECK_THROWS_AS(best_per_cluster(clusters, none), error);
  }
}

TEST_CASE("full cluster pipeline on a slide stream") {
  std::vector<frames::FrameBuffer> slides;
  for (int s = 0; s < 3; ++s) slides.push_back(render_slide(30 + s));
  auto stream = slide_stream(slides, 10);

  ClusterParams params;
  params.window = 5;
  params.hash_threshold = 10;
  auto set = cluster_keyframes(stream, params);
  auto candidates = candidate_frames(stream, params.window);

  CHECK(set.entries.size() <= candidates.size());
  CHECK(candidates.size() <= stream.size());
  check_sorted_subset(set, stream);
}

}  // TEST_SUITE
