#pragma once

// Generates the synthetic slide-video corpus used by the integration and
// acceptance suites: deterministic y4m videos plus the matching fixture
// OCR script, ground truth and manifest.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace corpus {

struct CorpusVideo {
  std::string id;
  std::string title;
  std::vector<std::vector<std::string>> slides;  // lines per slide
  int frames_per_slide = 3;
  std::optional<std::string> truth_publisher;
  std::optional<std::string> truth_institute;
  std::optional<std::string> truth_department;
  std::optional<std::string> truth_professor;

  long frame_count() const {
    return static_cast<long>(slides.size()) * frames_per_slide;
  }
};

struct Corpus {
  std::vector<CorpusVideo> videos;
};

// 22 videos: 14 with every attribute on one slide, 4 with attributes split
// across slides, 4 with deliberately missing attributes.
Corpus build_standard_corpus();

// Writes <dir>/videos/<id>.y4m, <dir>/fixture.json, <dir>/truth.csv and
// <dir>/manifest.csv.
void write_corpus(const Corpus& corpus, const std::string& dir);

// The fixture engine script (per-video frame maps).
std::string fixture_json(const Corpus& corpus);

// Same script with one random character substitution per scripted line.
std::string noisy_fixture_json(const Corpus& corpus, std::uint32_t seed);

std::string truth_csv(const Corpus& corpus);
std::string manifest_csv(const Corpus& corpus);

}  // namespace corpus
