#pragma once

#include <map>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <vector>

#include "lecmeta/frames.hpp"

namespace lecmeta::ocr {

struct BBox {
  int left = 0;
  int top = 0;
  int width = 0;
  int height = 0;
};

struct OcrWord {
  std::string text;        // non-empty, no interior newlines
  BBox bbox;               // width,height > 0
  double confidence = 0.0; // in [0,100]
};

struct OcrLine {
  std::vector<OcrWord> words;  // left to right
  std::string text;            // words joined by single spaces
  BBox bbox;                   // union of word boxes
  int line_number = 0;         // ordinal from top
};

struct OcrResult {
  std::vector<OcrLine> lines;
  std::string engine_id;
  long frame_index = 0;
  std::vector<std::string> preprocessing;  // applied transform names

  bool empty() const { return lines.empty(); }
};

// One OCR preprocessing transform, applied by preprocess() in order.
struct PreprocessStep {
  enum class Kind { binarize, gaussian_blur, edge_map };
  Kind kind = Kind::binarize;
  double sigma = 2.0;  // gaussian_blur only

  std::string name() const;
};

// Parses "binarize", "edge_map" or "gaussian_blur:<sigma>" lists (comma
// separated) as given on the command line.
std::vector<PreprocessStep> parse_preprocess_spec(const std::string& spec);

frames::FrameBuffer preprocess(const frames::FrameBuffer& f,
                               const std::vector<PreprocessStep>& steps);

// Text-recognition boundary. Implementations declare whether one instance
// may be shared across worker threads.
class OcrEngine {
public:
  virtual ~OcrEngine() = default;
  virtual std::string id() const = 0;
  virtual bool shareable() const = 0;
  // Availability check; throws engine_unavailable. Called once at startup.
  virtual void probe() {}
  virtual std::vector<OcrWord> recognize_words(const frames::FrameBuffer& f) = 0;
};

// Runs preprocessing, the engine, and line grouping; the result carries the
// engine id and the applied preprocessing names.
OcrResult recognize(OcrEngine& engine, const frames::FrameBuffer& f,
                    const std::vector<PreprocessStep>& steps);

// Groups words into lines: vertical centers closer than half the median
// word height share a line. Lines are ordered top to bottom, words left to
// right; the grouping is independent of input order.
std::vector<OcrLine> group_lines(std::vector<OcrWord> words);

// Parses the external engine's TSV: a header row, then one row per token
// with columns level, page, block, paragraph, line, word, left, top, width,
// height, conf, text. Word-level rows (level 5) with conf >= 0 survive.
std::vector<OcrWord> parse_engine_tsv(const std::string& raw);

// Inverse of parse_engine_tsv for word rows; round-trips through it.
std::string serialize_words_tsv(const std::vector<OcrWord>& words);

// Deterministic engine for tests and offline runs: scripted lines keyed by
// frame index. File format:
//   {"engine_id": "fixture", "frames": {"<index>": ["line", ...], ...}}
// A "videos" object of per-video frame maps may wrap the same shape; use
// for_video() to select one.
class FixtureEngine : public OcrEngine {
public:
  FixtureEngine() = default;
  explicit FixtureEngine(std::map<long, std::vector<std::string>> frames,
                         std::string engine_id = "fixture");

  static FixtureEngine load(const std::string& path);
  static FixtureEngine parse(const std::string& json_text);

  // The engine for one video id: its per-video frame map when present,
  // otherwise the shared "frames" map.
  FixtureEngine for_video(const std::string& video_id) const;

  std::string id() const override { return engine_id_; }
  bool shareable() const override { return true; }
  std::vector<OcrWord> recognize_words(const frames::FrameBuffer& f) override;

private:
  std::string engine_id_ = "fixture";
  std::map<long, std::vector<std::string>> frames_;
  std::map<std::string, std::map<long, std::vector<std::string>>> videos_;
};

// External-process adapter: writes the frame to a temporary PNG and runs
// `<binary> <image.png> stdout --psm 3 tsv`. Concurrent calls are bounded
// by max_inflight subprocesses.
class TesseractEngine : public OcrEngine {
public:
  explicit TesseractEngine(std::string binary_path = "tesseract",
                           int max_inflight = 4);
  std::string id() const override { return "tesseract"; }
  bool shareable() const override { return true; }
  void probe() override;
  std::vector<OcrWord> recognize_words(const frames::FrameBuffer& f) override;

private:
  std::string binary_;
  std::counting_semaphore<> inflight_;
};

}  // namespace lecmeta::ocr
