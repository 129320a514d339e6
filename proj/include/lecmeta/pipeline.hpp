#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "lecmeta/catalog.hpp"
#include "lecmeta/extraction.hpp"
#include "lecmeta/ingest.hpp"
#include "lecmeta/keyframe.hpp"
#include "lecmeta/media.hpp"
#include "lecmeta/ocr.hpp"

namespace lecmeta::pipeline {

// Everything the batch pipeline can be told. Flags override the config
// file, which overrides environment variables, which override these
// defaults.
struct PipelineConfig {
  keyframe::Strategy strategy = keyframe::Strategy::pixel_diff;
  double interval_s = 2.0;        // interval strategy
  double diff_threshold = 12.0;   // pixel-diff strategy
  int window = 15;                // cluster strategy
  int hash_threshold = 10;        // cluster strategy
  double brightness_floor = 10.0; // cluster strategy
  std::string probe_report;       // iframe strategy: frozen probe CSV path

  std::string engine = "tesseract";  // "tesseract" or "fixture"
  std::string fixture_file;          // fixture engine script
  std::string tesseract_path = "tesseract";
  int ocr_max_inflight = 4;
  std::string preprocess;  // e.g. "binarize,gaussian_blur:2.0"

  std::string lexicon_dir;  // empty: built-in seed lexicons
  double match_threshold = 80.0;
  std::string recognizer = "rules";  // "rules" or "external"

  std::string catalog_path = "catalog.jsonl";
  int workers = 0;       // 0 = available parallelism (capped by max inflight)
  double decode_fps = 1.0;
  media::ToolPaths tools;
};

// Environment defaults (LECMETA_CATALOG, LECMETA_FFMPEG, LECMETA_FFPROBE,
// LECMETA_TESSERACT).
void apply_env(PipelineConfig& config);

// Merges a JSON config file; unknown keys are rejected.
void apply_config_file(PipelineConfig& config, const std::string& path);

// Range-checks every numeric parameter and the enum-like strings.
void validate(const PipelineConfig& config);

// Structured JSON-object-per-line diagnostics sink, safe for concurrent
// emitters.
class DiagnosticsLog {
public:
  explicit DiagnosticsLog(std::ostream* out = nullptr) : out_(out) {}
  void emit(const std::string& event,
            const std::vector<std::pair<std::string, std::string>>& fields);

private:
  std::ostream* out_;
  std::mutex mutex_;
};

// Per-video OCR engine access: the fixture engine scopes scripted frames
// to the video id, the external engine is shared.
class EngineProvider {
public:
  explicit EngineProvider(const PipelineConfig& config);
  // Throws engine_unavailable/config_error when the configured engine
  // cannot run at all (checked once, at construction).
  std::shared_ptr<ocr::OcrEngine> engine_for(const std::string& video_id) const;
  const std::string& engine_id() const { return engine_id_; }

private:
  std::shared_ptr<ocr::TesseractEngine> shared_;
  std::shared_ptr<ocr::FixtureEngine> fixture_;
  std::string engine_id_;
};

std::unique_ptr<extraction::NameRecognizer> make_recognizer(
    const PipelineConfig& config);

extraction::Lexicons load_lexicons(const PipelineConfig& config);

// Keyframe selection over an already-decoded stream.
keyframe::KeyframeSet select_keyframes(
    std::span<const frames::FrameBuffer> stream, const PipelineConfig& config,
    const std::string& video_path);

struct VideoTask {
  std::string path;              // local file
  std::string source_label;      // original path or URL for the record
  std::optional<std::string> id; // manifest id; content hash otherwise
};

// Full single-video pipeline: decode, keyframes, OCR, extraction, merge.
catalog::VideoRecord process_video(const VideoTask& task,
                                   const PipelineConfig& config,
                                   const EngineProvider& engines,
                                   const extraction::Lexicons& lexicons,
                                   DiagnosticsLog& log);

struct BatchResult {
  int processed = 0;
  int failed = 0;
  std::vector<std::string> failures;  // per-video error messages
};

// Worker pool over videos; per-video failures are isolated and the catalog
// writer is serialized.
BatchResult run_extract_batch(const std::vector<VideoTask>& tasks,
                              const PipelineConfig& config,
                              catalog::Catalog& cat, DiagnosticsLog& log);

}  // namespace lecmeta::pipeline
