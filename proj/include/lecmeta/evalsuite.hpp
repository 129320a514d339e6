#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lecmeta/catalog.hpp"

namespace lecmeta::evalsuite {

// Expected attribute values for one video; an absent field means the video
// genuinely lacks that attribute.
struct GroundTruthRecord {
  std::string video_id;
  std::optional<std::string> publisher;
  std::optional<std::string> institute;
  std::optional<std::string> department;
  std::optional<std::string> professor;
};

// CSV with header video_id,publisher,institute,department,professor;
// an empty cell marks an absent attribute.
std::vector<GroundTruthRecord> parse_ground_truth(const std::string& csv_text);
std::vector<GroundTruthRecord> load_ground_truth(const std::string& path);

struct ScoringMode {
  bool fuzzy = false;
  double threshold = 90.0;  // fuzzy only

  static ScoringMode exact() { return {false, 0.0}; }
  static ScoringMode fuzzy_at(double threshold) { return {true, threshold}; }
};

struct AttributeScore {
  long correct = 0;
  long total = 0;
  double accuracy() const {
    return total == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / total;
  }
};

// One (keyframe strategy, OCR engine) configuration column.
struct ConfigScores {
  std::string strategy;
  std::string engine;
  std::map<std::string, AttributeScore> per_attribute;  // keyed by attribute

  std::string label() const { return engine + ", " + strategy; }
};

struct EvalReport {
  std::vector<ConfigScores> configs;
  ScoringMode mode;
};

// Attribute row order used throughout the report.
const std::vector<std::string>& attribute_names();

// Whether prediction matches truth: case-folded, whitespace-normalized
// equality in exact mode, similarity ratio >= threshold in fuzzy mode.
// Absent agrees with absent.
bool values_agree(const std::optional<std::string>& predicted,
                  const std::optional<std::string>& truth,
                  const ScoringMode& mode);

// Scores predictions against ground truth, one column per (strategy,
// engine) configuration found among the records. Every truth video_id must
// be present in every configuration.
EvalReport score(const std::vector<catalog::VideoRecord>& predictions,
                 const std::vector<GroundTruthRecord>& truth,
                 const ScoringMode& mode);

// The paper-shaped table: one row per attribute, one column per
// configuration.
std::string render_report_text(const EvalReport& report);
std::string render_report_csv(const EvalReport& report);

}  // namespace lecmeta::evalsuite
