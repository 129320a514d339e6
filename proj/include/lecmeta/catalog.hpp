#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lecmeta/extraction.hpp"

namespace lecmeta::catalog {

// One catalog row per processed video.
struct VideoRecord {
  std::string video_id;  // content-hash prefix or manifest id; unique
  std::string source;    // path or URL
  double duration_s = 0.0;
  std::string processed_at;  // UTC, ISO 8601
  extraction::AttributeSet attributes;
  std::string keyframe_strategy;
  std::string engine_id;
  // The keyframes that yielded attributes; empty exactly when no attribute
  // is present.
  std::vector<long> keyframes_used;

  bool operator==(const VideoRecord&) const = default;
};

// 16 hex chars of the file's SHA-256.
std::string content_video_id(const std::string& path);

// ISO 8601 UTC now; honors SOURCE_DATE_EPOCH for reproducible runs.
std::string utc_timestamp();

void validate_record(const VideoRecord& r);

// Single-writer catalog persisted as JSON lines (schema_version 1), one
// record per line, sorted by video_id. Every upsert rewrites the file via a
// temp file + rename, so a failed write leaves the old catalog intact.
class Catalog {
public:
  Catalog() = default;  // in-memory only
  explicit Catalog(std::string path);  // loads the file when it exists

  static Catalog load(const std::string& path);

  // Replaces any record with the same video_id, else inserts; persists
  // before returning when the catalog is file-backed.
  void upsert(const VideoRecord& record);

  size_t size() const { return records_.size(); }
  const std::map<std::string, VideoRecord>& records() const { return records_; }
  std::optional<VideoRecord> find(const std::string& video_id) const;

  // Exact (case-folded) match on one attribute, or fuzzy ratio >= threshold
  // when fuzzy_threshold is given. Results ordered by video_id.
  std::vector<VideoRecord> query(const std::string& attribute,
                                 const std::string& value,
                                 std::optional<double> fuzzy_threshold = {}) const;

  std::string export_csv() const;
  std::string export_json() const;
  static Catalog import_json(const std::string& json_text);

  void save() const;  // no-op for in-memory catalogs
  const std::string& path() const { return path_; }

private:
  std::string path_;
  std::map<std::string, VideoRecord> records_;
};

// JSON (de)serialization of one record; shared by persistence and export.
std::string record_to_json_line(const VideoRecord& r);
VideoRecord record_from_json_line(const std::string& line, long line_no = 0);

}  // namespace lecmeta::catalog
