#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace lecmeta::ingest {

// One clip manifest row. Times keep their original spelling (integer
// seconds or HH:MM:SS) for the trim command, plus the parsed value for
// validation.
struct ManifestEntry {
  std::string id;
  std::string url_or_path;
  std::string title;
  std::string start_raw;
  std::string end_raw;
  double start_s = 0.0;
  double end_s = 0.0;  // > start_s

  double span_s() const { return end_s - start_s; }
};

// Accepts "75" or "HH:MM:SS" (also M:SS); returns seconds.
double parse_time_field(const std::string& raw);

// Parses the manifest CSV (header id,url,title,start,end). Every
// malformation is rejected with the offending row's line number.
std::vector<ManifestEntry> parse_manifest(const std::string& csv_text);

// The media tool's trim invocation for one entry, as an argument vector
// (program name excluded): -i <input> -ss <start> -to <end> -c copy
// <output_dir>/<id>-TRIM.<ext>. Times pass through unconverted.
std::vector<std::string> trim_args(const ManifestEntry& entry,
                                   const std::string& input_path,
                                   const std::string& output_dir);

// Remote-fetch seam; the real downloader stays out of this artifact.
class Fetcher {
public:
  virtual ~Fetcher() = default;
  // Returns a local path for the URL; throws on failure.
  virtual std::string fetch(const std::string& url) = 0;
};

// Default: refuses every URL with a clear not-configured error.
class NullFetcher : public Fetcher {
public:
  std::string fetch(const std::string& url) override;
};

// Test double mapping URLs to fixture files.
class StubFetcher : public Fetcher {
public:
  explicit StubFetcher(std::map<std::string, std::string> mapping)
      : mapping_(std::move(mapping)) {}
  std::string fetch(const std::string& url) override;

private:
  std::map<std::string, std::string> mapping_;
};

bool is_remote(const std::string& url_or_path);

// Local paths come back as-is; remote URLs go through the fetcher.
std::string resolve_source(const ManifestEntry& entry, Fetcher& fetcher);

}  // namespace lecmeta::ingest
