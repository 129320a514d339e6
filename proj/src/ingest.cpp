#include "lecmeta/ingest.hpp"

#include <cctype>
#include <filesystem>
#include <set>

#include "lecmeta/csv.hpp"
#include "lecmeta/errors.hpp"

namespace lecmeta::ingest {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

double parse_time_field(const std::string& raw) {
  if (all_digits(raw)) return static_cast<double>(std::stoll(raw));
  // H:MM:SS / HH:MM:SS
  size_t c1 = raw.find(':');
  size_t c2 = raw.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw error("malformed time '" + raw + "'");
  std::string h = raw.substr(0, c1);
  std::string m = raw.substr(c1 + 1, c2 - c1 - 1);
  std::string s = raw.substr(c2 + 1);
  if (!all_digits(h) || !all_digits(m) || m.size() != 2 || !all_digits(s) ||
      s.size() != 2)
    throw error("malformed time '" + raw + "'");
  long mm = std::stol(m), ss = std::stol(s);
  if (mm > 59 || ss > 59) throw error("malformed time '" + raw + "'");
  return 3600.0 * std::stol(h) + 60.0 * mm + ss;
}

std::vector<ManifestEntry> parse_manifest(const std::string& csv_text) {
  auto rows = csv::parse(csv_text);
  if (rows.empty()) throw parse_error("manifest is empty", 1);
  const std::vector<std::string> expected = {"id", "url", "title", "start", "end"};
  if (rows[0] != expected)
    throw parse_error("manifest header must be id,url,title,start,end", 1);

  std::vector<ManifestEntry> entries;
  std::set<std::string> seen_ids;
  for (size_t i = 1; i < rows.size(); ++i) {
    const long line = static_cast<long>(i) + 1;
    const auto& row = rows[i];
    if (row.size() == 1 && row[0].empty()) continue;  // blank line
    if (row.size() != 5)
      throw parse_error("manifest row has " + std::to_string(row.size()) +
                            " fields, expected 5",
                        line);
    ManifestEntry e;
    e.id = row[0];
    e.url_or_path = row[1];
    e.title = row[2];
    e.start_raw = row[3];
    e.end_raw = row[4];
    if (e.id.empty()) throw parse_error("manifest row without id", line);
    if (!seen_ids.insert(e.id).second)
      throw parse_error("duplicate manifest id '" + e.id + "'", line);
    try {
      e.start_s = parse_time_field(e.start_raw);
      e.end_s = parse_time_field(e.end_raw);
    } catch (const error& ex) {
      throw parse_error(ex.what(), line);
    }
    if (e.end_s <= e.start_s)
      throw parse_error("end time must be after start time for id '" + e.id + "'",
                        line);
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<std::string> trim_args(const ManifestEntry& entry,
                                   const std::string& input_path,
                                   const std::string& output_dir) {
  namespace fs = std::filesystem;
  if (!fs::exists(input_path))
    throw io_error("trim input does not exist: " + input_path);
  std::string ext = fs::path(input_path).extension().string();
  if (!ext.empty() && ext.front() == '.') ext.erase(0, 1);
  if (ext.empty()) ext = "mp4";
  std::string output = output_dir + "/" + entry.id + "-TRIM." + ext;
  return {"-i",  input_path,    "-ss", entry.start_raw, "-to",
          entry.end_raw, "-c",  "copy",        output};
}

std::string NullFetcher::fetch(const std::string& url) {
  throw config_error("no fetcher configured for remote source: " + url);
}

std::string StubFetcher::fetch(const std::string& url) {
  auto it = mapping_.find(url);
  if (it == mapping_.end()) throw io_error("fetch failed for: " + url);
  return it->second;
}

bool is_remote(const std::string& url_or_path) {
  // scheme://... with a letter-led scheme; bare paths have no scheme.
  size_t pos = url_or_path.find("://");
  if (pos == std::string::npos || pos == 0) return false;
  for (size_t i = 0; i < pos; ++i) {
    char c = url_or_path[i];
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '.' &&
        c != '-')
      return false;
  }
  return url_or_path.compare(0, pos, "file") != 0;
}

std::string resolve_source(const ManifestEntry& entry, Fetcher& fetcher) {
  if (!is_remote(entry.url_or_path)) {
    const std::string prefix = "file://";
    if (entry.url_or_path.rfind(prefix, 0) == 0)
      return entry.url_or_path.substr(prefix.size());
    return entry.url_or_path;
  }
  return fetcher.fetch(entry.url_or_path);
}

}  // namespace lecmeta::ingest
