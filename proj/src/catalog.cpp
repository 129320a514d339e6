#include "lecmeta/catalog.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lecmeta/csv.hpp"
#include "lecmeta/errors.hpp"
#include "lecmeta/matching.hpp"

namespace lecmeta::catalog {

namespace {

using nlohmann::json;

json attr_to_json(const std::optional<extraction::AttributeValue>& a) {
  if (!a) return nullptr;
  json j;
  j["value"] = a->value;
  j["score"] = a->score;
  j["source_frame"] = a->source_frame;
  j["source_line"] = a->source_line;
  return j;
}

std::optional<extraction::AttributeValue> attr_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  extraction::AttributeValue a;
  a.value = j.at("value").get<std::string>();
  a.score = j.at("score").get<double>();
  a.source_frame = j.at("source_frame").get<long>();
  a.source_line = j.value("source_line", -1);
  return a;
}

std::string score_cell(const std::optional<extraction::AttributeValue>& a) {
  if (!a) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", a->score);
  return buf;
}

std::string value_cell(const std::optional<extraction::AttributeValue>& a) {
  return a ? a->value : "";
}

}  // namespace

std::string content_video_id(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open for hashing: " + path);

  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) throw error("EVP_MD_CTX_new failed");
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[65536];
  while (in) {
    in.read(buf, sizeof buf);
    std::streamsize n = in.gcount();
    if (n > 0) EVP_DigestUpdate(ctx, buf, static_cast<size_t>(n));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);

  static const char* hex = "0123456789abcdef";
  std::string id;
  for (unsigned i = 0; i < 8 && i < len; ++i) {  // 8 bytes = 16 hex chars
    id += hex[digest[i] >> 4];
    id += hex[digest[i] & 0xF];
  }
  return id;
}

std::string utc_timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    try {
      t = static_cast<std::time_t>(std::stoll(epoch));
    } catch (...) {
      // fall through to wall clock
    }
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void validate_record(const VideoRecord& r) {
  if (r.video_id.empty()) throw error("record without video_id");
  if (r.attributes.any_present() == r.keyframes_used.empty())
    throw error("record '" + r.video_id +
                "': keyframes_used must be non-empty exactly when an "
                "attribute is present");
}

std::string record_to_json_line(const VideoRecord& r) {
  json j;
  j["schema_version"] = 1;
  j["video_id"] = r.video_id;
  j["source"] = r.source;
  j["duration_s"] = r.duration_s;
  j["processed_at"] = r.processed_at;
  j["attributes"] = {
      {"publisher", attr_to_json(r.attributes.publisher)},
      {"institute", attr_to_json(r.attributes.institute)},
      {"department", attr_to_json(r.attributes.department)},
      {"professor", attr_to_json(r.attributes.professor)},
      {"subject", r.attributes.subject ? json(*r.attributes.subject) : json(nullptr)},
      {"topic", r.attributes.topic ? json(*r.attributes.topic) : json(nullptr)},
  };
  j["keyframe_strategy"] = r.keyframe_strategy;
  j["engine_id"] = r.engine_id;
  j["keyframes_used"] = r.keyframes_used;
  return j.dump();
}

VideoRecord record_from_json_line(const std::string& line, long line_no) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw parse_error(std::string("bad catalog record: ") + e.what(),
                      line_no ? line_no : 1);
  }
  int version = j.value("schema_version", 1);
  if (version != 1)
    throw parse_error("unsupported catalog schema_version " +
                          std::to_string(version),
                      line_no ? line_no : 1);
  VideoRecord r;
  r.video_id = j.at("video_id").get<std::string>();
  r.source = j.value("source", "");
  r.duration_s = j.value("duration_s", 0.0);
  r.processed_at = j.value("processed_at", "");
  const json& a = j.at("attributes");
  r.attributes.publisher = attr_from_json(a.at("publisher"));
  r.attributes.institute = attr_from_json(a.at("institute"));
  r.attributes.department = attr_from_json(a.at("department"));
  r.attributes.professor = attr_from_json(a.at("professor"));
  if (a.contains("subject") && !a.at("subject").is_null())
    r.attributes.subject = a.at("subject").get<std::string>();
  if (a.contains("topic") && !a.at("topic").is_null())
    r.attributes.topic = a.at("topic").get<std::string>();
  r.keyframe_strategy = j.value("keyframe_strategy", "");
  r.engine_id = j.value("engine_id", "");
  r.keyframes_used = j.value("keyframes_used", std::vector<long>{});
  return r;
}

Catalog::Catalog(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_, std::ios::binary);
  if (!in) return;  // fresh catalog
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    VideoRecord r = record_from_json_line(line, line_no);
    records_[r.video_id] = std::move(r);
  }
}

Catalog Catalog::load(const std::string& path) { return Catalog(path); }

void Catalog::upsert(const VideoRecord& record) {
  validate_record(record);
  records_[record.video_id] = record;
  save();
}

std::optional<VideoRecord> Catalog::find(const std::string& video_id) const {
  auto it = records_.find(video_id);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

void Catalog::save() const {
  if (path_.empty()) return;
  std::string tmp = path_ + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot write catalog temp file: " + tmp);
    for (const auto& [id, r] : records_) out << record_to_json_line(r) << '\n';
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw io_error("failed writing catalog temp file: " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path_.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw io_error("failed replacing catalog file: " + path_);
  }
}

namespace {

const std::optional<extraction::AttributeValue>& attr_by_name(
    const extraction::AttributeSet& set, const std::string& attribute) {
  if (attribute == "publisher") return set.publisher;
  if (attribute == "institute") return set.institute;
  if (attribute == "department") return set.department;
  if (attribute == "professor") return set.professor;
  throw config_error("unknown attribute name: " + attribute);
}

}  // namespace

std::vector<VideoRecord> Catalog::query(const std::string& attribute,
                                        const std::string& value,
                                        std::optional<double> fuzzy_threshold) const {
  const std::string folded = matching::case_fold(value);
  std::vector<VideoRecord> out;
  for (const auto& [id, r] : records_) {  // std::map: ordered by video_id
    const auto& attr = attr_by_name(r.attributes, attribute);
    if (!attr) continue;
    const std::string stored = matching::case_fold(attr->value);
    bool hit = fuzzy_threshold
                   ? matching::ratio(stored, folded) >= *fuzzy_threshold
                   : stored == folded;
    if (hit) out.push_back(r);
  }
  return out;
}

std::string Catalog::export_csv() const {
  std::string out = csv::format_row(
      {"video_id", "source", "publisher", "institute", "department",
       "professor", "publisher_score", "institute_score", "department_score",
       "professor_score", "strategy", "engine"});
  for (const auto& [id, r] : records_) {
    out += csv::format_row({r.video_id, r.source,
                            value_cell(r.attributes.publisher),
                            value_cell(r.attributes.institute),
                            value_cell(r.attributes.department),
                            value_cell(r.attributes.professor),
                            score_cell(r.attributes.publisher),
                            score_cell(r.attributes.institute),
                            score_cell(r.attributes.department),
                            score_cell(r.attributes.professor),
                            r.keyframe_strategy, r.engine_id});
  }
  return out;
}

std::string Catalog::export_json() const {
  std::string out = "[";
  bool first = true;
  for (const auto& [id, r] : records_) {
    out += first ? "\n  " : ",\n  ";
    out += record_to_json_line(r);
    first = false;
  }
  out += first ? "]\n" : "\n]\n";
  return out;
}

Catalog Catalog::import_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw parse_error(std::string("bad catalog JSON: ") + e.what(), 1);
  }
  if (!j.is_array()) throw parse_error("catalog JSON must be an array", 1);
  Catalog cat;
  for (const auto& jr : j) {
    VideoRecord r = record_from_json_line(jr.dump());
    cat.records_[r.video_id] = std::move(r);
  }
  return cat;
}

}  // namespace lecmeta::catalog
