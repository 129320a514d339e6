#include "lecmeta/evalsuite.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lecmeta/csv.hpp"
#include "lecmeta/errors.hpp"
#include "lecmeta/matching.hpp"

namespace lecmeta::evalsuite {

namespace {

std::string normalize(const std::string& s) {
  // Case fold and collapse whitespace runs.
  std::string folded = matching::case_fold(s);
  std::string out;
  bool pending_space = false;
  for (char c : folded) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out += ' ';
      pending_space = false;
    }
    out += c;
  }
  return out;
}

std::optional<std::string> cell_to_optional(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  return cell;
}

std::optional<std::string> attr_value(const extraction::AttributeSet& set,
                                      const std::string& name) {
  const std::optional<extraction::AttributeValue>* a = nullptr;
  if (name == "publisher") a = &set.publisher;
  else if (name == "institute") a = &set.institute;
  else if (name == "department") a = &set.department;
  else if (name == "professor") a = &set.professor;
  else throw config_error("unknown attribute name: " + name);
  if (!*a) return std::nullopt;
  return (*a)->value;
}

std::optional<std::string> truth_value(const GroundTruthRecord& r,
                                       const std::string& name) {
  if (name == "publisher") return r.publisher;
  if (name == "institute") return r.institute;
  if (name == "department") return r.department;
  if (name == "professor") return r.professor;
  throw config_error("unknown attribute name: " + name);
}

std::string fmt_accuracy(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

const std::vector<std::string>& attribute_names() {
  static const std::vector<std::string> names = {"publisher", "institute",
                                                 "department", "professor"};
  return names;
}

std::vector<GroundTruthRecord> parse_ground_truth(const std::string& csv_text) {
  auto rows = csv::parse(csv_text);
  if (rows.empty()) throw parse_error("ground truth is empty", 1);
  const std::vector<std::string> expected = {"video_id", "publisher",
                                             "institute", "department",
                                             "professor"};
  if (rows[0] != expected)
    throw parse_error(
        "ground truth header must be video_id,publisher,institute,department,professor",
        1);
  std::vector<GroundTruthRecord> out;
  for (size_t i = 1; i < rows.size(); ++i) {
    const long line = static_cast<long>(i) + 1;
    const auto& row = rows[i];
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != 5)
      throw parse_error("ground truth row has " + std::to_string(row.size()) +
                            " fields, expected 5",
                        line);
    if (row[0].empty()) throw parse_error("ground truth row without video_id", line);
    GroundTruthRecord r;
    r.video_id = row[0];
    r.publisher = cell_to_optional(row[1]);
    r.institute = cell_to_optional(row[2]);
    r.department = cell_to_optional(row[3]);
    r.professor = cell_to_optional(row[4]);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<GroundTruthRecord> load_ground_truth(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open ground truth file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_ground_truth(ss.str());
}

bool values_agree(const std::optional<std::string>& predicted,
                  const std::optional<std::string>& truth,
                  const ScoringMode& mode) {
  if (!predicted && !truth) return true;  // correctly absent
  if (!predicted || !truth) return false;
  const std::string p = normalize(*predicted);
  const std::string t = normalize(*truth);
  if (!mode.fuzzy) return p == t;
  return matching::ratio(p, t) >= mode.threshold;
}

EvalReport score(const std::vector<catalog::VideoRecord>& predictions,
                 const std::vector<GroundTruthRecord>& truth,
                 const ScoringMode& mode) {
  // Group predictions by configuration, keeping first-seen column order.
  std::vector<ConfigScores> configs;
  std::vector<std::map<std::string, const catalog::VideoRecord*>> by_id;
  for (const auto& r : predictions) {
    size_t c = 0;
    for (; c < configs.size(); ++c)
      if (configs[c].strategy == r.keyframe_strategy &&
          configs[c].engine == r.engine_id)
        break;
    if (c == configs.size()) {
      configs.push_back({r.keyframe_strategy, r.engine_id, {}});
      by_id.emplace_back();
    }
    by_id[c][r.video_id] = &r;
  }

  for (size_t c = 0; c < configs.size(); ++c) {
    for (const auto& name : attribute_names())
      configs[c].per_attribute[name] = AttributeScore{};
    for (const auto& t : truth) {
      auto it = by_id[c].find(t.video_id);
      if (it == by_id[c].end())
        throw error("ground truth video_id '" + t.video_id +
                    "' has no prediction in configuration " + configs[c].label());
      for (const auto& name : attribute_names()) {
        AttributeScore& s = configs[c].per_attribute[name];
        ++s.total;
        if (values_agree(attr_value(it->second->attributes, name),
                         truth_value(t, name), mode))
          ++s.correct;
      }
    }
  }

  EvalReport report;
  report.configs = std::move(configs);
  report.mode = mode;
  return report;
}

namespace {

std::string attribute_label(const std::string& name) {
  std::string label = name;
  label[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(label[0])));
  return label + " Name";
}

}  // namespace

std::string render_report_text(const EvalReport& report) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{"Category"};
  for (const auto& c : report.configs) header.push_back(c.label());
  cells.push_back(header);
  if (report.configs.empty()) return "Category\n";
  for (const auto& name : attribute_names()) {
    std::vector<std::string> row{attribute_label(name)};
    for (const auto& c : report.configs)
      row.push_back(fmt_accuracy(c.per_attribute.at(name).accuracy()));
    cells.push_back(row);
  }

  std::vector<size_t> widths(header.size(), 0);
  for (const auto& row : cells)
    for (size_t i = 0; i < row.size(); ++i)
      widths[i] = std::max(widths[i], row[i].size());

  std::string out;
  for (size_t r = 0; r < cells.size(); ++r) {
    for (size_t i = 0; i < cells[r].size(); ++i) {
      if (i) out += "  ";
      out += cells[r][i];
      out.append(widths[i] - cells[r][i].size(), ' ');
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
    if (r == 0) {
      size_t total = 0;
      for (size_t i = 0; i < widths.size(); ++i) total += widths[i] + (i ? 2 : 0);
      out.append(total, '-');
      out += '\n';
    }
  }
  return out;
}

std::string render_report_csv(const EvalReport& report) {
  std::vector<std::string> header{"Category"};
  for (const auto& c : report.configs) header.push_back(c.label());
  std::string out = csv::format_row(header);
  if (report.configs.empty()) return out;
  for (const auto& name : attribute_names()) {
    std::vector<std::string> row{attribute_label(name)};
    for (const auto& c : report.configs)
      row.push_back(fmt_accuracy(c.per_attribute.at(name).accuracy()));
    out += csv::format_row(row);
  }
  return out;
}

}  // namespace lecmeta::evalsuite
