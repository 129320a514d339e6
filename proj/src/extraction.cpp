#include "lecmeta/extraction.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <sstream>

#include "lecmeta/errors.hpp"

namespace lecmeta::extraction {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t'; }

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> tokens_of(const std::string& s) {
  std::vector<std::string> toks;
  std::istringstream ss(s);
  std::string t;
  while (ss >> t) toks.push_back(t);
  return toks;
}

// Remainder of `line` after its first whitespace-delimited token.
std::string after_first_token(const std::string& line) {
  size_t i = 0;
  while (i < line.size() && is_space(line[i])) ++i;
  while (i < line.size() && !is_space(line[i])) ++i;
  while (i < line.size() && is_space(line[i])) ++i;
  return line.substr(i);
}

std::string normalize_name(const std::string& raw) {
  return title_case(strip_trailing_punct(trim(raw)));
}

}  // namespace

std::string strip_trailing_punct(const std::string& s) {
  size_t e = s.size();
  while (e > 0 && (std::strchr(".,;:!?-", s[e - 1]) != nullptr || is_space(s[e - 1])))
    --e;
  return s.substr(0, e);
}

std::string title_case(const std::string& s) {
  std::string out = s;
  bool at_word_start = true;
  for (char& c : out) {
    if (is_space(c)) {
      at_word_start = true;
      continue;
    }
    unsigned char u = static_cast<unsigned char>(c);
    if (std::isalpha(u))
      c = at_word_start ? static_cast<char>(std::toupper(u))
                        : static_cast<char>(std::tolower(u));
    at_word_start = false;
  }
  return out;
}

std::optional<AttributeValue> extract_lexicon_attribute(
    const ocr::OcrResult& result, const matching::Lexicon& lex,
    double threshold) {
  std::optional<AttributeValue> best;
  for (const auto& line : result.lines) {
    auto m = matching::best_match(line.text, lex, threshold);
    if (!m) continue;
    if (!best || m->score > best->score) {
      best = AttributeValue{m->canonical, m->score, result.frame_index,
                            line.line_number};
    }
  }
  return best;
}

std::optional<AttributeValue> extract_professor_rules(const ocr::OcrResult& result) {
  // Rule 1: prof/dr prefix; the strongest evidence, so it scans first.
  for (const auto& line : result.lines) {
    std::string folded = matching::case_fold(trim(line.text));
    if (folded.rfind("prof", 0) == 0 || folded.rfind("dr", 0) == 0) {
      std::string name = normalize_name(after_first_token(trim(line.text)));
      if (!name.empty())
        return AttributeValue{name, 100.0, result.frame_index, line.line_number};
    }
  }
  // Rule 2: the line after a trailing "by" (or a bare "by" line).
  for (size_t i = 0; i + 1 < result.lines.size(); ++i) {
    std::string folded = matching::case_fold(trim(result.lines[i].text));
    auto toks = tokens_of(folded);
    bool ends_with_by = folded == "by" || (!toks.empty() && toks.back() == "by");
    if (!ends_with_by) continue;
    std::string name = normalize_name(result.lines[i + 1].text);
    if (!name.empty())
      return AttributeValue{name, 90.0, result.frame_index,
                            result.lines[i + 1].line_number};
  }
  return std::nullopt;
}

std::vector<NameCandidate> RuleBasedRecognizer::find_person_names(
    const std::vector<ocr::OcrLine>& lines) {
  ocr::OcrResult wrapped;
  wrapped.lines = lines;
  auto hit = extract_professor_rules(wrapped);
  if (!hit) return {};
  return {{hit->value, hit->score, hit->source_line}};
}

std::vector<NameCandidate> ScriptedRecognizer::find_person_names(
    const std::vector<ocr::OcrLine>& lines) {
  (void)lines;
  ++calls_;
  if (fail_) throw error("scripted recognizer failure");
  return candidates_;
}

std::optional<AttributeValue> extract_professor(const ocr::OcrResult& result,
                                                NameRecognizer& recognizer,
                                                std::string* diagnostics) {
  auto rule_hit = extract_professor_rules(result);
  if (rule_hit) return rule_hit;

  std::vector<NameCandidate> candidates;
  try {
    candidates = recognizer.find_person_names(result.lines);
  } catch (const std::exception& e) {
    if (diagnostics)
      *diagnostics = "recognizer '" + recognizer.id() + "' failed: " + e.what();
    return std::nullopt;
  }

  const NameCandidate* best = nullptr;
  for (const auto& c : candidates) {
    if (c.name.empty()) continue;
    // Candidates must quote the cited line.
    if (c.line_number >= 0 &&
        static_cast<size_t>(c.line_number) < result.lines.size() &&
        result.lines[c.line_number].text.find(c.name) == std::string::npos)
      continue;
    if (!best || c.score > best->score) best = &c;
  }
  if (!best) return std::nullopt;
  return AttributeValue{best->name, std::min(best->score, 80.0),
                        result.frame_index, best->line_number};
}

AttributeSet extract_frame_attributes(const ocr::OcrResult& result,
                                      const Lexicons& lexicons,
                                      double match_threshold,
                                      NameRecognizer& recognizer,
                                      std::string* diagnostics) {
  AttributeSet set;
  set.publisher = extract_lexicon_attribute(result, lexicons.publisher, match_threshold);
  set.institute = extract_lexicon_attribute(result, lexicons.institute, match_threshold);
  set.department = extract_lexicon_attribute(result, lexicons.department, match_threshold);
  set.professor = extract_professor(result, recognizer, diagnostics);
  return set;
}

namespace {

void merge_attr(std::optional<AttributeValue>& into,
                const std::optional<AttributeValue>& from) {
  if (!from) return;
  if (!into || from->score > into->score ||
      (from->score == into->score && from->source_frame < into->source_frame))
    into = from;
}

}  // namespace

AttributeSet merge_frames(const std::vector<AttributeSet>& per_frame) {
  AttributeSet merged;
  for (const auto& set : per_frame) {
    merge_attr(merged.publisher, set.publisher);
    merge_attr(merged.institute, set.institute);
    merge_attr(merged.department, set.department);
    merge_attr(merged.professor, set.professor);
    if (!merged.subject && set.subject) merged.subject = set.subject;
    if (!merged.topic && set.topic) merged.topic = set.topic;
  }
  return merged;
}

}  // namespace lecmeta::extraction
