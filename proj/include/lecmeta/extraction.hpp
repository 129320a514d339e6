#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lecmeta/matching.hpp"
#include "lecmeta/ocr.hpp"

namespace lecmeta::extraction {

// One extracted attribute with its provenance.
struct AttributeValue {
  std::string value;
  double score = 0.0;
  long source_frame = -1;  // keyframe index that yielded the value
  int source_line = -1;    // line number within that frame's OCR result

  bool operator==(const AttributeValue&) const = default;
};

// The per-video extraction result. subject/topic are carried but never
// auto-populated; no extraction rules exist for them.
struct AttributeSet {
  std::optional<AttributeValue> publisher;
  std::optional<AttributeValue> institute;
  std::optional<AttributeValue> department;
  std::optional<AttributeValue> professor;
  std::optional<std::string> subject;
  std::optional<std::string> topic;

  bool any_present() const {
    return publisher || institute || department || professor;
  }
  bool operator==(const AttributeSet&) const = default;
};

struct NameCandidate {
  std::string name;  // substring of the cited line's text
  double score = 0.0;
  int line_number = -1;
};

// Fallback slot for a statistical person-name recognizer; the default
// implementation reapplies the rule set, a scripted stub serves tests.
class NameRecognizer {
public:
  virtual ~NameRecognizer() = default;
  virtual std::string id() const = 0;
  virtual bool shareable() const { return true; }
  virtual std::vector<NameCandidate> find_person_names(
      const std::vector<ocr::OcrLine>& lines) = 0;
};

class RuleBasedRecognizer : public NameRecognizer {
public:
  std::string id() const override { return "rule_based"; }
  std::vector<NameCandidate> find_person_names(
      const std::vector<ocr::OcrLine>& lines) override;
};

// Test double: returns a fixed candidate list and counts calls.
class ScriptedRecognizer : public NameRecognizer {
public:
  explicit ScriptedRecognizer(std::vector<NameCandidate> candidates,
                              bool fail = false)
      : candidates_(std::move(candidates)), fail_(fail) {}
  std::string id() const override { return "scripted"; }
  std::vector<NameCandidate> find_person_names(
      const std::vector<ocr::OcrLine>& lines) override;
  int call_count() const { return calls_; }

private:
  std::vector<NameCandidate> candidates_;
  bool fail_;
  int calls_ = 0;
};

// Best accepted lexicon match over all lines; ties go to the earlier line.
std::optional<AttributeValue> extract_lexicon_attribute(
    const ocr::OcrResult& result, const matching::Lexicon& lex,
    double threshold);

// The prefix and "by" rules. Rule 1 (a line starting with a prof/dr stem,
// score 100) is checked across all lines before rule 2 (the line after a
// trailing "by", score 90). Names are title-cased with trailing punctuation
// stripped.
std::optional<AttributeValue> extract_professor_rules(const ocr::OcrResult& result);

// Rules first; only when they miss is the recognizer consulted, its best
// candidate capped at score 80 so it ranks below any rule hit. Recognizer
// failures degrade to the rules-only result; `diagnostics`, when non-null,
// receives a note.
std::optional<AttributeValue> extract_professor(const ocr::OcrResult& result,
                                                NameRecognizer& recognizer,
                                                std::string* diagnostics = nullptr);

// Extracts all four attributes from one keyframe's OCR result.
struct Lexicons {
  matching::Lexicon publisher;
  matching::Lexicon institute;
  matching::Lexicon department;
};

AttributeSet extract_frame_attributes(const ocr::OcrResult& result,
                                      const Lexicons& lexicons,
                                      double match_threshold,
                                      NameRecognizer& recognizer,
                                      std::string* diagnostics = nullptr);

// Per attribute independently keeps the highest score; ties go to the
// earliest source frame.
AttributeSet merge_frames(const std::vector<AttributeSet>& per_frame);

// Name normalization used by the professor rules (exposed for tests).
std::string title_case(const std::string& s);
std::string strip_trailing_punct(const std::string& s);

}  // namespace lecmeta::extraction
