#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace lecmeta::matching {

enum class Category { publisher, institute, department };

std::string category_name(Category c);
Category category_from_name(const std::string& name);

struct LexiconEntry {
  std::string canonical;
  std::vector<std::string> aliases;
};

// A category's dictionary of canonical values and their aliases. Matching
// is always case-folded; entries keep their original spelling.
struct Lexicon {
  Category category = Category::publisher;
  std::vector<LexiconEntry> entries;
};

struct MatchResult {
  std::string canonical;
  double score = 0.0;         // in [0,100], >= the acceptance threshold
  std::string matched_alias;  // the canonical or alias that scored best
  int source_line = -1;       // filled in by callers that match per line
};

// Decodes UTF-8 into Unicode scalar values; invalid bytes decode as U+FFFD
// so matching stays total over arbitrary engine output.
std::u32string decode_utf8(const std::string& s);

// ASCII case fold (A-Z to a-z) over scalar values.
std::string case_fold(const std::string& s);

// Edit distance over Unicode scalar values.
size_t levenshtein(const std::string& a, const std::string& b);
size_t levenshtein(const std::u32string& a, const std::u32string& b);

// 100 * (1 - levenshtein(a,b) / max(|a|,|b|)); 100 when both empty.
double ratio(const std::string& a, const std::string& b);
double ratio(const std::u32string& a, const std::u32string& b);

// Best ratio of the shorter string against every window of its length in
// the longer one, never below the plain ratio. Equal lengths degenerate to
// ratio.
double partial_ratio(const std::string& a, const std::string& b);
double partial_ratio(const std::u32string& a, const std::u32string& b);

// Scores the case-folded query against every canonical and alias with
// max(ratio, partial_ratio); returns the best canonical at or above
// threshold. Ties break by higher plain ratio, then lexicographically
// smaller canonical.
std::optional<MatchResult> best_match(const std::string& query,
                                      const Lexicon& lex, double threshold);

// Lexicon file I/O: one JSON document per category,
// {"category": ..., "entries": [{"canonical": ..., "aliases": [...]}]}.
Lexicon load_lexicon(const std::string& path);
Lexicon parse_lexicon(const std::string& json_text);
std::string serialize_lexicon(const Lexicon& lex);

// Built-in seed lexicons used when no lexicon directory is configured.
Lexicon default_lexicon(Category c);

// Rejects empty strings and duplicate canonicals.
void validate_lexicon(const Lexicon& lex);

}  // namespace lecmeta::matching
