#include "lecmeta/matching.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lecmeta/errors.hpp"

namespace lecmeta::matching {

std::string category_name(Category c) {
  switch (c) {
    case Category::publisher: return "publisher";
    case Category::institute: return "institute";
    case Category::department: return "department";
  }
  return "?";
}

Category category_from_name(const std::string& name) {
  if (name == "publisher") return Category::publisher;
  if (name == "institute") return Category::institute;
  if (name == "department") return Category::department;
  throw config_error("unknown lexicon category: " + name);
}

std::u32string decode_utf8(const std::string& s) {
  std::u32string out;
  out.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    unsigned char b = s[i];
    char32_t cp = 0xFFFD;
    size_t len = 1;
    if (b < 0x80) {
      cp = b;
    } else if ((b & 0xE0) == 0xC0 && i + 1 < s.size() &&
               (s[i + 1] & 0xC0) == 0x80) {
      cp = (b & 0x1F) << 6 | (s[i + 1] & 0x3F);
      len = 2;
      if (cp < 0x80) cp = 0xFFFD;  // overlong
    } else if ((b & 0xF0) == 0xE0 && i + 2 < s.size() &&
               (s[i + 1] & 0xC0) == 0x80 && (s[i + 2] & 0xC0) == 0x80) {
      cp = (b & 0x0F) << 12 | (s[i + 1] & 0x3F) << 6 | (s[i + 2] & 0x3F);
      len = 3;
      if (cp < 0x800) cp = 0xFFFD;
    } else if ((b & 0xF8) == 0xF0 && i + 3 < s.size() &&
               (s[i + 1] & 0xC0) == 0x80 && (s[i + 2] & 0xC0) == 0x80 &&
               (s[i + 3] & 0xC0) == 0x80) {
      cp = (b & 0x07) << 18 | (s[i + 1] & 0x3F) << 12 | (s[i + 2] & 0x3F) << 6 |
           (s[i + 3] & 0x3F);
      len = 4;
      if (cp < 0x10000 || cp > 0x10FFFF) cp = 0xFFFD;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string case_fold(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

size_t levenshtein(const std::u32string& a, const std::u32string& b) {
  const size_t n = a.size(), m = b.size();
  if (n == 0) return m;
  if (m == 0) return n;
  // Single-row DP.
  std::vector<size_t> row(m + 1);
  for (size_t j = 0; j <= m; ++j) row[j] = j;
  for (size_t i = 1; i <= n; ++i) {
    size_t diag = row[0];
    row[0] = i;
    for (size_t j = 1; j <= m; ++j) {
      size_t up = row[j];
      size_t sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({row[j - 1] + 1, up + 1, sub});
      diag = up;
    }
  }
  return row[m];
}

size_t levenshtein(const std::string& a, const std::string& b) {
  return levenshtein(decode_utf8(a), decode_utf8(b));
}

double ratio(const std::u32string& a, const std::u32string& b) {
  size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 100.0;
  return 100.0 * (1.0 - static_cast<double>(levenshtein(a, b)) /
                            static_cast<double>(longest));
}

double ratio(const std::string& a, const std::string& b) {
  return ratio(decode_utf8(a), decode_utf8(b));
}

double partial_ratio(const std::u32string& a, const std::u32string& b) {
  const std::u32string& s = a.size() <= b.size() ? a : b;
  const std::u32string& l = a.size() <= b.size() ? b : a;
  double best = ratio(a, b);  // floor: never below the plain ratio
  if (s.size() == l.size() || best == 100.0) return best;
  for (size_t off = 0; off + s.size() <= l.size(); ++off) {
    best = std::max(best, ratio(s, l.substr(off, s.size())));
    if (best == 100.0) break;
  }
  return best;
}

double partial_ratio(const std::string& a, const std::string& b) {
  return partial_ratio(decode_utf8(a), decode_utf8(b));
}

std::optional<MatchResult> best_match(const std::string& query,
                                      const Lexicon& lex, double threshold) {
  if (threshold < 0.0 || threshold > 100.0)
    throw config_error("match threshold must be in [0,100]");
  const std::u32string q = decode_utf8(case_fold(query));

  bool have = false;
  MatchResult best;
  double best_plain = -1.0;
  for (const auto& entry : lex.entries) {
    std::vector<const std::string*> candidates;
    candidates.push_back(&entry.canonical);
    for (const auto& alias : entry.aliases) candidates.push_back(&alias);
    for (const std::string* cand : candidates) {
      const std::u32string c = decode_utf8(case_fold(*cand));
      double plain = ratio(q, c);
      double score = std::max(plain, partial_ratio(q, c));
      if (score < threshold) continue;
      bool better = !have || score > best.score ||
                    (score == best.score &&
                     (plain > best_plain ||
                      (plain == best_plain && entry.canonical < best.canonical)));
      if (better) {
        have = true;
        best.canonical = entry.canonical;
        best.score = score;
        best.matched_alias = *cand;
        best_plain = plain;
      }
    }
  }
  if (!have) return std::nullopt;
  return best;
}

void validate_lexicon(const Lexicon& lex) {
  std::set<std::string> seen;
  for (const auto& e : lex.entries) {
    if (e.canonical.empty())
      throw config_error("lexicon entry with empty canonical name");
    if (!seen.insert(case_fold(e.canonical)).second)
      throw config_error("duplicate canonical name in lexicon: " + e.canonical);
    for (const auto& a : e.aliases)
      if (a.empty())
        throw config_error("empty alias for lexicon entry: " + e.canonical);
  }
}

Lexicon parse_lexicon(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error(std::string("invalid lexicon JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("category") || !j.contains("entries"))
    throw config_error("lexicon document needs 'category' and 'entries'");
  Lexicon lex;
  lex.category = category_from_name(j.at("category").get<std::string>());
  for (const auto& je : j.at("entries")) {
    LexiconEntry e;
    e.canonical = je.at("canonical").get<std::string>();
    if (je.contains("aliases"))
      for (const auto& ja : je.at("aliases"))
        e.aliases.push_back(ja.get<std::string>());
    lex.entries.push_back(std::move(e));
  }
  validate_lexicon(lex);
  return lex;
}

Lexicon load_lexicon(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open lexicon file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_lexicon(ss.str());
}

std::string serialize_lexicon(const Lexicon& lex) {
  nlohmann::json j;
  j["category"] = category_name(lex.category);
  j["entries"] = nlohmann::json::array();
  for (const auto& e : lex.entries) {
    nlohmann::json je;
    je["canonical"] = e.canonical;
    je["aliases"] = e.aliases;
    j["entries"].push_back(je);
  }
  return j.dump(2) + "\n";
}

Lexicon default_lexicon(Category c) {
  Lexicon lex;
  lex.category = c;
  switch (c) {
    case Category::publisher:
      lex.entries = {
          {"NPTEL", {"nptel online certification", "national programme on technology enhanced learning"}},
          {"MIT OpenCourseWare", {"mit ocw", "opencourseware"}},
      };
      break;
    case Category::institute:
      lex.entries = {
          {"IIT Kharagpur", {"indian institute of technology kharagpur"}},
          {"IIT Madras", {"indian institute of technology madras"}},
          {"IIT Bombay", {"indian institute of technology bombay"}},
          {"IIT Delhi", {"indian institute of technology delhi"}},
          {"IIT Kanpur", {"indian institute of technology kanpur"}},
          {"IISc Bangalore", {"indian institute of science"}},
          {"MIT", {"massachusetts institute of technology"}},
          {"Chennai Mathematical Institute", {"cmi"}},
      };
      break;
    case Category::department:
      lex.entries = {
          {"Computer Science", {"computer science and engineering", "cse", "dept. of computer science"}},
          {"Electrical Engineering", {"electrical and electronics engineering", "eee"}},
          {"Mechanical Engineering", {"mech"}},
          {"Mathematics", {"maths", "dept. of mathematics"}},
          {"Physics", {"dept. of physics"}},
          {"Civil Engineering", {}},
          {"Chemical Engineering", {}},
          {"Electronics and Communication", {"ece"}},
      };
      break;
  }
  return lex;
}

}  // namespace lecmeta::matching
