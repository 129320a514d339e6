#include "lecmeta/csv.hpp"

#include "lecmeta/errors.hpp"

namespace lecmeta::csv {

std::vector<std::vector<std::string>> parse(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  long line = 1;

  auto end_field = [&] {
    row.push_back(field);
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(row);
    row.clear();
  };

  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field.empty() && !field_started) {
          in_quotes = true;
          field_started = true;
        } else {
          throw parse_error("stray quote in unquoted field", line);
        }
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;  // CRLF: the LF that follows ends the row
      case '\n':
        end_row();
        ++line;
        break;
      default:
        field += c;
        field_started = true;
        break;
    }
  }
  if (in_quotes) throw parse_error("unterminated quoted field", line);
  // Final row without trailing newline.
  if (field_started || !field.empty() || !row.empty()) end_row();
  return rows;
}

std::string quote_field(const std::string& field) {
  bool needs_quote = field.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs_quote) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string format_row(const std::vector<std::string>& fields) {
  std::string out;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += quote_field(fields[i]);
  }
  out += '\n';
  return out;
}

}  // namespace lecmeta::csv
