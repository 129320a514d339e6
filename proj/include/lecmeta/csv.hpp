#pragma once

#include <string>
#include <vector>

namespace lecmeta::csv {

// RFC 4180 reader. Understands quoted fields, escaped quotes and embedded
// newlines; rows are returned in file order. Both LF and CRLF inputs parse.
std::vector<std::vector<std::string>> parse(const std::string& text);

// Quotes a field only when it needs it (comma, quote or newline inside).
std::string quote_field(const std::string& field);

// One CSV row, LF-terminated.
std::string format_row(const std::vector<std::string>& fields);

}  // namespace lecmeta::csv
