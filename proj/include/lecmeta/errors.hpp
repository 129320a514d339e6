#pragma once

#include <stdexcept>
#include <string>

namespace lecmeta {

// Base class for everything this library throws on purpose.
class error : public std::runtime_error {
public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input document; carries the 1-based line/row it was found on.
class parse_error : public error {
public:
  parse_error(const std::string& what, long line)
      : error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  long line() const { return line_; }

private:
  long line_;
};

// Bad configuration or missing environment (tool absent, unknown key, value
// out of range). The CLI maps this to exit code 2.
class config_error : public error {
public:
  using error::error;
};

// An OCR engine binary that the startup probe could not find or run.
class engine_unavailable : public config_error {
public:
  using config_error::config_error;
};

// An engine that was available but failed on one frame (nonzero exit,
// garbage output). Distinct from engine_unavailable so batch processing can
// isolate per-frame failures.
class engine_failure : public error {
public:
  using error::error;
};

class io_error : public error {
public:
  using error::error;
};

}  // namespace lecmeta
