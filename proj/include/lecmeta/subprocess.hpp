#pragma once

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace lecmeta::subprocess {

struct RunResult {
  int exit_code = -1;    // -1 when the child died on a signal
  std::string output;    // captured stdout
};

// Runs argv[0] with the given arguments (no shell), capturing stdout.
// stderr is inherited unless quiet_stderr is set. Throws io_error when the
// binary cannot be spawned at all.
RunResult run_capture(const std::vector<std::string>& argv,
                      bool quiet_stderr = false);

// True when `binary` can be executed (resolved via PATH if not a path).
bool binary_available(const std::string& binary,
                      const std::vector<std::string>& probe_args = {"-version"});

// Streaming child process: read its stdout incrementally. Used for the
// media tool's raw-frame pipe.
class ChildReader {
public:
  explicit ChildReader(const std::vector<std::string>& argv,
                       bool quiet_stderr = false);
  ~ChildReader();
  ChildReader(const ChildReader&) = delete;
  ChildReader& operator=(const ChildReader&) = delete;

  // Reads up to n bytes; returns bytes read, 0 at EOF.
  size_t read(void* buf, size_t n);
  // Reads exactly n bytes; false on EOF before n.
  bool read_exact(void* buf, size_t n);
  // Reads up to and including '\n'; false at EOF with nothing read.
  bool read_line(std::string& line);

  // Waits for the child and returns its exit code (-1 on signal death).
  int close();

private:
  FILE* stream_ = nullptr;
  int pid_ = -1;
  std::optional<int> exit_code_;
};

}  // namespace lecmeta::subprocess
