#include "lecmeta/subprocess.hpp"

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <csignal>
#include <cstring>

#include "lecmeta/errors.hpp"

namespace lecmeta::subprocess {

namespace {

// fork/exec with stdout wired to a pipe. Returns the read end and pid.
// No shell is involved, so arguments need no quoting.
int spawn(const std::vector<std::string>& argv, pid_t& pid, bool quiet_stderr) {
  if (argv.empty()) throw io_error("empty argument vector");
  int fds[2];
  if (pipe(fds) != 0) throw io_error("pipe() failed");

  std::vector<char*> cargv;
  cargv.reserve(argv.size() + 1);
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);

  pid = fork();
  if (pid < 0) {
    ::close(fds[0]);
    ::close(fds[1]);
    throw io_error("fork() failed");
  }
  if (pid == 0) {
    ::close(fds[0]);
    dup2(fds[1], STDOUT_FILENO);
    ::close(fds[1]);
    if (quiet_stderr) {
      int devnull = open("/dev/null", O_WRONLY);
      if (devnull >= 0) {
        dup2(devnull, STDERR_FILENO);
        ::close(devnull);
      }
    }
    execvp(cargv[0], cargv.data());
    _exit(127);  // exec failed
  }
  ::close(fds[1]);
  return fds[0];
}

int wait_exit(pid_t pid) {
  int status = 0;
  while (waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) return -1;
  }
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return -1;
}

}  // namespace

RunResult run_capture(const std::vector<std::string>& argv, bool quiet_stderr) {
  pid_t pid = -1;
  int fd = spawn(argv, pid, quiet_stderr);
  RunResult result;
  char buf[65536];
  for (;;) {
    ssize_t n = ::read(fd, buf, sizeof buf);
    if (n < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (n == 0) break;
    result.output.append(buf, static_cast<size_t>(n));
  }
  ::close(fd);
  result.exit_code = wait_exit(pid);
  if (result.exit_code == 127 && result.output.empty())
    throw io_error("cannot execute '" + argv[0] + "'");
  return result;
}

bool binary_available(const std::string& binary,
                      const std::vector<std::string>& probe_args) {
  std::vector<std::string> argv{binary};
  argv.insert(argv.end(), probe_args.begin(), probe_args.end());
  try {
    RunResult r = run_capture(argv, /*quiet_stderr=*/true);
    return r.exit_code == 0;
  } catch (const io_error&) {
    return false;
  }
}

ChildReader::ChildReader(const std::vector<std::string>& argv,
                         bool quiet_stderr) {
  pid_t pid = -1;
  int fd = spawn(argv, pid, quiet_stderr);
  pid_ = pid;
  stream_ = fdopen(fd, "rb");
  if (!stream_) {
    ::close(fd);
    kill(pid, SIGKILL);
    wait_exit(pid);
    throw io_error("fdopen() failed");
  }
}

ChildReader::~ChildReader() {
  if (stream_) {
    fclose(stream_);
    stream_ = nullptr;
  }
  if (pid_ >= 0 && !exit_code_) {
    kill(pid_, SIGKILL);
    wait_exit(pid_);
  }
}

size_t ChildReader::read(void* buf, size_t n) {
  return fread(buf, 1, n, stream_);
}

bool ChildReader::read_exact(void* buf, size_t n) {
  return fread(buf, 1, n, stream_) == n;
}

bool ChildReader::read_line(std::string& line) {
  line.clear();
  int c;
  while ((c = fgetc(stream_)) != EOF) {
    line += static_cast<char>(c);
    if (c == '\n') return true;
  }
  return !line.empty();
}

int ChildReader::close() {
  if (stream_) {
    fclose(stream_);
    stream_ = nullptr;
  }
  if (!exit_code_ && pid_ >= 0) exit_code_ = wait_exit(pid_);
  return exit_code_.value_or(-1);
}

}  // namespace lecmeta::subprocess
