// Copyright 2026 The cexec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cexec/harness.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <thread>

#include "cexec/error.h"
#include "json.hpp"

extern char** environ;

namespace cexec {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr int kTraceFd = 3;
constexpr auto kDrainGrace = std::chrono::seconds(2);

[[noreturn]] void Fail(const std::string& message) {
  throw Error(ErrorCode::kHarnessFailure, message);
}

class TempDir {
 public:
  TempDir() {
    std::string pattern = (fs::temp_directory_path() / "cexec-XXXXXX").string();
    if (mkdtemp(pattern.data()) == nullptr) {
      Fail("mkdtemp: " + std::string(std::strerror(errno)));
    }
    path_ = pattern;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  ~Fd() { Close(); }
  Fd(Fd&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
  Fd& operator=(Fd&& other) noexcept {
    if (this != &other) {
      Close();
      fd_ = std::exchange(other.fd_, -1);
    }
    return *this;
  }

  int get() const { return fd_; }
  void Close() {
    if (fd_ >= 0) {
      ::close(fd_);
      fd_ = -1;
    }
  }

 private:
  int fd_ = -1;
};

// Pipe whose ends are close-on-exec and numbered above the descriptors the
// child gets, so dup2 in the child always copies.
std::pair<Fd, Fd> MakePipe() {
  int ends[2];
  if (pipe2(ends, O_CLOEXEC) != 0) {
    Fail("pipe: " + std::string(std::strerror(errno)));
  }
  auto raise = [](int fd) {
    int high = fcntl(fd, F_DUPFD_CLOEXEC, 10);
    ::close(fd);
    if (high < 0) {
      Fail("fcntl: " + std::string(std::strerror(errno)));
    }
    return Fd(high);
  };
  Fd read_end = raise(ends[0]);
  Fd write_end = raise(ends[1]);
  return {std::move(read_end), std::move(write_end)};
}

void WriteFile(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    Fail("cannot write " + path.string());
  }
}

std::vector<std::string> ChildEnvironment(const Limits& limits) {
  static constexpr std::string_view kOverridden[] = {
      "PYTHONHASHSEED=", "PYTHONIOENCODING=", "CEXEC_TRACE_FD=",
      "CEXEC_MAX_TRACE_LINES=", "PYTHONDONTWRITEBYTECODE="};
  std::vector<std::string> env;
  for (char** entry = environ; entry != nullptr && *entry != nullptr;
       ++entry) {
    std::string_view var(*entry);
    bool overridden =
        std::any_of(std::begin(kOverridden), std::end(kOverridden),
                    [&](std::string_view key) { return var.starts_with(key); });
    if (!overridden) {
      env.emplace_back(var);
    }
  }
  env.emplace_back("PYTHONHASHSEED=0");
  env.emplace_back("PYTHONIOENCODING=utf-8");
  env.emplace_back("PYTHONDONTWRITEBYTECODE=1");
  env.push_back("CEXEC_TRACE_FD=" + std::to_string(kTraceFd));
  env.push_back("CEXEC_MAX_TRACE_LINES=" +
                std::to_string(limits.max_trace_lines));
  return env;
}

std::vector<char*> Pointers(std::vector<std::string>& strings) {
  std::vector<char*> out;
  for (std::string& s : strings) {
    out.push_back(s.data());
  }
  out.push_back(nullptr);
  return out;
}

struct Spawned {
  pid_t pid;
  Fd out;
  Fd err;
  Fd trace;
};

Spawned Spawn(const HarnessConfig& config, const fs::path& dir,
              const fs::path& hook, const fs::path& program,
              const fs::path& stdin_path) {
  auto [out_r, out_w] = MakePipe();
  auto [err_r, err_w] = MakePipe();
  auto [trace_r, trace_w] = MakePipe();

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, 0, stdin_path.c_str(), O_RDONLY,
                                   0);
  posix_spawn_file_actions_adddup2(&actions, out_w.get(), 1);
  posix_spawn_file_actions_adddup2(&actions, err_w.get(), 2);
  posix_spawn_file_actions_adddup2(&actions, trace_w.get(), kTraceFd);
  posix_spawn_file_actions_addchdir_np(&actions, dir.c_str());

  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  sigset_t empty;
  sigemptyset(&empty);
  sigset_t defaults;
  sigemptyset(&defaults);
  sigaddset(&defaults, SIGPIPE);
  sigaddset(&defaults, SIGINT);
  sigaddset(&defaults, SIGTERM);
  posix_spawnattr_setsigmask(&attr, &empty);
  posix_spawnattr_setsigdefault(&attr, &defaults);
  posix_spawnattr_setpgroup(&attr, 0);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP |
                                      POSIX_SPAWN_SETSIGMASK |
                                      POSIX_SPAWN_SETSIGDEF);

  std::vector<std::string> args = {config.python, "-B", hook.string(),
                                   program.string()};
  std::vector<std::string> env = ChildEnvironment(config.limits);
  std::vector<char*> argv = Pointers(args);
  std::vector<char*> envp = Pointers(env);

  pid_t pid = 0;
  int rc = posix_spawnp(&pid, config.python.c_str(), &actions, &attr,
                        argv.data(), envp.data());
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);
  if (rc != 0) {
    Fail("cannot start '" + config.python + "': " + std::strerror(rc));
  }
  return Spawned{pid, std::move(out_r), std::move(err_r), std::move(trace_r)};
}

// Accumulates interchange records as they arrive.
class RecordStream {
 public:
  explicit RecordStream(int max_lines) : max_lines_(max_lines) {}

  // Returns false once the record budget has been exceeded.
  bool Feed(std::string_view chunk) {
    buffer_.append(chunk);
    std::size_t start = 0;
    std::size_t nl;
    while ((nl = buffer_.find('\n', start)) != std::string::npos) {
      std::string_view line(buffer_.data() + start, nl - start);
      start = nl + 1;
      if (!Handle(line)) {
        buffer_.clear();
        return false;
      }
    }
    buffer_.erase(0, start);
    return true;
  }

  // Remaining bytes without a newline are a record cut off mid-write.
  bool HasPartialRecord() const {
    return buffer_.find_first_not_of(" \t\r") != std::string::npos;
  }

  std::vector<TraceLine>& lines() { return lines_; }
  bool exceeded() const { return exceeded_; }
  const std::optional<ExecutionStatus>& summary_status() const {
    return summary_status_;
  }
  const std::optional<std::string>& summary_stdout() const {
    return summary_stdout_;
  }

 private:
  bool Handle(std::string_view text) {
    if (text.find_first_not_of(" \t\r") == std::string_view::npos) {
      return true;
    }
    if (exceeded_ || summary_status_) {
      Fail("record after end of stream: " + std::string(text.substr(0, 200)));
    }
    nlohmann::ordered_json record;
    try {
      record = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      Fail("unreadable trace record: " + std::string(e.what()));
    }
    if (!record.is_object()) {
      Fail("trace record is not an object");
    }
    if (record.contains("line_no")) {
      const auto& line_no = record["line_no"];
      const auto& state = record.contains("state") ? record["state"]
                                                   : nlohmann::ordered_json();
      if (!line_no.is_number_integer() || !state.is_object()) {
        Fail("malformed line record: " + record.dump());
      }
      if (static_cast<int>(lines_.size()) >= max_lines_) {
        exceeded_ = true;
        return false;
      }
      TraceLine line;
      line.line_no = line_no.get<int>();
      for (const auto& [name, value] : state.items()) {
        line.state.emplace_back(
            name, value.is_string() ? value.get<std::string>() : value.dump());
      }
      lines_.push_back(std::move(line));
      return true;
    }
    if (record.contains("status") && record["status"].is_string()) {
      try {
        summary_status_ = StatusFromName(record["status"].get<std::string>());
      } catch (const Error& e) {
        Fail(e.what());
      }
      if (record.contains("stdout")) {
        if (!record["stdout"].is_string()) {
          Fail("summary stdout is not text");
        }
        summary_stdout_ = record["stdout"].get<std::string>();
      }
      return true;
    }
    Fail("unrecognized trace record: " + record.dump());
  }

  int max_lines_;
  std::string buffer_;
  std::vector<TraceLine> lines_;
  bool exceeded_ = false;
  std::optional<ExecutionStatus> summary_status_;
  std::optional<std::string> summary_stdout_;
};

void KillGroup(pid_t pid) { ::kill(-pid, SIGKILL); }

}  // namespace

ExecutionResult Execute(const HarnessConfig& config, const Program& program,
                        const TestInput& input) {
  if (config.hook_path.empty()) {
    Fail("no trace hook configured");
  }
  std::error_code ec;
  fs::path hook = fs::absolute(config.hook_path, ec);
  if (ec || !fs::is_regular_file(hook)) {
    Fail("trace hook not found: " + config.hook_path);
  }
  if (config.limits.time_s <= 0 || config.limits.max_trace_lines < 0) {
    Fail("invalid limits");
  }

  TempDir dir;
  fs::path program_path = dir.path() / "program.py";
  fs::path stdin_path = dir.path() / "stdin.txt";
  WriteFile(program_path, program.source());
  WriteFile(stdin_path, input.ToText());

  Clock::time_point start = Clock::now();
  Clock::time_point deadline =
      start + std::chrono::duration_cast<Clock::duration>(
                  std::chrono::duration<double>(config.limits.time_s));
  Spawned child = Spawn(config, dir.path(), hook, program_path, stdin_path);

  RecordStream records(config.limits.max_trace_lines);
  std::string stdout_text;
  std::string stderr_tail;
  bool timed_out = false;
  bool killed = false;
  bool reaped = false;
  Clock::time_point end = start;
  Clock::time_point drain_deadline = Clock::time_point::max();

  auto kill_now = [&] {
    if (!killed) {
      KillGroup(child.pid);
      killed = true;
      drain_deadline = Clock::now() + kDrainGrace;
    }
  };

  Fd* streams[] = {&child.out, &child.err, &child.trace};
  char buffer[1 << 16];
  while (true) {
    if (!reaped) {
      int wstatus = 0;
      pid_t rc = waitpid(child.pid, &wstatus, WNOHANG);
      if (rc == child.pid) {
        reaped = true;
        end = Clock::now();
        // Stray grandchildren must not keep the pipes open.
        KillGroup(child.pid);
        if (!killed) {
          drain_deadline = end + kDrainGrace;
        }
      }
    }
    bool open = std::any_of(std::begin(streams), std::end(streams),
                            [](Fd* fd) { return fd->get() >= 0; });
    if (reaped && !open) {
      break;
    }
    Clock::time_point now = Clock::now();
    if (!killed && !reaped && now >= deadline) {
      timed_out = true;
      kill_now();
    }
    if (now >= drain_deadline) {
      for (Fd* fd : streams) {
        fd->Close();
      }
      if (!reaped) {
        kill_now();
        waitpid(child.pid, nullptr, 0);
        reaped = true;
        end = Clock::now();
      }
      break;
    }

    Clock::time_point wake = std::min(killed || reaped ? drain_deadline
                                                        : deadline,
                                      now + std::chrono::milliseconds(20));
    int timeout_ms = static_cast<int>(
        std::chrono::ceil<std::chrono::milliseconds>(wake - now).count());
    pollfd fds[3];
    nfds_t count = 0;
    for (Fd* fd : streams) {
      if (fd->get() >= 0) {
        fds[count++] = pollfd{fd->get(), POLLIN, 0};
      }
    }
    int ready = poll(fds, count, std::max(timeout_ms, 0));
    if (ready < 0 && errno != EINTR) {
      kill_now();
      Fail("poll: " + std::string(std::strerror(errno)));
    }
    for (nfds_t i = 0; ready > 0 && i < count; ++i) {
      if ((fds[i].revents & (POLLIN | POLLHUP | POLLERR)) == 0) {
        continue;
      }
      Fd* stream = *std::find_if(std::begin(streams), std::end(streams),
                                 [&](Fd* fd) { return fd->get() == fds[i].fd; });
      ssize_t n = ::read(stream->get(), buffer, sizeof(buffer));
      if (n < 0 && errno == EINTR) {
        continue;
      }
      if (n <= 0) {
        stream->Close();
        continue;
      }
      std::string_view chunk(buffer, static_cast<std::size_t>(n));
      if (stream == &child.out) {
        stdout_text.append(chunk);
      } else if (stream == &child.err) {
        stderr_tail.append(chunk);
        if (stderr_tail.size() > 8192) {
          stderr_tail.erase(0, stderr_tail.size() - 4096);
        }
      } else if (!killed || !records.exceeded()) {
        bool within_budget;
        try {
          within_budget = records.Feed(chunk);
        } catch (...) {
          kill_now();
          waitpid(child.pid, nullptr, 0);
          throw;
        }
        if (!within_budget) {
          kill_now();
          child.trace.Close();
        }
      }
    }
  }

  ExecutionResult result;
  result.wall_time = std::chrono::duration<double>(end - start).count();
  if (records.exceeded()) {
    result.status = ExecutionStatus::kTraceLimitExceeded;
  } else if (timed_out) {
    result.status = ExecutionStatus::kTimeout;
  } else if (records.summary_status()) {
    result.status = *records.summary_status();
    if (result.status == ExecutionStatus::kOk &&
        result.wall_time > config.limits.time_s) {
      result.status = ExecutionStatus::kTimeout;
    }
  } else {
    std::string detail = records.HasPartialRecord()
                             ? "record stream ended mid-record"
                             : "no summary record";
    Fail("trace hook gave " + detail +
         (stderr_tail.empty() ? "" : "; stderr: " + stderr_tail));
  }
  result.stdout_text = records.summary_stdout().value_or(stdout_text);
  result.trace.lines = std::move(records.lines());
  result.trace.stdout_text = result.stdout_text;
  result.trace.status = result.status;
  return result;
}

void ParallelFor(std::size_t n, int workers,
                 const std::function<void(std::size_t)>& task) {
  std::size_t threads =
      workers > 0 ? static_cast<std::size_t>(workers)
                  : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) {
          first_error = std::current_exception();
        }
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) {
    pool.emplace_back(run);
  }
  if (threads > 0) {
    run();
  }
  for (std::thread& thread : pool) {
    thread.join();
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }
}

std::vector<ExecutedMutant> FilterExecutable(const HarnessConfig& config,
                                             const std::vector<Mutant>& mutants,
                                             const TestInput& input) {
  std::vector<std::optional<Trace>> traces(mutants.size());
  ParallelFor(mutants.size(), config.workers, [&](std::size_t i) {
    ExecutionResult result = Execute(config, mutants[i].program, input);
    if (result.status == ExecutionStatus::kOk) {
      traces[i] = std::move(result.trace);
    }
  });
  std::vector<ExecutedMutant> kept;
  for (std::size_t i = 0; i < mutants.size(); ++i) {
    if (traces[i]) {
      kept.push_back(ExecutedMutant{mutants[i], std::move(*traces[i])});
    }
  }
  return kept;
}

}  // namespace cexec
