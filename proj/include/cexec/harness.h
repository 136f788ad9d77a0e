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

#ifndef CEXEC_HARNESS_H_
#define CEXEC_HARNESS_H_

#include <functional>
#include <string>
#include <vector>

#include "cexec/mutation.h"
#include "cexec/program.h"
#include "cexec/trace.h"

namespace cexec {

struct Limits {
  double time_s = 1.0;
  int max_trace_lines = kMaxTraceLines;
};

// How subject programs are launched. The hook script is run as
//   <python> -B <hook_path> <program.py>
// with PYTHONHASHSEED=0 and the environment variables
//   CEXEC_TRACE_FD          descriptor to write records to (always 3)
//   CEXEC_MAX_TRACE_LINES   record budget
// Each record is one JSON object per line:
//   {"line_no": 3, "state": {"x": "1", "s": "'ab'"}}
// and the last one is the summary
//   {"status": "ok" | "runtime_error" | ..., "stdout": "..."}
// where "stdout" is optional; when absent the captured stdout pipe is used.
struct HarnessConfig {
  std::string python = "python3";
  std::string hook_path;
  Limits limits;
  // Parallel runs in FilterExecutable; 0 means hardware concurrency.
  int workers = 0;
};

struct ExecutionResult {
  ExecutionStatus status = ExecutionStatus::kOk;
  Trace trace;
  std::string stdout_text;
  double wall_time = 0.0;
};

// Runs `program` in a fresh interpreter under the trace hook with `input` on
// stdin. Throws Error(kHarnessFailure) when the hook is missing, the
// interpreter cannot be started, or the record stream is unreadable.
ExecutionResult Execute(const HarnessConfig& config, const Program& program,
                        const TestInput& input);

struct ExecutedMutant {
  Mutant mutant;
  Trace trace;
};

// Keeps the mutants that run with status ok, in input order.
std::vector<ExecutedMutant> FilterExecutable(const HarnessConfig& config,
                                             const std::vector<Mutant>& mutants,
                                             const TestInput& input);

// Runs `task(i)` for i in [0, n) on up to `workers` threads. The first
// exception thrown by any task is rethrown after all threads finish.
void ParallelFor(std::size_t n, int workers,
                 const std::function<void(std::size_t)>& task);

}  // namespace cexec

#endif  // CEXEC_HARNESS_H_
