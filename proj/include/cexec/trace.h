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

#ifndef CEXEC_TRACE_H_
#define CEXEC_TRACE_H_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cexec/program.h"

namespace cexec {

inline constexpr int kMaxTraceLines = 1024;

enum class ExecutionStatus { kOk, kRuntimeError, kTimeout, kTraceLimitExceeded };

std::string_view StatusName(ExecutionStatus status);
// Throws Error(kMalformedRecord) for unknown names.
ExecutionStatus StatusFromName(std::string_view name);

// Identifier -> rendered value, in first-binding order.
using StateMap = std::vector<std::pair<std::string, std::string>>;

struct TraceLine {
  int line_no = 0;
  StateMap state;

  friend bool operator==(const TraceLine&, const TraceLine&) = default;
};

struct Trace {
  std::vector<TraceLine> lines;
  std::string stdout_text;
  ExecutionStatus status = ExecutionStatus::kOk;

  friend bool operator==(const Trace&, const Trace&) = default;
};

enum class TierPrefix { kSingleLine, kTutorial, kCodeNetMut };

std::string_view TierToken(TierPrefix tier);
// Accepts either the bracketed token or the bare lower-case name.
TierPrefix TierFromName(std::string_view name);

namespace tokens {
inline constexpr std::string_view kLine = "[LINE]";
inline constexpr std::string_view kState = "[STATE]";
inline constexpr std::string_view kDictSep = "[DICTSEP]";
inline constexpr std::string_view kStateEnd = "[STATEEND]";
inline constexpr std::string_view kIndent = "[INDENT]";
inline constexpr std::string_view kDedent = "[DEDENT]";
inline constexpr std::string_view kE2D = "[E2D]";
}  // namespace tokens

// The 210 special tokens: [1]..[200], the three tier prefixes and the seven
// structure tokens.
const std::vector<std::string>& SpecialVocabulary();

std::string LineToken(int line_no);

// "<prefix> [1] <code> [2] [INDENT] <code> ..." with indentation taken from
// the tokenizer's INDENT/DEDENT stream (blank, comment and continuation
// lines never change the level). Throws Error(kTooManyLines).
std::string EncodeCode(const Program& program, TierPrefix prefix);

// "[LINE] [i] [STATE] v : s [DICTSEP] ... [STATEEND]" per line, space
// separated. Throws Error(kLineNumberOutOfRange).
std::string EncodeTrace(const Trace& trace);
std::string EncodeTraceLine(const TraceLine& line);

struct DecodedTrace {
  Trace trace;
  // Set when the text had anything beyond the longest well-formed prefix.
  bool malformed = false;
};

// Tolerant inverse of EncodeTrace. Structure tokens inside quoted values are
// not treated as structure.
DecodedTrace DecodeTrace(std::string_view text);

// Encodes only the final line. Throws Error(kEmptyTrace).
std::string EncodeSingleLineTarget(const Trace& trace);

}  // namespace cexec

#endif  // CEXEC_TRACE_H_
