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

#ifndef CEXEC_IO_H_
#define CEXEC_IO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cexec/dataset.h"
#include "cexec/mutation.h"
#include "cexec/program.h"
#include "cexec/trace.h"
#include "json.hpp"

namespace cexec {

using Json = nlohmann::ordered_json;

// Throw Error(kIoError).
std::string ReadTextFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

// One JSON value per non-blank line. Throws Error(kIoError) or
// Error(kMalformedRecord) naming the offending line.
std::vector<Json> ReadJsonl(const std::filesystem::path& path);
std::vector<Json> ParseJsonl(std::string_view text, std::string_view origin);
std::string ToJsonl(const std::vector<Json>& records);

std::string Sha256Hex(std::string_view data);

Json StateToJson(const StateMap& state);
Json TraceToJson(const Trace& trace);
// Throws Error(kMalformedRecord).
StateMap StateFromJson(const Json& json);
Trace TraceFromJson(const Json& json);

Json MutationRecordToJson(const MutationRecord& record);

// {"id", "problem_id", "parent_id", "origin", "source", "input", ...}
Json ProgramRecord(const Program& program, std::string_view parent_id,
                   const TestInput& input);
Json MutantRecord(const Mutant& mutant, const TestInput& input);

struct ProgramEntry {
  Program program;
  std::string parent_id;
  TestInput input;
};

// Reads a record written by ProgramRecord or MutantRecord (extra fields are
// ignored). Throws Error(kMalformedRecord).
ProgramEntry ProgramEntryFromJson(const Json& json);

Json DatasetRecordToJson(const DatasetRecord& record);
DatasetRecord DatasetRecordFromJson(const Json& json);

// Every *.py below `dir`, sorted by relative path. The id is the relative
// path without the extension; the problem id is the parent directory, or
// the id itself for top-level files. A sibling file with extension .in
// holds the test input.
std::vector<ProgramEntry> LoadSeedDir(const std::filesystem::path& dir);

}  // namespace cexec

#endif  // CEXEC_IO_H_
