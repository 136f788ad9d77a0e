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

#include "cexec/io.h"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "cexec/error.h"

namespace cexec {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void Malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedRecord, what);
}

const Json& Field(const Json& json, const char* name) {
  if (!json.is_object() || !json.contains(name)) {
    Malformed(std::string("record lacks field '") + name + "'");
  }
  return json.at(name);
}

std::string StringField(const Json& json, const char* name,
                        std::string fallback = "", bool required = true) {
  if (!json.is_object() || !json.contains(name)) {
    if (required) {
      Malformed(std::string("record lacks field '") + name + "'");
    }
    return fallback;
  }
  const Json& value = json.at(name);
  if (!value.is_string()) {
    Malformed(std::string("field '") + name + "' is not text");
  }
  return value.get<std::string>();
}

Origin OriginFromName(std::string_view name) {
  for (Origin origin : {Origin::kSeed, Origin::kMutant, Origin::kSingleLine,
                        Origin::kTutorial}) {
    if (OriginName(origin) == name) {
      return origin;
    }
  }
  Malformed("unknown origin '" + std::string(name) + "'");
}

}  // namespace

std::string ReadTextFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  }
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void WriteTextFile(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  }
}

std::vector<Json> ParseJsonl(std::string_view text, std::string_view origin) {
  std::vector<Json> records;
  std::size_t start = 0;
  int line_no = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    std::string_view line = text.substr(
        start, nl == std::string_view::npos ? std::string_view::npos
                                            : nl - start);
    start = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      continue;
    }
    try {
      records.push_back(Json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      Malformed(std::string(origin) + ":" + std::to_string(line_no) + ": " +
                e.what());
    }
  }
  return records;
}

std::vector<Json> ReadJsonl(const fs::path& path) {
  return ParseJsonl(ReadTextFile(path), path.string());
}

std::string ToJsonl(const std::vector<Json>& records) {
  std::string out;
  for (const Json& record : records) {
    out += record.dump();
    out += '\n';
  }
  return out;
}

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int size = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &size, EVP_sha256(),
                 nullptr) != 1) {
    throw Error(ErrorCode::kIoError, "sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < size; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

Json StateToJson(const StateMap& state) {
  Json out = Json::object();
  for (const auto& [name, value] : state) {
    out[name] = value;
  }
  return out;
}

Json TraceToJson(const Trace& trace) {
  Json lines = Json::array();
  for (const TraceLine& line : trace.lines) {
    Json item;
    item["line_no"] = line.line_no;
    item["state"] = StateToJson(line.state);
    lines.push_back(std::move(item));
  }
  Json out;
  out["lines"] = std::move(lines);
  out["stdout"] = trace.stdout_text;
  out["status"] = StatusName(trace.status);
  return out;
}

StateMap StateFromJson(const Json& json) {
  if (!json.is_object()) {
    Malformed("state is not an object");
  }
  StateMap state;
  for (const auto& [name, value] : json.items()) {
    if (!value.is_string()) {
      Malformed("state value of '" + name + "' is not text");
    }
    state.emplace_back(name, value.get<std::string>());
  }
  return state;
}

Trace TraceFromJson(const Json& json) {
  Trace trace;
  const Json& lines = Field(json, "lines");
  if (!lines.is_array()) {
    Malformed("trace lines are not a list");
  }
  for (const Json& item : lines) {
    const Json& line_no = Field(item, "line_no");
    if (!line_no.is_number_integer()) {
      Malformed("line_no is not an integer");
    }
    trace.lines.push_back(
        TraceLine{line_no.get<int>(), StateFromJson(Field(item, "state"))});
  }
  trace.stdout_text = StringField(json, "stdout", "", false);
  std::string status = StringField(json, "status", "ok", false);
  try {
    trace.status = StatusFromName(status);
  } catch (const Error& e) {
    Malformed(e.what());
  }
  return trace;
}

Json MutationRecordToJson(const MutationRecord& record) {
  Json out;
  out["operator"] = OperatorCode(record.op);
  out["span"] = Json::array({record.site_span.begin, record.site_span.end});
  out["before"] = record.before;
  out["after"] = record.after;
  return out;
}

Json ProgramRecord(const Program& program, std::string_view parent_id,
                   const TestInput& input) {
  Json out;
  out["id"] = program.id();
  out["problem_id"] = program.problem_id();
  out["parent_id"] = parent_id;
  out["origin"] = OriginName(program.origin());
  out["source"] = program.source();
  out["input"] = input.ToText();
  return out;
}

Json MutantRecord(const Mutant& mutant, const TestInput& input) {
  Json out = ProgramRecord(mutant.program, mutant.parent_id, input);
  out["rng_seed"] = mutant.rng_seed;
  Json applied = Json::array();
  for (const MutationRecord& record : mutant.applied) {
    applied.push_back(MutationRecordToJson(record));
  }
  out["applied"] = std::move(applied);
  return out;
}

ProgramEntry ProgramEntryFromJson(const Json& json) {
  std::string id = StringField(json, "id");
  Origin origin =
      OriginFromName(StringField(json, "origin", "seed", /*required=*/false));
  std::optional<Program> program;
  try {
    program = Program::Parse(StringField(json, "source"), id,
                             StringField(json, "problem_id", id, false),
                             origin);
  } catch (const Error& e) {
    Malformed("record '" + id + "': " + e.what());
  }
  return ProgramEntry{std::move(*program),
                      StringField(json, "parent_id", "", false),
                      TestInput::FromText(StringField(json, "input", "", false))};
}

Json DatasetRecordToJson(const DatasetRecord& record) {
  Json out;
  out["id"] = record.id;
  out["tier"] = TierToken(record.tier);
  out["input_tokens"] = record.input_tokens;
  out["target_tokens"] = record.target_tokens;
  out["stdout"] = record.stdout_text;
  out["problem_id"] = record.problem_id;
  Json meta = Json::object();
  if (record.difficulty) {
    meta["difficulty"] = *record.difficulty;
  }
  if (record.flagged) {
    meta["flagged"] = true;
  }
  out["meta"] = std::move(meta);
  return out;
}

DatasetRecord DatasetRecordFromJson(const Json& json) {
  DatasetRecord record;
  record.id = StringField(json, "id");
  try {
    record.tier = TierFromName(StringField(json, "tier"));
  } catch (const Error& e) {
    Malformed(e.what());
  }
  record.input_tokens = StringField(json, "input_tokens");
  record.target_tokens = StringField(json, "target_tokens");
  record.stdout_text = StringField(json, "stdout", "", false);
  record.problem_id = StringField(json, "problem_id", "", false);
  if (json.contains("meta") && json["meta"].is_object()) {
    const Json& meta = json["meta"];
    if (meta.contains("difficulty") && meta["difficulty"].is_number()) {
      record.difficulty = meta["difficulty"].get<double>();
    }
    record.flagged = meta.value("flagged", false);
  }
  return record;
}

std::vector<ProgramEntry> LoadSeedDir(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::kIoError, "not a directory: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".py") {
      files.push_back(fs::relative(entry.path(), dir));
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<ProgramEntry> out;
  for (const fs::path& rel : files) {
    fs::path stem = rel;
    stem.replace_extension();
    std::string id = stem.generic_string();
    std::string problem_id = rel.has_parent_path()
                                 ? rel.parent_path().generic_string()
                                 : id;
    fs::path input_path = dir / rel;
    input_path.replace_extension(".in");
    TestInput input;
    if (fs::exists(input_path)) {
      input = TestInput::FromText(ReadTextFile(input_path));
    }
    std::optional<Program> program;
    try {
      program = Program::Parse(ReadTextFile(dir / rel), id, problem_id);
    } catch (const Error& e) {
      throw Error(e.code(), (dir / rel).string() + ": " + e.what());
    }
    out.push_back(ProgramEntry{std::move(*program), "", std::move(input)});
  }
  return out;
}

}  // namespace cexec
