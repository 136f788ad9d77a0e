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

#include "cexec/dataset.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "cexec/error.h"
#include "cexec/mutation.h"
#include "cexec/python/tokenizer.h"

namespace cexec {

namespace {

[[noreturn]] void Malformed(const std::string& id, const std::string& what) {
  throw Error(ErrorCode::kMalformedRecord,
              "record '" + id + "': " + what);
}

bool IsIdentifier(std::string_view name) {
  if (name.empty() ||
      !python::IsIdentifierStart(static_cast<unsigned char>(name[0])) ||
      python::IsKeyword(name)) {
    return false;
  }
  return std::all_of(name.begin(), name.end(), [](char c) {
    return python::IsIdentifierChar(static_cast<unsigned char>(c));
  });
}

StateMap Sorted(StateMap state) {
  std::sort(state.begin(), state.end());
  return state;
}

std::size_t TokenCount(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::size_t count = 0;
  std::string token;
  while (in >> token) {
    ++count;
  }
  return count;
}

std::size_t StateEntries(std::string_view target) {
  std::size_t entries = 0;
  for (const TraceLine& line : DecodeTrace(target).trace.lines) {
    entries += line.state.size();
  }
  return entries;
}

}  // namespace

DatasetRecord MakeTraceRecord(const Program& program, const Trace& trace,
                              TierPrefix tier) {
  DatasetRecord record;
  record.id = program.id();
  record.tier = tier;
  record.input_tokens = EncodeCode(program, tier);
  record.target_tokens = EncodeTrace(trace);
  record.stdout_text = trace.stdout_text;
  record.problem_id = program.problem_id();
  return record;
}

std::string SingleLineProgram(const SingleLineSource& source) {
  if (source.init.empty()) {
    return source.line;
  }
  std::string program = source.init;
  if (program.back() != '\n') {
    program.push_back('\n');
  }
  return program + source.line;
}

std::vector<DatasetRecord> IngestSingleLine(
    const std::vector<SingleLineSource>& sources,
    const HarnessConfig* oracle) {
  std::vector<DatasetRecord> records;
  for (const SingleLineSource& source : sources) {
    std::string_view line = source.line;
    if (!line.empty() && line.back() == '\n') {
      line.remove_suffix(1);
    }
    if (line.find_first_not_of(" \t") == std::string_view::npos ||
        line.find('\n') != std::string_view::npos) {
      Malformed(source.id, "the code must be exactly one line");
    }
    std::set<std::string, std::less<>> names;
    for (const auto& [name, value] : source.final_state) {
      if (!IsIdentifier(name) || !names.insert(name).second) {
        Malformed(source.id, "bad or repeated identifier '" + name + "'");
      }
      if (value.empty()) {
        Malformed(source.id, "empty value for '" + name + "'");
      }
    }
    SingleLineSource normalized = source;
    normalized.line = std::string(line);
    std::optional<Program> program;
    try {
      program = Program::Parse(SingleLineProgram(normalized), source.id,
                               source.problem_id, Origin::kSingleLine);
    } catch (const Error& e) {
      Malformed(source.id, e.what());
    }
    TraceLine target{program->line_count(), source.final_state};

    DatasetRecord record;
    record.id = source.id;
    record.tier = TierPrefix::kSingleLine;
    record.input_tokens = EncodeCode(*program, TierPrefix::kSingleLine);
    record.target_tokens = EncodeTraceLine(target);
    record.problem_id = source.problem_id;
    if (oracle != nullptr) {
      ExecutionResult run = Execute(*oracle, *program, TestInput{});
      record.flagged = run.status != ExecutionStatus::kOk ||
                       run.trace.lines.empty() ||
                       run.trace.lines.back().line_no != target.line_no ||
                       Sorted(run.trace.lines.back().state) !=
                           Sorted(target.state);
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kValid:
      return "valid";
    case Split::kTest:
      return "test";
  }
  return "train";
}

std::map<std::string, Split> AssignProblems(
    std::vector<std::string> problem_ids, const SplitRatios& ratios,
    std::uint64_t seed) {
  if (ratios.train < 0 || ratios.valid < 0 || ratios.test < 0 ||
      std::abs(ratios.train + ratios.valid + ratios.test - 1.0) > 1e-9) {
    throw Error(ErrorCode::kDomainError,
                "split ratios must be non-negative and sum to 1");
  }
  std::sort(problem_ids.begin(), problem_ids.end());
  problem_ids.erase(std::unique(problem_ids.begin(), problem_ids.end()),
                    problem_ids.end());
  Rng rng(seed);
  std::shuffle(problem_ids.begin(), problem_ids.end(), rng);
  auto n = static_cast<double>(problem_ids.size());
  auto n_valid = static_cast<std::size_t>(std::llround(n * ratios.valid));
  auto n_test = static_cast<std::size_t>(std::llround(n * ratios.test));
  n_test = std::min(n_test, problem_ids.size());
  n_valid = std::min(n_valid, problem_ids.size() - n_test);
  std::map<std::string, Split> assignment;
  for (std::size_t i = 0; i < problem_ids.size(); ++i) {
    Split split = i < n_test             ? Split::kTest
                  : i < n_test + n_valid ? Split::kValid
                                         : Split::kTrain;
    assignment[problem_ids[i]] = split;
  }
  return assignment;
}

SplitIndices BuildSplit(const std::vector<SplitMember>& members,
                        const SplitRatios& ratios, std::uint64_t seed) {
  std::vector<std::string> problems;
  for (const SplitMember& member : members) {
    if (!member.is_mutant) {
      problems.push_back(member.problem_id);
    }
  }
  std::map<std::string, Split> assignment =
      AssignProblems(std::move(problems), ratios, seed);
  SplitIndices out;
  for (std::size_t i = 0; i < members.size(); ++i) {
    auto it = assignment.find(members[i].problem_id);
    if (it == assignment.end()) {
      continue;
    }
    switch (it->second) {
      case Split::kTrain:
        out.train.push_back(i);
        break;
      case Split::kValid:
        out.valid.push_back(i);
        break;
      case Split::kTest:
        if (!members[i].is_mutant) {
          out.test.push_back(i);
        }
        break;
    }
  }
  return out;
}

std::vector<DatasetRecord> SelectHard(
    const std::vector<DatasetRecord>& records, double fraction,
    const std::map<std::string, double>* losses) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::kDomainError, "hard fraction must be in (0, 1]");
  }
  struct Ranked {
    double loss;
    std::size_t entries;
    std::size_t tokens;
    std::size_t index;
  };
  std::vector<Ranked> ranked;
  for (std::size_t i = 0; i < records.size(); ++i) {
    Ranked r{0.0, 0, 0, i};
    if (losses != nullptr) {
      auto it = losses->find(records[i].id);
      if (it == losses->end()) {
        throw Error(ErrorCode::kMissingDifficulty,
                    "no difficulty for record '" + records[i].id + "'");
      }
      r.loss = it->second;
    } else {
      r.entries = StateEntries(records[i].target_tokens);
      r.tokens = TokenCount(records[i].target_tokens);
    }
    ranked.push_back(r);
  }
  std::sort(ranked.begin(), ranked.end(),
            [&](const Ranked& a, const Ranked& b) {
              if (a.loss != b.loss) return a.loss > b.loss;
              if (a.entries != b.entries) return a.entries > b.entries;
              if (a.tokens != b.tokens) return a.tokens > b.tokens;
              return records[a.index].id < records[b.index].id;
            });
  auto keep = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(records.size())));
  std::vector<DatasetRecord> out;
  for (std::size_t i = 0; i < keep && i < ranked.size(); ++i) {
    DatasetRecord record = records[ranked[i].index];
    if (losses != nullptr) {
      record.difficulty = ranked[i].loss;
    }
    out.push_back(std::move(record));
  }
  return out;
}

std::string_view StageName(Stage stage) {
  switch (stage) {
    case Stage::kS1:
      return "S1";
    case Stage::kS2:
      return "S2";
    case Stage::kS3:
      return "S3";
  }
  return "S1";
}

Stage StageFromName(std::string_view name) {
  for (Stage stage : {Stage::kS1, Stage::kS2, Stage::kS3}) {
    std::string_view canonical = StageName(stage);
    if (name == canonical ||
        (name.size() == 2 && (name[0] | 0x20) == 's' && name[1] == canonical[1])) {
      return stage;
    }
  }
  throw Error(ErrorCode::kUsage, "unknown stage '" + std::string(name) + "'");
}

std::vector<DatasetRecord> MaterializeStage(Stage stage,
                                            const Corpora& corpora,
                                            const StageOptions& options) {
  std::vector<DatasetRecord> out;
  if (stage == Stage::kS1) {
    out = corpora.single_line;
  } else {
    out = SelectHard(corpora.single_line, options.hard_fraction,
                     options.losses);
    out.insert(out.end(), corpora.tutorial.begin(), corpora.tutorial.end());
    if (stage == Stage::kS3) {
      out.insert(out.end(), corpora.code_net_mut.begin(),
                 corpora.code_net_mut.end());
    }
  }
  Rng rng(options.seed);
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

CorpusStats ComputeStats(const std::vector<TracedProgram>& corpus) {
  if (corpus.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "no programs for statistics");
  }
  CorpusStats stats;
  stats.n_programs = static_cast<std::int64_t>(corpus.size());
  double code = 0.0;
  double trace = 0.0;
  double states = 0.0;
  for (const TracedProgram& item : corpus) {
    code += item.program.line_count();
    trace += static_cast<double>(item.trace.lines.size());
    std::size_t most = 0;
    for (const TraceLine& line : item.trace.lines) {
      most = std::max(most, line.state.size());
    }
    states += static_cast<double>(most);
  }
  auto n = static_cast<double>(corpus.size());
  stats.avg_code_lines = code / n;
  stats.avg_trace_lines = trace / n;
  stats.avg_state_num = states / n;
  return stats;
}

}  // namespace cexec
