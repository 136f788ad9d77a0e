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

#ifndef CEXEC_DATASET_H_
#define CEXEC_DATASET_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cexec/harness.h"
#include "cexec/program.h"
#include "cexec/trace.h"

namespace cexec {

struct DatasetRecord {
  std::string id;
  TierPrefix tier = TierPrefix::kCodeNetMut;
  std::string input_tokens;
  std::string target_tokens;
  std::string stdout_text;
  std::string problem_id;
  std::optional<double> difficulty;
  // Set when an oracle run disagreed with the stored target.
  bool flagged = false;
};

// Encodes a traced program: input is the code under `tier`, target the full
// trace.
DatasetRecord MakeTraceRecord(const Program& program, const Trace& trace,
                              TierPrefix tier);

// One external single-line transformation: initial assignments, the
// transforming line and the state after it.
struct SingleLineSource {
  std::string id;
  std::string init;
  std::string line;
  StateMap final_state;
  std::string problem_id;
};

// Builds [SINGLELINE] records without executing anything unless `oracle`
// is given, in which case records whose stored final state differs from the
// oracle's are kept and flagged. Throws Error(kMalformedRecord).
std::vector<DatasetRecord> IngestSingleLine(
    const std::vector<SingleLineSource>& sources,
    const HarnessConfig* oracle = nullptr);

// Program text of a single-line source: the initializations followed by the
// line.
std::string SingleLineProgram(const SingleLineSource& source);

enum class Split { kTrain, kValid, kTest };

std::string_view SplitName(Split split);

struct SplitRatios {
  double train = 0.8;
  double valid = 0.1;
  double test = 0.1;
};

// Problem ids in sorted order, shuffled with `seed`, then cut into
// round(n * valid) valid and round(n * test) test problems; the rest train.
// Throws Error(kDomainError) for negative ratios or ones not summing to 1.
std::map<std::string, Split> AssignProblems(
    std::vector<std::string> problem_ids, const SplitRatios& ratios,
    std::uint64_t seed);

struct SplitMember {
  std::string problem_id;
  bool is_mutant = false;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> valid;
  std::vector<std::size_t> test;
};

// Partitions items by problem. Mutants follow their problem's split except
// that test keeps none. Problems are assigned from the seed items only;
// mutants of unseen problems are dropped.
SplitIndices BuildSplit(const std::vector<SplitMember>& members,
                        const SplitRatios& ratios, std::uint64_t seed);

// The default reserves a third of SingleLine.
inline constexpr double kDefaultHardFraction = 1.0 / 3.0;

// Records ranked by difficulty, descending, ties by id; returns the first
// llround(fraction * n). With `losses` the difficulty is the given value
// per id (Error(kMissingDifficulty) for absent ids); otherwise it is the
// pair (state entries in the target, target token count).
// Throws Error(kDomainError) unless 0 < fraction <= 1.
std::vector<DatasetRecord> SelectHard(
    const std::vector<DatasetRecord>& records, double fraction,
    const std::map<std::string, double>* losses = nullptr);

enum class Stage { kS1, kS2, kS3 };

std::string_view StageName(Stage stage);
// Throws Error(kUsage).
Stage StageFromName(std::string_view name);

struct Corpora {
  std::vector<DatasetRecord> single_line;
  std::vector<DatasetRecord> tutorial;
  std::vector<DatasetRecord> code_net_mut;
};

struct StageOptions {
  double hard_fraction = kDefaultHardFraction;
  const std::map<std::string, double>* losses = nullptr;
  std::uint64_t seed = 0;
};

// S1: all SingleLine. S2: hard SingleLine and Tutorial. S3: S2 and
// CodeNetMut. Records are shuffled with `options.seed`.
std::vector<DatasetRecord> MaterializeStage(Stage stage,
                                            const Corpora& corpora,
                                            const StageOptions& options);

struct TracedProgram {
  Program program;
  Trace trace;
};

struct CorpusStats {
  std::int64_t n_programs = 0;
  double avg_code_lines = 0.0;
  double avg_trace_lines = 0.0;
  // Mean over traces of the largest state map in the trace.
  double avg_state_num = 0.0;
};

// Throws Error(kEmptyCorpus).
CorpusStats ComputeStats(const std::vector<TracedProgram>& corpus);

}  // namespace cexec

#endif  // CEXEC_DATASET_H_
