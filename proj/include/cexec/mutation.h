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

#ifndef CEXEC_MUTATION_H_
#define CEXEC_MUTATION_H_

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "cexec/operators.h"
#include "cexec/program.h"
#include "cexec/span.h"

namespace cexec {

using Rng = std::mt19937_64;

// One changed site. `site_span` indexes the parent source and `before` is
// exactly the parent text there; insertions have an empty span.
struct MutationRecord {
  MutationOperator op;
  Span site_span;
  std::string before;
  std::string after;

  friend bool operator==(const MutationRecord&,
                         const MutationRecord&) = default;
};

struct Mutant {
  Program program;
  std::string parent_id;
  std::vector<MutationRecord> applied;
  std::uint64_t rng_seed = 0;
};

// A replacement of `span` by `text`. Edits at the same offset are emitted in
// ascending `priority`; non-empty replacements use kReplacePriority so that
// insertions at their start come first.
struct SourceEdit {
  Span span;
  std::string text;
  int priority = 0;
};

inline constexpr int kReplacePriority = 2000;

struct PlannedMutation {
  MutationRecord record;
  std::vector<SourceEdit> edits;
};

// Computes the edits for applying `op` at `site` without touching the
// source. Throws Error(kInapplicableOperator).
PlannedMutation PlanMutation(const Program& program, const CandidateSite& site,
                             MutationOperator op, Rng& rng);

// Applies non-overlapping edits to `source`.
std::string ApplyEdits(std::string_view source, std::vector<SourceEdit> edits);

// Applies one operator at one site. The result keeps the parent's id and
// problem id with origin kMutant. Throws Error(kInapplicableOperator) or
// Error(kNonParsingResult).
Program ApplyOperator(const Program& program, const CandidateSite& site,
                      MutationOperator op, Rng& rng);

// Same as ApplyOperator, also returning the record of the change.
std::pair<Program, MutationRecord> ApplyOperatorRecorded(
    const Program& program, const CandidateSite& site, MutationOperator op,
    Rng& rng);

// Applies a replacement-choosing operator (AOR, ASR, ROR) with the given
// replacement instead of a random one. Throws Error(kInapplicableOperator)
// when the replacement is not in the operator's pool or equals the site
// text, or Error(kNonParsingResult).
Program ApplyReplacement(const Program& program, const CandidateSite& site,
                         MutationOperator op, std::string_view replacement);

// Seed for pass `pass` of a generation run rooted at `root`.
std::uint64_t PassSeed(std::uint64_t root, int pass);

// Runs `n` independent mutation passes over `seed`. In each pass every
// non-loop site is mutated with probability 0.5 and every loop site takes
// one of its loop operators or stays unchanged, uniformly. Passes that
// change nothing or do not parse are dropped; the rest are deduplicated by
// source text.
std::vector<Mutant> GenerateMutants(const Program& seed, int n,
                                    std::uint64_t rng_seed);

// Like GenerateMutants, restricted to CRP on numeric literals.
std::vector<Mutant> MutateConstantsOnly(const Program& seed, int n,
                                        std::uint64_t rng_seed);

}  // namespace cexec

#endif  // CEXEC_MUTATION_H_
