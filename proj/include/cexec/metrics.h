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

#ifndef CEXEC_METRICS_H_
#define CEXEC_METRICS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cexec/trace.h"

namespace cexec {

enum class OutputMatch { kCorrect, kIncorrect, kNotApplicable };

// Exact match after removing one trailing newline from each side; not
// applicable when the gold output is empty.
OutputMatch OutputAccuracy(std::string_view pred_stdout,
                           std::string_view gold_stdout);

// Positional equality with each state compared as an unordered mapping.
bool TraceAccuracy(const Trace& pred, const Trace& gold);

struct MatchCounts {
  std::int64_t matched = 0;
  std::int64_t predicted = 0;
  std::int64_t gold = 0;

  MatchCounts& operator+=(const MatchCounts& other) {
    matched += other.matched;
    predicted += other.predicted;
    gold += other.gold;
    return *this;
  }
  friend bool operator==(const MatchCounts&, const MatchCounts&) = default;
};

struct Scores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// A zero denominator gives 1 when both sides are empty and 0 otherwise.
Scores ScoresFromCounts(const MatchCounts& counts);

// Multiset intersection of (line_no, unordered state) pairs.
MatchCounts LineMatches(const Trace& pred, const Trace& gold);
// Multiset intersection of (line_no, identifier, value) triples.
MatchCounts IdentifierMatches(const Trace& pred, const Trace& gold);

Scores LineScores(const Trace& pred, const Trace& gold);
Scores IdentifierScores(const Trace& pred, const Trace& gold);

struct ExampleScores {
  OutputMatch output = OutputMatch::kNotApplicable;
  bool trace_exact = false;
  MatchCounts line;
  MatchCounts identifier;
};

// A malformed prediction scores its decoded prefix and never counts as an
// exact trace.
ExampleScores ScoreExample(const Trace& pred, bool pred_malformed,
                           std::string_view pred_stdout, const Trace& gold,
                           std::string_view gold_stdout);

struct EvalReport {
  // Empty when no example has gold output.
  std::optional<double> output_acc;
  double trace_acc = 0.0;
  Scores line;
  Scores identifier;
  std::int64_t n_examples = 0;
  std::int64_t n_output_examples = 0;
};

// Example-level means for the accuracies and micro averages over summed
// match counts for the rest. Throws Error(kEmptyCorpus).
EvalReport Aggregate(const std::vector<ExampleScores>& examples);

// Report as JSON text grouped as General, Line and Identifier.
std::string ReportJson(const EvalReport& report);

}  // namespace cexec

#endif  // CEXEC_METRICS_H_
