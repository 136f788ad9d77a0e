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

#include "cexec/metrics.h"

#include <algorithm>
#include <map>
#include <tuple>

#include "cexec/error.h"
#include "json.hpp"

namespace cexec {

namespace {

std::string_view StripNewline(std::string_view text) {
  if (!text.empty() && text.back() == '\n') {
    text.remove_suffix(1);
  }
  return text;
}

StateMap Sorted(StateMap state) {
  std::sort(state.begin(), state.end());
  return state;
}

template <typename Key>
MatchCounts Intersect(const std::vector<Key>& pred,
                      const std::vector<Key>& gold) {
  std::map<Key, std::int64_t> remaining;
  for (const Key& key : gold) {
    ++remaining[key];
  }
  MatchCounts counts;
  counts.predicted = static_cast<std::int64_t>(pred.size());
  counts.gold = static_cast<std::int64_t>(gold.size());
  for (const Key& key : pred) {
    auto it = remaining.find(key);
    if (it != remaining.end() && it->second > 0) {
      --it->second;
      ++counts.matched;
    }
  }
  return counts;
}

using LineKey = std::pair<int, StateMap>;
using IdentifierKey = std::tuple<int, std::string, std::string>;

std::vector<LineKey> LineKeys(const Trace& trace) {
  std::vector<LineKey> keys;
  for (const TraceLine& line : trace.lines) {
    keys.emplace_back(line.line_no, Sorted(line.state));
  }
  return keys;
}

std::vector<IdentifierKey> IdentifierKeys(const Trace& trace) {
  std::vector<IdentifierKey> keys;
  for (const TraceLine& line : trace.lines) {
    for (const auto& [name, value] : line.state) {
      keys.emplace_back(line.line_no, name, value);
    }
  }
  return keys;
}

double Ratio(std::int64_t num, std::int64_t den, std::int64_t other) {
  if (den == 0) {
    return other == 0 ? 1.0 : 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

OutputMatch OutputAccuracy(std::string_view pred_stdout,
                           std::string_view gold_stdout) {
  if (gold_stdout.empty()) {
    return OutputMatch::kNotApplicable;
  }
  return StripNewline(pred_stdout) == StripNewline(gold_stdout)
             ? OutputMatch::kCorrect
             : OutputMatch::kIncorrect;
}

bool TraceAccuracy(const Trace& pred, const Trace& gold) {
  if (pred.lines.size() != gold.lines.size()) {
    return false;
  }
  for (std::size_t i = 0; i < pred.lines.size(); ++i) {
    if (pred.lines[i].line_no != gold.lines[i].line_no ||
        Sorted(pred.lines[i].state) != Sorted(gold.lines[i].state)) {
      return false;
    }
  }
  return true;
}

Scores ScoresFromCounts(const MatchCounts& counts) {
  Scores scores;
  scores.precision = Ratio(counts.matched, counts.predicted, counts.gold);
  scores.recall = Ratio(counts.matched, counts.gold, counts.predicted);
  double sum = scores.precision + scores.recall;
  scores.f1 = sum == 0.0 ? 0.0 : 2.0 * scores.precision * scores.recall / sum;
  return scores;
}

MatchCounts LineMatches(const Trace& pred, const Trace& gold) {
  return Intersect(LineKeys(pred), LineKeys(gold));
}

MatchCounts IdentifierMatches(const Trace& pred, const Trace& gold) {
  return Intersect(IdentifierKeys(pred), IdentifierKeys(gold));
}

Scores LineScores(const Trace& pred, const Trace& gold) {
  return ScoresFromCounts(LineMatches(pred, gold));
}

Scores IdentifierScores(const Trace& pred, const Trace& gold) {
  return ScoresFromCounts(IdentifierMatches(pred, gold));
}

ExampleScores ScoreExample(const Trace& pred, bool pred_malformed,
                           std::string_view pred_stdout, const Trace& gold,
                           std::string_view gold_stdout) {
  ExampleScores scores;
  scores.output = OutputAccuracy(pred_stdout, gold_stdout);
  scores.trace_exact = !pred_malformed && TraceAccuracy(pred, gold);
  scores.line = LineMatches(pred, gold);
  scores.identifier = IdentifierMatches(pred, gold);
  return scores;
}

EvalReport Aggregate(const std::vector<ExampleScores>& examples) {
  if (examples.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "no examples to aggregate");
  }
  EvalReport report;
  MatchCounts line;
  MatchCounts identifier;
  std::int64_t exact = 0;
  std::int64_t output_correct = 0;
  for (const ExampleScores& example : examples) {
    line += example.line;
    identifier += example.identifier;
    exact += example.trace_exact ? 1 : 0;
    if (example.output != OutputMatch::kNotApplicable) {
      ++report.n_output_examples;
      output_correct += example.output == OutputMatch::kCorrect ? 1 : 0;
    }
  }
  report.n_examples = static_cast<std::int64_t>(examples.size());
  report.trace_acc =
      static_cast<double>(exact) / static_cast<double>(report.n_examples);
  if (report.n_output_examples > 0) {
    report.output_acc = static_cast<double>(output_correct) /
                        static_cast<double>(report.n_output_examples);
  }
  report.line = ScoresFromCounts(line);
  report.identifier = ScoresFromCounts(identifier);
  return report;
}

std::string ReportJson(const EvalReport& report) {
  auto scores = [](const Scores& s) {
    nlohmann::ordered_json out;
    out["Precision"] = s.precision;
    out["Recall"] = s.recall;
    out["F1"] = s.f1;
    return out;
  };
  nlohmann::ordered_json out;
  out["General"]["Output Acc."] =
      report.output_acc ? nlohmann::ordered_json(*report.output_acc)
                        : nlohmann::ordered_json("not_applicable");
  out["General"]["Trace Acc."] = report.trace_acc;
  out["Line"] = scores(report.line);
  out["Identifier"] = scores(report.identifier);
  out["n_examples"] = report.n_examples;
  out["n_output_examples"] = report.n_output_examples;
  return out.dump(2);
}

}  // namespace cexec
