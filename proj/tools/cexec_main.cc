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

// Command-line entry point: corpus construction and evaluation pipelines.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cexec/dataset.h"
#include "cexec/downstream.h"
#include "cexec/error.h"
#include "cexec/harness.h"
#include "cexec/io.h"
#include "cexec/metrics.h"
#include "cexec/mutation.h"
#include "cexec/program.h"
#include "cexec/trace.h"

namespace fs = std::filesystem;

namespace cexec {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitHarness = 3;
constexpr std::string_view kVersion = "1.0.0";

// Writes `text` to `path`, or to stdout when the path is empty or "-".
void Emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    WriteTextFile(path, text);
  }
}

class Manifest {
 public:
  Manifest(std::string command, const CLI::App& sub)
      : command_(std::move(command)), config_(sub.config_to_str(true, false)) {}

  void Input(const std::string& path) {
    if (path.empty()) {
      return;
    }
    if (fs::is_directory(path)) {
      std::vector<fs::path> files;
      for (const auto& entry : fs::recursive_directory_iterator(path)) {
        if (entry.is_regular_file()) {
          files.push_back(entry.path());
        }
      }
      std::sort(files.begin(), files.end());
      for (const fs::path& file : files) {
        inputs_[file.generic_string()] = Sha256Hex(ReadTextFile(file));
      }
    } else {
      inputs_[path] = Sha256Hex(ReadTextFile(path));
    }
  }

  void Output(const std::string& path, const std::string& text) {
    outputs_[path.empty() ? "-" : path] = Sha256Hex(text);
  }

  void Set(const std::string& key, Json value) { extra_[key] = std::move(value); }

  void Write(const std::string& path) const {
    if (path.empty() || path == "-") {
      return;
    }
    Json out;
    out["tool"] = "cexec";
    out["version"] = kVersion;
    out["command"] = command_;
    out["config"] = config_;
    out["inputs"] = inputs_;
    out["outputs"] = outputs_;
    for (const auto& [key, value] : extra_) {
      out[key] = value;
    }
    WriteTextFile(path, out.dump(2) + "\n");
  }

 private:
  std::string command_;
  std::string config_;
  std::map<std::string, std::string> inputs_;
  std::map<std::string, std::string> outputs_;
  std::map<std::string, Json> extra_;
};

std::string ManifestPathFor(const std::string& out, const std::string& given) {
  if (!given.empty()) {
    return given;
  }
  if (out.empty() || out == "-") {
    return "";
  }
  return out + ".manifest.json";
}

struct HarnessOptions {
  std::string python = "python3";
  std::string hook;
  double time_s = 1.0;
  int max_lines = kMaxTraceLines;
  int workers = 0;

  void Register(CLI::App* sub, bool hook_required) {
    auto* hook_opt = sub->add_option("--hook", hook, "Trace hook script");
    if (hook_required) {
      hook_opt->required();
    }
    sub->add_option("--python", python, "Interpreter")->capture_default_str();
    sub->add_option("--time", time_s, "Seconds per run")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-lines", max_lines, "Trace record budget")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--workers", workers, "Parallel runs (0: all cores)")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
  }

  HarnessConfig Config() const {
    HarnessConfig config;
    config.python = python;
    config.hook_path = hook;
    config.limits.time_s = time_s;
    config.limits.max_trace_lines = max_lines;
    config.workers = workers;
    return config;
  }
};

std::vector<ProgramEntry> LoadPrograms(const std::string& seed_dir,
                                       const std::string& programs) {
  if (!seed_dir.empty()) {
    return LoadSeedDir(seed_dir);
  }
  std::vector<ProgramEntry> out;
  for (const Json& record : ReadJsonl(programs)) {
    out.push_back(ProgramEntryFromJson(record));
  }
  return out;
}

// --- mutate ---------------------------------------------------------------

struct MutateOptions {
  std::string seed_dir;
  std::string programs;
  int n = 20;
  std::uint64_t rng = 0;
  bool constants_only = false;
  bool keep_stdin = false;
  bool no_seeds = false;
  std::string out;
  std::string manifest;
};

int RunMutate(const MutateOptions& o, const CLI::App& sub) {
  Manifest manifest("mutate", sub);
  manifest.Input(o.seed_dir);
  manifest.Input(o.programs);
  std::vector<Json> records;
  std::int64_t n_mutants = 0;
  std::vector<ProgramEntry> seeds = LoadPrograms(o.seed_dir, o.programs);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const ProgramEntry& entry = seeds[i];
    Program seed = o.keep_stdin ? entry.program
                                : RewriteStdin(entry.program, entry.input);
    if (!o.no_seeds) {
      records.push_back(ProgramRecord(seed, entry.parent_id, entry.input));
    }
    std::uint64_t seed_rng = PassSeed(o.rng, static_cast<int>(i));
    std::vector<Mutant> mutants =
        o.constants_only ? MutateConstantsOnly(seed, o.n, seed_rng)
                         : GenerateMutants(seed, o.n, seed_rng);
    for (const Mutant& mutant : mutants) {
      records.push_back(MutantRecord(mutant, entry.input));
      ++n_mutants;
    }
  }
  std::string text = ToJsonl(records);
  Emit(o.out, text);
  manifest.Output(o.out, text);
  manifest.Set("n_seeds", static_cast<std::int64_t>(seeds.size()));
  manifest.Set("n_mutants", n_mutants);
  manifest.Write(ManifestPathFor(o.out, o.manifest));
  return kExitOk;
}

// --- trace ----------------------------------------------------------------

struct TraceOptions {
  std::string seed_dir;
  std::string programs;
  HarnessOptions harness;
  bool only_ok = false;
  std::string out;
  std::string manifest;
};

int RunTrace(const TraceOptions& o, const CLI::App& sub) {
  Manifest manifest("trace", sub);
  manifest.Input(o.seed_dir);
  manifest.Input(o.programs);
  manifest.Input(o.harness.hook);
  std::vector<ProgramEntry> entries = LoadPrograms(o.seed_dir, o.programs);
  HarnessConfig config = o.harness.Config();
  std::vector<std::optional<ExecutionResult>> results(entries.size());
  ParallelFor(entries.size(), config.workers, [&](std::size_t i) {
    results[i] = Execute(config, entries[i].program, entries[i].input);
  });
  std::vector<Json> records;
  std::map<std::string, std::int64_t> by_status;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const ExecutionResult& result = *results[i];
    ++by_status[std::string(StatusName(result.status))];
    if (o.only_ok && result.status != ExecutionStatus::kOk) {
      continue;
    }
    Json record = ProgramRecord(entries[i].program, entries[i].parent_id,
                                entries[i].input);
    record["status"] = StatusName(result.status);
    record["trace"] = TraceToJson(result.trace);
    records.push_back(std::move(record));
  }
  std::string text = ToJsonl(records);
  Emit(o.out, text);
  manifest.Output(o.out, text);
  manifest.Set("status_counts", by_status);
  manifest.Write(ManifestPathFor(o.out, o.manifest));
  return kExitOk;
}

// --- build-dataset --------------------------------------------------------

struct BuildOptions {
  std::string codenetmut;
  std::string singleline;
  std::string tutorial;
  std::string losses;
  std::string oracle_hook;
  std::string python = "python3";
  std::vector<double> ratios = {0.8, 0.1, 0.1};
  double hard_fraction = kDefaultHardFraction;
  std::uint64_t rng = 0;
  std::string out_dir;
};

std::vector<TracedProgram> LoadTraced(const std::string& path,
                                      bool only_ok = true) {
  std::vector<TracedProgram> out;
  for (const Json& record : ReadJsonl(path)) {
    ProgramEntry entry = ProgramEntryFromJson(record);
    if (!record.contains("trace")) {
      throw Error(ErrorCode::kMalformedRecord,
                  "record '" + entry.program.id() + "' has no trace");
    }
    Trace trace = TraceFromJson(record["trace"]);
    if (only_ok && trace.status != ExecutionStatus::kOk) {
      continue;
    }
    out.push_back(TracedProgram{std::move(entry.program), std::move(trace)});
  }
  return out;
}

std::vector<SingleLineSource> LoadSingleLine(const std::string& path) {
  std::vector<SingleLineSource> out;
  for (const Json& record : ReadJsonl(path)) {
    auto text = [&](const char* name, bool required) -> std::string {
      if (!record.is_object() || !record.contains(name)) {
        if (required) {
          throw Error(ErrorCode::kMalformedRecord,
                      std::string("single-line record lacks '") + name + "'");
        }
        return "";
      }
      if (!record[name].is_string()) {
        throw Error(ErrorCode::kMalformedRecord,
                    std::string("single-line field '") + name +
                        "' is not text");
      }
      return record[name].get<std::string>();
    };
    SingleLineSource source;
    source.id = text("id", true);
    source.init = text("init", false);
    source.line = text("line", true);
    source.problem_id = text("problem_id", false);
    if (!record.contains("final")) {
      throw Error(ErrorCode::kMalformedRecord,
                  "single-line record '" + source.id + "' lacks 'final'");
    }
    source.final_state = StateFromJson(record["final"]);
    out.push_back(std::move(source));
  }
  return out;
}

std::map<std::string, double> LoadLosses(const std::string& path) {
  std::map<std::string, double> losses;
  for (const Json& record : ReadJsonl(path)) {
    if (!record.is_object() || !record.contains("id") ||
        !record["id"].is_string() || !record.contains("loss") ||
        !record["loss"].is_number()) {
      throw Error(ErrorCode::kMalformedRecord,
                  "loss records need text 'id' and numeric 'loss'");
    }
    losses[record["id"].get<std::string>()] = record["loss"].get<double>();
  }
  return losses;
}

std::vector<Json> ToJson(const std::vector<DatasetRecord>& records) {
  std::vector<Json> out;
  for (const DatasetRecord& record : records) {
    out.push_back(DatasetRecordToJson(record));
  }
  return out;
}

int RunBuildDataset(const BuildOptions& o, const CLI::App& sub) {
  if (o.ratios.size() != 3) {
    throw Error(ErrorCode::kUsage, "--ratios takes train,valid,test");
  }
  Manifest manifest("build-dataset", sub);
  manifest.Input(o.codenetmut);
  manifest.Input(o.singleline);
  manifest.Input(o.tutorial);
  manifest.Input(o.losses);

  std::vector<TracedProgram> traced = LoadTraced(o.codenetmut);
  std::vector<SplitMember> members;
  for (const TracedProgram& item : traced) {
    members.push_back(SplitMember{
        item.program.problem_id(), item.program.origin() == Origin::kMutant});
  }
  SplitIndices split = BuildSplit(
      members, SplitRatios{o.ratios[0], o.ratios[1], o.ratios[2]}, o.rng);
  auto records_at = [&](const std::vector<std::size_t>& indices) {
    std::vector<DatasetRecord> out;
    for (std::size_t i : indices) {
      out.push_back(MakeTraceRecord(traced[i].program, traced[i].trace,
                                    TierPrefix::kCodeNetMut));
    }
    return out;
  };

  Corpora corpora;
  corpora.code_net_mut = records_at(split.train);
  if (!o.singleline.empty()) {
    std::optional<HarnessConfig> oracle;
    if (!o.oracle_hook.empty()) {
      oracle = HarnessConfig{};
      oracle->python = o.python;
      oracle->hook_path = o.oracle_hook;
    }
    corpora.single_line = IngestSingleLine(LoadSingleLine(o.singleline),
                                           oracle ? &*oracle : nullptr);
  }
  if (!o.tutorial.empty()) {
    for (const TracedProgram& item : LoadTraced(o.tutorial)) {
      corpora.tutorial.push_back(
          MakeTraceRecord(item.program, item.trace, TierPrefix::kTutorial));
    }
  }
  std::optional<std::map<std::string, double>> losses;
  if (!o.losses.empty()) {
    losses = LoadLosses(o.losses);
  }

  fs::path dir(o.out_dir);
  auto write = [&](const std::string& name,
                   const std::vector<DatasetRecord>& records) {
    std::string text = ToJsonl(ToJson(records));
    std::string path = (dir / name).string();
    WriteTextFile(path, text);
    manifest.Output(path, text);
  };
  write("train.jsonl", corpora.code_net_mut);
  write("valid.jsonl", records_at(split.valid));
  write("test.jsonl", records_at(split.test));
  Json counts;
  counts["train"] = split.train.size();
  counts["valid"] = split.valid.size();
  counts["test"] = split.test.size();
  counts["singleline"] = corpora.single_line.size();
  counts["tutorial"] = corpora.tutorial.size();
  StageOptions stage_options;
  stage_options.hard_fraction = o.hard_fraction;
  stage_options.losses = losses ? &*losses : nullptr;
  stage_options.seed = o.rng;
  for (Stage stage : {Stage::kS1, Stage::kS2, Stage::kS3}) {
    std::vector<DatasetRecord> records =
        MaterializeStage(stage, corpora, stage_options);
    std::string name(StageName(stage));
    counts[name] = records.size();
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    write("stage_" + name + ".jsonl", records);
  }
  manifest.Set("counts", counts);
  manifest.Write((dir / "manifest.json").string());
  return kExitOk;
}

// --- encode ---------------------------------------------------------------

struct EncodeOptions {
  std::string program;
  std::string traced;
  std::string tier = "codenetmut";
  std::string out;
  std::string manifest;
};

int RunEncode(const EncodeOptions& o, const CLI::App& sub) {
  Manifest manifest("encode", sub);
  manifest.Input(o.program);
  manifest.Input(o.traced);
  TierPrefix tier = TierFromName(o.tier);
  std::string text;
  if (!o.program.empty()) {
    Program program = Program::Parse(ReadTextFile(o.program));
    text = EncodeCode(program, tier) + "\n";
  } else {
    std::vector<Json> records;
    for (const TracedProgram& item : LoadTraced(o.traced, false)) {
      records.push_back(
          DatasetRecordToJson(MakeTraceRecord(item.program, item.trace, tier)));
    }
    text = ToJsonl(records);
  }
  Emit(o.out, text);
  manifest.Output(o.out, text);
  manifest.Write(ManifestPathFor(o.out, o.manifest));
  return kExitOk;
}

// --- evaluate -------------------------------------------------------------

struct EvaluateOptions {
  std::string pred;
  std::string gold;
  std::string out;
  std::string manifest;
};

std::string FirstText(const Json& record, std::initializer_list<const char*> names,
                      bool required) {
  for (const char* name : names) {
    if (record.is_object() && record.contains(name)) {
      if (!record[name].is_string()) {
        throw Error(ErrorCode::kMalformedRecord,
                    std::string("field '") + name + "' is not text");
      }
      return record[name].get<std::string>();
    }
  }
  if (required) {
    throw Error(ErrorCode::kMalformedRecord,
                std::string("record lacks '") + *names.begin() + "'");
  }
  return "";
}

int RunEvaluate(const EvaluateOptions& o, const CLI::App& sub) {
  Manifest manifest("evaluate", sub);
  manifest.Input(o.pred);
  manifest.Input(o.gold);
  struct Prediction {
    std::string tokens;
    std::string stdout_text;
  };
  std::map<std::string, Prediction> predictions;
  for (const Json& record : ReadJsonl(o.pred)) {
    std::string id = FirstText(record, {"example_id", "id"}, true);
    predictions[id] = Prediction{
        FirstText(record, {"predicted_tokens", "target_tokens"}, true),
        FirstText(record, {"predicted_stdout", "stdout"}, false)};
  }
  std::vector<ExampleScores> scores;
  std::int64_t missing = 0;
  std::int64_t malformed = 0;
  for (const Json& record : ReadJsonl(o.gold)) {
    std::string id = FirstText(record, {"id", "example_id"}, true);
    DecodedTrace gold =
        DecodeTrace(FirstText(record, {"target_tokens"}, true));
    if (gold.malformed) {
      throw Error(ErrorCode::kMalformedRecord,
                  "gold target of '" + id + "' does not decode");
    }
    std::string gold_stdout = FirstText(record, {"stdout"}, false);
    auto it = predictions.find(id);
    if (it == predictions.end()) {
      ++missing;
      scores.push_back(ScoreExample(Trace{}, true, "", gold.trace, gold_stdout));
      continue;
    }
    DecodedTrace pred = DecodeTrace(it->second.tokens);
    malformed += pred.malformed ? 1 : 0;
    scores.push_back(ScoreExample(pred.trace, pred.malformed,
                                  it->second.stdout_text, gold.trace,
                                  gold_stdout));
  }
  std::string text = ReportJson(Aggregate(scores)) + "\n";
  Emit(o.out, text);
  manifest.Output(o.out, text);
  manifest.Set("missing_predictions", missing);
  manifest.Set("malformed_predictions", malformed);
  manifest.Write(ManifestPathFor(o.out, o.manifest));
  return kExitOk;
}

// --- search-eval ----------------------------------------------------------

struct SearchOptions {
  std::string corpus;
  std::string outputs;
  HarnessOptions harness;
  std::string out;
  std::string manifest;
};

int RunSearchEval(const SearchOptions& o, const CLI::App& sub) {
  Manifest manifest("search-eval", sub);
  manifest.Input(o.corpus);
  manifest.Input(o.outputs);
  manifest.Input(o.harness.hook);
  struct Function {
    std::string id;
    std::string problem_id;
    std::optional<Program> program;
    TestInput input;
    std::string output;
  };
  std::vector<Function> functions;
  std::set<std::string> ids;
  for (const Json& record : ReadJsonl(o.corpus)) {
    Function f;
    f.id = FirstText(record, {"function_id", "id"}, true);
    f.problem_id = FirstText(record, {"problem_id"}, true);
    if (!ids.insert(f.id).second) {
      throw Error(ErrorCode::kMalformedRecord, "duplicate id '" + f.id + "'");
    }
    if (o.outputs.empty()) {
      f.program = Program::Parse(FirstText(record, {"source"}, true), f.id,
                                 f.problem_id);
      f.input = TestInput::FromText(FirstText(record, {"test_input"}, false));
    }
    functions.push_back(std::move(f));
  }
  std::string mode;
  if (!o.outputs.empty()) {
    mode = "predicted";
    std::map<std::string, std::string> outputs;
    for (const Json& record : ReadJsonl(o.outputs)) {
      outputs[FirstText(record, {"function_id", "example_id", "id"}, true)] =
          FirstText(record, {"predicted_stdout", "output", "stdout"}, true);
    }
    for (Function& f : functions) {
      auto it = outputs.find(f.id);
      if (it == outputs.end()) {
        throw Error(ErrorCode::kMalformedRecord,
                    "no predicted output for '" + f.id + "'");
      }
      f.output = it->second;
    }
  } else {
    if (o.harness.hook.empty()) {
      throw Error(ErrorCode::kUsage, "search-eval needs --outputs or --hook");
    }
    mode = "oracle";
    HarnessConfig config = o.harness.Config();
    ParallelFor(functions.size(), config.workers, [&](std::size_t i) {
      functions[i].output =
          Execute(config, *functions[i].program, functions[i].input)
              .stdout_text;
    });
  }
  std::vector<SearchInstance> instances;
  for (const Function& query : functions) {
    SearchInstance instance;
    instance.query_id = query.id;
    instance.query_output = query.output;
    instance.query_problem_id = query.problem_id;
    for (const Function& f : functions) {
      if (f.id != query.id) {
        instance.candidates.push_back(
            SearchCandidate{f.id, f.output, f.problem_id});
      }
    }
    instances.push_back(std::move(instance));
  }
  Json report;
  report["MAP"] = MeanAveragePrecision(instances);
  report["n_queries"] = instances.size();
  report["mode"] = mode;
  std::string text = report.dump(2) + "\n";
  Emit(o.out, text);
  manifest.Output(o.out, text);
  manifest.Write(ManifestPathFor(o.out, o.manifest));
  return kExitOk;
}

// --- rank-eval ------------------------------------------------------------

struct RankOptions {
  std::string ranking;
  int top_m = 50;
  std::vector<int> ks = {1, 5, 10};
  std::string out;
  std::string manifest;
};

int RunRankEval(const RankOptions& o, const CLI::App& sub) {
  Manifest manifest("rank-eval", sub);
  manifest.Input(o.ranking);
  std::vector<double> sums(o.ks.size(), 0.0);
  std::int64_t n = 0;
  for (const Json& record : ReadJsonl(o.ranking)) {
    RankingInstance instance;
    instance.problem_id = FirstText(record, {"problem_id"}, false);
    instance.expected_output = FirstText(record, {"expected_output"}, true);
    if (!record.contains("solutions") || !record["solutions"].is_array()) {
      throw Error(ErrorCode::kMalformedRecord, "ranking record lacks solutions");
    }
    std::set<std::string> ids;
    for (const Json& s : record["solutions"]) {
      RankingSolution solution;
      solution.id = FirstText(s, {"id"}, true);
      solution.output = FirstText(s, {"output"}, true);
      if (!s.contains("is_correct") || !s["is_correct"].is_boolean()) {
        throw Error(ErrorCode::kMalformedRecord,
                    "solution '" + solution.id + "' lacks is_correct");
      }
      solution.is_correct = s["is_correct"].get<bool>();
      if (!ids.insert(solution.id).second) {
        throw Error(ErrorCode::kMalformedRecord,
                    "duplicate solution id '" + solution.id + "'");
      }
      instance.solutions.push_back(std::move(solution));
    }
    std::vector<double> scores = FilterAndScore(instance, o.top_m, o.ks);
    for (std::size_t i = 0; i < scores.size(); ++i) {
      sums[i] += scores[i];
    }
    ++n;
  }
  if (n == 0) {
    throw Error(ErrorCode::kEmptyCorpus, "no ranking instances");
  }
  Json report;
  for (std::size_t i = 0; i < o.ks.size(); ++i) {
    report["pass@" + std::to_string(o.ks[i])] =
        sums[i] / static_cast<double>(n);
  }
  report["n_problems"] = n;
  report["top_m"] = o.top_m;
  std::string text = report.dump(2) + "\n";
  Emit(o.out, text);
  manifest.Output(o.out, text);
  manifest.Write(ManifestPathFor(o.out, o.manifest));
  return kExitOk;
}

// --- stats ----------------------------------------------------------------

struct StatsOptions {
  std::string traced;
  bool all_statuses = false;
  std::string out;
  std::string manifest;
};

int RunStats(const StatsOptions& o, const CLI::App& sub) {
  Manifest manifest("stats", sub);
  manifest.Input(o.traced);
  CorpusStats stats = ComputeStats(LoadTraced(o.traced, !o.all_statuses));
  Json report;
  report["n_programs"] = stats.n_programs;
  report["avg_code_len"] = stats.avg_code_lines;
  report["avg_trace_len"] = stats.avg_trace_lines;
  report["avg_state_num"] = stats.avg_state_num;
  std::string text = report.dump(2) + "\n";
  Emit(o.out, text);
  manifest.Output(o.out, text);
  manifest.Write(ManifestPathFor(o.out, o.manifest));
  return kExitOk;
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage:
      return kExitUsage;
    case ErrorCode::kHarnessFailure:
      return kExitHarness;
    default:
      return kExitData;
  }
}

void ReportError(std::string_view code, std::string_view message) {
  Json record;
  record["error"] = code;
  record["message"] = message;
  std::cerr << record.dump() << "\n";
}

void AddOutput(CLI::App* sub, std::string& out, std::string& manifest) {
  sub->add_option("--out,-o", out, "Output file ('-' for stdout)");
  sub->add_option("--manifest", manifest,
                  "Manifest path (default: <out>.manifest.json)");
}

int Main(int argc, char** argv) {
  CLI::App app{"Mutated-program trace corpus builder and evaluator", "cexec"};
  app.set_config("--config", "", "TOML/INI file with option values");
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  std::function<int()> run;

  MutateOptions mutate;
  CLI::App* mutate_cmd = app.add_subcommand("mutate", "Generate mutants");
  {
    auto* group = mutate_cmd->add_option_group("source");
    group->add_option("--seed-dir", mutate.seed_dir, "Directory of *.py seeds");
    group->add_option("--programs", mutate.programs, "Program records (jsonl)");
    group->require_option(1);
    mutate_cmd->add_option("--n", mutate.n, "Mutation passes per seed")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    mutate_cmd->add_option("--rng", mutate.rng, "Root random seed")
        ->capture_default_str();
    mutate_cmd->add_flag("--constants-only", mutate.constants_only,
                         "Only replace numeric constants");
    mutate_cmd->add_flag("--keep-stdin", mutate.keep_stdin,
                         "Do not inline stdin reads");
    mutate_cmd->add_flag("--no-seeds", mutate.no_seeds,
                         "Omit the seed records");
    AddOutput(mutate_cmd, mutate.out, mutate.manifest);
    mutate_cmd->callback(
        [&] { run = [&] { return RunMutate(mutate, *mutate_cmd); }; });
  }

  TraceOptions trace;
  CLI::App* trace_cmd = app.add_subcommand("trace", "Execute and trace");
  {
    auto* group = trace_cmd->add_option_group("source");
    group->add_option("--seed-dir", trace.seed_dir, "Directory of *.py seeds");
    group->add_option("--programs", trace.programs, "Program records (jsonl)");
    group->require_option(1);
    trace.harness.Register(trace_cmd, true);
    trace_cmd->add_flag("--only-ok", trace.only_ok,
                        "Keep only runs with status ok");
    AddOutput(trace_cmd, trace.out, trace.manifest);
    trace_cmd->callback(
        [&] { run = [&] { return RunTrace(trace, *trace_cmd); }; });
  }

  BuildOptions build;
  CLI::App* build_cmd =
      app.add_subcommand("build-dataset", "Splits and curriculum stages");
  {
    build_cmd->add_option("--codenetmut", build.codenetmut,
                          "Traced seeds and mutants (jsonl)")
        ->required();
    build_cmd->add_option("--singleline", build.singleline,
                          "Single-line records (jsonl)");
    build_cmd->add_option("--tutorial", build.tutorial,
                          "Traced tutorial programs (jsonl)");
    build_cmd->add_option("--losses", build.losses,
                          "Per-record difficulty (jsonl of id, loss)");
    build_cmd->add_option("--oracle-hook", build.oracle_hook,
                          "Check single-line targets by execution");
    build_cmd->add_option("--python", build.python, "Interpreter")
        ->capture_default_str();
    build_cmd->add_option("--ratios", build.ratios, "train,valid,test")
        ->delimiter(',')
        ->capture_default_str();
    build_cmd->add_option("--hard-fraction", build.hard_fraction,
                          "Share of SingleLine kept for S2/S3")
        ->capture_default_str();
    build_cmd->add_option("--rng", build.rng, "Root random seed")
        ->capture_default_str();
    build_cmd->add_option("--out-dir", build.out_dir, "Output directory")
        ->required();
    build_cmd->callback(
        [&] { run = [&] { return RunBuildDataset(build, *build_cmd); }; });
  }

  EncodeOptions encode;
  CLI::App* encode_cmd = app.add_subcommand("encode", "Token encoding");
  {
    auto* group = encode_cmd->add_option_group("source");
    group->add_option("--program", encode.program, "One Python file");
    group->add_option("--traced", encode.traced, "Traced records (jsonl)");
    group->require_option(1);
    encode_cmd->add_option("--tier", encode.tier,
                           "singleline, tutorial or codenetmut")
        ->capture_default_str();
    AddOutput(encode_cmd, encode.out, encode.manifest);
    encode_cmd->callback(
        [&] { run = [&] { return RunEncode(encode, *encode_cmd); }; });
  }

  EvaluateOptions evaluate;
  CLI::App* evaluate_cmd =
      app.add_subcommand("evaluate", "Score predicted traces");
  {
    evaluate_cmd->add_option("--pred", evaluate.pred, "Predictions (jsonl)")
        ->required();
    evaluate_cmd->add_option("--gold", evaluate.gold, "Dataset records (jsonl)")
        ->required();
    AddOutput(evaluate_cmd, evaluate.out, evaluate.manifest);
    evaluate_cmd->callback(
        [&] { run = [&] { return RunEvaluate(evaluate, *evaluate_cmd); }; });
  }

  SearchOptions search;
  CLI::App* search_cmd =
      app.add_subcommand("search-eval", "Code-to-code search by output");
  {
    search_cmd->add_option("--corpus", search.corpus, "Functions (jsonl)")
        ->required();
    search_cmd->add_option("--outputs", search.outputs,
                           "Predicted outputs (jsonl); default runs --hook");
    search.harness.Register(search_cmd, false);
    AddOutput(search_cmd, search.out, search.manifest);
    search_cmd->callback(
        [&] { run = [&] { return RunSearchEval(search, *search_cmd); }; });
  }

  RankOptions rank;
  CLI::App* rank_cmd =
      app.add_subcommand("rank-eval", "Solution ranking by output");
  {
    rank_cmd->add_option("--ranking", rank.ranking, "Instances (jsonl)")
        ->required();
    rank_cmd->add_option("--top-m", rank.top_m, "Solutions kept")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    rank_cmd->add_option("--k", rank.ks, "k values")
        ->delimiter(',')
        ->capture_default_str();
    AddOutput(rank_cmd, rank.out, rank.manifest);
    rank_cmd->callback(
        [&] { run = [&] { return RunRankEval(rank, *rank_cmd); }; });
  }

  StatsOptions stats;
  CLI::App* stats_cmd = app.add_subcommand("stats", "Corpus statistics");
  {
    stats_cmd->add_option("--traced", stats.traced, "Traced records (jsonl)")
        ->required();
    stats_cmd->add_flag("--all-statuses", stats.all_statuses,
                        "Include runs that did not finish ok");
    AddOutput(stats_cmd, stats.out, stats.manifest);
    stats_cmd->callback(
        [&] { run = [&] { return RunStats(stats, *stats_cmd); }; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  try {
    return run();
  } catch (const Error& e) {
    ReportError(ErrorCodeName(e.code()), e.what());
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    ReportError("InternalError", e.what());
    return kExitData;
  }
}

}  // namespace
}  // namespace cexec

int main(int argc, char** argv) { return cexec::Main(argc, argv); }
