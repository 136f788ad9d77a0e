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

#include "cexec/mutation.h"

#include <algorithm>
#include <array>
#include <limits>
#include <unordered_set>

#include "cexec/error.h"
#include "cexec/python/literals.h"

namespace cexec {

using python::Node;
using python::NodeKind;

namespace {

constexpr std::array<std::string_view, 7> kArithmeticPool = {
    "+", "-", "*", "/", "//", "%", "**"};
constexpr std::array<std::string_view, 7> kAugmentedPool = {
    "+=", "-=", "*=", "/=", "//=", "%=", "**="};
constexpr std::array<std::string_view, 6> kRelationalPool = {
    "<", "<=", ">", ">=", "==", "!="};
constexpr std::string_view kStringAlphabet =
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
constexpr double kConstantStddev = 100.0;

// Priority of insertions placed at the start of a loop body.
constexpr int kOpenPriority = 1000;

template <std::size_t N>
std::string PickOther(const std::array<std::string_view, N>& pool,
                      std::string_view current, Rng& rng) {
  std::vector<std::string_view> choices;
  for (std::string_view candidate : pool) {
    if (candidate != current) {
      choices.push_back(candidate);
    }
  }
  std::uniform_int_distribution<std::size_t> pick(0, choices.size() - 1);
  return std::string(choices[pick(rng)]);
}

PlannedMutation Replace(MutationOperator op, std::string_view source,
                        Span span, std::string after) {
  PlannedMutation plan;
  plan.record = MutationRecord{op, span, std::string(span.SliceOf(source)),
                               after};
  plan.edits.push_back(SourceEdit{span, std::move(after), kReplacePriority});
  return plan;
}

PlannedMutation Insert(MutationOperator op, std::size_t at, std::string text,
                       int priority) {
  PlannedMutation plan;
  plan.record = MutationRecord{op, Span{at, at}, "", text};
  plan.edits.push_back(SourceEdit{Span{at, at}, std::move(text), priority});
  return plan;
}

std::string MutateNumber(std::string_view text, Rng& rng) {
  auto literal = python::ParseNumericLiteral(text);
  if (!literal) {
    throw Error(ErrorCode::kInapplicableOperator,
                "not a mutable numeric literal: " + std::string(text));
  }
  std::normal_distribution<double> noise(0.0, kConstantStddev);
  if (literal->is_integer) {
    std::int64_t offset = 0;
    for (int attempt = 0; attempt < 64 && offset == 0; ++attempt) {
      offset = std::llround(noise(rng));
    }
    if (offset == 0) {
      offset = 1;
    }
    std::int64_t value = literal->int_value;
    if (offset > 0 && value > std::numeric_limits<std::int64_t>::max() - offset) {
      offset = -offset;
    }
    return python::RenderIntegerLiteral(value + offset);
  }
  double value = literal->float_value;
  double mutated = value;
  for (int attempt = 0; attempt < 64 && mutated == value; ++attempt) {
    mutated = value + noise(rng);
  }
  return python::RenderFloatLiteral(mutated);
}

std::string MutateString(const Program& program, const Node& node, Rng& rng) {
  std::string value;
  for (const Span& part : node.op_spans) {
    auto decoded = python::DecodeStringLiteral(program.tree().Text(part));
    if (!decoded) {
      throw Error(ErrorCode::kInapplicableOperator,
                  "string literal cannot be decoded");
    }
    value += *decoded;
  }
  std::bernoulli_distribution extend(0.5);
  bool do_extend = extend(rng) || value.empty();
  if (do_extend) {
    std::uniform_int_distribution<int> count(1, 2);
    std::uniform_int_distribution<std::size_t> pick(
        0, kStringAlphabet.size() - 1);
    for (int n = count(rng); n > 0; --n) {
      value.push_back(kStringAlphabet[pick(rng)]);
    }
  } else {
    python::PopCodePoint(value);
  }
  return python::RenderStringLiteral(value);
}

const Node* LoopBody(const Node& loop) {
  return loop.kind == NodeKind::kFor ? loop.child(2) : loop.child(1);
}

// Leading whitespace of the physical line on which `offset` lies.
std::string LineIndent(std::string_view source, std::size_t offset) {
  std::size_t line_start = source.rfind('\n', offset == 0 ? 0 : offset - 1);
  line_start = (line_start == std::string_view::npos || offset == 0)
                   ? 0
                   : line_start + 1;
  std::size_t end = line_start;
  while (end < offset && (source[end] == ' ' || source[end] == '\t')) {
    ++end;
  }
  return std::string(source.substr(line_start, end - line_start));
}

PlannedMutation PlanSliceRemoval(const Program& program,
                                 const CandidateSite& site, Rng& rng) {
  const Node& slice = *site.node;
  std::string_view src = program.source();
  std::vector<int> present;
  for (int i = 0; i < 3; ++i) {
    if (slice.child(static_cast<std::size_t>(i)) != nullptr) {
      present.push_back(i);
    }
  }
  std::uniform_int_distribution<std::size_t> pick(0, present.size() - 1);
  int which = present[pick(rng)];
  Span removed;
  const Span& first_colon = slice.op_spans[0];
  if (which == 0) {
    removed = Span{slice.span.begin, first_colon.begin};
  } else if (which == 1) {
    std::size_t end = slice.op_spans.size() > 1 ? slice.op_spans[1].begin
                                                : slice.span.end;
    removed = Span{first_colon.end, end};
  } else {
    removed = Span{slice.op_spans[1].begin, slice.span.end};
  }
  return Replace(MutationOperator::kSIR, src, removed, "");
}

}  // namespace

PlannedMutation PlanMutation(const Program& program, const CandidateSite& site,
                             MutationOperator op, Rng& rng) {
  using Op = MutationOperator;
  if (std::find(site.applicable_ops.begin(), site.applicable_ops.end(), op) ==
          site.applicable_ops.end() ||
      site.node == nullptr) {
    throw Error(ErrorCode::kInapplicableOperator,
                std::string(OperatorCode(op)) + " does not apply to a " +
                    std::string(SiteKindName(site.kind)) + " site");
  }
  std::string_view src = program.source();
  const Node& node = *site.node;
  switch (op) {
    case Op::kCRP:
      if (site.kind == SiteKind::kNumericLiteral) {
        return Replace(op, src, site.span,
                       MutateNumber(site.span.SliceOf(src), rng));
      }
      return Replace(op, src, site.span, MutateString(program, node, rng));
    case Op::kAOD: {
      Span removed{site.span.begin,
                   PrefixOperatorDeletionEnd(src, site.span)};
      return Replace(op, src, removed, "");
    }
    case Op::kCOD: {
      if (node.kind == NodeKind::kUnaryOp) {
        Span removed{site.span.begin,
                     PrefixOperatorDeletionEnd(src, site.span)};
        return Replace(op, src, removed, "");
      }
      // `not in` -> `in`: drop `not` and whatever separates it from `in`.
      Span removed{site.span.begin, site.span.end - 2};
      return Replace(op, src, removed, "");
    }
    case Op::kAOR:
      return Replace(op, src, site.span,
                     PickOther(kArithmeticPool, site.span.SliceOf(src), rng));
    case Op::kASR:
      return Replace(op, src, site.span,
                     PickOther(kAugmentedPool, site.span.SliceOf(src), rng));
    case Op::kROR:
      return Replace(op, src, site.span,
                     PickOther(kRelationalPool, site.span.SliceOf(src), rng));
    case Op::kBCR:
      return Replace(op, src, site.span,
                     node.kind == NodeKind::kBreak ? "continue" : "break");
    case Op::kLCR:
      return Replace(op, src, site.span,
                     site.span.SliceOf(src) == "and" ? "or" : "and");
    case Op::kSIR:
      return PlanSliceRemoval(program, site, rng);
    case Op::kOIL: {
      const Node* body = LoopBody(node);
      if (body->inline_body) {
        return Insert(op, body->span.end, "; break", -node.loop_depth);
      }
      std::string indent = LineIndent(src, body->children.front()->span.begin);
      return Insert(op, body->span.end, "\n" + indent + "break",
                    -node.loop_depth);
    }
    case Op::kZIL: {
      const Node* body = LoopBody(node);
      std::size_t at = body->children.front()->span.begin;
      if (body->inline_body) {
        return Insert(op, at, "break; ", kOpenPriority);
      }
      return Insert(op, at, "break\n" + LineIndent(src, at), kOpenPriority);
    }
    case Op::kRIL: {
      const Node& iter = *node.child(1);
      bool bare_tuple = iter.kind == NodeKind::kTuple && !iter.parenthesized;
      std::string open = bare_tuple ? "reversed((" : "reversed(";
      std::string close = bare_tuple ? "))" : ")";
      PlannedMutation plan;
      std::string before(iter.span.SliceOf(src));
      plan.record = MutationRecord{op, iter.span, before, open + before + close};
      plan.edits.push_back(
          SourceEdit{iter.span, plan.record.after, kReplacePriority});
      return plan;
    }
  }
  throw Error(ErrorCode::kInapplicableOperator, "unknown operator");
}

std::string ApplyEdits(std::string_view source, std::vector<SourceEdit> edits) {
  std::stable_sort(edits.begin(), edits.end(),
                   [](const SourceEdit& a, const SourceEdit& b) {
                     if (a.span.begin != b.span.begin) {
                       return a.span.begin < b.span.begin;
                     }
                     return a.priority < b.priority;
                   });
  std::string out;
  out.reserve(source.size() + 64);
  std::size_t cursor = 0;
  for (const SourceEdit& edit : edits) {
    if (edit.span.begin < cursor) {
      throw Error(ErrorCode::kInapplicableOperator, "overlapping edits");
    }
    out.append(source.substr(cursor, edit.span.begin - cursor));
    out += edit.text;
    cursor = edit.span.end;
  }
  out.append(source.substr(cursor));
  return out;
}

std::pair<Program, MutationRecord> ApplyOperatorRecorded(
    const Program& program, const CandidateSite& site, MutationOperator op,
    Rng& rng) {
  PlannedMutation plan = PlanMutation(program, site, op, rng);
  std::string mutated = ApplyEdits(program.source(), plan.edits);
  try {
    Program result = Program::Parse(std::move(mutated), program.id(),
                                    program.problem_id(), Origin::kMutant);
    return {std::move(result), std::move(plan.record)};
  } catch (const Error& e) {
    throw Error(ErrorCode::kNonParsingResult,
                std::string(OperatorCode(op)) +
                    " produced a program that does not parse: " + e.what());
  }
}

Program ApplyOperator(const Program& program, const CandidateSite& site,
                      MutationOperator op, Rng& rng) {
  return ApplyOperatorRecorded(program, site, op, rng).first;
}

Program ApplyReplacement(const Program& program, const CandidateSite& site,
                         MutationOperator op, std::string_view replacement) {
  using Op = MutationOperator;
  std::string_view current = site.span.SliceOf(program.source());
  auto in_pool = [&](const auto& pool) {
    return std::find(pool.begin(), pool.end(), replacement) != pool.end();
  };
  bool allowed =
      std::find(site.applicable_ops.begin(), site.applicable_ops.end(), op) !=
          site.applicable_ops.end() &&
      replacement != current &&
      ((op == Op::kAOR && in_pool(kArithmeticPool)) ||
       (op == Op::kASR && in_pool(kAugmentedPool)) ||
       (op == Op::kROR && in_pool(kRelationalPool)));
  if (!allowed) {
    throw Error(ErrorCode::kInapplicableOperator,
                std::string(OperatorCode(op)) + " cannot turn '" +
                    std::string(current) + "' into '" +
                    std::string(replacement) + "'");
  }
  std::string mutated = ApplyEdits(
      program.source(),
      {SourceEdit{site.span, std::string(replacement), kReplacePriority}});
  try {
    return Program::Parse(std::move(mutated), program.id(),
                          program.problem_id(), Origin::kMutant);
  } catch (const Error& e) {
    throw Error(ErrorCode::kNonParsingResult, e.what());
  }
}

std::uint64_t PassSeed(std::uint64_t root, int pass) {
  // splitmix64 finalizer over (root, pass).
  std::uint64_t z = root + 0x9E3779B97F4A7C15ULL *
                               (static_cast<std::uint64_t>(pass) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

bool EditsConflict(const SourceEdit& a, const SourceEdit& b) {
  if (!a.span.empty() && !b.span.empty()) {
    return a.span.Overlaps(b.span);
  }
  if (a.span.empty() && !b.span.empty()) {
    return b.span.begin < a.span.begin && a.span.begin < b.span.end;
  }
  if (!a.span.empty() && b.span.empty()) {
    return a.span.begin < b.span.begin && b.span.begin < a.span.end;
  }
  return false;
}

bool ConflictsWithAny(const std::vector<SourceEdit>& accepted,
                      const std::vector<SourceEdit>& edits) {
  for (const SourceEdit& a : accepted) {
    for (const SourceEdit& b : edits) {
      if (EditsConflict(a, b)) {
        return true;
      }
    }
  }
  return false;
}

enum class Policy { kAllOperators, kNumericConstantsOnly };

std::vector<Mutant> Generate(const Program& seed, int n,
                             std::uint64_t rng_seed, Policy policy) {
  std::vector<CandidateSite> sites = FindCandidates(seed);
  if (policy == Policy::kNumericConstantsOnly) {
    std::erase_if(sites, [](const CandidateSite& site) {
      return site.kind != SiteKind::kNumericLiteral;
    });
  }
  std::vector<Mutant> mutants;
  if (sites.empty()) {
    return mutants;
  }
  std::unordered_set<std::string> seen = {seed.source()};
  for (int pass = 0; pass < n; ++pass) {
    std::uint64_t pass_seed = PassSeed(rng_seed, pass);
    Rng rng(pass_seed);
    std::vector<SourceEdit> accepted;
    std::vector<MutationRecord> records;
    for (const CandidateSite& site : sites) {
      MutationOperator op;
      if (site.kind == SiteKind::kLoop) {
        std::uniform_int_distribution<std::size_t> pick(
            0, site.applicable_ops.size());
        std::size_t choice = pick(rng);
        if (choice == site.applicable_ops.size()) {
          continue;
        }
        op = site.applicable_ops[choice];
      } else {
        std::bernoulli_distribution coin(0.5);
        if (!coin(rng)) {
          continue;
        }
        op = site.applicable_ops.front();
      }
      PlannedMutation plan = PlanMutation(seed, site, op, rng);
      if (plan.record.before == plan.record.after ||
          ConflictsWithAny(accepted, plan.edits)) {
        continue;
      }
      accepted.insert(accepted.end(), plan.edits.begin(), plan.edits.end());
      records.push_back(std::move(plan.record));
    }
    if (records.empty()) {
      continue;
    }
    std::string source = ApplyEdits(seed.source(), accepted);
    if (seen.contains(source)) {
      continue;
    }
    seen.insert(source);
    try {
      Program program = Program::Parse(
          std::move(source), seed.id() + ".m" + std::to_string(pass),
          seed.problem_id(), Origin::kMutant);
      mutants.push_back(
          Mutant{std::move(program), seed.id(), std::move(records), pass_seed});
    } catch (const Error&) {
      // Non-parsing passes are dropped.
    }
  }
  return mutants;
}

}  // namespace

std::vector<Mutant> GenerateMutants(const Program& seed, int n,
                                    std::uint64_t rng_seed) {
  return Generate(seed, n, rng_seed, Policy::kAllOperators);
}

std::vector<Mutant> MutateConstantsOnly(const Program& seed, int n,
                                        std::uint64_t rng_seed) {
  return Generate(seed, n, rng_seed, Policy::kNumericConstantsOnly);
}

std::string_view OperatorCode(MutationOperator op) {
  switch (op) {
    case MutationOperator::kCRP: return "CRP";
    case MutationOperator::kAOD: return "AOD";
    case MutationOperator::kAOR: return "AOR";
    case MutationOperator::kASR: return "ASR";
    case MutationOperator::kBCR: return "BCR";
    case MutationOperator::kCOD: return "COD";
    case MutationOperator::kLCR: return "LCR";
    case MutationOperator::kROR: return "ROR";
    case MutationOperator::kSIR: return "SIR";
    case MutationOperator::kOIL: return "OIL";
    case MutationOperator::kRIL: return "RIL";
    case MutationOperator::kZIL: return "ZIL";
  }
  return "?";
}

std::optional<MutationOperator> OperatorFromCode(std::string_view code) {
  for (MutationOperator op : kAllOperators) {
    if (OperatorCode(op) == code) {
      return op;
    }
  }
  return std::nullopt;
}

}  // namespace cexec
