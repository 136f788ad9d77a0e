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

#include "cexec/program.h"

#include <algorithm>
#include <optional>
#include <set>

#include "cexec/error.h"
#include "cexec/python/literals.h"
#include "cexec/python/parser.h"
#include "cexec/python/tokenizer.h"

namespace cexec {

using python::Node;
using python::NodeKind;

std::string_view OriginName(Origin origin) {
  switch (origin) {
    case Origin::kSeed:
      return "seed";
    case Origin::kMutant:
      return "mutant";
    case Origin::kSingleLine:
      return "singleline";
    case Origin::kTutorial:
      return "tutorial";
  }
  return "seed";
}

int CountPhysicalLines(std::string_view source) {
  if (source.empty()) {
    return 0;
  }
  int lines = static_cast<int>(std::count(source.begin(), source.end(), '\n'));
  if (source.back() != '\n') {
    ++lines;
  }
  return lines;
}

Program Program::Parse(std::string source, std::string id,
                       std::string problem_id, Origin origin) {
  if (source.empty()) {
    throw Error(ErrorCode::kSyntaxError, "empty program");
  }
  int lines = CountPhysicalLines(source);
  if (lines > kMaxProgramLines) {
    throw Error(ErrorCode::kTooManyLines,
                "program has " + std::to_string(lines) + " lines (limit " +
                    std::to_string(kMaxProgramLines) + ")");
  }
  auto tree = python::Parse(std::move(source));
  return Program(std::move(tree), std::move(id), std::move(problem_id), lines,
                 origin);
}

std::string_view SiteKindName(SiteKind kind) {
  switch (kind) {
    case SiteKind::kNumericLiteral:
      return "numeric_literal";
    case SiteKind::kStringLiteral:
      return "string_literal";
    case SiteKind::kUnaryArithmetic:
      return "unary_arithmetic";
    case SiteKind::kBinaryArithmetic:
      return "binary_arithmetic";
    case SiteKind::kAugmentedAssign:
      return "augmented_assign";
    case SiteKind::kBreakContinue:
      return "break_continue";
    case SiteKind::kNegation:
      return "negation";
    case SiteKind::kLogicalConnector:
      return "logical_connector";
    case SiteKind::kRelational:
      return "relational";
    case SiteKind::kSlice:
      return "slice";
    case SiteKind::kLoop:
      return "loop";
  }
  return "unknown";
}

namespace {

bool IsArithmeticOp(std::string_view op) {
  return op == "+" || op == "-" || op == "*" || op == "/" || op == "//" ||
         op == "%" || op == "**";
}

bool IsRelationalOp(std::string_view op) {
  return op == "<" || op == "<=" || op == ">" || op == ">=" || op == "==" ||
         op == "!=";
}

// Deleting [begin, end) must not fuse the neighbouring tokens into one.
bool DeletionKeepsTokensApart(std::string_view source, std::size_t begin,
                              std::size_t end) {
  if (begin == 0 || end >= source.size()) {
    return true;
  }
  auto before = static_cast<unsigned char>(source[begin - 1]);
  auto after = static_cast<unsigned char>(source[end]);
  return !(python::IsIdentifierChar(before) &&
           (python::IsIdentifierChar(after) || after == '\'' ||
            after == '"'));
}

bool StringIsMutable(const Program& program, const Node& node) {
  if (node.is_fstring || node.is_bytes) {
    return false;
  }
  for (const Span& part : node.op_spans) {
    if (!python::DecodeStringLiteral(program.tree().Text(part))) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::size_t PrefixOperatorDeletionEnd(std::string_view source, Span op) {
  std::size_t end = op.end;
  while (end < source.size() && (source[end] == ' ' || source[end] == '\t')) {
    ++end;
  }
  return end;
}

std::vector<CandidateSite> FindCandidates(const Program& program) {
  using Op = MutationOperator;
  std::vector<CandidateSite> sites;
  const std::string& src = program.source();
  auto add = [&](SiteKind kind, Span span, std::vector<Op> ops,
                 const Node& node, std::size_t op_index = 0) {
    sites.push_back(CandidateSite{kind, span, std::move(ops), &node, op_index});
  };
  program.tree().Walk([&](const Node& node) {
    switch (node.kind) {
      case NodeKind::kNumber:
        if (python::ParseNumericLiteral(program.tree().Text(node.span))) {
          add(SiteKind::kNumericLiteral, node.span, {Op::kCRP}, node);
        }
        break;
      case NodeKind::kString:
        if (StringIsMutable(program, node)) {
          add(SiteKind::kStringLiteral, node.span, {Op::kCRP}, node);
        }
        break;
      case NodeKind::kUnaryOp: {
        Span op = node.op_spans[0];
        std::size_t end = PrefixOperatorDeletionEnd(src, op);
        if (!DeletionKeepsTokensApart(src, op.begin, end)) {
          break;
        }
        if (node.op == "+" || node.op == "-") {
          add(SiteKind::kUnaryArithmetic, op, {Op::kAOD}, node);
        } else if (node.op == "not") {
          add(SiteKind::kNegation, op, {Op::kCOD}, node);
        }
        break;
      }
      case NodeKind::kBinOp:
        if (IsArithmeticOp(node.op)) {
          add(SiteKind::kBinaryArithmetic, node.op_spans[0], {Op::kAOR}, node);
        }
        break;
      case NodeKind::kAugAssign:
        if (IsArithmeticOp(node.op)) {
          add(SiteKind::kAugmentedAssign, node.op_spans[0], {Op::kASR}, node);
        }
        break;
      case NodeKind::kBreak:
      case NodeKind::kContinue:
        add(SiteKind::kBreakContinue, node.span, {Op::kBCR}, node);
        break;
      case NodeKind::kCompare:
        for (std::size_t i = 0; i < node.ops.size(); ++i) {
          if (IsRelationalOp(node.ops[i])) {
            add(SiteKind::kRelational, node.op_spans[i], {Op::kROR}, node, i);
          } else if (node.ops[i] == "not in") {
            add(SiteKind::kNegation, node.op_spans[i], {Op::kCOD}, node, i);
          }
        }
        break;
      case NodeKind::kBoolOp:
        for (std::size_t i = 0; i < node.op_spans.size(); ++i) {
          add(SiteKind::kLogicalConnector, node.op_spans[i], {Op::kLCR}, node,
              i);
        }
        break;
      case NodeKind::kSlice:
        if (node.child(0) != nullptr || node.child(1) != nullptr ||
            node.child(2) != nullptr) {
          add(SiteKind::kSlice, node.span, {Op::kSIR}, node);
        }
        break;
      case NodeKind::kFor:
        if (node.is_async) {
          add(SiteKind::kLoop, node.span, {Op::kOIL, Op::kZIL}, node);
        } else {
          add(SiteKind::kLoop, node.span, {Op::kOIL, Op::kRIL, Op::kZIL},
              node);
        }
        break;
      case NodeKind::kWhile:
        add(SiteKind::kLoop, node.span, {Op::kOIL, Op::kZIL}, node);
        break;
      default:
        break;
    }
    return true;
  });
  std::stable_sort(sites.begin(), sites.end(),
                   [](const CandidateSite& a, const CandidateSite& b) {
                     return a.span < b.span;
                   });
  return sites;
}

TestInput TestInput::FromText(std::string_view text) {
  TestInput input;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    std::string_view line = text.substr(
        start, nl == std::string_view::npos ? std::string_view::npos
                                            : nl - start);
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    input.lines.emplace_back(line);
    if (nl == std::string_view::npos) {
      break;
    }
    start = nl + 1;
  }
  return input;
}

std::string TestInput::ToText() const {
  std::string text;
  for (const std::string& line : lines) {
    text += line;
    text.push_back('\n');
  }
  return text;
}

namespace {

enum class ReadKind { kLine, kLineWithNewline, kAll, kAllLines };

struct StdinRead {
  Span span;
  ReadKind kind;
};

bool IsName(const Node* node, std::string_view name) {
  return node != nullptr && node->kind == NodeKind::kName && node->op == name;
}

// sys.stdin, stdin, or open(0)
bool IsStdinObject(const Program& program, const Node* node) {
  if (node == nullptr) {
    return false;
  }
  if (IsName(node, "stdin")) {
    return true;
  }
  if (node->kind == NodeKind::kAttribute && node->op == "stdin" &&
      IsName(node->child(0), "sys")) {
    return true;
  }
  if (node->kind == NodeKind::kCall && node->children.size() == 2 &&
      IsName(node->child(0), "open") &&
      node->child(1)->kind == NodeKind::kNumber &&
      program.tree().Text(node->child(1)->span) == "0") {
    return true;
  }
  return false;
}

std::optional<ReadKind> ClassifyRead(const Program& program,
                                     const Node& node) {
  if (node.kind != NodeKind::kCall) {
    return std::nullopt;
  }
  const Node* func = node.child(0);
  if (IsName(func, "input")) {
    return ReadKind::kLine;
  }
  if (func->kind != NodeKind::kAttribute || node.children.size() != 1 ||
      !IsStdinObject(program, func->child(0))) {
    return std::nullopt;
  }
  if (func->op == "readline") {
    return ReadKind::kLineWithNewline;
  }
  if (func->op == "read") {
    return ReadKind::kAll;
  }
  if (func->op == "readlines") {
    return ReadKind::kAllLines;
  }
  return std::nullopt;
}

std::vector<StdinRead> FindStdinReads(const Program& program) {
  std::vector<StdinRead> reads;
  program.tree().Walk([&](const Node& node) {
    if (auto kind = ClassifyRead(program, node)) {
      reads.push_back(StdinRead{node.span, *kind});
      return false;
    }
    return true;
  });
  std::sort(reads.begin(), reads.end(),
            [](const StdinRead& a, const StdinRead& b) {
              return a.span < b.span;
            });
  return reads;
}

}  // namespace

int CountStdinReads(const Program& program) {
  return static_cast<int>(FindStdinReads(program).size());
}

Program RewriteStdin(const Program& program, const TestInput& input) {
  std::vector<StdinRead> reads = FindStdinReads(program);
  std::vector<std::string> replacements;
  std::size_t next = 0;
  for (const StdinRead& read : reads) {
    switch (read.kind) {
      case ReadKind::kLine:
      case ReadKind::kLineWithNewline: {
        if (next >= input.lines.size()) {
          throw Error(ErrorCode::kInsufficientInput,
                      "program reads more stdin lines than the " +
                          std::to_string(input.lines.size()) + " provided");
        }
        std::string value = input.lines[next++];
        if (read.kind == ReadKind::kLineWithNewline) {
          value.push_back('\n');
        }
        replacements.push_back(python::RenderStringLiteral(value));
        break;
      }
      case ReadKind::kAll: {
        std::string value;
        for (; next < input.lines.size(); ++next) {
          value += input.lines[next] + "\n";
        }
        replacements.push_back(python::RenderStringLiteral(value));
        break;
      }
      case ReadKind::kAllLines: {
        std::string list = "[";
        for (bool first = true; next < input.lines.size(); ++next) {
          if (!first) {
            list += ", ";
          }
          first = false;
          list += python::RenderStringLiteral(input.lines[next] + "\n");
        }
        replacements.push_back(list + "]");
        break;
      }
    }
  }
  std::string source = program.source();
  for (std::size_t i = reads.size(); i-- > 0;) {
    source.replace(reads[i].span.begin, reads[i].span.size(), replacements[i]);
  }
  return Program::Parse(std::move(source), program.id(), program.problem_id(),
                        program.origin());
}

}  // namespace cexec
