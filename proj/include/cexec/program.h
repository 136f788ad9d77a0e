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

#ifndef CEXEC_PROGRAM_H_
#define CEXEC_PROGRAM_H_

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "cexec/operators.h"
#include "cexec/python/ast.h"
#include "cexec/span.h"

namespace cexec {

// Upper bound on physical lines; the codec has one line-number token per
// line and exactly 200 of them.
inline constexpr int kMaxProgramLines = 200;

enum class Origin { kSeed, kMutant, kSingleLine, kTutorial };

std::string_view OriginName(Origin origin);

// A parsed subject program. Immutable; copies share the syntax tree.
class Program {
 public:
  // Throws Error(kSyntaxError) or Error(kTooManyLines).
  static Program Parse(std::string source, std::string id = "",
                       std::string problem_id = "",
                       Origin origin = Origin::kSeed);

  const std::string& source() const { return tree_->source(); }
  const std::string& id() const { return id_; }
  const std::string& problem_id() const { return problem_id_; }
  int line_count() const { return line_count_; }
  Origin origin() const { return origin_; }
  const python::SyntaxTree& tree() const { return *tree_; }

 private:
  Program(std::shared_ptr<const python::SyntaxTree> tree, std::string id,
          std::string problem_id, int line_count, Origin origin)
      : tree_(std::move(tree)),
        id_(std::move(id)),
        problem_id_(std::move(problem_id)),
        line_count_(line_count),
        origin_(origin) {}

  std::shared_ptr<const python::SyntaxTree> tree_;
  std::string id_;
  std::string problem_id_;
  int line_count_;
  Origin origin_;
};

// Number of physical lines; a trailing newline does not start a new line.
int CountPhysicalLines(std::string_view source);

enum class SiteKind {
  kNumericLiteral,
  kStringLiteral,
  kUnaryArithmetic,
  kBinaryArithmetic,
  kAugmentedAssign,
  kBreakContinue,
  kNegation,
  kLogicalConnector,
  kRelational,
  kSlice,
  kLoop,
};

std::string_view SiteKindName(SiteKind kind);

struct CandidateSite {
  SiteKind kind;
  // Operator sites cover the operator token(s); literal, slice and loop
  // sites cover the whole node.
  Span span;
  std::vector<MutationOperator> applicable_ops;
  // Syntax node the site was extracted from (owned by the program's tree).
  const python::Node* node = nullptr;
  // Index into node->op_spans for multi-operator nodes (BoolOp, Compare).
  std::size_t op_index = 0;

  friend bool operator==(const CandidateSite& a, const CandidateSite& b) {
    return a.kind == b.kind && a.span == b.span &&
           a.applicable_ops == b.applicable_ops;
  }
};

// Every mutable site, ordered by (span.begin, span.end).
std::vector<CandidateSite> FindCandidates(const Program& program);

// End of the text removed when deleting prefix operator `op` (AOD, COD):
// the token plus the spaces that follow it.
std::size_t PrefixOperatorDeletionEnd(std::string_view source, Span op);

struct TestInput {
  std::vector<std::string> lines;

  // One stdin line per text line; a trailing newline does not add a line.
  static TestInput FromText(std::string_view text);
  std::string ToText() const;
};

// Replaces each stdin read with a string literal carrying the next input
// line, in textual order:
//   input(...)                         -> 'line'
//   sys.stdin.readline(), stdin.readline()
//                                      -> 'line\n'
//   sys.stdin.read(), open(0).read()   -> every remaining line, joined
//   sys.stdin.readlines()              -> list of every remaining line
// Throws Error(kInsufficientInput) when a line read has no line left.
Program RewriteStdin(const Program& program, const TestInput& input);

// Counts read expressions RewriteStdin would replace.
int CountStdinReads(const Program& program);

}  // namespace cexec

#endif  // CEXEC_PROGRAM_H_
