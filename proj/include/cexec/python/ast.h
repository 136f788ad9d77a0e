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

#ifndef CEXEC_PYTHON_AST_H_
#define CEXEC_PYTHON_AST_H_

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "cexec/span.h"

namespace cexec::python {

enum class NodeKind {
  // Statements.
  kModule,
  kBlock,
  kExprStmt,
  kAssign,
  kAugAssign,
  kAnnAssign,
  kPass,
  kBreak,
  kContinue,
  kReturn,
  kDelete,
  kGlobal,
  kNonlocal,
  kImport,
  kImportFrom,
  kRaise,
  kAssert,
  kIf,
  kWhile,
  kFor,
  kTry,
  kExceptHandler,
  kWith,
  kWithItem,
  kFunctionDef,
  kClassDef,
  // Expressions.
  kName,
  kNumber,
  kString,
  kConstant,
  kEllipsis,
  kBoolOp,
  kNamedExpr,
  kBinOp,
  kUnaryOp,
  kLambda,
  kIfExp,
  kDict,
  kSet,
  kList,
  kTuple,
  kListComp,
  kSetComp,
  kDictComp,
  kGeneratorExp,
  kComprehension,
  kAwait,
  kYield,
  kYieldFrom,
  kCompare,
  kCall,
  kKeyword,
  kAttribute,
  kSubscript,
  kStarred,
  kDoubleStarred,
  kSlice,
  kArguments,
  kArg,
};

std::string_view NodeKindName(NodeKind kind);

// One syntax node. Child layout per kind:
//   kModule, kBlock      children = statements
//   kIf                  [test, body, orelse?]  (elif chains nest as kIf)
//   kWhile               [test, body, orelse?]
//   kFor                 [target, iter, body, orelse?]
//   kBinOp               [left, right], op / op_spans[0]
//   kUnaryOp             [operand], op / op_spans[0]
//   kBoolOp              operands; ops[i] joins operands i and i+1
//   kCompare             operands; ops[i] compares operands i and i+1
//   kAugAssign           [target, value], op / op_spans[0]
//   kSubscript           [value, slice]
//   kSlice               [lower?, upper?, step?] (null when absent);
//                        op_spans = colon tokens
//   kCall                [func, args...]
//   kAttribute           [value], name = attribute
// Spans of parenthesized expressions exclude the parentheses, except for
// tuples written with them.
struct Node {
  NodeKind kind;
  Span span;
  std::vector<Node*> children;
  // Operator text, normalized ("not in", "is not"); name for kName, kArg,
  // kKeyword and kAttribute; "True"/"False"/"None" for kConstant.
  std::string op;
  std::vector<std::string> ops;
  std::vector<Span> op_spans;
  bool parenthesized = false;
  bool is_async = false;
  // kBlock: body written on the header line after the colon.
  bool inline_body = false;
  // kString: any part is an f-string / bytes literal.
  bool is_fstring = false;
  bool is_bytes = false;
  // kBreak/kContinue: nesting depth of enclosing loops within the current
  // function. kFor/kWhile: loop depth including this loop.
  int loop_depth = 0;

  Node* child(std::size_t i) const {
    return i < children.size() ? children[i] : nullptr;
  }
};

// An immutable parsed module. Nodes are owned by the tree and reference the
// tree's copy of the source through spans.
class SyntaxTree {
 public:
  SyntaxTree(std::string source, std::vector<std::unique_ptr<Node>> arena,
             Node* root)
      : source_(std::move(source)), arena_(std::move(arena)), root_(root) {}

  SyntaxTree(const SyntaxTree&) = delete;
  SyntaxTree& operator=(const SyntaxTree&) = delete;

  const std::string& source() const { return source_; }
  const Node& root() const { return *root_; }
  std::string_view Text(const Span& span) const {
    return span.SliceOf(source_);
  }

  // Pre-order traversal; `visit` returns false to skip a subtree.
  template <typename Visitor>
  void Walk(Visitor&& visit) const {
    WalkFrom(root_, visit);
  }

 private:
  template <typename Visitor>
  static void WalkFrom(const Node* node, Visitor& visit) {
    if (node == nullptr || !visit(*node)) {
      return;
    }
    for (const Node* child : node->children) {
      WalkFrom(child, visit);
    }
  }

  std::string source_;
  std::vector<std::unique_ptr<Node>> arena_;
  Node* root_;
};

}  // namespace cexec::python

#endif  // CEXEC_PYTHON_AST_H_
