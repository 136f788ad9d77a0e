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

#include "cexec/python/parser.h"

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cexec/error.h"
#include "cexec/python/tokenizer.h"

namespace cexec::python {

namespace {

bool IsCompareOp(std::string_view text) {
  return text == "<" || text == ">" || text == "==" || text == ">=" ||
         text == "<=" || text == "!=";
}

bool IsAugAssignOp(std::string_view text) {
  return text == "+=" || text == "-=" || text == "*=" || text == "/=" ||
         text == "//=" || text == "%=" || text == "**=" || text == "@=" ||
         text == "&=" || text == "|=" || text == "^=" || text == ">>=" ||
         text == "<<=";
}

struct Scope {
  int loop_depth = 0;
  bool in_function = false;
  bool is_async = false;
};

class Parser {
 public:
  explicit Parser(std::string source) : source_(std::move(source)) {
    tokens_ = Tokenize(source_);
    scopes_.push_back(Scope{});
  }

  std::shared_ptr<const SyntaxTree> Run() {
    Node* module = New(NodeKind::kModule, 0);
    while (!At(TokenKind::kEndMarker)) {
      if (At(TokenKind::kNewline)) {
        Advance();
        continue;
      }
      ParseStatement(module->children);
    }
    module->span = Span{0, source_.size()};
    return std::make_shared<const SyntaxTree>(std::move(source_),
                                              std::move(arena_), module);
  }

 private:
  // ---- Token helpers -------------------------------------------------------

  const Token& Cur() const { return tokens_[pos_]; }
  const Token& PeekTok(std::size_t ahead) const {
    std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }
  bool At(TokenKind kind) const { return Cur().kind == kind; }
  bool AtOp(std::string_view text) const {
    return Cur().kind == TokenKind::kOp && Cur().text == text;
  }
  bool AtKw(std::string_view word) const {
    return Cur().kind == TokenKind::kName && Cur().text == word;
  }
  bool PeekIsOp(std::size_t ahead, std::string_view text) const {
    const Token& t = PeekTok(ahead);
    return t.kind == TokenKind::kOp && t.text == text;
  }
  bool PrevIsOp(std::string_view text) const {
    return pos_ > 0 && tokens_[pos_ - 1].kind == TokenKind::kOp &&
           tokens_[pos_ - 1].text == text;
  }
  bool PeekIsKw(std::size_t ahead, std::string_view word) const {
    const Token& t = PeekTok(ahead);
    return t.kind == TokenKind::kName && t.text == word;
  }

  const Token& Advance() {
    const Token& t = tokens_[pos_];
    if (t.kind != TokenKind::kIndent && t.kind != TokenKind::kDedent &&
        t.kind != TokenKind::kNewline) {
      last_end_ = t.span.end;
    }
    if (pos_ + 1 < tokens_.size()) {
      ++pos_;
    }
    return t;
  }

  [[noreturn]] void Fail(const std::string& what) const {
    throw Error(ErrorCode::kSyntaxError,
                "line " + std::to_string(Cur().line) + ": " + what);
  }

  [[noreturn]] void FailUnexpected() const {
    switch (Cur().kind) {
      case TokenKind::kIndent:
        Fail("unexpected indent");
      case TokenKind::kDedent:
        Fail("unexpected dedent");
      case TokenKind::kNewline:
      case TokenKind::kEndMarker:
        Fail("invalid syntax (unexpected end of line)");
      default:
        Fail("invalid syntax near '" + std::string(Cur().text) + "'");
    }
  }

  Span ExpectOp(std::string_view text) {
    if (!AtOp(text)) {
      if (text == ":" && !At(TokenKind::kOp)) {
        Fail("expected ':'");
      }
      FailUnexpected();
    }
    return Advance().span;
  }

  Span ExpectKw(std::string_view word) {
    if (!AtKw(word)) {
      FailUnexpected();
    }
    return Advance().span;
  }

  std::string ExpectName() {
    if (!At(TokenKind::kName) || IsKeyword(Cur().text)) {
      FailUnexpected();
    }
    return std::string(Advance().text);
  }

  bool AtName() const {
    return At(TokenKind::kName) && !IsKeyword(Cur().text);
  }

  Node* New(NodeKind kind, std::size_t begin) {
    arena_.push_back(std::make_unique<Node>());
    Node* node = arena_.back().get();
    node->kind = kind;
    node->span = Span{begin, begin};
    return node;
  }

  Node* Finish(Node* node) {
    node->span.end = last_end_;
    return node;
  }

  Scope& scope() { return scopes_.back(); }

  // ---- Statements ----------------------------------------------------------

  void ParseStatement(std::vector<Node*>& out) {
    if (At(TokenKind::kIndent)) {
      Fail("unexpected indent");
    }
    if (At(TokenKind::kName)) {
      std::string_view word = Cur().text;
      if (word == "if") {
        out.push_back(ParseIf());
        return;
      }
      if (word == "while") {
        out.push_back(ParseWhile());
        return;
      }
      if (word == "for") {
        out.push_back(ParseFor(Cur().span.begin, false));
        return;
      }
      if (word == "try") {
        out.push_back(ParseTry());
        return;
      }
      if (word == "with") {
        out.push_back(ParseWith(Cur().span.begin, false));
        return;
      }
      if (word == "def") {
        out.push_back(ParseFunctionDef(Cur().span.begin, false));
        return;
      }
      if (word == "class") {
        out.push_back(ParseClassDef(Cur().span.begin));
        return;
      }
      if (word == "async" &&
          (PeekIsKw(1, "def") || PeekIsKw(1, "for") || PeekIsKw(1, "with"))) {
        std::size_t begin = Advance().span.begin;
        if (AtKw("def")) {
          out.push_back(ParseFunctionDef(begin, true));
        } else {
          if (!scope().is_async) {
            Fail("'async' statement outside async function");
          }
          out.push_back(AtKw("for") ? ParseFor(begin, true)
                                    : ParseWith(begin, true));
        }
        return;
      }
    }
    if (AtOp("@")) {
      out.push_back(ParseDecorated());
      return;
    }
    ParseSimpleStatements(out);
  }

  void ParseSimpleStatements(std::vector<Node*>& out) {
    while (true) {
      out.push_back(ParseSimpleStatement());
      if (AtOp(";")) {
        Advance();
        if (At(TokenKind::kNewline)) {
          break;
        }
        continue;
      }
      break;
    }
    if (!At(TokenKind::kNewline)) {
      FailUnexpected();
    }
    Advance();
  }

  Node* ParseSuite() {
    Node* block = New(NodeKind::kBlock, Cur().span.begin);
    if (At(TokenKind::kNewline)) {
      Advance();
      if (!At(TokenKind::kIndent)) {
        Fail("expected an indented block");
      }
      Advance();
      block->span.begin = Cur().span.begin;
      while (!At(TokenKind::kDedent) && !At(TokenKind::kEndMarker)) {
        if (At(TokenKind::kNewline)) {
          Advance();
          continue;
        }
        ParseStatement(block->children);
      }
      block->span.end = block->children.back()->span.end;
      if (At(TokenKind::kDedent)) {
        Advance();
      }
      return block;
    }
    block->inline_body = true;
    ParseSimpleStatements(block->children);
    block->span.end = block->children.back()->span.end;
    return block;
  }

  Node* ParseSimpleStatement() {
    std::size_t begin = Cur().span.begin;
    if (At(TokenKind::kName)) {
      std::string_view word = Cur().text;
      if (word == "pass") {
        Advance();
        return Finish(New(NodeKind::kPass, begin));
      }
      if (word == "break" || word == "continue") {
        if (scope().loop_depth == 0) {
          Fail("'" + std::string(word) + "' outside loop");
        }
        Advance();
        Node* node = New(word == "break" ? NodeKind::kBreak
                                         : NodeKind::kContinue,
                         begin);
        node->loop_depth = scope().loop_depth;
        return Finish(node);
      }
      if (word == "return") {
        if (!scope().in_function) {
          Fail("'return' outside function");
        }
        Advance();
        Node* node = New(NodeKind::kReturn, begin);
        if (!AtStatementEnd()) {
          node->children.push_back(ParseStarExpressions());
        }
        return Finish(node);
      }
      if (word == "del") {
        Advance();
        Node* node = New(NodeKind::kDelete, begin);
        Node* targets = ParseTargetList();
        CheckDeleteTarget(targets);
        node->children.push_back(targets);
        return Finish(node);
      }
      if (word == "global" || word == "nonlocal") {
        Advance();
        if (word == "nonlocal" && !scope().in_function) {
          Fail("nonlocal declaration not allowed at module level");
        }
        Node* node = New(word == "global" ? NodeKind::kGlobal
                                          : NodeKind::kNonlocal,
                         begin);
        node->ops.push_back(ExpectName());
        while (AtOp(",")) {
          Advance();
          node->ops.push_back(ExpectName());
        }
        return Finish(node);
      }
      if (word == "import") {
        return ParseImport();
      }
      if (word == "from") {
        return ParseImportFrom();
      }
      if (word == "raise") {
        Advance();
        Node* node = New(NodeKind::kRaise, begin);
        if (!AtStatementEnd()) {
          node->children.push_back(ParseTest());
          if (AtKw("from")) {
            Advance();
            node->children.push_back(ParseTest());
          }
        }
        return Finish(node);
      }
      if (word == "assert") {
        Advance();
        Node* node = New(NodeKind::kAssert, begin);
        node->children.push_back(ParseTest());
        if (AtOp(",")) {
          Advance();
          node->children.push_back(ParseTest());
        }
        return Finish(node);
      }
    }
    return ParseExpressionStatement();
  }

  bool AtStatementEnd() const {
    return At(TokenKind::kNewline) || AtOp(";") || At(TokenKind::kEndMarker);
  }

  Node* ParseImport() {
    std::size_t begin = Advance().span.begin;
    Node* node = New(NodeKind::kImport, begin);
    while (true) {
      std::string name = ParseDottedName();
      if (AtKw("as")) {
        Advance();
        name += " as " + ExpectName();
      }
      node->ops.push_back(name);
      if (!AtOp(",")) {
        break;
      }
      Advance();
    }
    return Finish(node);
  }

  std::string ParseDottedName() {
    std::string name = ExpectName();
    while (AtOp(".")) {
      Advance();
      name += "." + ExpectName();
    }
    return name;
  }

  Node* ParseImportFrom() {
    std::size_t begin = Advance().span.begin;
    Node* node = New(NodeKind::kImportFrom, begin);
    std::string module;
    while (AtOp(".") || AtOp("...")) {
      module += Advance().text;
    }
    if (!AtKw("import")) {
      module += ParseDottedName();
    }
    if (module.empty()) {
      FailUnexpected();
    }
    node->op = module;
    ExpectKw("import");
    if (AtOp("*")) {
      Advance();
      node->ops.push_back("*");
      return Finish(node);
    }
    bool parens = AtOp("(");
    if (parens) {
      Advance();
    }
    while (true) {
      std::string name = ExpectName();
      if (AtKw("as")) {
        Advance();
        name += " as " + ExpectName();
      }
      node->ops.push_back(name);
      if (!AtOp(",")) {
        break;
      }
      Advance();
      if (parens && AtOp(")")) {
        break;
      }
    }
    if (parens) {
      ExpectOp(")");
    }
    return Finish(node);
  }

  Node* ParseExpressionStatement() {
    std::size_t begin = Cur().span.begin;
    Node* first = AtKw("yield") ? ParseYield() : ParseStarExpressions();
    if (AtOp(":")) {
      Advance();
      if (first->kind == NodeKind::kName ||
          first->kind == NodeKind::kAttribute ||
          first->kind == NodeKind::kSubscript) {
        // Valid annotation target.
      } else {
        Fail("illegal target for annotation");
      }
      Node* node = New(NodeKind::kAnnAssign, begin);
      node->children.push_back(first);
      node->children.push_back(ParseTest());
      if (AtOp("=")) {
        Advance();
        node->children.push_back(AtKw("yield") ? ParseYield()
                                               : ParseStarExpressions());
      }
      return Finish(node);
    }
    if (Cur().kind == TokenKind::kOp && IsAugAssignOp(Cur().text)) {
      if (first->kind != NodeKind::kName &&
          first->kind != NodeKind::kAttribute &&
          first->kind != NodeKind::kSubscript) {
        Fail("illegal expression for augmented assignment");
      }
      Node* node = New(NodeKind::kAugAssign, begin);
      const Token& op = Advance();
      node->op = std::string(op.text.substr(0, op.text.size() - 1));
      node->op_spans.push_back(op.span);
      node->children.push_back(first);
      node->children.push_back(AtKw("yield") ? ParseYield()
                                             : ParseStarExpressions());
      return Finish(node);
    }
    if (AtOp("=")) {
      Node* node = New(NodeKind::kAssign, begin);
      Node* value = first;
      while (AtOp("=")) {
        Advance();
        CheckAssignTarget(value);
        node->children.push_back(value);
        value = AtKw("yield") ? ParseYield() : ParseStarExpressions();
      }
      CheckNotBareStarred(value);
      node->children.push_back(value);
      return Finish(node);
    }
    CheckNotBareStarred(first);
    Node* node = New(NodeKind::kExprStmt, begin);
    node->children.push_back(first);
    return Finish(node);
  }

  void CheckNotBareStarred(const Node* node) const {
    if (node->kind == NodeKind::kStarred && !node->parenthesized) {
      Fail("can't use starred expression here");
    }
  }

  Node* ParseIf() {
    std::size_t begin = Advance().span.begin;
    Node* node = New(NodeKind::kIf, begin);
    node->children.push_back(ParseNamedExprTest());
    ExpectOp(":");
    node->children.push_back(ParseSuite());
    if (AtKw("elif")) {
      node->children.push_back(ParseIf());
    } else if (AtKw("else")) {
      Advance();
      ExpectOp(":");
      node->children.push_back(ParseSuite());
    }
    node->span.end = node->children.back()->span.end;
    return node;
  }

  Node* ParseWhile() {
    std::size_t begin = Advance().span.begin;
    Node* node = New(NodeKind::kWhile, begin);
    node->children.push_back(ParseNamedExprTest());
    ExpectOp(":");
    ParseLoopBodies(node);
    return node;
  }

  Node* ParseFor(std::size_t begin, bool is_async) {
    ExpectKw("for");
    Node* node = New(NodeKind::kFor, begin);
    node->is_async = is_async;
    Node* target = ParseTargetList();
    CheckAssignTarget(target);
    node->children.push_back(target);
    ExpectKw("in");
    node->children.push_back(ParseStarExpressions());
    ExpectOp(":");
    ParseLoopBodies(node);
    return node;
  }

  void ParseLoopBodies(Node* loop) {
    ++scope().loop_depth;
    loop->loop_depth = scope().loop_depth;
    loop->children.push_back(ParseSuite());
    --scope().loop_depth;
    if (AtKw("else")) {
      Advance();
      ExpectOp(":");
      loop->children.push_back(ParseSuite());
    }
    loop->span.end = loop->children.back()->span.end;
  }

  Node* ParseTry() {
    std::size_t begin = Advance().span.begin;
    Node* node = New(NodeKind::kTry, begin);
    ExpectOp(":");
    node->children.push_back(ParseSuite());
    bool has_handler = false;
    while (AtKw("except")) {
      has_handler = true;
      Node* handler = New(NodeKind::kExceptHandler, Advance().span.begin);
      if (!AtOp(":")) {
        handler->children.push_back(ParseTest());
        if (AtKw("as")) {
          Advance();
          handler->op = ExpectName();
        }
      }
      ExpectOp(":");
      handler->children.push_back(ParseSuite());
      handler->span.end = handler->children.back()->span.end;
      node->children.push_back(handler);
    }
    bool has_else = false;
    if (has_handler && AtKw("else")) {
      has_else = true;
      Advance();
      ExpectOp(":");
      node->children.push_back(ParseSuite());
    }
    bool has_finally = false;
    if (AtKw("finally")) {
      has_finally = true;
      Advance();
      ExpectOp(":");
      node->children.push_back(ParseSuite());
    }
    if (!has_handler && !has_finally) {
      Fail("expected 'except' or 'finally' block");
    }
    (void)has_else;
    node->span.end = node->children.back()->span.end;
    return node;
  }

  Node* ParseWith(std::size_t begin, bool is_async) {
    ExpectKw("with");
    Node* node = New(NodeKind::kWith, begin);
    node->is_async = is_async;
    while (true) {
      Node* item = New(NodeKind::kWithItem, Cur().span.begin);
      item->children.push_back(ParseTest());
      if (AtKw("as")) {
        Advance();
        Node* target = ParseTarget();
        CheckAssignTarget(target);
        item->children.push_back(target);
      }
      node->children.push_back(Finish(item));
      if (!AtOp(",")) {
        break;
      }
      Advance();
    }
    ExpectOp(":");
    node->children.push_back(ParseSuite());
    node->span.end = node->children.back()->span.end;
    return node;
  }

  Node* ParseDecorated() {
    std::size_t begin = Cur().span.begin;
    std::vector<Node*> decorators;
    while (AtOp("@")) {
      Advance();
      decorators.push_back(ParseNamedExprTest());
      if (!At(TokenKind::kNewline)) {
        FailUnexpected();
      }
      Advance();
    }
    Node* def = nullptr;
    if (AtKw("def")) {
      def = ParseFunctionDef(begin, false);
    } else if (AtKw("async") && PeekIsKw(1, "def")) {
      Advance();
      def = ParseFunctionDef(begin, true);
    } else if (AtKw("class")) {
      def = ParseClassDef(begin);
    } else {
      FailUnexpected();
    }
    def->children.insert(def->children.end(), decorators.begin(),
                         decorators.end());
    return def;
  }

  // kFunctionDef children: [arguments, returns-or-null, body, decorators...]
  Node* ParseFunctionDef(std::size_t begin, bool is_async) {
    ExpectKw("def");
    Node* node = New(NodeKind::kFunctionDef, begin);
    node->is_async = is_async;
    node->op = ExpectName();
    ExpectOp("(");
    node->children.push_back(ParseParameters(")", true));
    ExpectOp(")");
    Node* returns = nullptr;
    if (AtOp("->")) {
      Advance();
      returns = ParseTest();
    }
    node->children.push_back(returns);
    ExpectOp(":");
    scopes_.push_back(Scope{0, true, is_async});
    node->children.push_back(ParseSuite());
    scopes_.pop_back();
    node->span.end = node->children.back()->span.end;
    return node;
  }

  // kClassDef children: [body, bases/keywords..., decorators...]; op = name.
  Node* ParseClassDef(std::size_t begin) {
    ExpectKw("class");
    Node* node = New(NodeKind::kClassDef, begin);
    node->op = ExpectName();
    std::vector<Node*> bases;
    if (AtOp("(")) {
      Advance();
      bases = ParseArgList();
      ExpectOp(")");
    }
    ExpectOp(":");
    scopes_.push_back(Scope{0, false, false});
    Node* body = ParseSuite();
    scopes_.pop_back();
    node->children.push_back(body);
    node->children.insert(node->children.end(), bases.begin(), bases.end());
    node->span.end = body->span.end;
    return node;
  }

  // Parameter list for `def` (annotations allowed) or `lambda`.
  Node* ParseParameters(std::string_view close, bool annotations) {
    Node* args = New(NodeKind::kArguments, Cur().span.begin);
    std::set<std::string> seen;
    bool seen_default = false;
    bool seen_star = false;
    bool seen_double_star = false;
    bool seen_slash = false;
    bool bare_star_needs_name = false;
    auto at_end = [&] {
      return close == ")" ? AtOp(")") : AtOp(":");
    };
    while (!at_end()) {
      if (seen_double_star) {
        Fail("arguments cannot follow var-keyword argument");
      }
      if (AtOp("/")) {
        if (seen_slash || seen_star || args->children.empty()) {
          Fail("invalid syntax at '/'");
        }
        seen_slash = true;
        Advance();
      } else if (AtOp("*") || AtOp("**")) {
        bool double_star = AtOp("**");
        if (!double_star && seen_star) {
          Fail("* argument may appear only once");
        }
        Advance();
        if (!double_star && (AtOp(",") || at_end())) {
          seen_star = true;
          bare_star_needs_name = true;
        } else {
          Node* arg = ParseParam(annotations, seen);
          arg->ops.push_back(double_star ? "**" : "*");
          args->children.push_back(arg);
          if (double_star) {
            seen_double_star = true;
          } else {
            seen_star = true;
          }
        }
      } else {
        Node* arg = ParseParam(annotations, seen);
        if (AtOp("=")) {
          Advance();
          arg->children.push_back(ParseTest());
          if (!seen_star) {
            seen_default = true;
          }
        } else if (seen_default && !seen_star) {
          Fail("non-default argument follows default argument");
        }
        arg->span.end = last_end_;
        args->children.push_back(arg);
        if (seen_star) {
          bare_star_needs_name = false;
        }
      }
      if (!AtOp(",")) {
        break;
      }
      Advance();
    }
    if (bare_star_needs_name) {
      Fail("named arguments must follow bare *");
    }
    return Finish(args);
  }

  Node* ParseParam(bool annotations, std::set<std::string>& seen) {
    Node* arg = New(NodeKind::kArg, Cur().span.begin);
    arg->op = ExpectName();
    if (!seen.insert(arg->op).second) {
      Fail("duplicate argument '" + arg->op + "' in function definition");
    }
    if (annotations && AtOp(":")) {
      Advance();
      ParseTest();
    }
    return Finish(arg);
  }

  // ---- Targets -------------------------------------------------------------

  // exprlist: (expr | star_expr) (',' (expr | star_expr))* [',']
  Node* ParseTargetList() {
    std::size_t begin = Cur().span.begin;
    Node* first = ParseTarget();
    if (!AtOp(",")) {
      return first;
    }
    Node* tuple = New(NodeKind::kTuple, begin);
    tuple->children.push_back(first);
    while (AtOp(",")) {
      Advance();
      if (AtKw("in") || AtOp("=") || AtStatementEnd()) {
        break;
      }
      tuple->children.push_back(ParseTarget());
    }
    return Finish(tuple);
  }

  Node* ParseTarget() {
    if (AtOp("*")) {
      return ParseStarExpr();
    }
    return ParseBitOr();
  }

  void CheckAssignTarget(const Node* node) const {
    switch (node->kind) {
      case NodeKind::kName:
      case NodeKind::kAttribute:
      case NodeKind::kSubscript:
        return;
      case NodeKind::kStarred:
        CheckAssignTarget(node->children[0]);
        return;
      case NodeKind::kTuple:
      case NodeKind::kList: {
        int starred = 0;
        for (const Node* child : node->children) {
          if (child->kind == NodeKind::kStarred) {
            ++starred;
          }
          CheckAssignTarget(child);
        }
        if (starred > 1) {
          Fail("multiple starred expressions in assignment");
        }
        return;
      }
      default:
        Fail("cannot assign to " + std::string(NodeKindName(node->kind)));
    }
  }

  void CheckDeleteTarget(const Node* node) const {
    switch (node->kind) {
      case NodeKind::kName:
      case NodeKind::kAttribute:
      case NodeKind::kSubscript:
        return;
      case NodeKind::kTuple:
      case NodeKind::kList:
        for (const Node* child : node->children) {
          CheckDeleteTarget(child);
        }
        return;
      default:
        Fail("cannot delete " + std::string(NodeKindName(node->kind)));
    }
  }

  // ---- Expressions ---------------------------------------------------------

  // star_expressions: tuple without parentheses of tests / star_exprs.
  Node* ParseStarExpressions() {
    std::size_t begin = Cur().span.begin;
    Node* first = AtOp("*") ? ParseStarExpr() : ParseTest();
    if (!AtOp(",")) {
      return first;
    }
    Node* tuple = New(NodeKind::kTuple, begin);
    tuple->children.push_back(first);
    while (AtOp(",")) {
      Advance();
      if (!StartsExpression()) {
        break;
      }
      tuple->children.push_back(AtOp("*") ? ParseStarExpr() : ParseTest());
    }
    return Finish(tuple);
  }

  bool StartsExpression() const {
    const Token& t = Cur();
    switch (t.kind) {
      case TokenKind::kNumber:
      case TokenKind::kString:
        return true;
      case TokenKind::kName:
        if (!IsKeyword(t.text)) {
          return true;
        }
        return t.text == "not" || t.text == "lambda" || t.text == "await" ||
               t.text == "None" || t.text == "True" || t.text == "False";
      case TokenKind::kOp:
        return t.text == "(" || t.text == "[" || t.text == "{" ||
               t.text == "-" || t.text == "+" || t.text == "~" ||
               t.text == "*" || t.text == "...";
      default:
        return false;
    }
  }

  Node* ParseStarExpr() {
    std::size_t begin = ExpectOp("*").begin;
    Node* node = New(NodeKind::kStarred, begin);
    node->children.push_back(ParseBitOr());
    return Finish(node);
  }

  Node* ParseYield() {
    std::size_t begin = ExpectKw("yield").begin;
    if (!scope().in_function) {
      Fail("'yield' outside function");
    }
    if (AtKw("from")) {
      Advance();
      Node* node = New(NodeKind::kYieldFrom, begin);
      node->children.push_back(ParseTest());
      return Finish(node);
    }
    Node* node = New(NodeKind::kYield, begin);
    if (StartsExpression()) {
      node->children.push_back(ParseStarExpressions());
    }
    return Finish(node);
  }

  Node* ParseNamedExprTest() {
    if (AtName() && PeekIsOp(1, ":=")) {
      std::size_t begin = Cur().span.begin;
      Node* target = ParseAtom();
      Advance();
      Node* node = New(NodeKind::kNamedExpr, begin);
      node->children.push_back(target);
      node->children.push_back(ParseTest());
      return Finish(node);
    }
    return ParseTest();
  }

  Node* ParseTest() {
    if (AtKw("lambda")) {
      return ParseLambda(/*no_cond=*/false);
    }
    std::size_t begin = Cur().span.begin;
    Node* body = ParseOrTest();
    if (AtKw("if")) {
      Advance();
      Node* node = New(NodeKind::kIfExp, begin);
      Node* test = ParseOrTest();
      ExpectKw("else");
      Node* orelse = ParseTest();
      node->children = {test, body, orelse};
      return Finish(node);
    }
    return body;
  }

  Node* ParseTestNoCond() {
    if (AtKw("lambda")) {
      return ParseLambda(/*no_cond=*/true);
    }
    return ParseOrTest();
  }

  Node* ParseLambda(bool no_cond) {
    std::size_t begin = ExpectKw("lambda").begin;
    Node* node = New(NodeKind::kLambda, begin);
    node->children.push_back(ParseParameters(":", false));
    ExpectOp(":");
    scopes_.push_back(Scope{0, true, false});
    node->children.push_back(no_cond ? ParseTestNoCond() : ParseTest());
    scopes_.pop_back();
    return Finish(node);
  }

  Node* ParseBoolChain(std::string_view word, Node* (Parser::*next)()) {
    std::size_t begin = Cur().span.begin;
    Node* first = (this->*next)();
    if (!AtKw(word)) {
      return first;
    }
    Node* node = New(NodeKind::kBoolOp, begin);
    node->op = std::string(word);
    node->children.push_back(first);
    while (AtKw(word)) {
      node->ops.emplace_back(word);
      node->op_spans.push_back(Advance().span);
      node->children.push_back((this->*next)());
    }
    return Finish(node);
  }

  Node* ParseOrTest() { return ParseBoolChain("or", &Parser::ParseAndTest); }
  Node* ParseAndTest() { return ParseBoolChain("and", &Parser::ParseNotTest); }

  Node* ParseNotTest() {
    if (AtKw("not")) {
      std::size_t begin = Cur().span.begin;
      Node* node = New(NodeKind::kUnaryOp, begin);
      node->op = "not";
      node->op_spans.push_back(Advance().span);
      node->children.push_back(ParseNotTest());
      return Finish(node);
    }
    return ParseComparison();
  }

  Node* ParseComparison() {
    std::size_t begin = Cur().span.begin;
    Node* first = ParseBitOr();
    Node* node = nullptr;
    while (true) {
      std::string op;
      Span span;
      if (Cur().kind == TokenKind::kOp && IsCompareOp(Cur().text)) {
        op = std::string(Cur().text);
        span = Advance().span;
      } else if (AtKw("in")) {
        op = "in";
        span = Advance().span;
      } else if (AtKw("not") && PeekIsKw(1, "in")) {
        span.begin = Advance().span.begin;
        span.end = Advance().span.end;
        op = "not in";
      } else if (AtKw("is")) {
        span = Advance().span;
        op = "is";
        if (AtKw("not")) {
          span.end = Advance().span.end;
          op = "is not";
        }
      } else {
        break;
      }
      if (node == nullptr) {
        node = New(NodeKind::kCompare, begin);
        node->children.push_back(first);
      }
      node->ops.push_back(op);
      node->op_spans.push_back(span);
      node->children.push_back(ParseBitOr());
    }
    return node == nullptr ? first : Finish(node);
  }

  // Binary operator levels, loosest first.
  static int BinaryLevel(std::string_view op) {
    if (op == "|") return 0;
    if (op == "^") return 1;
    if (op == "&") return 2;
    if (op == "<<" || op == ">>") return 3;
    if (op == "+" || op == "-") return 4;
    if (op == "*" || op == "/" || op == "//" || op == "%" || op == "@") {
      return 5;
    }
    return -1;
  }

  Node* ParseBitOr() { return ParseBinaryLevel(0); }

  Node* ParseBinaryLevel(int level) {
    if (level > 5) {
      return ParseFactor();
    }
    std::size_t begin = Cur().span.begin;
    Node* left = ParseBinaryLevel(level + 1);
    while (Cur().kind == TokenKind::kOp && BinaryLevel(Cur().text) == level) {
      Node* node = New(NodeKind::kBinOp, begin);
      const Token& op = Advance();
      node->op = std::string(op.text);
      node->op_spans.push_back(op.span);
      node->children.push_back(left);
      node->children.push_back(ParseBinaryLevel(level + 1));
      left = Finish(node);
    }
    return left;
  }

  Node* ParseFactor() {
    if (AtOp("+") || AtOp("-") || AtOp("~")) {
      std::size_t begin = Cur().span.begin;
      Node* node = New(NodeKind::kUnaryOp, begin);
      const Token& op = Advance();
      node->op = std::string(op.text);
      node->op_spans.push_back(op.span);
      node->children.push_back(ParseFactor());
      return Finish(node);
    }
    return ParsePower();
  }

  Node* ParsePower() {
    std::size_t begin = Cur().span.begin;
    Node* base = ParseAwaitPrimary();
    if (AtOp("**")) {
      Node* node = New(NodeKind::kBinOp, begin);
      const Token& op = Advance();
      node->op = "**";
      node->op_spans.push_back(op.span);
      node->children.push_back(base);
      node->children.push_back(ParseFactor());
      return Finish(node);
    }
    return base;
  }

  Node* ParseAwaitPrimary() {
    if (AtKw("await")) {
      std::size_t begin = Advance().span.begin;
      if (!scope().is_async) {
        Fail("'await' outside async function");
      }
      Node* node = New(NodeKind::kAwait, begin);
      node->children.push_back(ParsePrimary());
      return Finish(node);
    }
    return ParsePrimary();
  }

  Node* ParsePrimary() {
    std::size_t begin = Cur().span.begin;
    Node* node = ParseAtom();
    while (true) {
      if (AtOp("(")) {
        Advance();
        Node* call = New(NodeKind::kCall, begin);
        call->children.push_back(node);
        std::vector<Node*> args = ParseArgList();
        call->children.insert(call->children.end(), args.begin(), args.end());
        ExpectOp(")");
        node = Finish(call);
      } else if (AtOp("[")) {
        Advance();
        Node* sub = New(NodeKind::kSubscript, begin);
        sub->children.push_back(node);
        sub->children.push_back(ParseSubscriptList());
        ExpectOp("]");
        node = Finish(sub);
      } else if (AtOp(".")) {
        Advance();
        Node* attr = New(NodeKind::kAttribute, begin);
        attr->children.push_back(node);
        attr->op = ExpectName();
        node = Finish(attr);
      } else {
        return node;
      }
    }
  }

  Node* ParseSubscriptList() {
    std::size_t begin = Cur().span.begin;
    Node* first = ParseSubscript();
    if (!AtOp(",")) {
      return first;
    }
    Node* tuple = New(NodeKind::kTuple, begin);
    tuple->children.push_back(first);
    while (AtOp(",")) {
      Advance();
      if (AtOp("]")) {
        break;
      }
      tuple->children.push_back(ParseSubscript());
    }
    return Finish(tuple);
  }

  Node* ParseSubscript() {
    std::size_t begin = Cur().span.begin;
    Node* lower = nullptr;
    if (!AtOp(":")) {
      lower = ParseNamedExprTest();
      if (!AtOp(":")) {
        return lower;
      }
    }
    Node* slice = New(NodeKind::kSlice, begin);
    slice->op_spans.push_back(ExpectOp(":"));
    Node* upper = nullptr;
    Node* step = nullptr;
    if (!AtOp(":") && !AtOp(",") && !AtOp("]")) {
      upper = ParseTest();
    }
    if (AtOp(":")) {
      slice->op_spans.push_back(Advance().span);
      if (!AtOp(",") && !AtOp("]")) {
        step = ParseTest();
      }
    }
    slice->children = {lower, upper, step};
    return Finish(slice);
  }

  std::vector<Node*> ParseArgList() {
    std::vector<Node*> args;
    bool seen_keyword = false;
    bool seen_double_star = false;
    bool bare_generator = false;
    std::vector<std::string_view> keywords;
    while (!AtOp(")")) {
      std::size_t begin = Cur().span.begin;
      if (AtOp("*")) {
        Advance();
        if (seen_double_star) {
          Fail("iterable argument unpacking follows keyword argument unpacking");
        }
        Node* node = New(NodeKind::kStarred, begin);
        node->children.push_back(ParseTest());
        args.push_back(Finish(node));
      } else if (AtOp("**")) {
        Advance();
        Node* node = New(NodeKind::kDoubleStarred, begin);
        node->children.push_back(ParseTest());
        args.push_back(Finish(node));
        seen_double_star = true;
      } else if (AtName() && PeekIsOp(1, "=")) {
        Node* node = New(NodeKind::kKeyword, begin);
        std::string_view name = Advance().text;
        if (std::find(keywords.begin(), keywords.end(), name) !=
            keywords.end()) {
          Fail("keyword argument repeated: " + std::string(name));
        }
        keywords.push_back(name);
        node->op = std::string(name);
        Advance();
        node->children.push_back(ParseTest());
        args.push_back(Finish(node));
        seen_keyword = true;
      } else {
        Node* value = ParseNamedExprTest();
        if (AtKw("for") || (AtKw("async") && PeekIsKw(1, "for"))) {
          value = ParseComprehensionTail(NodeKind::kGeneratorExp, begin,
                                         {value});
          bare_generator = true;
        } else if (AtOp("=")) {
          Fail("expression cannot contain assignment");
        }
        if (seen_double_star) {
          Fail("positional argument follows keyword argument unpacking");
        }
        if (seen_keyword) {
          Fail("positional argument follows keyword argument");
        }
        args.push_back(value);
      }
      if (!AtOp(",")) {
        break;
      }
      Advance();
    }
    if (bare_generator && (args.size() > 1 || PrevIsOp(","))) {
      Fail("Generator expression must be parenthesized");
    }
    return args;
  }

  // Builds a comprehension node whose leading element(s) are `elements`, then
  // one or more for/if clauses as kComprehension children.
  Node* ParseComprehensionTail(NodeKind kind, std::size_t begin,
                               std::vector<Node*> elements) {
    Node* node = New(kind, begin);
    node->children = std::move(elements);
    while (AtKw("for") || (AtKw("async") && PeekIsKw(1, "for"))) {
      Node* clause = New(NodeKind::kComprehension, Cur().span.begin);
      if (AtKw("async")) {
        Advance();
        clause->is_async = true;
      }
      ExpectKw("for");
      Node* target = ParseTargetList();
      CheckAssignTarget(target);
      clause->children.push_back(target);
      ExpectKw("in");
      clause->children.push_back(ParseOrTest());
      while (AtKw("if")) {
        Advance();
        clause->children.push_back(ParseTestNoCond());
      }
      node->children.push_back(Finish(clause));
    }
    return Finish(node);
  }

  bool AtComprehension() const {
    return AtKw("for") || (AtKw("async") && PeekIsKw(1, "for"));
  }

  Node* ParseAtom() {
    const Token& t = Cur();
    std::size_t begin = t.span.begin;
    switch (t.kind) {
      case TokenKind::kNumber: {
        Node* node = New(NodeKind::kNumber, begin);
        Advance();
        return Finish(node);
      }
      case TokenKind::kString:
        return ParseStrings();
      case TokenKind::kName: {
        if (t.text == "True" || t.text == "False" || t.text == "None") {
          Node* node = New(NodeKind::kConstant, begin);
          node->op = std::string(t.text);
          Advance();
          return Finish(node);
        }
        if (IsKeyword(t.text)) {
          FailUnexpected();
        }
        Node* node = New(NodeKind::kName, begin);
        node->op = std::string(t.text);
        Advance();
        return Finish(node);
      }
      case TokenKind::kOp:
        if (t.text == "(") {
          return ParseParenthesized();
        }
        if (t.text == "[") {
          return ParseListDisplay();
        }
        if (t.text == "{") {
          return ParseBraceDisplay();
        }
        if (t.text == "...") {
          Node* node = New(NodeKind::kEllipsis, begin);
          Advance();
          return Finish(node);
        }
        FailUnexpected();
      default:
        FailUnexpected();
    }
  }

  Node* ParseStrings() {
    Node* node = New(NodeKind::kString, Cur().span.begin);
    bool any_bytes = false;
    bool any_text = false;
    while (At(TokenKind::kString)) {
      const Token& t = Advance();
      std::size_t quote = t.text.find_first_of("'\"");
      std::string prefix(t.text.substr(0, quote));
      bool bytes = false;
      for (char c : prefix) {
        char lower = static_cast<char>(c | 0x20);
        if (lower == 'b') bytes = true;
        if (lower == 'f') node->is_fstring = true;
      }
      (bytes ? any_bytes : any_text) = true;
      node->op_spans.push_back(t.span);
    }
    if (any_bytes && any_text) {
      Fail("cannot mix bytes and nonbytes literals");
    }
    node->is_bytes = any_bytes;
    return Finish(node);
  }

  Node* ParseParenthesized() {
    std::size_t begin = ExpectOp("(").begin;
    if (AtOp(")")) {
      Advance();
      Node* tuple = New(NodeKind::kTuple, begin);
      tuple->parenthesized = true;
      return Finish(tuple);
    }
    if (AtKw("yield")) {
      Node* node = ParseYield();
      ExpectOp(")");
      node->parenthesized = true;
      return node;
    }
    std::size_t inner_begin = Cur().span.begin;
    Node* first = AtOp("*") ? ParseStarExpr() : ParseNamedExprTest();
    if (AtComprehension()) {
      if (first->kind == NodeKind::kStarred) {
        Fail("iterable unpacking cannot be used in comprehension");
      }
      Node* gen = ParseComprehensionTail(NodeKind::kGeneratorExp, begin,
                                         {first});
      ExpectOp(")");
      gen->span.end = last_end_;
      gen->parenthesized = true;
      return gen;
    }
    if (AtOp(",")) {
      Node* tuple = New(NodeKind::kTuple, begin);
      tuple->parenthesized = true;
      tuple->children.push_back(first);
      while (AtOp(",")) {
        Advance();
        if (AtOp(")")) {
          break;
        }
        tuple->children.push_back(AtOp("*") ? ParseStarExpr()
                                            : ParseNamedExprTest());
      }
      ExpectOp(")");
      return Finish(tuple);
    }
    ExpectOp(")");
    if (first->kind == NodeKind::kStarred) {
      Fail("can't use starred expression here");
    }
    (void)inner_begin;
    first->parenthesized = true;
    return first;
  }

  Node* ParseListDisplay() {
    std::size_t begin = ExpectOp("[").begin;
    if (AtOp("]")) {
      Advance();
      return Finish(New(NodeKind::kList, begin));
    }
    Node* first = AtOp("*") ? ParseStarExpr() : ParseNamedExprTest();
    if (AtComprehension()) {
      if (first->kind == NodeKind::kStarred) {
        Fail("iterable unpacking cannot be used in comprehension");
      }
      Node* comp = ParseComprehensionTail(NodeKind::kListComp, begin, {first});
      ExpectOp("]");
      return Finish(comp);
    }
    Node* list = New(NodeKind::kList, begin);
    list->children.push_back(first);
    while (AtOp(",")) {
      Advance();
      if (AtOp("]")) {
        break;
      }
      list->children.push_back(AtOp("*") ? ParseStarExpr()
                                         : ParseNamedExprTest());
    }
    ExpectOp("]");
    return Finish(list);
  }

  // Dict entries are stored as pairs of children (key, value); `**mapping`
  // entries are kDoubleStarred children.
  Node* ParseBraceDisplay() {
    std::size_t begin = ExpectOp("{").begin;
    if (AtOp("}")) {
      Advance();
      return Finish(New(NodeKind::kDict, begin));
    }
    std::vector<Node*> first_items;
    bool is_dict = false;
    if (AtOp("**")) {
      std::size_t star_begin = Advance().span.begin;
      Node* star = New(NodeKind::kDoubleStarred, star_begin);
      star->children.push_back(ParseBitOr());
      first_items.push_back(Finish(star));
      is_dict = true;
    } else {
      Node* first = AtOp("*") ? ParseStarExpr() : ParseNamedExprTest();
      if (AtOp(":")) {
        Advance();
        is_dict = true;
        first_items.push_back(first);
        first_items.push_back(ParseTest());
      } else {
        first_items.push_back(first);
      }
    }
    if (AtComprehension()) {
      if (first_items[0]->kind == NodeKind::kStarred ||
          first_items[0]->kind == NodeKind::kDoubleStarred) {
        Fail("unpacking cannot be used in comprehension");
      }
      Node* comp = ParseComprehensionTail(
          is_dict ? NodeKind::kDictComp : NodeKind::kSetComp, begin,
          first_items);
      ExpectOp("}");
      return Finish(comp);
    }
    Node* node = New(is_dict ? NodeKind::kDict : NodeKind::kSet, begin);
    node->children = first_items;
    while (AtOp(",")) {
      Advance();
      if (AtOp("}")) {
        break;
      }
      if (is_dict) {
        if (AtOp("**")) {
          std::size_t star_begin = Advance().span.begin;
          Node* star = New(NodeKind::kDoubleStarred, star_begin);
          star->children.push_back(ParseBitOr());
          node->children.push_back(Finish(star));
        } else {
          node->children.push_back(ParseTest());
          ExpectOp(":");
          node->children.push_back(ParseTest());
        }
      } else {
        node->children.push_back(AtOp("*") ? ParseStarExpr()
                                           : ParseNamedExprTest());
      }
    }
    ExpectOp("}");
    return Finish(node);
  }

  std::string source_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t last_end_ = 0;
  std::vector<Scope> scopes_;
  std::vector<std::unique_ptr<Node>> arena_;
};

}  // namespace

std::string_view NodeKindName(NodeKind kind) {
  switch (kind) {
    case NodeKind::kModule: return "module";
    case NodeKind::kBlock: return "block";
    case NodeKind::kExprStmt: return "expression statement";
    case NodeKind::kAssign: return "assignment";
    case NodeKind::kAugAssign: return "augmented assignment";
    case NodeKind::kAnnAssign: return "annotated assignment";
    case NodeKind::kPass: return "pass";
    case NodeKind::kBreak: return "break";
    case NodeKind::kContinue: return "continue";
    case NodeKind::kReturn: return "return";
    case NodeKind::kDelete: return "del";
    case NodeKind::kGlobal: return "global";
    case NodeKind::kNonlocal: return "nonlocal";
    case NodeKind::kImport: return "import";
    case NodeKind::kImportFrom: return "from-import";
    case NodeKind::kRaise: return "raise";
    case NodeKind::kAssert: return "assert";
    case NodeKind::kIf: return "if";
    case NodeKind::kWhile: return "while";
    case NodeKind::kFor: return "for";
    case NodeKind::kTry: return "try";
    case NodeKind::kExceptHandler: return "except";
    case NodeKind::kWith: return "with";
    case NodeKind::kWithItem: return "with item";
    case NodeKind::kFunctionDef: return "function definition";
    case NodeKind::kClassDef: return "class definition";
    case NodeKind::kName: return "name";
    case NodeKind::kNumber: return "literal";
    case NodeKind::kString: return "literal";
    case NodeKind::kConstant: return "constant";
    case NodeKind::kEllipsis: return "ellipsis";
    case NodeKind::kBoolOp: return "expression";
    case NodeKind::kNamedExpr: return "named expression";
    case NodeKind::kBinOp: return "expression";
    case NodeKind::kUnaryOp: return "expression";
    case NodeKind::kLambda: return "lambda";
    case NodeKind::kIfExp: return "conditional expression";
    case NodeKind::kDict: return "dict literal";
    case NodeKind::kSet: return "set display";
    case NodeKind::kList: return "list";
    case NodeKind::kTuple: return "tuple";
    case NodeKind::kListComp: return "list comprehension";
    case NodeKind::kSetComp: return "set comprehension";
    case NodeKind::kDictComp: return "dict comprehension";
    case NodeKind::kGeneratorExp: return "generator expression";
    case NodeKind::kComprehension: return "comprehension";
    case NodeKind::kAwait: return "await expression";
    case NodeKind::kYield: return "yield expression";
    case NodeKind::kYieldFrom: return "yield expression";
    case NodeKind::kCompare: return "comparison";
    case NodeKind::kCall: return "function call";
    case NodeKind::kKeyword: return "keyword";
    case NodeKind::kAttribute: return "attribute";
    case NodeKind::kSubscript: return "subscript";
    case NodeKind::kStarred: return "starred";
    case NodeKind::kDoubleStarred: return "double starred";
    case NodeKind::kSlice: return "slice";
    case NodeKind::kArguments: return "arguments";
    case NodeKind::kArg: return "argument";
  }
  return "node";
}

std::shared_ptr<const SyntaxTree> Parse(std::string source) {
  return Parser(std::move(source)).Run();
}

}  // namespace cexec::python
