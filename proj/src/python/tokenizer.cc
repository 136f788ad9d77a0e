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

#include "cexec/python/tokenizer.h"

#include <algorithm>
#include <array>
#include <string>

#include "cexec/error.h"

namespace cexec::python {

namespace {

constexpr std::array<std::string_view, 35> kKeywords = {
    "False",  "None",   "True",    "and",      "as",       "assert", "async",
    "await",  "break",  "class",   "continue", "def",      "del",    "elif",
    "else",   "except", "finally", "for",      "from",     "global", "if",
    "import", "in",     "is",      "lambda",   "nonlocal", "not",    "or",
    "pass",   "raise",  "return",  "try",      "while",    "with",   "yield"};

// Longest operators first so a greedy scan picks the right one.
constexpr std::array<std::string_view, 48> kOperators = {
    "**=", "//=", ">>=", "<<=", "...", "->", ":=", "!=", "==", "<=", "<>",
    ">=",  "**",  "//",  "<<",  ">>",  "+=", "-=", "*=", "/=", "%=", "&=",
    "|=",  "^=",  "@=",  "(",   ")",   "[",  "]",  "{",  "}",  ",",  ":",
    ";",   ".",   "@",   "=",   "+",   "-",  "*",  "/",  "%",  "&",  "|",
    "^",   "~",   "<",   ">"};

bool IsDigit(char c) { return c >= '0' && c <= '9'; }

bool IsHexDigit(char c) {
  return IsDigit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

class Lexer {
 public:
  explicit Lexer(std::string_view source) : src_(source) {}

  std::vector<Token> Run() {
    indents_.push_back(0);
    while (pos_ < src_.size()) {
      if (at_line_start_ && depth_ == 0) {
        if (!HandleIndentation()) {
          continue;
        }
      }
      ScanToken();
    }
    if (depth_ > 0) {
      Fail("unexpected EOF while inside brackets");
    }
    if (!tokens_.empty() && tokens_.back().kind != TokenKind::kNewline &&
        tokens_.back().kind != TokenKind::kDedent &&
        tokens_.back().kind != TokenKind::kIndent) {
      Emit(TokenKind::kNewline, pos_, pos_);
    }
    while (indents_.size() > 1) {
      indents_.pop_back();
      Emit(TokenKind::kDedent, pos_, pos_);
    }
    Emit(TokenKind::kEndMarker, pos_, pos_);
    return std::move(tokens_);
  }

 private:
  [[noreturn]] void Fail(const std::string& what) const {
    throw Error(ErrorCode::kSyntaxError,
                "line " + std::to_string(line_) + ": " + what);
  }

  void Emit(TokenKind kind, std::size_t begin, std::size_t end) {
    Token token;
    token.kind = kind;
    token.span = Span{begin, end};
    if (kind != TokenKind::kIndent && kind != TokenKind::kDedent &&
        kind != TokenKind::kEndMarker) {
      token.text = src_.substr(begin, end - begin);
    }
    token.line = line_;
    tokens_.push_back(token);
  }

  char Peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  bool AtNewline() const { return Peek() == '\n' || Peek() == '\r'; }

  void ConsumeNewline() {
    if (Peek() == '\r' && Peek(1) == '\n') {
      pos_ += 2;
    } else {
      ++pos_;
    }
    ++line_;
  }

  // Measures indentation at the start of a logical line. Returns false when
  // the line is blank or comment-only (no tokens produced, line consumed).
  bool HandleIndentation() {
    int column = 0;
    std::size_t p = pos_;
    while (p < src_.size()) {
      char c = src_[p];
      if (c == ' ') {
        ++column;
      } else if (c == '\t') {
        column = (column / 8 + 1) * 8;
      } else if (c == '\f') {
        column = 0;
      } else {
        break;
      }
      ++p;
    }
    pos_ = p;
    if (pos_ >= src_.size()) {
      return false;
    }
    if (Peek() == '#') {
      while (pos_ < src_.size() && !AtNewline()) {
        ++pos_;
      }
    }
    if (AtNewline()) {
      ConsumeNewline();
      return false;
    }
    if (pos_ >= src_.size()) {
      return false;
    }
    if (Peek() == '\\' && (Peek(1) == '\n' || Peek(1) == '\r')) {
      // A continuation on an otherwise empty line joins with the next one.
      ++pos_;
      ConsumeNewline();
      return false;
    }
    at_line_start_ = false;
    if (column > indents_.back()) {
      indents_.push_back(column);
      Emit(TokenKind::kIndent, pos_, pos_);
    } else {
      while (column < indents_.back()) {
        indents_.pop_back();
        Emit(TokenKind::kDedent, pos_, pos_);
      }
      if (column != indents_.back()) {
        Fail("unindent does not match any outer indentation level");
      }
    }
    return true;
  }

  void ScanToken() {
    char c = Peek();
    if (c == ' ' || c == '\t' || c == '\f') {
      ++pos_;
      return;
    }
    if (c == '#') {
      while (pos_ < src_.size() && !AtNewline()) {
        ++pos_;
      }
      return;
    }
    if (c == '\n' || c == '\r') {
      if (depth_ == 0) {
        std::size_t begin = pos_;
        std::size_t end = pos_ + ((c == '\r' && Peek(1) == '\n') ? 2 : 1);
        Emit(TokenKind::kNewline, begin, end);
        at_line_start_ = true;
      }
      ConsumeNewline();
      return;
    }
    if (c == '\\') {
      if (Peek(1) == '\n' || Peek(1) == '\r') {
        ++pos_;
        ConsumeNewline();
        if (pos_ >= src_.size()) {
          Fail("unexpected EOF after line continuation");
        }
        return;
      }
      Fail("unexpected character after line continuation character");
    }
    if (IsDigit(c) || (c == '.' && IsDigit(Peek(1)))) {
      ScanNumber();
      return;
    }
    if (IsIdentifierStart(static_cast<unsigned char>(c))) {
      std::size_t begin = pos_;
      while (pos_ < src_.size() &&
             IsIdentifierChar(static_cast<unsigned char>(Peek()))) {
        ++pos_;
      }
      std::string_view word = src_.substr(begin, pos_ - begin);
      if ((Peek() == '\'' || Peek() == '"') && IsStringPrefix(word)) {
        ScanString(begin);
        return;
      }
      Emit(TokenKind::kName, begin, pos_);
      return;
    }
    if (c == '\'' || c == '"') {
      ScanString(pos_);
      return;
    }
    ScanOperator();
  }

  static bool IsStringPrefix(std::string_view word) {
    if (word.empty() || word.size() > 2) {
      return false;
    }
    std::string lower;
    for (char ch : word) {
      lower.push_back(static_cast<char>(ch | 0x20));
    }
    return lower == "r" || lower == "u" || lower == "b" || lower == "f" ||
           lower == "br" || lower == "rb" || lower == "fr" || lower == "rf";
  }

  void ScanString(std::size_t begin) {
    char quote = Peek();
    bool triple = Peek(1) == quote && Peek(2) == quote;
    pos_ += triple ? 3 : 1;
    int start_line = line_;
    while (true) {
      if (pos_ >= src_.size()) {
        line_ = start_line;
        Fail(triple ? "unterminated triple-quoted string literal"
                    : "unterminated string literal");
      }
      char c = Peek();
      if (c == '\\') {
        ++pos_;
        if (pos_ < src_.size()) {
          if (AtNewline()) {
            ConsumeNewline();
          } else {
            ++pos_;
          }
        }
        continue;
      }
      if (c == '\n' || c == '\r') {
        if (!triple) {
          Fail("unterminated string literal");
        }
        ConsumeNewline();
        continue;
      }
      if (c == quote) {
        if (!triple) {
          ++pos_;
          break;
        }
        if (Peek(1) == quote && Peek(2) == quote) {
          pos_ += 3;
          break;
        }
      }
      ++pos_;
    }
    Token token;
    token.kind = TokenKind::kString;
    token.span = Span{begin, pos_};
    token.text = src_.substr(begin, pos_ - begin);
    token.line = start_line;
    tokens_.push_back(token);
  }

  // Consumes digits matching `is_digit`, allowing single underscores between
  // digits. Returns the number of digits read.
  template <typename Pred>
  int ScanDigits(Pred is_digit) {
    int count = 0;
    while (true) {
      if (is_digit(Peek())) {
        ++pos_;
        ++count;
      } else if (Peek() == '_' && count > 0 && is_digit(Peek(1))) {
        ++pos_;
      } else {
        break;
      }
    }
    if (Peek() == '_') {
      Fail("invalid decimal literal");
    }
    return count;
  }

  void ScanNumber() {
    std::size_t begin = pos_;
    auto dec = [](char ch) { return IsDigit(ch); };
    if (Peek() == '0' && (Peek(1) == 'x' || Peek(1) == 'X' || Peek(1) == 'o' ||
                          Peek(1) == 'O' || Peek(1) == 'b' || Peek(1) == 'B')) {
      char radix = static_cast<char>(Peek(1) | 0x20);
      pos_ += 2;
      if (Peek() == '_') {
        ++pos_;
      }
      int count = 0;
      if (radix == 'x') {
        count = ScanDigits([](char ch) { return IsHexDigit(ch); });
      } else if (radix == 'o') {
        count = ScanDigits([](char ch) { return ch >= '0' && ch <= '7'; });
      } else {
        count = ScanDigits([](char ch) { return ch == '0' || ch == '1'; });
      }
      if (count == 0 || IsDigit(Peek())) {
        Fail("invalid numeric literal");
      }
      Emit(TokenKind::kNumber, begin, pos_);
      return;
    }
    bool is_float = false;
    int int_digits = 0;
    if (Peek() != '.') {
      int_digits = ScanDigits(dec);
    }
    if (Peek() == '.') {
      is_float = true;
      ++pos_;
      if (IsDigit(Peek())) {
        ScanDigits(dec);
      }
    }
    if (Peek() == 'e' || Peek() == 'E') {
      std::size_t save = pos_;
      ++pos_;
      if (Peek() == '+' || Peek() == '-') {
        ++pos_;
      }
      if (IsDigit(Peek())) {
        ScanDigits(dec);
        is_float = true;
      } else {
        pos_ = save;
      }
    }
    bool imaginary = false;
    if (Peek() == 'j' || Peek() == 'J') {
      ++pos_;
      imaginary = true;
    }
    if (!is_float && !imaginary && int_digits > 1 && src_[begin] == '0') {
      std::string_view digits = src_.substr(begin, pos_ - begin);
      if (digits.find_first_not_of("0_") != std::string_view::npos) {
        Fail("leading zeros in decimal integer literals are not permitted");
      }
    }
    Emit(TokenKind::kNumber, begin, pos_);
  }

  void ScanOperator() {
    for (std::string_view op : kOperators) {
      if (src_.substr(pos_, op.size()) == op) {
        if (op == "<>") {
          Fail("invalid syntax '<>'");
        }
        std::size_t begin = pos_;
        pos_ += op.size();
        if (op == "(" || op == "[" || op == "{") {
          brackets_.push_back(op[0]);
          ++depth_;
        } else if (op == ")" || op == "]" || op == "}") {
          char open = op == ")" ? '(' : (op == "]" ? '[' : '{');
          if (brackets_.empty() || brackets_.back() != open) {
            Fail("unmatched '" + std::string(op) + "'");
          }
          brackets_.pop_back();
          --depth_;
        }
        Emit(TokenKind::kOp, begin, pos_);
        return;
      }
    }
    Fail(std::string("invalid character '") + Peek() + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int depth_ = 0;
  bool at_line_start_ = true;
  std::vector<int> indents_;
  std::vector<char> brackets_;
  std::vector<Token> tokens_;
};

}  // namespace

bool IsIdentifierStart(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
         c >= 0x80;
}

bool IsIdentifierChar(unsigned char c) {
  return IsIdentifierStart(c) || (c >= '0' && c <= '9');
}

bool IsKeyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) !=
         kKeywords.end();
}

std::vector<Token> Tokenize(std::string_view source) {
  return Lexer(source).Run();
}

}  // namespace cexec::python
