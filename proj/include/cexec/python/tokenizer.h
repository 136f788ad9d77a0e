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

#ifndef CEXEC_PYTHON_TOKENIZER_H_
#define CEXEC_PYTHON_TOKENIZER_H_

#include <string_view>
#include <vector>

#include "cexec/span.h"

namespace cexec::python {

enum class TokenKind {
  kName,
  kNumber,
  kString,
  kOp,
  kNewline,
  kIndent,
  kDedent,
  kEndMarker,
};

struct Token {
  TokenKind kind;
  Span span;
  // View into the tokenized source. Empty for INDENT/DEDENT/ENDMARKER.
  std::string_view text;
  int line = 0;  // 1-based physical line of the first byte.
};

// Splits Python 3 source into tokens, synthesizing NEWLINE, INDENT and DEDENT
// the way the CPython tokenizer does. Throws Error(kSyntaxError) on lexical
// errors (unterminated strings, bad dedent, stray characters, unbalanced
// brackets). The returned views alias `source`.
std::vector<Token> Tokenize(std::string_view source);

bool IsIdentifierStart(unsigned char c);
bool IsIdentifierChar(unsigned char c);
bool IsKeyword(std::string_view word);

}  // namespace cexec::python

#endif  // CEXEC_PYTHON_TOKENIZER_H_
