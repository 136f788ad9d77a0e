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

#include "cexec/trace.h"

#include <algorithm>
#include <set>

#include "cexec/error.h"
#include "cexec/python/tokenizer.h"

namespace cexec {

std::string_view StatusName(ExecutionStatus status) {
  switch (status) {
    case ExecutionStatus::kOk:
      return "ok";
    case ExecutionStatus::kRuntimeError:
      return "runtime_error";
    case ExecutionStatus::kTimeout:
      return "timeout";
    case ExecutionStatus::kTraceLimitExceeded:
      return "trace_limit_exceeded";
  }
  return "ok";
}

ExecutionStatus StatusFromName(std::string_view name) {
  for (ExecutionStatus status :
       {ExecutionStatus::kOk, ExecutionStatus::kRuntimeError,
        ExecutionStatus::kTimeout, ExecutionStatus::kTraceLimitExceeded}) {
    if (StatusName(status) == name) {
      return status;
    }
  }
  throw Error(ErrorCode::kMalformedRecord,
              "unknown execution status '" + std::string(name) + "'");
}

std::string_view TierToken(TierPrefix tier) {
  switch (tier) {
    case TierPrefix::kSingleLine:
      return "[SINGLELINE]";
    case TierPrefix::kTutorial:
      return "[TUTORIAL]";
    case TierPrefix::kCodeNetMut:
      return "[CODENETMUT]";
  }
  return "[CODENETMUT]";
}

TierPrefix TierFromName(std::string_view name) {
  for (TierPrefix tier : {TierPrefix::kSingleLine, TierPrefix::kTutorial,
                          TierPrefix::kCodeNetMut}) {
    std::string_view token = TierToken(tier);
    std::string bare;
    for (char c : token.substr(1, token.size() - 2)) {
      bare.push_back(static_cast<char>(c | 0x20));
    }
    if (name == token || name == bare) {
      return tier;
    }
  }
  throw Error(ErrorCode::kMalformedRecord,
              "unknown tier '" + std::string(name) + "'");
}

std::string LineToken(int line_no) {
  return "[" + std::to_string(line_no) + "]";
}

const std::vector<std::string>& SpecialVocabulary() {
  static const std::vector<std::string> vocabulary = [] {
    std::vector<std::string> v;
    for (int i = 1; i <= kMaxProgramLines; ++i) {
      v.push_back(LineToken(i));
    }
    for (TierPrefix tier : {TierPrefix::kSingleLine, TierPrefix::kTutorial,
                            TierPrefix::kCodeNetMut}) {
      v.emplace_back(TierToken(tier));
    }
    for (std::string_view token :
         {tokens::kLine, tokens::kState, tokens::kDictSep, tokens::kStateEnd,
          tokens::kIndent, tokens::kDedent, tokens::kE2D}) {
      v.emplace_back(token);
    }
    return v;
  }();
  return vocabulary;
}

namespace {

std::string_view Trim(std::string_view text) {
  std::size_t begin = text.find_first_not_of(" \t\r\f\v");
  if (begin == std::string_view::npos) {
    return {};
  }
  std::size_t end = text.find_last_not_of(" \t\r\f\v");
  return text.substr(begin, end - begin + 1);
}

void AppendToken(std::string& out, std::string_view token) {
  if (token.empty()) {
    return;
  }
  if (!out.empty()) {
    out.push_back(' ');
  }
  out += token;
}

}  // namespace

std::string EncodeCode(const Program& program, TierPrefix prefix) {
  if (program.line_count() > kMaxProgramLines) {
    throw Error(ErrorCode::kTooManyLines,
                "cannot encode " + std::to_string(program.line_count()) +
                    " lines");
  }
  const std::string& source = program.source();
  std::vector<int> indents(static_cast<std::size_t>(program.line_count()) + 2);
  std::vector<int> dedents(indents.size());
  for (const python::Token& token : python::Tokenize(source)) {
    if (token.kind == python::TokenKind::kIndent) {
      ++indents[static_cast<std::size_t>(token.line)];
    } else if (token.kind == python::TokenKind::kDedent &&
               token.span.begin < source.size()) {
      ++dedents[static_cast<std::size_t>(token.line)];
    }
  }
  std::string out(TierToken(prefix));
  std::size_t start = 0;
  for (int line = 1; line <= program.line_count(); ++line) {
    std::size_t nl = source.find('\n', start);
    std::string_view text = std::string_view(source).substr(
        start, nl == std::string::npos ? std::string::npos : nl - start);
    start = nl == std::string::npos ? source.size() : nl + 1;
    AppendToken(out, LineToken(line));
    auto index = static_cast<std::size_t>(line);
    for (int i = 0; i < indents[index]; ++i) {
      AppendToken(out, tokens::kIndent);
    }
    for (int i = 0; i < dedents[index]; ++i) {
      AppendToken(out, tokens::kDedent);
    }
    AppendToken(out, Trim(text));
  }
  return out;
}

std::string EncodeTraceLine(const TraceLine& line) {
  if (line.line_no < 1 || line.line_no > kMaxProgramLines) {
    throw Error(ErrorCode::kLineNumberOutOfRange,
                "line number " + std::to_string(line.line_no) +
                    " outside [1, " + std::to_string(kMaxProgramLines) + "]");
  }
  std::string out(tokens::kLine);
  out += ' ';
  out += LineToken(line.line_no);
  out += ' ';
  out += tokens::kState;
  for (std::size_t i = 0; i < line.state.size(); ++i) {
    out += i == 0 ? " " : " [DICTSEP] ";
    out += line.state[i].first;
    out += " : ";
    out += line.state[i].second;
  }
  out += ' ';
  out += tokens::kStateEnd;
  return out;
}

std::string EncodeTrace(const Trace& trace) {
  std::string out;
  for (const TraceLine& line : trace.lines) {
    AppendToken(out, EncodeTraceLine(line));
  }
  return out;
}

std::string EncodeSingleLineTarget(const Trace& trace) {
  if (trace.lines.empty()) {
    throw Error(ErrorCode::kEmptyTrace, "trace has no lines");
  }
  return EncodeTraceLine(trace.lines.back());
}

namespace {

class TraceScanner {
 public:
  explicit TraceScanner(std::string_view text) : text_(text) {}

  DecodedTrace Run() {
    DecodedTrace result;
    while (true) {
      SkipSpace();
      if (pos_ >= text_.size()) {
        return result;
      }
      TraceLine line;
      if (!ParseLine(line)) {
        result.malformed = true;
        return result;
      }
      result.trace.lines.push_back(std::move(line));
    }
  }

 private:
  static bool IsSpace(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
  }

  void SkipSpace() {
    while (pos_ < text_.size() && IsSpace(text_[pos_])) {
      ++pos_;
    }
  }

  // Matches `token` at the cursor when it is followed by space or the end.
  bool TokenAt(std::size_t at, std::string_view token) const {
    if (text_.substr(at, token.size()) != token) {
      return false;
    }
    std::size_t after = at + token.size();
    return after >= text_.size() || IsSpace(text_[after]);
  }

  bool Consume(std::string_view token) {
    SkipSpace();
    if (!TokenAt(pos_, token)) {
      return false;
    }
    pos_ += token.size();
    return true;
  }

  std::string_view Word() {
    SkipSpace();
    std::size_t begin = pos_;
    while (pos_ < text_.size() && !IsSpace(text_[pos_])) {
      ++pos_;
    }
    return text_.substr(begin, pos_ - begin);
  }

  static bool IsIdentifier(std::string_view word) {
    if (word.empty() ||
        !python::IsIdentifierStart(static_cast<unsigned char>(word[0]))) {
      return false;
    }
    return std::all_of(word.begin(), word.end(), [](char c) {
      return python::IsIdentifierChar(static_cast<unsigned char>(c));
    });
  }

  // Reads a value up to (not including) the space before [DICTSEP] or
  // [STATEEND], skipping over quoted strings.
  bool Value(std::string& out) {
    SkipSpace();
    std::size_t begin = pos_;
    char quote = 0;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (quote != 0) {
        if (c == '\\') {
          pos_ += 2;
          continue;
        }
        if (c == quote) {
          quote = 0;
        }
        ++pos_;
        continue;
      }
      if (c == '\'' || c == '"') {
        quote = c;
        ++pos_;
        continue;
      }
      if (IsSpace(c)) {
        std::size_t next = pos_;
        while (next < text_.size() && IsSpace(text_[next])) {
          ++next;
        }
        if (TokenAt(next, tokens::kDictSep) ||
            TokenAt(next, tokens::kStateEnd)) {
          out = std::string(text_.substr(begin, pos_ - begin));
          return !out.empty();
        }
      }
      ++pos_;
    }
    return false;
  }

  bool ParseLine(TraceLine& line) {
    if (!Consume(tokens::kLine)) {
      return false;
    }
    std::string_view number = Word();
    if (number.size() < 3 || number.front() != '[' || number.back() != ']') {
      return false;
    }
    std::string_view digits = number.substr(1, number.size() - 2);
    if (digits.find_first_not_of("0123456789") != std::string_view::npos ||
        digits.size() > 4 || digits[0] == '0') {
      return false;
    }
    line.line_no = std::stoi(std::string(digits));
    if (line.line_no > kMaxProgramLines) {
      return false;
    }
    if (!Consume(tokens::kState)) {
      return false;
    }
    if (Consume(tokens::kStateEnd)) {
      return true;
    }
    std::set<std::string, std::less<>> seen;
    while (true) {
      std::string_view name = Word();
      if (!IsIdentifier(name) || !seen.insert(std::string(name)).second) {
        return false;
      }
      if (!Consume(":")) {
        return false;
      }
      std::string value;
      if (!Value(value)) {
        return false;
      }
      line.state.emplace_back(std::string(name), std::move(value));
      if (Consume(tokens::kDictSep)) {
        continue;
      }
      return Consume(tokens::kStateEnd);
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

DecodedTrace DecodeTrace(std::string_view text) {
  return TraceScanner(text).Run();
}

}  // namespace cexec
