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

#include "cexec/python/literals.h"

#include <charconv>
#include <cmath>
#include <limits>
#include <system_error>

namespace cexec::python {

namespace {

void AppendUtf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::optional<std::string> DecodeStringLiteral(std::string_view token) {
  std::size_t quote = token.find_first_of("'\"");
  if (quote == std::string_view::npos) {
    return std::nullopt;
  }
  bool raw = false;
  for (char c : token.substr(0, quote)) {
    char lower = static_cast<char>(c | 0x20);
    if (lower == 'r') {
      raw = true;
    } else if (lower != 'u') {
      return std::nullopt;
    }
  }
  std::string_view body = token.substr(quote);
  std::size_t delim = (body.size() >= 6 && body[0] == body[1] &&
                       body[1] == body[2])
                          ? 3
                          : 1;
  if (body.size() < 2 * delim) {
    return std::nullopt;
  }
  std::string_view content = body.substr(delim, body.size() - 2 * delim);
  if (raw) {
    return std::string(content);
  }
  std::string out;
  for (std::size_t i = 0; i < content.size(); ++i) {
    char c = content[i];
    if (c != '\\' || i + 1 >= content.size()) {
      out.push_back(c);
      continue;
    }
    char e = content[++i];
    switch (e) {
      case '\n':
        break;
      case '\r':
        if (i + 1 < content.size() && content[i + 1] == '\n') {
          ++i;
        }
        break;
      case '\\': out.push_back('\\'); break;
      case '\'': out.push_back('\''); break;
      case '"': out.push_back('"'); break;
      case 'a': out.push_back('\a'); break;
      case 'b': out.push_back('\b'); break;
      case 'f': out.push_back('\f'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      case 't': out.push_back('\t'); break;
      case 'v': out.push_back('\v'); break;
      case 'x':
      case 'u':
      case 'U': {
        std::size_t width = e == 'x' ? 2 : (e == 'u' ? 4 : 8);
        std::uint32_t cp = 0;
        for (std::size_t k = 1; k <= width; ++k) {
          if (i + k >= content.size()) {
            return std::nullopt;
          }
          int v = HexValue(content[i + k]);
          if (v < 0) {
            return std::nullopt;
          }
          cp = cp * 16 + static_cast<std::uint32_t>(v);
        }
        if (cp > 0x10FFFF) {
          return std::nullopt;
        }
        i += width;
        AppendUtf8(out, cp);
        break;
      }
      case 'N':
        return std::nullopt;
      default:
        if (e >= '0' && e <= '7') {
          std::uint32_t cp = static_cast<std::uint32_t>(e - '0');
          for (int k = 0; k < 2 && i + 1 < content.size() &&
                          content[i + 1] >= '0' && content[i + 1] <= '7';
               ++k) {
            cp = cp * 8 + static_cast<std::uint32_t>(content[++i] - '0');
          }
          AppendUtf8(out, cp);
        } else {
          out.push_back('\\');
          out.push_back(e);
        }
    }
  }
  return out;
}

std::string RenderStringLiteral(std::string_view value) {
  bool has_single = value.find('\'') != std::string_view::npos;
  bool has_double = value.find('"') != std::string_view::npos;
  char quote = (has_single && !has_double) ? '"' : '\'';
  std::string out(1, quote);
  for (char ch : value) {
    auto c = static_cast<unsigned char>(ch);
    if (ch == '\\') {
      out += "\\\\";
    } else if (ch == quote) {
      out.push_back('\\');
      out.push_back(ch);
    } else if (ch == '\n') {
      out += "\\n";
    } else if (ch == '\r') {
      out += "\\r";
    } else if (ch == '\t') {
      out += "\\t";
    } else if (c < 0x20 || c == 0x7F) {
      static constexpr char kHex[] = "0123456789abcdef";
      out += "\\x";
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    } else {
      out.push_back(ch);
    }
  }
  out.push_back(quote);
  return out;
}

std::optional<NumericLiteral> ParseNumericLiteral(std::string_view token) {
  std::string digits;
  for (char c : token) {
    if (c != '_') {
      digits.push_back(c);
    }
  }
  if (digits.empty() || digits.back() == 'j' || digits.back() == 'J') {
    return std::nullopt;
  }
  NumericLiteral literal;
  int base = 10;
  std::string_view body = digits;
  if (body.size() > 2 && body[0] == '0') {
    char radix = static_cast<char>(body[1] | 0x20);
    if (radix == 'x') base = 16;
    if (radix == 'o') base = 8;
    if (radix == 'b') base = 2;
    if (base != 10) {
      body.remove_prefix(2);
    }
  }
  bool looks_float =
      base == 10 && body.find_first_of(".eE") != std::string_view::npos;
  if (looks_float) {
    literal.is_integer = false;
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(),
                                     literal.float_value);
    if (ec != std::errc() || ptr != body.data() + body.size()) {
      return std::nullopt;
    }
    return literal;
  }
  std::uint64_t value = 0;
  auto [ptr, ec] =
      std::from_chars(body.data(), body.data() + body.size(), value, base);
  if (ec != std::errc() || ptr != body.data() + body.size() ||
      value > static_cast<std::uint64_t>(
                  std::numeric_limits<std::int64_t>::max())) {
    return std::nullopt;
  }
  literal.int_value = static_cast<std::int64_t>(value);
  literal.float_value = static_cast<double>(value);
  return literal;
}

std::string RenderIntegerLiteral(std::int64_t value) {
  std::string text = std::to_string(value);
  return value < 0 ? "(" + text + ")" : text;
}

std::string RenderFloatLiteral(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  std::string text(buffer, ptr);
  if (text.find_first_of(".en") == std::string::npos) {
    text += ".0";
  }
  return std::signbit(value) ? "(" + text + ")" : text;
}

void PopCodePoint(std::string& text) {
  while (!text.empty()) {
    auto c = static_cast<unsigned char>(text.back());
    text.pop_back();
    if ((c & 0xC0) != 0x80) {
      return;
    }
  }
}

}  // namespace cexec::python
