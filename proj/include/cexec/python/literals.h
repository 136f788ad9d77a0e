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

#ifndef CEXEC_PYTHON_LITERALS_H_
#define CEXEC_PYTHON_LITERALS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace cexec::python {

// Decodes one string literal token (with optional r/u prefix) to its UTF-8
// value. Returns nullopt for bytes, f-strings and escapes we do not model
// (\N{...}).
std::optional<std::string> DecodeStringLiteral(std::string_view token);

// Renders `value` the way Python's repr() renders a str.
std::string RenderStringLiteral(std::string_view value);

struct NumericLiteral {
  bool is_integer = true;
  std::int64_t int_value = 0;
  double float_value = 0.0;
};

// Parses an int or float literal token. Imaginary literals and integers
// outside the int64 range yield nullopt.
std::optional<NumericLiteral> ParseNumericLiteral(std::string_view token);

// Source text for a numeric value; negative values are parenthesized so the
// text can replace a literal anywhere without changing how it binds.
std::string RenderIntegerLiteral(std::int64_t value);
std::string RenderFloatLiteral(double value);

// Removes the last UTF-8 code point of `text` (no-op when empty).
void PopCodePoint(std::string& text);

}  // namespace cexec::python

#endif  // CEXEC_PYTHON_LITERALS_H_
