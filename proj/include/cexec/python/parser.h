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

#ifndef CEXEC_PYTHON_PARSER_H_
#define CEXEC_PYTHON_PARSER_H_

#include <memory>
#include <string>

#include "cexec/python/ast.h"

namespace cexec::python {

// Parses a Python 3.10 module (without structural pattern matching).
// Besides the grammar this applies the compile-time checks CPython performs
// on an AST: assignable targets, break/continue outside loops, return/yield
// outside functions, argument ordering. Throws Error(kSyntaxError).
std::shared_ptr<const SyntaxTree> Parse(std::string source);

}  // namespace cexec::python

#endif  // CEXEC_PYTHON_PARSER_H_
