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

#ifndef CEXEC_OPERATORS_H_
#define CEXEC_OPERATORS_H_

#include <array>
#include <optional>
#include <string_view>

namespace cexec {

// The twelve mutation operators.
enum class MutationOperator {
  kCRP,  // constant replacement
  kAOD,  // arithmetic operator deletion (unary + / -)
  kAOR,  // arithmetic operator replacement
  kASR,  // augmented assignment operator replacement
  kBCR,  // break <-> continue
  kCOD,  // delete `not` / turn `not in` into `in`
  kLCR,  // and <-> or
  kROR,  // relational operator replacement
  kSIR,  // slice index removal
  kOIL,  // one-iteration loop (append break)
  kRIL,  // reverse iteration loop (wrap iterable in reversed())
  kZIL,  // zero-iteration loop (prepend break)
};

inline constexpr std::array<MutationOperator, 12> kAllOperators = {
    MutationOperator::kCRP, MutationOperator::kAOD, MutationOperator::kAOR,
    MutationOperator::kASR, MutationOperator::kBCR, MutationOperator::kCOD,
    MutationOperator::kLCR, MutationOperator::kROR, MutationOperator::kSIR,
    MutationOperator::kOIL, MutationOperator::kRIL, MutationOperator::kZIL};

std::string_view OperatorCode(MutationOperator op);
std::optional<MutationOperator> OperatorFromCode(std::string_view code);

inline bool IsLoopOperator(MutationOperator op) {
  return op == MutationOperator::kOIL || op == MutationOperator::kRIL ||
         op == MutationOperator::kZIL;
}

}  // namespace cexec

#endif  // CEXEC_OPERATORS_H_
