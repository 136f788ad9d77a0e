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

#include "cexec/error.h"

namespace cexec {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSyntaxError:
      return "SyntaxError";
    case ErrorCode::kTooManyLines:
      return "TooManyLines";
    case ErrorCode::kInsufficientInput:
      return "InsufficientInput";
    case ErrorCode::kInapplicableOperator:
      return "InapplicableOperator";
    case ErrorCode::kNonParsingResult:
      return "NonParsingResult";
    case ErrorCode::kHarnessFailure:
      return "HarnessFailure";
    case ErrorCode::kLineNumberOutOfRange:
      return "LineNumberOutOfRange";
    case ErrorCode::kEmptyTrace:
      return "EmptyTrace";
    case ErrorCode::kMalformedRecord:
      return "MalformedRecord";
    case ErrorCode::kMissingDifficulty:
      return "MissingDifficulty";
    case ErrorCode::kEmptyCorpus:
      return "EmptyCorpus";
    case ErrorCode::kDomainError:
      return "DomainError";
    case ErrorCode::kIoError:
      return "IoError";
    case ErrorCode::kUsage:
      return "Usage";
  }
  return "Unknown";
}

}  // namespace cexec
