// Copyright 2026 The kgbench Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KGBENCH_UTIL_ERROR_H_
#define KGBENCH_UTIL_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace kgbench {

// Failure categories. Each maps onto one CLI exit code.
enum class ErrorKind {
  kValidation,      // precondition or schema violation
  kParse,           // malformed input file or response
  kMigration,       // schema version mismatch
  kStaleRun,        // config digest differs from manifest
  kDependency,      // upstream artifact missing
  kTransport,       // network failure after retries
  kProtocol,        // provider answered with malformed payload
  kProvider,        // provider-side fault (e.g. dimension mismatch)
  kDegenerateFit,   // numerically singular GMM component
  kUndefinedRate,   // empty denominator in a behavioral metric
  kNoHardNegative,  // chain has no sibling branch
  kItemDiscarded,   // synthesis gave up on an item
  kExtraction,      // triplet extraction failed for a node
  kAdjudication,    // no ensemble member produced a usable verdict
  kContext,         // RAG context could not be assembled
  kStage,           // pipeline stage failed, partial output kept
};

std::string_view ErrorKindName(ErrorKind kind);

// CLI exit codes: 2 validation, 3 dependency, 4 provider, 1 anything else.
int ExitCodeFor(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void Fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void Require(bool condition, const std::string& message) {
  if (!condition) Fail(ErrorKind::kValidation, message);
}

}  // namespace kgbench

#endif  // KGBENCH_UTIL_ERROR_H_
