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

#include "kgbench/util/error.h"

namespace kgbench {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kValidation: return "validation";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kMigration: return "migration";
    case ErrorKind::kStaleRun: return "stale-run";
    case ErrorKind::kDependency: return "dependency";
    case ErrorKind::kTransport: return "transport";
    case ErrorKind::kProtocol: return "protocol";
    case ErrorKind::kProvider: return "provider";
    case ErrorKind::kDegenerateFit: return "degenerate-fit";
    case ErrorKind::kUndefinedRate: return "undefined-rate";
    case ErrorKind::kNoHardNegative: return "no-hard-negative";
    case ErrorKind::kItemDiscarded: return "item-discarded";
    case ErrorKind::kExtraction: return "extraction";
    case ErrorKind::kAdjudication: return "adjudication";
    case ErrorKind::kContext: return "context";
    case ErrorKind::kStage: return "stage";
  }
  return "unknown";
}

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kValidation:
    case ErrorKind::kParse:
    case ErrorKind::kMigration:
    case ErrorKind::kStaleRun:
      return 2;
    case ErrorKind::kDependency:
      return 3;
    case ErrorKind::kTransport:
    case ErrorKind::kProtocol:
    case ErrorKind::kProvider:
      return 4;
    default:
      return 1;
  }
}

}  // namespace kgbench
