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

#ifndef KGBENCH_UTIL_FILES_H_
#define KGBENCH_UTIL_FILES_H_

#include <filesystem>
#include <string>
#include <string_view>

namespace kgbench {

std::string ReadFile(const std::filesystem::path& path);

// Writes to a sibling temp file, then renames over `path`.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view data);

}  // namespace kgbench

#endif  // KGBENCH_UTIL_FILES_H_
