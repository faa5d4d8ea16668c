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

#ifndef KGBENCH_UTIL_DIGEST_H_
#define KGBENCH_UTIL_DIGEST_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace kgbench {

// Lowercase hex SHA-256 of `data`.
std::string Sha256Hex(std::string_view data);

// SHA-256 of a file's bytes. Throws kValidation if unreadable.
std::string FileSha256Hex(const std::filesystem::path& path);

// First eight digest bytes read big-endian.
uint64_t DigestToU64(std::string_view data);

// Derives a stage seed:
//   seed = first 8 bytes (big-endian) of SHA-256("<master>|<stage>|<item>")
// where <master> is the decimal master seed. Any implementation that follows
// this rule reproduces the same derived seeds.
uint64_t DeriveSeed(uint64_t master_seed, std::string_view stage,
                    std::string_view item_id);

}  // namespace kgbench

#endif  // KGBENCH_UTIL_DIGEST_H_
