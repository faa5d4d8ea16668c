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


#ifndef KGBENCH_PIPELINE_MANIFEST_H_
#define KGBENCH_PIPELINE_MANIFEST_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace kgbench {

inline constexpr char kToolVersion[] = "kgbench 0.1.0";

// Artifact names are paths relative to the run directory. Inputs that live
// outside it (corpus files, stoplists, fixtures) are keyed "external:<path>"
// with an absolute path.
struct StageRecord {
  std::string key;  // command, or "evaluate:<model>:<mode>"
  std::string command;
  std::string params_digest;
  std::map<std::string, std::string> inputs;   // name -> sha256
  std::map<std::string, std::string> outputs;  // name -> sha256
  std::string started_at;
  std::string finished_at;
};

struct RunManifest {
  std::string run_id;
  std::string tool_version = kToolVersion;
  std::string config_digest;
  std::string created_at;
  std::vector<StageRecord> stages;  // in order of first execution

  const StageRecord* Find(const std::string& key) const;
  // Replaces the record with the same key in place, or appends.
  void Upsert(StageRecord record);
  // The record whose outputs contain `artifact`, if any.
  const StageRecord* Producer(const std::string& artifact) const;
};

void to_json(nlohmann::json& j, const StageRecord& r);
void from_json(const nlohmann::json& j, StageRecord& r);
void to_json(nlohmann::json& j, const RunManifest& m);
void from_json(const nlohmann::json& j, RunManifest& m);

RunManifest ReadManifest(const std::filesystem::path& path);
void WriteManifest(const RunManifest& manifest, const std::filesystem::path& path);

// Digest of a named input: run-directory artifact or external file.
std::string ArtifactDigest(const std::filesystem::path& run_dir, const std::string& name);
std::string ExternalName(const std::filesystem::path& path);

// Lists every inconsistency: a recorded file missing or differing from its
// digest on disk, and a stage input whose digest differs from what its
// producing stage last wrote. Empty means the manifest is complete.
std::vector<std::string> VerifyManifest(const RunManifest& manifest,
                                        const std::filesystem::path& run_dir);

// Exclusive per-run-directory lock held for the lifetime of the object.
class RunLock {
 public:
  explicit RunLock(const std::filesystem::path& run_dir);
  ~RunLock();
  RunLock(const RunLock&) = delete;
  RunLock& operator=(const RunLock&) = delete;

 private:
  std::filesystem::path path_;
};

}  // namespace kgbench

#endif  // KGBENCH_PIPELINE_MANIFEST_H_
