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


#include "kgbench/pipeline/manifest.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>

#include "kgbench/util/digest.h"
#include "kgbench/util/error.h"
#include "kgbench/util/files.h"
#include "kgbench/util/jsonl.h"

namespace kgbench {
namespace {

constexpr char kExternalPrefix[] = "external:";

std::filesystem::path ArtifactPath(const std::filesystem::path& run_dir,
                                   const std::string& name) {
  if (name.rfind(kExternalPrefix, 0) == 0) {
    return std::filesystem::path(name.substr(std::strlen(kExternalPrefix)));
  }
  return run_dir / name;
}

}  // namespace

const StageRecord* RunManifest::Find(const std::string& key) const {
  for (const auto& s : stages) {
    if (s.key == key) return &s;
  }
  return nullptr;
}

void RunManifest::Upsert(StageRecord record) {
  for (auto& s : stages) {
    if (s.key == record.key) {
      s = std::move(record);
      return;
    }
  }
  stages.push_back(std::move(record));
}

const StageRecord* RunManifest::Producer(const std::string& artifact) const {
  for (const auto& s : stages) {
    if (s.outputs.count(artifact)) return &s;
  }
  return nullptr;
}

void to_json(nlohmann::json& j, const StageRecord& r) {
  j = {{"key", r.key},
       {"command", r.command},
       {"params_digest", r.params_digest},
       {"inputs", r.inputs},
       {"outputs", r.outputs},
       {"started_at", r.started_at},
       {"finished_at", r.finished_at}};
}

void from_json(const nlohmann::json& j, StageRecord& r) {
  j.at("key").get_to(r.key);
  j.at("command").get_to(r.command);
  j.at("params_digest").get_to(r.params_digest);
  j.at("inputs").get_to(r.inputs);
  j.at("outputs").get_to(r.outputs);
  j.at("started_at").get_to(r.started_at);
  j.at("finished_at").get_to(r.finished_at);
}

void to_json(nlohmann::json& j, const RunManifest& m) {
  j = {{"run_id", m.run_id},
       {"tool_version", m.tool_version},
       {"config_digest", m.config_digest},
       {"created_at", m.created_at},
       {"stages", m.stages}};
}

void from_json(const nlohmann::json& j, RunManifest& m) {
  j.at("run_id").get_to(m.run_id);
  j.at("tool_version").get_to(m.tool_version);
  j.at("config_digest").get_to(m.config_digest);
  m.created_at = j.value("created_at", "");
  j.at("stages").get_to(m.stages);
}

RunManifest ReadManifest(const std::filesystem::path& path) {
  try {
    return nlohmann::json::parse(ReadFile(path)).get<RunManifest>();
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorKind::kParse, path.string() + ": " + e.what());
  }
}

void WriteManifest(const RunManifest& manifest, const std::filesystem::path& path) {
  WriteFileAtomic(path, PrettyJson(manifest));
}

std::string ArtifactDigest(const std::filesystem::path& run_dir, const std::string& name) {
  return FileSha256Hex(ArtifactPath(run_dir, name));
}

std::string ExternalName(const std::filesystem::path& path) {
  return kExternalPrefix + std::filesystem::absolute(path).lexically_normal().string();
}

std::vector<std::string> VerifyManifest(const RunManifest& manifest,
                                        const std::filesystem::path& run_dir) {
  std::vector<std::string> problems;
  auto check_file = [&](const std::string& stage, const std::string& name,
                        const std::string& digest) {
    const auto path = ArtifactPath(run_dir, name);
    if (!std::filesystem::exists(path)) {
      problems.push_back(stage + ": " + name + " is missing");
    } else if (FileSha256Hex(path) != digest) {
      problems.push_back(stage + ": " + name + " differs from its recorded digest");
    }
  };
  for (const auto& stage : manifest.stages) {
    for (const auto& [name, digest] : stage.outputs) check_file(stage.key, name, digest);
    for (const auto& [name, digest] : stage.inputs) {
      if (const StageRecord* producer = manifest.Producer(name)) {
        if (producer->outputs.at(name) != digest) {
          problems.push_back(stage.key + ": consumed " + name + " is older than the output of " +
                             producer->key);
        }
      } else {
        check_file(stage.key, name, digest);
      }
    }
  }
  return problems;
}

RunLock::RunLock(const std::filesystem::path& run_dir) : path_(run_dir / "run.lock") {
  const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    if (errno == EEXIST) {
      Fail(ErrorKind::kValidation, "run directory is locked by another command (" +
                                       path_.string() + "); remove it if no command is running");
    }
    Fail(ErrorKind::kValidation, "cannot create " + path_.string() + ": " + std::strerror(errno));
  }
  const std::string pid = std::to_string(::getpid()) + "\n";
  [[maybe_unused]] const auto written = ::write(fd, pid.data(), pid.size());
  ::close(fd);
}

RunLock::~RunLock() {
  std::error_code ec;
  std::filesystem::remove(path_, ec);
}

}  // namespace kgbench
