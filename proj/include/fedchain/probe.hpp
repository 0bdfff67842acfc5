/*
 * Copyright 2026 The fedchain-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FEDCHAIN_PROBE_HPP_
#define FEDCHAIN_PROBE_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fedchain/registry.hpp"

namespace fedchain {

// Source of ResourceProfile snapshots for registered devices.
class ResourceProbe {
 public:
  virtual ~ResourceProbe() = default;
  // Throws Error(kProbeTimeout) when the device does not answer.
  virtual ResourceProfile Probe(std::string_view device_id) const = 0;
};

// Answers from per-device configuration. Devices without an explicit profile
// get the default one.
class SimulatedProbe : public ResourceProbe {
 public:
  SimulatedProbe() = default;
  explicit SimulatedProbe(ResourceProfile fallback) : fallback_(fallback) {}

  void Configure(std::string device_id, ResourceProfile profile);
  void SetOffline(std::string device_id, bool offline = true);

  ResourceProfile Probe(std::string_view device_id) const override;

 private:
  ResourceProfile fallback_;
  std::map<std::string, ResourceProfile, std::less<>> profiles_;
  std::set<std::string, std::less<>> offline_;
};

// Reads the local machine (Linux /proc and statvfs). Every device id maps to
// the same host. Fields the host cannot report keep their defaults.
class LocalHostProbe : public ResourceProbe {
 public:
  ResourceProfile Probe(std::string_view device_id) const override;
};

// One line of a roster file:
//   <device_id> <role> [key=value ...]
// Keys are ResourceProfile field names plus `offline` (0/1) and
// `delay_s` (straggler response delay). '#' starts a comment.
struct RosterEntry {
  std::string device_id;
  DeviceRole role = DeviceRole::kHonest;
  ResourceProfile profile;
  bool offline = false;
  std::optional<double> delay_s;
};

std::vector<RosterEntry> ParseRoster(std::string_view contents);
std::vector<RosterEntry> LoadRoster(const std::filesystem::path& path);

// Applies one key=value override to a profile. Returns false for unknown keys.
bool ApplyProfileOverride(ResourceProfile& profile, std::string_view key, std::string_view value);

}  // namespace fedchain

#endif  // FEDCHAIN_PROBE_HPP_
