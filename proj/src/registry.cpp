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

#include "fedchain/registry.hpp"

#include <cmath>

#include "fedchain/error.hpp"
#include "fedchain/probe.hpp"

namespace fedchain {

std::string_view RoleName(DeviceRole role) {
  switch (role) {
    case DeviceRole::kHonest: return "honest";
    case DeviceRole::kPoisoner: return "poisoner";
    case DeviceRole::kStraggler: return "straggler";
  }
  return "honest";
}

std::optional<DeviceRole> ParseRole(std::string_view name) {
  if (name == "honest") return DeviceRole::kHonest;
  if (name == "poisoner") return DeviceRole::kPoisoner;
  if (name == "straggler") return DeviceRole::kStraggler;
  return std::nullopt;
}

std::string_view RejectReasonName(RejectReason reason) {
  switch (reason) {
    case RejectReason::kNone: return "none";
    case RejectReason::kDisk: return "disk";
    case RejectReason::kBattery: return "battery";
    case RejectReason::kCpu: return "cpu";
    case RejectReason::kMemory: return "memory";
    case RejectReason::kNetwork: return "network";
  }
  return "none";
}

void ResourceProfile::Validate() const {
  auto fail = [](const char* what) { throw Error(ErrorCode::kInvalidArgument, what); };
  auto pct_ok = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 100.0; };
  if (!pct_ok(battery_pct)) fail("battery_pct outside [0,100]");
  if (!pct_ok(cpu_util_pct)) fail("cpu_util_pct outside [0,100]");
  for (double v : {disk_total_gb, disk_used_gb, disk_free_gb, virtual_mem_gb, swap_mem_gb}) {
    if (!std::isfinite(v) || v < 0.0) fail("negative or non-finite size");
  }
  // Small slack for gigabyte rounding in probed values.
  if (disk_used_gb + disk_free_gb > disk_total_gb * (1.0 + 1e-9) + 1e-9) {
    fail("disk_used_gb + disk_free_gb exceeds disk_total_gb");
  }
  if (physical_cpus < 1) fail("physical_cpus < 1");
  if (logical_cpus < physical_cpus) fail("logical_cpus < physical_cpus");
}

double PacketLossRatio(const ResourceProfile& profile) {
  if (profile.packets_sent == 0) return 0.0;
  return static_cast<double>(profile.packet_drop) / static_cast<double>(profile.packets_sent);
}

Eligibility CheckEligibility(const ResourceProfile& p, const EligibilityPolicy& policy) {
  if (p.disk_free_gb < policy.min_free_disk_gb) return Eligibility::Rejected(RejectReason::kDisk);
  if (p.power == ResourceProfile::Power::kMobileUnplugged &&
      p.battery_pct < policy.min_battery_pct_unplugged) {
    return Eligibility::Rejected(RejectReason::kBattery);
  }
  if (p.cpu_util_pct > policy.max_cpu_util_pct) return Eligibility::Rejected(RejectReason::kCpu);
  if (p.virtual_mem_gb < policy.min_virtual_mem_gb) {
    return Eligibility::Rejected(RejectReason::kMemory);
  }
  if (PacketLossRatio(p) > policy.max_packet_loss_ratio) {
    return Eligibility::Rejected(RejectReason::kNetwork);
  }
  return Eligibility::Eligible();
}

Digest ComputeToken(std::uint64_t seed, std::string_view device_id) {
  std::string buf;
  buf.reserve(8 + device_id.size());
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((seed >> (8 * i)) & 0xff));
  buf.append(device_id);
  return Sha256(buf);
}

bool IsValidDeviceId(std::string_view id) {
  if (id.empty() || id.size() > 128 || id == "." || id == "..") return false;
  for (char c : id) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
              c == '-' || c == '_' || c == '.';
    if (!ok) return false;
  }
  return true;
}

Registry::Registry(std::uint64_t seed, std::shared_ptr<const ResourceProbe> probe)
    : seed_(seed), probe_(std::move(probe)) {}

std::pair<RegistrationRecord, DeviceToken> Registry::Register(std::string device_id,
                                                              DeviceRole role,
                                                              std::uint64_t round) {
  if (!IsValidDeviceId(device_id)) {
    throw Error(ErrorCode::kInvalidArgument, "bad device id '" + device_id + "'");
  }
  if (by_id_.contains(device_id)) {
    throw Error(ErrorCode::kDuplicateDevice, device_id);
  }
  Entry entry{RegistrationRecord{device_id, round, role},
              DeviceToken{ComputeToken(seed_, device_id), device_id}};
  if (by_token_.contains(entry.token.token)) {
    // Would need a SHA-256 collision.
    throw Error(ErrorCode::kDuplicateDevice, "token collision for " + device_id);
  }
  by_token_.emplace(entry.token.token, device_id);
  order_.push_back(device_id);
  auto [it, _] = by_id_.emplace(std::move(device_id), std::move(entry));
  return {it->second.record, it->second.token};
}

bool Registry::Verify(const DeviceToken& token) const {
  auto it = by_token_.find(token.token);
  return it != by_token_.end() && it->second == token.device_id;
}

const RegistrationRecord& Registry::Lookup(const Digest& token) const {
  auto it = by_token_.find(token);
  if (it == by_token_.end()) throw Error(ErrorCode::kUnknownToken, ToHex(token));
  return by_id_.find(it->second)->second.record;
}

const RegistrationRecord& Registry::Record(std::string_view device_id) const {
  auto it = by_id_.find(device_id);
  if (it == by_id_.end()) throw Error(ErrorCode::kUnknownDevice, std::string(device_id));
  return it->second.record;
}

const DeviceToken& Registry::TokenOf(std::string_view device_id) const {
  auto it = by_id_.find(device_id);
  if (it == by_id_.end()) throw Error(ErrorCode::kUnknownDevice, std::string(device_id));
  return it->second.token;
}

ResourceProfile Registry::PingDevice(const Digest& token) const {
  const RegistrationRecord& rec = Lookup(token);
  if (!probe_) throw Error(ErrorCode::kProbeTimeout, "no probe attached");
  return probe_->Probe(rec.device_id);
}

}  // namespace fedchain
