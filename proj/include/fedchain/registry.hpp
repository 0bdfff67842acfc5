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

#ifndef FEDCHAIN_REGISTRY_HPP_
#define FEDCHAIN_REGISTRY_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fedchain/hash.hpp"

namespace fedchain {

enum class DeviceRole { kHonest, kPoisoner, kStraggler };

std::string_view RoleName(DeviceRole role);
std::optional<DeviceRole> ParseRole(std::string_view name);

struct RegistrationRecord {
  std::string device_id;
  std::uint64_t registered_at = 0;  // round index
  DeviceRole declared_role = DeviceRole::kHonest;
};

struct DeviceToken {
  Digest token{};
  std::string device_id;

  std::string hex() const { return ToHex(token); }
};

// Hardware and network snapshot of one device.
struct ResourceProfile {
  enum class Os { kLinux, kWindows, kMacos, kBsd, kSolaris, kAix };
  enum class Python { kPy27, kPy34Plus, kPypy };
  enum class Power { kDesktop, kMobilePlugged, kMobileUnplugged };

  Os os = Os::kLinux;
  std::uint64_t bytes_sent = 0;
  std::uint64_t bytes_received = 0;
  std::uint64_t packets_sent = 0;
  std::uint64_t packets_received = 0;
  std::uint64_t packet_error = 0;
  std::uint64_t packet_drop = 0;
  Python python_support = Python::kPy34Plus;
  Power power = Power::kDesktop;
  double battery_pct = 100.0;
  double disk_total_gb = 256.0;
  double disk_used_gb = 56.0;
  double disk_free_gb = 200.0;
  std::uint32_t logical_cpus = 8;
  std::uint32_t physical_cpus = 4;
  double cpu_util_pct = 20.0;
  double virtual_mem_gb = 8.0;
  double swap_mem_gb = 2.0;

  // Throws Error(kInvalidArgument) naming the violated invariant.
  void Validate() const;
};

struct EligibilityPolicy {
  double min_free_disk_gb = 1.0;
  double min_battery_pct_unplugged = 20.0;
  double max_cpu_util_pct = 90.0;
  double min_virtual_mem_gb = 0.5;
  double max_packet_loss_ratio = 0.1;
};

enum class RejectReason { kNone, kDisk, kBattery, kCpu, kMemory, kNetwork };

std::string_view RejectReasonName(RejectReason reason);

struct Eligibility {
  bool eligible = true;
  RejectReason reason = RejectReason::kNone;

  static Eligibility Eligible() { return {}; }
  static Eligibility Rejected(RejectReason r) { return {false, r}; }
  bool operator==(const Eligibility&) const = default;
};

// Dropped packets over packets sent; 0 when nothing was sent.
double PacketLossRatio(const ResourceProfile& profile);

// Checks run in a fixed order (disk, battery, cpu, memory, network) and the
// first failing one is reported. The battery check only applies to unplugged
// mobile devices.
Eligibility CheckEligibility(const ResourceProfile& profile, const EligibilityPolicy& policy);

// token = SHA-256(seed as 8 little-endian bytes || device_id)
Digest ComputeToken(std::uint64_t seed, std::string_view device_id);

// Device ids double as directory names in chain exports.
bool IsValidDeviceId(std::string_view device_id);

class ResourceProbe;

// Single-writer registry of devices and their tokens. Lookups are const and
// safe to run concurrently with each other.
class Registry {
 public:
  Registry(std::uint64_t seed, std::shared_ptr<const ResourceProbe> probe);

  std::pair<RegistrationRecord, DeviceToken> Register(std::string device_id, DeviceRole role,
                                                      std::uint64_t round = 0);

  bool Verify(const DeviceToken& token) const;
  // Throws kUnknownToken.
  const RegistrationRecord& Lookup(const Digest& token) const;
  // Throws kUnknownDevice.
  const RegistrationRecord& Record(std::string_view device_id) const;
  const DeviceToken& TokenOf(std::string_view device_id) const;

  // Throws kUnknownToken for a forged token, kProbeTimeout for an offline device.
  ResourceProfile PingDevice(const Digest& token) const;

  // Device ids in registration order.
  const std::vector<std::string>& devices() const { return order_; }
  std::size_t size() const { return order_.size(); }
  std::uint64_t seed() const { return seed_; }

 private:
  struct Entry {
    RegistrationRecord record;
    DeviceToken token;
  };

  std::uint64_t seed_;
  std::shared_ptr<const ResourceProbe> probe_;
  std::map<std::string, Entry, std::less<>> by_id_;
  std::map<Digest, std::string> by_token_;
  std::vector<std::string> order_;
};

}  // namespace fedchain

#endif  // FEDCHAIN_REGISTRY_HPP_
