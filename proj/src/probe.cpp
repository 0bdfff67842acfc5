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

#include "fedchain/probe.hpp"

#include <sys/statvfs.h>
#include <unistd.h>

#include <fstream>
#include <sstream>
#include <thread>

#include "fedchain/error.hpp"
#include "fedchain/text.hpp"

namespace fedchain {

void SimulatedProbe::Configure(std::string device_id, ResourceProfile profile) {
  profile.Validate();
  profiles_.insert_or_assign(std::move(device_id), profile);
}

void SimulatedProbe::SetOffline(std::string device_id, bool offline) {
  if (offline) {
    offline_.insert(std::move(device_id));
  } else {
    offline_.erase(device_id);
  }
}

ResourceProfile SimulatedProbe::Probe(std::string_view device_id) const {
  if (offline_.contains(device_id)) {
    throw Error(ErrorCode::kProbeTimeout, std::string(device_id) + " did not respond");
  }
  auto it = profiles_.find(device_id);
  return it == profiles_.end() ? fallback_ : it->second;
}

namespace {

constexpr double kGiB = 1024.0 * 1024.0 * 1024.0;

// Aggregate counters over all non-loopback interfaces from /proc/net/dev.
void ReadNetDev(ResourceProfile& p) {
  std::ifstream in("/proc/net/dev");
  std::string line;
  int lineno = 0;
  p.bytes_sent = p.bytes_received = p.packets_sent = p.packets_received = 0;
  p.packet_error = p.packet_drop = 0;
  while (std::getline(in, line)) {
    if (++lineno <= 2) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    if (text::Trim(std::string_view(line).substr(0, colon)) == "lo") continue;
    auto fields = text::SplitWhitespace(std::string_view(line).substr(colon + 1));
    if (fields.size() < 16) continue;
    std::uint64_t v[16] = {};
    for (int i = 0; i < 16; ++i) text::ParseU64(fields[i], v[i]);
    p.bytes_received += v[0];
    p.packets_received += v[1];
    p.packet_error += v[2] + v[10];
    p.packet_drop += v[3] + v[11];
    p.bytes_sent += v[8];
    p.packets_sent += v[9];
  }
}

void ReadMeminfo(ResourceProfile& p) {
  std::ifstream in("/proc/meminfo");
  std::string line;
  while (std::getline(in, line)) {
    auto fields = text::SplitWhitespace(line);
    if (fields.size() < 2) continue;
    std::uint64_t kb = 0;
    if (!text::ParseU64(fields[1], kb)) continue;
    double gb = static_cast<double>(kb) * 1024.0 / kGiB;
    if (fields[0] == "MemAvailable:") p.virtual_mem_gb = gb;
    if (fields[0] == "SwapFree:") p.swap_mem_gb = gb;
  }
}

// Busy fraction between two /proc/stat samples 50 ms apart.
double SampleCpuUtil() {
  auto read = [](std::uint64_t& busy, std::uint64_t& total) {
    std::ifstream in("/proc/stat");
    std::string line;
    std::getline(in, line);
    auto f = text::SplitWhitespace(line);
    busy = total = 0;
    for (std::size_t i = 1; i < f.size(); ++i) {
      std::uint64_t v = 0;
      text::ParseU64(f[i], v);
      total += v;
      if (i != 4 && i != 5) busy += v;  // idle, iowait
    }
  };
  std::uint64_t b0, t0, b1, t1;
  read(b0, t0);
  std::this_thread::sleep_for(std::chrono::milliseconds(50));
  read(b1, t1);
  if (t1 <= t0) return 0.0;
  return 100.0 * static_cast<double>(b1 - b0) / static_cast<double>(t1 - t0);
}

}  // namespace

ResourceProfile LocalHostProbe::Probe(std::string_view) const {
  ResourceProfile p;
  p.os = ResourceProfile::Os::kLinux;
  p.power = ResourceProfile::Power::kDesktop;
  long online = sysconf(_SC_NPROCESSORS_ONLN);
  p.logical_cpus = online > 0 ? static_cast<std::uint32_t>(online) : 1;
  // Without topology parsing assume one hardware thread per core.
  p.physical_cpus = p.logical_cpus;
  struct statvfs vfs {};
  if (statvfs("/", &vfs) == 0) {
    double frsize = static_cast<double>(vfs.f_frsize);
    p.disk_total_gb = static_cast<double>(vfs.f_blocks) * frsize / kGiB;
    p.disk_free_gb = static_cast<double>(vfs.f_bavail) * frsize / kGiB;
    p.disk_used_gb = static_cast<double>(vfs.f_blocks - vfs.f_bfree) * frsize / kGiB;
  }
  ReadMeminfo(p);
  ReadNetDev(p);
  p.cpu_util_pct = SampleCpuUtil();
  return p;
}

namespace {

template <typename E>
bool ParseEnum(std::string_view v, std::initializer_list<std::pair<std::string_view, E>> table,
               E& out) {
  for (auto& [name, e] : table) {
    if (v == name) {
      out = e;
      return true;
    }
  }
  return false;
}

}  // namespace

bool ApplyProfileOverride(ResourceProfile& p, std::string_view key, std::string_view value) {
  using R = ResourceProfile;
  auto bad = [&] {
    throw Error(ErrorCode::kParseError,
                "bad value '" + std::string(value) + "' for " + std::string(key));
  };
  auto u64 = [&](std::uint64_t& field) {
    if (!text::ParseU64(value, field)) bad();
  };
  auto u32 = [&](std::uint32_t& field) {
    std::uint64_t v = 0;
    if (!text::ParseU64(value, v) || v > 0xffffffffULL) bad();
    field = static_cast<std::uint32_t>(v);
  };
  auto dbl = [&](double& field) {
    if (!text::ParseDouble(value, field)) bad();
  };

  if (key == "os") {
    if (!ParseEnum<R::Os>(value,
                          {{"linux", R::Os::kLinux}, {"windows", R::Os::kWindows},
                           {"macos", R::Os::kMacos}, {"bsd", R::Os::kBsd},
                           {"solaris", R::Os::kSolaris}, {"aix", R::Os::kAix}},
                          p.os)) {
      bad();
    }
  } else if (key == "python_support") {
    if (!ParseEnum<R::Python>(
            value, {{"py27", R::Python::kPy27}, {"py34plus", R::Python::kPy34Plus},
                    {"pypy", R::Python::kPypy}},
            p.python_support)) {
      bad();
    }
  } else if (key == "power") {
    if (!ParseEnum<R::Power>(value,
                             {{"desktop", R::Power::kDesktop},
                              {"mobile_plugged", R::Power::kMobilePlugged},
                              {"mobile_unplugged", R::Power::kMobileUnplugged}},
                             p.power)) {
      bad();
    }
  } else if (key == "bytes_sent") {
    u64(p.bytes_sent);
  } else if (key == "bytes_received") {
    u64(p.bytes_received);
  } else if (key == "packets_sent") {
    u64(p.packets_sent);
  } else if (key == "packets_received") {
    u64(p.packets_received);
  } else if (key == "packet_error") {
    u64(p.packet_error);
  } else if (key == "packet_drop") {
    u64(p.packet_drop);
  } else if (key == "battery_pct") {
    dbl(p.battery_pct);
  } else if (key == "disk_total_gb") {
    dbl(p.disk_total_gb);
  } else if (key == "disk_used_gb") {
    dbl(p.disk_used_gb);
  } else if (key == "disk_free_gb") {
    dbl(p.disk_free_gb);
  } else if (key == "logical_cpus") {
    u32(p.logical_cpus);
  } else if (key == "physical_cpus") {
    u32(p.physical_cpus);
  } else if (key == "cpu_util_pct") {
    dbl(p.cpu_util_pct);
  } else if (key == "virtual_mem_gb") {
    dbl(p.virtual_mem_gb);
  } else if (key == "swap_mem_gb") {
    dbl(p.swap_mem_gb);
  } else {
    return false;
  }
  return true;
}

std::vector<RosterEntry> ParseRoster(std::string_view contents) {
  std::vector<RosterEntry> out;
  std::size_t lineno = 0;
  for (const std::string& raw : text::Split(contents, '\n')) {
    ++lineno;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto fields = text::SplitWhitespace(line);
    if (fields.empty()) continue;
    auto where = [&] { return "roster line " + std::to_string(lineno) + ": "; };
    if (fields.size() < 2) throw Error(ErrorCode::kParseError, where() + "expected id and role");

    RosterEntry entry;
    entry.device_id = std::string(fields[0]);
    if (!IsValidDeviceId(entry.device_id)) {
      throw Error(ErrorCode::kParseError, where() + "bad device id");
    }
    auto role = ParseRole(fields[1]);
    if (!role) throw Error(ErrorCode::kParseError, where() + "unknown role");
    entry.role = *role;

    for (std::size_t i = 2; i < fields.size(); ++i) {
      auto eq = fields[i].find('=');
      if (eq == std::string_view::npos) {
        throw Error(ErrorCode::kParseError, where() + "expected key=value");
      }
      auto key = fields[i].substr(0, eq);
      auto value = fields[i].substr(eq + 1);
      try {
        if (key == "offline") {
          entry.offline = value == "1" || value == "true";
        } else if (key == "delay_s") {
          double d = 0;
          if (!text::ParseDouble(value, d) || d < 0) throw Error(ErrorCode::kParseError, "delay_s");
          entry.delay_s = d;
        } else if (!ApplyProfileOverride(entry.profile, key, value)) {
          throw Error(ErrorCode::kParseError, "unknown key " + std::string(key));
        }
      } catch (const Error& e) {
        throw Error(ErrorCode::kParseError, where() + e.what());
      }
    }
    try {
      entry.profile.Validate();
    } catch (const Error& e) {
      throw Error(ErrorCode::kParseError, where() + e.what());
    }
    out.push_back(std::move(entry));
  }
  return out;
}

std::vector<RosterEntry> LoadRoster(const std::filesystem::path& path) {
  return ParseRoster(text::ReadFile(path));
}

}  // namespace fedchain
