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

#include "fedchain/config.hpp"

#include <functional>
#include <vector>

#include "fedchain/error.hpp"
#include "fedchain/text.hpp"

namespace fedchain {

namespace {

struct Field {
  std::string_view key;
  std::function<bool(SimConfig&, std::string_view)> set;
  std::function<std::string(const SimConfig&)> get;
};

template <typename Member>
Field SizeField(std::string_view key, Member member) {
  return {key,
          [member](SimConfig& c, std::string_view v) {
            std::uint64_t x = 0;
            if (!text::ParseU64(v, x)) return false;
            std::invoke(member, c) = static_cast<std::size_t>(x);
            return true;
          },
          [member](const SimConfig& c) { return std::to_string(std::invoke(member, c)); }};
}

template <typename Member>
Field DoubleField(std::string_view key, Member member) {
  return {key,
          [member](SimConfig& c, std::string_view v) {
            return text::ParseDouble(v, std::invoke(member, c));
          },
          [member](const SimConfig& c) { return text::FormatDouble(std::invoke(member, c)); }};
}

template <typename Member>
Field BoolField(std::string_view key, Member member) {
  return {key,
          [member](SimConfig& c, std::string_view v) {
            if (v == "1" || v == "true" || v == "on" || v == "yes") {
              std::invoke(member, c) = true;
            } else if (v == "0" || v == "false" || v == "off" || v == "no") {
              std::invoke(member, c) = false;
            } else {
              return false;
            }
            return true;
          },
          [member](const SimConfig& c) {
            return std::string(std::invoke(member, c) ? "true" : "false");
          }};
}

template <typename Member>
Field StringField(std::string_view key, Member member) {
  return {key,
          [member](SimConfig& c, std::string_view v) {
            std::invoke(member, c) = std::string(v);
            return true;
          },
          [member](const SimConfig& c) { return std::invoke(member, c); }};
}

template <typename Member>
Field U64Field(std::string_view key, Member member) {
  return {key,
          [member](SimConfig& c, std::string_view v) {
            return text::ParseU64(v, std::invoke(member, c));
          },
          [member](const SimConfig& c) { return std::to_string(std::invoke(member, c)); }};
}

#define FC_REF(expr) [](auto& c) -> auto& { return c.expr; }

const std::vector<Field>& Fields() {
  static const std::vector<Field> kFields = {
      SizeField("n_clients", FC_REF(n_clients)),
      StringField("roster_path", FC_REF(roster_path)),
      DoubleField("poisoner_fraction", FC_REF(poisoner_fraction)),
      DoubleField("straggler_fraction", FC_REF(straggler_fraction)),
      DoubleField("straggler_delay_s", FC_REF(straggler_delay_s)),
      {"poison_mode",
       [](SimConfig& c, std::string_view v) {
         if (v == "amplify") {
           c.poison.kind = PoisonMode::Kind::kAmplify;
         } else if (v == "random_noise") {
           c.poison.kind = PoisonMode::Kind::kRandomNoise;
         } else {
           return false;
         }
         return true;
       },
       [](const SimConfig& c) {
         return std::string(c.poison.kind == PoisonMode::Kind::kAmplify ? "amplify"
                                                                        : "random_noise");
       }},
      DoubleField("poison_magnitude", FC_REF(poison.magnitude)),
      StringField("data_path", FC_REF(data_path)),
      SizeField("synthetic_rows", FC_REF(synthetic_rows)),
      DoubleField("synthetic_noise", FC_REF(synthetic_noise)),
      DoubleField("holdout_fraction", FC_REF(holdout_fraction)),
      DoubleField("noise_level", FC_REF(noise_level)),
      SizeField("n_rounds", FC_REF(n_rounds)),
      SizeField("epochs", FC_REF(train.epochs)),
      DoubleField("lr", FC_REF(train.lr)),
      SizeField("batch_size", FC_REF(train.batch_size)),
      BoolField("defense_enabled", FC_REF(defense_enabled)),
      DoubleField("outlier_sigma", FC_REF(outlier_sigma)),
      SizeField("kmeans_iters", FC_REF(kmeans_iters)),
      SizeField("committee_size", FC_REF(committee_size)),
      DoubleField("cc_floor", FC_REF(cc_floor)),
      DoubleField("initial_score", FC_REF(reputation.initial_score)),
      DoubleField("participation_floor", FC_REF(reputation.participation_floor)),
      DoubleField("delta_interested", FC_REF(reputation.deltas.interested)),
      DoubleField("delta_successful_update", FC_REF(reputation.deltas.successful_update)),
      DoubleField("delta_response_delay", FC_REF(reputation.deltas.response_delay)),
      DoubleField("delta_resource_inability", FC_REF(reputation.deltas.resource_inability)),
      DoubleField("delta_divergent_update", FC_REF(reputation.deltas.divergent_update)),
      DoubleField("dp_sigma", FC_REF(dp_sigma)),
      DoubleField("dp_delta", FC_REF(dp_delta)),
      {"consensus",
       [](SimConfig& c, std::string_view v) {
         auto k = ParseConsensus(v);
         if (!k) return false;
         c.consensus = *k;
         return true;
       },
       [](const SimConfig& c) { return std::string(ConsensusName(c.consensus)); }},
      {"pow_bits",
       [](SimConfig& c, std::string_view v) {
         std::uint64_t x = 0;
         if (!text::ParseU64(v, x) || x > kMaxPowBits) return false;
         c.pow_bits = static_cast<std::uint32_t>(x);
         return true;
       },
       [](const SimConfig& c) { return std::to_string(c.pow_bits); }},
      DoubleField("poet_mean_ms", FC_REF(poet_mean_ms)),
      DoubleField("min_free_disk_gb", FC_REF(eligibility.min_free_disk_gb)),
      DoubleField("min_battery_pct_unplugged", FC_REF(eligibility.min_battery_pct_unplugged)),
      DoubleField("max_cpu_util_pct", FC_REF(eligibility.max_cpu_util_pct)),
      DoubleField("min_virtual_mem_gb", FC_REF(eligibility.min_virtual_mem_gb)),
      DoubleField("max_packet_loss_ratio", FC_REF(eligibility.max_packet_loss_ratio)),
      BoolField("early_stop", FC_REF(early_stop)),
      SizeField("convergence_window", FC_REF(convergence_window)),
      DoubleField("convergence_tol", FC_REF(convergence_tol)),
      U64Field("seed", FC_REF(seed)),
      U64Field("registry_seed", FC_REF(registry_seed)),
      StringField("output_dir", FC_REF(output_dir)),
      BoolField("record_wall_clock", FC_REF(record_wall_clock)),
  };
  return kFields;
}

#undef FC_REF

}  // namespace

void SimConfig::Validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvalidArgument, what); };
  if (roster_path.empty() && n_clients < 2) fail("n_clients must be >= 2");
  if (!(poisoner_fraction >= 0.0 && poisoner_fraction < 0.5)) {
    fail("poisoner_fraction must be in [0, 0.5)");
  }
  if (!(straggler_fraction >= 0.0 && straggler_fraction + poisoner_fraction <= 1.0)) {
    fail("straggler_fraction out of range");
  }
  if (!(straggler_delay_s >= 0.0)) fail("straggler_delay_s must be >= 0");
  if (!(poison.magnitude > 0.0)) fail("poison_magnitude must be > 0");
  if (!(synthetic_noise >= 0.0)) fail("synthetic_noise must be >= 0");
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) fail("holdout_fraction must be in (0,1)");
  if (!(noise_level >= 0.0)) fail("noise_level must be >= 0");
  if (n_rounds < 1) fail("n_rounds must be >= 1");
  if (!(train.lr > 0.0)) fail("lr must be > 0");
  if (train.batch_size < 1) fail("batch_size must be >= 1");
  if (!(outlier_sigma >= 0.0)) fail("outlier_sigma must be >= 0");
  if (committee_size < 1) fail("committee_size must be >= 1");
  if (!(cc_floor >= 0.0 && cc_floor <= 1.0)) fail("cc_floor must be in [0,1]");
  if (!(dp_sigma >= 0.0)) fail("dp_sigma must be >= 0");
  if (!(dp_delta > 0.0 && dp_delta < 1.0)) fail("dp_delta must be in (0,1)");
  if (pow_bits > kMaxPowBits) fail("pow_bits must be <= 32");
  if (!(poet_mean_ms > 0.0)) fail("poet_mean_ms must be > 0");
  const auto& e = eligibility;
  if (e.min_free_disk_gb < 0 || e.min_battery_pct_unplugged < 0 || e.max_cpu_util_pct < 0 ||
      e.min_virtual_mem_gb < 0 || e.max_packet_loss_ratio < 0) {
    fail("eligibility thresholds must be non-negative");
  }
  if (convergence_window < 1) fail("convergence_window must be >= 1");
}

void SetConfigValue(SimConfig& config, std::string_view key, std::string_view value) {
  for (const Field& f : Fields()) {
    if (f.key != key) continue;
    if (!f.set(config, value)) {
      throw Error(ErrorCode::kParseError,
                  "bad value '" + std::string(value) + "' for " + std::string(key));
    }
    return;
  }
  throw Error(ErrorCode::kParseError, "unknown config key " + std::string(key));
}

SimConfig ParseConfig(std::string_view contents, SimConfig base) {
  std::size_t lineno = 0;
  for (const std::string& raw : text::Split(contents, '\n')) {
    ++lineno;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::Trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kParseError, "config line " + std::to_string(lineno) +
                                              ": expected key=value");
    }
    try {
      SetConfigValue(base, text::Trim(line.substr(0, eq)), text::Trim(line.substr(eq + 1)));
    } catch (const Error& e) {
      throw Error(ErrorCode::kParseError, "config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return base;
}

SimConfig LoadConfig(const std::filesystem::path& path, SimConfig base) {
  return ParseConfig(text::ReadFile(path), std::move(base));
}

std::string DumpConfig(const SimConfig& config) {
  std::string out;
  for (const Field& f : Fields()) {
    out += std::string(f.key) + "=" + f.get(config) + "\n";
  }
  return out;
}

}  // namespace fedchain
