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

#ifndef FEDCHAIN_METRICS_HPP_
#define FEDCHAIN_METRICS_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "fedchain/chain.hpp"
#include "fedchain/simulation.hpp"

namespace fedchain {

// One row per round. List fields are ';'-joined, maps as id:value.
// wall_time_s is only included when requested because it breaks byte-level
// reproducibility.
std::string MetricsCsv(const std::vector<RoundReport>& reports, bool with_wall_clock = false);

// Per block index n: accounting sizes next to the real serialized bytes of the
// blocks stored at that index across all chains.
std::string StorageCsv(const std::map<std::string, Chain, std::less<>>& chains);

// Writes <dir>/metrics.csv and <dir>/storage.csv. Throws kIoError, or
// kEmptyInput when there are no reports.
void EmitMetrics(const std::vector<RoundReport>& reports,
                 const std::map<std::string, Chain, std::less<>>& chains,
                 const std::filesystem::path& dir, bool with_wall_clock = false);

}  // namespace fedchain

#endif  // FEDCHAIN_METRICS_HPP_
