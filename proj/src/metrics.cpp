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

#include "fedchain/metrics.hpp"

#include <filesystem>
#include <sstream>

#include "fedchain/error.hpp"
#include "fedchain/text.hpp"

namespace fedchain {

namespace {

std::string List(const std::vector<std::string>& ids) { return text::Join(ids, ';'); }

std::string Pairs(const std::map<std::string, double>& values) {
  std::vector<std::string> parts;
  for (const auto& [id, v] : values) parts.push_back(id + ":" + text::FormatDouble(v));
  return text::Join(parts, ';');
}

}  // namespace

std::string MetricsCsv(const std::vector<RoundReport>& reports, bool with_wall_clock) {
  std::ostringstream out;
  out << "round,skipped,global_loss,eligible,committee,trainers,excluded,rejected,accepted,"
         "cc_scores,reputation,epsilon,simulated_time_s,cumulative_time_s,blocks_appended,"
         "total_blocks,tip_index,block_size_mb,chain_size_mb";
  if (with_wall_clock) out << ",wall_time_s";
  out << '\n';
  for (const auto& r : reports) {
    out << r.round << ',' << (r.skipped ? 1 : 0) << ',' << text::FormatDouble(r.global_loss) << ','
        << List(r.eligible) << ',' << List(r.committee) << ',' << List(r.trainers) << ','
        << List(r.excluded_devices) << ',' << List(r.rejected_devices) << ','
        << List(r.accepted_devices) << ',' << Pairs(r.cc_scores) << ',' << Pairs(r.reputation)
        << ',' << (r.epsilon ? text::FormatDouble(*r.epsilon) : std::string()) << ','
        << text::FormatDouble(r.simulated_time_s) << ','
        << text::FormatDouble(r.cumulative_time_s) << ',' << r.blocks_appended << ','
        << r.total_blocks << ',' << r.tip_index << ',' << text::FormatDouble(r.block_size_mb)
        << ',' << text::FormatDouble(r.chain_size_mb);
    if (with_wall_clock) out << ',' << text::FormatDouble(r.wall_time_s);
    out << '\n';
  }
  return out.str();
}

std::string StorageCsv(const std::map<std::string, Chain, std::less<>>& chains) {
  std::map<std::uint64_t, std::pair<std::size_t, std::size_t>> by_index;  // blocks, bytes
  for (const auto& [id, chain] : chains) {
    for (const auto& b : chain.blocks()) {
      auto& [count, bytes] = by_index[b.header.index];
      ++count;
      bytes += CanonicalBytes(b.header, b.body).size();
    }
  }
  std::ostringstream out;
  out << "index,blocks,block_size_mb,chain_size_mb,serialized_bytes\n";
  for (const auto& [n, entry] : by_index) {
    out << n << ',' << entry.first << ',' << text::FormatDouble(BlockSizeMb(n)) << ','
        << text::FormatDouble(ChainSizeMb(n)) << ',' << entry.second << '\n';
  }
  return out.str();
}

void EmitMetrics(const std::vector<RoundReport>& reports,
                 const std::map<std::string, Chain, std::less<>>& chains,
                 const std::filesystem::path& dir, bool with_wall_clock) {
  if (reports.empty()) throw Error(ErrorCode::kEmptyInput, "no rounds to report");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir.string() + ": " + ec.message());
  text::WriteFile(dir / "metrics.csv", MetricsCsv(reports, with_wall_clock));
  text::WriteFile(dir / "storage.csv", StorageCsv(chains));
}

}  // namespace fedchain
