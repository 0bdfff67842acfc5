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

#include "fedchain/chain_io.hpp"

#include <map>
#include <system_error>

#include "fedchain/error.hpp"
#include "fedchain/text.hpp"

namespace fedchain {

namespace fs = std::filesystem;

const std::vector<std::string> kBlockFields = {
    "index",         "round",         "timestamp_ms", "prev_hash",      "hash",
    "consensus",     "difficulty_bits", "nonce",      "poet_seed",      "poet_mean_ms",
    "poet_wait_ms",  "sealer_id",     "participant_id", "model_ref",    "total_time_s",
    "block_size_mb", "chain_size_mb", "cc_score"};

namespace {

std::vector<std::string> FieldValues(const Block& b) {
  const BlockHeader& h = b.header;
  const BlockBody& y = b.body;
  return {std::to_string(h.index),
          std::to_string(h.round),
          std::to_string(h.timestamp_ms),
          ToHex(h.prev_hash),
          ToHex(b.hash),
          std::string(ConsensusName(h.consensus)),
          std::to_string(h.difficulty_bits),
          std::to_string(h.nonce),
          std::to_string(h.poet_seed),
          text::FormatDouble(h.poet_mean_ms),
          text::FormatDouble(h.poet_wait_ms),
          h.sealer_id,
          y.participant_id,
          ToHex(y.model_ref),
          text::FormatDouble(y.total_time_s),
          text::FormatDouble(y.block_size_mb),
          text::FormatDouble(y.chain_size_mb),
          text::FormatDouble(y.cc_score)};
}

// Throws std::invalid_argument with the field name; callers wrap it.
Block BlockFromFields(const std::map<std::string, std::string>& f) {
  auto get = [&](const std::string& key) -> const std::string& {
    auto it = f.find(key);
    if (it == f.end()) throw std::invalid_argument("missing field " + key);
    return it->second;
  };
  auto u64 = [&](const std::string& key) {
    std::uint64_t v = 0;
    if (!text::ParseU64(get(key), v)) throw std::invalid_argument("bad " + key);
    return v;
  };
  auto dbl = [&](const std::string& key) {
    double v = 0;
    if (!text::ParseDouble(get(key), v)) throw std::invalid_argument("bad " + key);
    return v;
  };
  auto digest = [&](const std::string& key) {
    auto d = DigestFromHex(get(key));
    if (!d) throw std::invalid_argument("bad " + key);
    return *d;
  };

  Block b;
  BlockHeader& h = b.header;
  h.index = u64("index");
  h.round = u64("round");
  h.timestamp_ms = u64("timestamp_ms");
  h.prev_hash = digest("prev_hash");
  b.hash = digest("hash");
  auto kind = ParseConsensus(get("consensus"));
  if (!kind) throw std::invalid_argument("bad consensus");
  h.consensus = *kind;
  std::uint64_t bits = u64("difficulty_bits");
  if (bits > 0xffffffffULL) throw std::invalid_argument("bad difficulty_bits");
  h.difficulty_bits = static_cast<std::uint32_t>(bits);
  h.nonce = u64("nonce");
  h.poet_seed = u64("poet_seed");
  h.poet_mean_ms = dbl("poet_mean_ms");
  h.poet_wait_ms = dbl("poet_wait_ms");
  h.sealer_id = get("sealer_id");
  b.body.participant_id = get("participant_id");
  b.body.model_ref = digest("model_ref");
  b.body.total_time_s = dbl("total_time_s");
  b.body.block_size_mb = dbl("block_size_mb");
  b.body.chain_size_mb = dbl("chain_size_mb");
  b.body.cc_score = dbl("cc_score");
  return b;
}

fs::path BlockFile(const fs::path& dir, std::size_t n) {
  return dir / ("block-" + std::to_string(n) + ".txt");
}

Block ReadBlockFile(const fs::path& dir, std::size_t n) {
  const std::string name = "block-" + std::to_string(n);
  fs::path path = BlockFile(dir, n);
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw Error(ErrorCode::kCorruptExport, name);
  std::map<std::string, std::string> fields;
  for (const std::string& raw : text::Split(text::ReadFile(path), '\n')) {
    if (text::Trim(raw).empty()) continue;
    auto eq = raw.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kCorruptExport, name + ": malformed line");
    fields[raw.substr(0, eq)] = raw.substr(eq + 1);
  }
  try {
    Block b = BlockFromFields(fields);
    if (b.header.index != n) throw std::invalid_argument("index does not match file name");
    return b;
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorCode::kCorruptExport, name + ": " + e.what());
  }
}

std::string OwnerOf(const std::vector<Block>& blocks) {
  return blocks.empty() ? std::string() : blocks.front().body.participant_id;
}

}  // namespace

std::string BlockCsvHeader() { return text::Join(kBlockFields, ','); }

std::string BlockCsvRow(const Block& block) { return text::Join(FieldValues(block), ','); }

std::string BlockMetadata(const Block& block) {
  auto values = FieldValues(block);
  std::string out;
  for (std::size_t i = 0; i < kBlockFields.size(); ++i) {
    out += kBlockFields[i] + "=" + values[i] + "\n";
  }
  return out;
}

void ExportChain(const Chain& chain, const fs::path& dir, const ModelStore* models) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir.string() + ": " + ec.message());
  std::string csv = BlockCsvHeader() + "\n";
  for (const Block& b : chain.blocks()) {
    csv += BlockCsvRow(b) + "\n";
    text::WriteFile(BlockFile(dir, b.header.index), BlockMetadata(b));
  }
  text::WriteFile(dir / "chain.csv", csv);
  // Drop block files left over from a longer chain previously exported here.
  for (std::size_t n = chain.size(); fs::exists(BlockFile(dir, n), ec); ++n) {
    fs::remove(BlockFile(dir, n), ec);
  }

  if (models) {
    fs::create_directories(dir / "models", ec);
    if (ec) throw Error(ErrorCode::kIoError, "cannot create models dir: " + ec.message());
    for (const Block& b : chain.blocks()) {
      auto it = models->find(b.body.model_ref);
      if (it == models->end()) continue;
      fs::path path = dir / "models" / (ToHex(b.body.model_ref) + ".vec");
      if (fs::exists(path, ec)) continue;
      text::WriteFile(path, SerializeParams(it->second));
    }
  }
}

Chain ReadExport(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::kIoError, "no such directory " + dir.string());
  fs::path csv_path = dir / "chain.csv";
  if (!fs::is_regular_file(csv_path, ec)) throw Error(ErrorCode::kCorruptExport, "chain.csv missing");
  auto lines = text::Split(text::ReadFile(csv_path), '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines.front() != BlockCsvHeader()) {
    throw Error(ErrorCode::kCorruptExport, "chain.csv: bad header row");
  }

  std::vector<Block> blocks;
  for (std::size_t row = 1; row < lines.size(); ++row) {
    const std::size_t n = row - 1;
    Block from_txt = ReadBlockFile(dir, n);
    if (lines[row] != BlockCsvRow(from_txt)) {
      throw Error(ErrorCode::kCorruptExport,
                  "chain.csv row " + std::to_string(row) + " disagrees with block-" +
                      std::to_string(n) + ".txt");
    }
    blocks.push_back(std::move(from_txt));
  }
  Chain chain(OwnerOf(blocks));
  chain.mutable_blocks() = std::move(blocks);
  return chain;
}

Chain ImportRestore(const fs::path& dir) {
  Chain chain = ReadExport(dir);
  if (auto bad = VerifyChain(chain)) {
    throw Error(ErrorCode::kCorruptExport,
                "block-" + std::to_string(*bad) + " fails verification");
  }
  return chain;
}

Chain RestoreFromMetadata(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::kIoError, "no such directory " + dir.string());
  std::vector<Block> blocks;
  for (std::size_t n = 0; fs::is_regular_file(BlockFile(dir, n), ec); ++n) {
    blocks.push_back(ReadBlockFile(dir, n));
  }
  Chain chain(OwnerOf(blocks));
  chain.mutable_blocks() = std::move(blocks);
  return chain;
}

ModelStore ImportModels(const fs::path& dir) {
  ModelStore store;
  fs::path models = dir / "models";
  std::error_code ec;
  if (!fs::is_directory(models, ec)) return store;
  for (const auto& entry : fs::directory_iterator(models)) {
    if (entry.path().extension() != ".vec") continue;
    const std::string name = "models/" + entry.path().filename().string();
    auto ref = DigestFromHex(entry.path().stem().string());
    if (!ref) throw Error(ErrorCode::kCorruptExport, name + ": bad file name");
    std::string bytes = text::ReadFile(entry.path());
    if (Sha256(bytes) != *ref) throw Error(ErrorCode::kCorruptExport, name + ": content hash mismatch");
    try {
      store.emplace(*ref, DeserializeParams(bytes));
    } catch (const Error& e) {
      throw Error(ErrorCode::kCorruptExport, name + ": " + e.what());
    }
  }
  return store;
}

}  // namespace fedchain
