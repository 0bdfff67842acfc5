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

#ifndef FEDCHAIN_CHAIN_HPP_
#define FEDCHAIN_CHAIN_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fedchain/hash.hpp"
#include "fedchain/model.hpp"

namespace fedchain {

enum class ConsensusKind : std::uint8_t { kPow = 0, kPoet = 1 };

std::string_view ConsensusName(ConsensusKind kind);
std::optional<ConsensusKind> ParseConsensus(std::string_view name);

struct BlockHeader {
  std::uint64_t index = 0;  // 0 is genesis
  Digest prev_hash{};       // all zeros for genesis
  std::uint64_t round = 0;
  std::uint64_t timestamp_ms = 0;  // simulated clock
  ConsensusKind consensus = ConsensusKind::kPow;
  std::uint32_t difficulty_bits = 0;  // PoW target
  std::uint64_t nonce = 0;
  std::uint64_t poet_seed = 0;  // seed of the winning wait draw
  double poet_mean_ms = 0.0;
  double poet_wait_ms = 0.0;
  std::string sealer_id;  // PoET winner; empty for PoW
};

struct BlockBody {
  std::string participant_id;
  Digest model_ref{};  // SHA-256 of SerializeParams(global model)
  double total_time_s = 0.0;
  double block_size_mb = 0.0;
  double chain_size_mb = 0.0;
  double cc_score = 0.0;
};

struct Block {
  BlockHeader header;
  BlockBody body;
  Digest hash{};  // HashBlock(header, body) at sealing time
};

// Accounting sizes for the block at index n.
inline double BlockSizeMb(std::uint64_t n) { return 0.03 + 0.01 * static_cast<double>(n); }
inline double ChainSizeMb(std::uint64_t n) { return 5.5 + 0.01 * static_cast<double>(n); }
inline constexpr double kAccountingTolerance = 1e-9;

// Canonical byte layout hashed for every block (big-endian integers, doubles as
// the shortest round-trip decimal, strings and decimals length-prefixed with a
// u32):
//
//   "FCB1" index:u64 prev_hash:32 round:u64 timestamp_ms:u64 consensus:u8
//   difficulty_bits:u32 nonce:u64 poet_seed:u64 poet_mean_ms:str
//   poet_wait_ms:str sealer_id:str participant_id:str model_ref:32
//   total_time_s:str block_size_mb:str chain_size_mb:str cc_score:str
std::string CanonicalBytes(const BlockHeader& header, const BlockBody& body);
inline constexpr std::size_t kNonceOffset = 4 + 8 + 32 + 8 + 8 + 1 + 4;

Digest HashBlock(const BlockHeader& header, const BlockBody& body);

struct PowResult {
  std::uint64_t nonce = 0;
  std::uint64_t attempts = 0;
  Digest hash{};
};

// Smallest nonce (scanning up from 0) whose block hash has at least
// difficulty_bits leading zero bits. Throws kInvalidArgument above 32 bits.
PowResult PowMine(BlockHeader header, const BlockBody& body, std::uint32_t difficulty_bits);
inline constexpr std::uint32_t kMaxPowBits = 32;

// Exponential wait with the given mean, drawn from Rng(seed).
double PoetWait(std::uint64_t seed, double mean_ms);

struct PoetElection {
  std::string winner;
  std::uint64_t seed = 0;
  double wait_ms = 0.0;
  std::vector<double> waits;  // per candidate
};

// Each candidate draws PoetWait(DeriveSeed(round_seed, {i}), mean_ms); the
// shortest wait seals the block (ties: earliest candidate).
PoetElection PoetElect(std::span<const std::string> candidates, std::uint64_t round_seed,
                       double mean_ms);

class Chain {
 public:
  Chain() = default;
  explicit Chain(std::string owner) : owner_(std::move(owner)) {}

  const std::string& owner() const { return owner_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  std::size_t size() const { return blocks_.size(); }
  bool empty() const { return blocks_.empty(); }
  const Block& tip() const { return blocks_.back(); }

  // Direct access for restoration and tamper experiments; normal writers go
  // through ValidateAndAppend.
  std::vector<Block>& mutable_blocks() { return blocks_; }

 private:
  std::string owner_;
  std::vector<Block> blocks_;
};

struct SealSpec {
  ConsensusKind consensus = ConsensusKind::kPow;
  std::uint32_t pow_bits = 12;
  PoetElection poet;  // used when consensus == kPoet
  double poet_mean_ms = 100.0;
};

// Builds the next block for `chain`: fills index, prev_hash and the size
// accounting from the index, then seals it. Returns the PoW attempt count
// through `attempts` when non-null.
Block MakeBlock(const Chain& chain, BlockBody body, std::uint64_t round,
                std::uint64_t timestamp_ms, const SealSpec& seal,
                std::uint64_t* attempts = nullptr);

// Checks, in order: link (index and prev_hash), size accounting, seal (stored
// hash and consensus proof), cc_score range. Throws kBadLink, kBadAccounting,
// kBadProof, or kBadScore naming the failed check; appends on success.
void ValidateAndAppend(Chain& chain, Block block);

// Re-validates every block in order. Returns the index of the first invalid
// block, or nullopt when the chain is sound.
std::optional<std::size_t> VerifyChain(const Chain& chain);

using ModelStore = std::map<Digest, ParamVector>;

Digest ModelRef(const ParamVector& params);

}  // namespace fedchain

#endif  // FEDCHAIN_CHAIN_HPP_
