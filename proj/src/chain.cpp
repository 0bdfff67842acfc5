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

#include "fedchain/chain.hpp"

#include <cmath>

#include "fedchain/error.hpp"
#include "fedchain/random.hpp"
#include "fedchain/text.hpp"

namespace fedchain {

std::string_view ConsensusName(ConsensusKind kind) {
  return kind == ConsensusKind::kPoet ? "poet" : "pow";
}

std::optional<ConsensusKind> ParseConsensus(std::string_view name) {
  if (name == "pow") return ConsensusKind::kPow;
  if (name == "poet") return ConsensusKind::kPoet;
  return std::nullopt;
}

namespace {

void PutBe(std::string& out, std::uint64_t v, int bytes) {
  for (int i = bytes - 1; i >= 0; --i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void PutStr(std::string& out, std::string_view s) {
  PutBe(out, s.size(), 4);
  out.append(s);
}

void PutDigest(std::string& out, const Digest& d) {
  out.append(reinterpret_cast<const char*>(d.data()), d.size());
}

void PutDouble(std::string& out, double v) { PutStr(out, text::FormatDouble(v)); }

}  // namespace

std::string CanonicalBytes(const BlockHeader& h, const BlockBody& b) {
  std::string out;
  out.reserve(256);
  out.append("FCB1");
  PutBe(out, h.index, 8);
  PutDigest(out, h.prev_hash);
  PutBe(out, h.round, 8);
  PutBe(out, h.timestamp_ms, 8);
  PutBe(out, static_cast<std::uint8_t>(h.consensus), 1);
  PutBe(out, h.difficulty_bits, 4);
  PutBe(out, h.nonce, 8);
  PutBe(out, h.poet_seed, 8);
  PutDouble(out, h.poet_mean_ms);
  PutDouble(out, h.poet_wait_ms);
  PutStr(out, h.sealer_id);
  PutStr(out, b.participant_id);
  PutDigest(out, b.model_ref);
  PutDouble(out, b.total_time_s);
  PutDouble(out, b.block_size_mb);
  PutDouble(out, b.chain_size_mb);
  PutDouble(out, b.cc_score);
  return out;
}

Digest HashBlock(const BlockHeader& header, const BlockBody& body) {
  return Sha256(CanonicalBytes(header, body));
}

PowResult PowMine(BlockHeader header, const BlockBody& body, std::uint32_t difficulty_bits) {
  if (difficulty_bits > kMaxPowBits) {
    throw Error(ErrorCode::kInvalidArgument, "difficulty above 32 bits");
  }
  header.difficulty_bits = difficulty_bits;
  header.nonce = 0;
  std::string bytes = CanonicalBytes(header, body);
  PowResult out;
  for (std::uint64_t nonce = 0;; ++nonce) {
    for (int i = 0; i < 8; ++i) {
      bytes[kNonceOffset + i] = static_cast<char>((nonce >> (8 * (7 - i))) & 0xff);
    }
    Digest d = Sha256(bytes);
    if (LeadingZeroBits(d) >= static_cast<int>(difficulty_bits)) {
      out.nonce = nonce;
      out.attempts = nonce + 1;
      out.hash = d;
      return out;
    }
  }
}

double PoetWait(std::uint64_t seed, double mean_ms) {
  if (!(mean_ms > 0.0) || !std::isfinite(mean_ms)) {
    throw Error(ErrorCode::kInvalidArgument, "PoET mean must be > 0");
  }
  Rng rng(seed);
  return rng.Exponential(mean_ms);
}

PoetElection PoetElect(std::span<const std::string> candidates, std::uint64_t round_seed,
                       double mean_ms) {
  if (candidates.empty()) throw Error(ErrorCode::kEmptyInput, "PoET election without candidates");
  PoetElection out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::uint64_t seed = DeriveSeed(round_seed, {i});
    double wait = PoetWait(seed, mean_ms);
    out.waits.push_back(wait);
    if (i == 0 || wait < out.wait_ms) {
      out.winner = candidates[i];
      out.seed = seed;
      out.wait_ms = wait;
    }
  }
  return out;
}

Block MakeBlock(const Chain& chain, BlockBody body, std::uint64_t round,
                std::uint64_t timestamp_ms, const SealSpec& seal, std::uint64_t* attempts) {
  Block block;
  BlockHeader& h = block.header;
  h.index = chain.size();
  if (!chain.empty()) h.prev_hash = chain.tip().hash;
  h.round = round;
  h.timestamp_ms = timestamp_ms;
  h.consensus = seal.consensus;
  body.block_size_mb = BlockSizeMb(h.index);
  body.chain_size_mb = ChainSizeMb(h.index);
  if (seal.consensus == ConsensusKind::kPow) {
    PowResult pow = PowMine(h, body, seal.pow_bits);
    h.difficulty_bits = seal.pow_bits;
    h.nonce = pow.nonce;
    if (attempts) *attempts = pow.attempts;
  } else {
    h.poet_seed = seal.poet.seed;
    h.poet_mean_ms = seal.poet_mean_ms;
    h.poet_wait_ms = seal.poet.wait_ms;
    h.sealer_id = seal.poet.winner;
    if (attempts) *attempts = 0;
  }
  block.body = std::move(body);
  block.hash = HashBlock(block.header, block.body);
  return block;
}

namespace {

void CheckBlock(const Chain& chain, std::size_t position, const Block& block) {
  const BlockHeader& h = block.header;
  const BlockBody& b = block.body;
  const std::string where = "block " + std::to_string(h.index) + ": ";

  if (h.index != position) {
    throw Error(ErrorCode::kBadLink, where + "expected index " + std::to_string(position));
  }
  const Digest expected_prev = position == 0 ? Digest{} : chain.blocks()[position - 1].hash;
  if (h.prev_hash != expected_prev) {
    throw Error(ErrorCode::kBadLink, where + "prev_hash does not match predecessor");
  }

  if (!(std::fabs(b.block_size_mb - BlockSizeMb(h.index)) <= kAccountingTolerance)) {
    throw Error(ErrorCode::kBadAccounting, where + "block_size_mb " +
                                               text::FormatDouble(b.block_size_mb) +
                                               ", expected " +
                                               text::FormatDouble(BlockSizeMb(h.index)));
  }
  if (!(std::fabs(b.chain_size_mb - ChainSizeMb(h.index)) <= kAccountingTolerance)) {
    throw Error(ErrorCode::kBadAccounting, where + "chain_size_mb " +
                                               text::FormatDouble(b.chain_size_mb) +
                                               ", expected " +
                                               text::FormatDouble(ChainSizeMb(h.index)));
  }

  if (HashBlock(h, b) != block.hash) {
    throw Error(ErrorCode::kBadProof, where + "stored hash does not match contents");
  }
  if (h.consensus == ConsensusKind::kPow) {
    if (h.difficulty_bits > kMaxPowBits ||
        LeadingZeroBits(block.hash) < static_cast<int>(h.difficulty_bits)) {
      throw Error(ErrorCode::kBadProof, where + "hash misses the PoW target");
    }
  } else if (h.consensus == ConsensusKind::kPoet) {
    if (h.sealer_id.empty() || !(h.poet_mean_ms > 0.0) || !std::isfinite(h.poet_mean_ms) ||
        PoetWait(h.poet_seed, h.poet_mean_ms) != h.poet_wait_ms) {
      throw Error(ErrorCode::kBadProof, where + "PoET wait record does not verify");
    }
  } else {
    throw Error(ErrorCode::kBadProof, where + "unknown consensus kind");
  }

  if (!(b.cc_score >= 0.0 && b.cc_score <= 1.0)) {
    throw Error(ErrorCode::kBadScore, where + "cc_score outside [0,1]");
  }
}

}  // namespace

void ValidateAndAppend(Chain& chain, Block block) {
  CheckBlock(chain, chain.size(), block);
  chain.mutable_blocks().push_back(std::move(block));
}

std::optional<std::size_t> VerifyChain(const Chain& chain) {
  for (std::size_t i = 0; i < chain.size(); ++i) {
    try {
      CheckBlock(chain, i, chain.blocks()[i]);
    } catch (const Error&) {
      return i;
    }
  }
  return std::nullopt;
}

Digest ModelRef(const ParamVector& params) { return Sha256(SerializeParams(params)); }

}  // namespace fedchain
