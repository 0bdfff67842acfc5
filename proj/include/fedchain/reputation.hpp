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

#ifndef FEDCHAIN_REPUTATION_HPP_
#define FEDCHAIN_REPUTATION_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fedchain/dataset.hpp"
#include "fedchain/model.hpp"

namespace fedchain {

enum class ReputationEvent {
  kInterested,
  kResponseDelay,
  kSuccessfulUpdate,
  kResourceInability,
  kDivergentUpdate,
};

std::string_view EventName(ReputationEvent event);
std::optional<ReputationEvent> ParseEvent(std::string_view name);

struct ReputationDeltas {
  double interested = 1.0;
  double successful_update = 2.0;
  double response_delay = -1.0;
  double resource_inability = -1.0;
  double divergent_update = -5.0;

  double Of(ReputationEvent event) const;
};

struct ReputationConfig {
  ReputationDeltas deltas;
  double initial_score = 50.0;
  // A device takes part in training only while its score is above the floor.
  double participation_floor = 20.0;
};

inline constexpr double kMinScore = 0.0;
inline constexpr double kMaxScore = 100.0;

struct HistoryEntry {
  std::uint64_t round = 0;
  std::string device_id;
  ReputationEvent event = ReputationEvent::kInterested;
  double delta = 0.0;  // nominal delta; clamping happens on application
};

// Single-writer trust ledger. Scores live in [0, 100]; replaying the history
// from the initial score reproduces them exactly.
class ReputationLedger {
 public:
  explicit ReputationLedger(ReputationConfig config = {});

  // Adds a device at the initial score. Re-enrolling is a no-op.
  void Enroll(const std::string& device_id);
  bool Contains(std::string_view device_id) const;

  // Throws kUnknownDevice. Returns the new score.
  double Apply(std::string_view device_id, ReputationEvent event, std::uint64_t round);

  double Score(std::string_view device_id) const;
  bool CanParticipate(std::string_view device_id) const;

  std::map<std::string, double, std::less<>> Replay() const;

  const std::map<std::string, double, std::less<>>& scores() const { return scores_; }
  const std::vector<HistoryEntry>& history() const { return history_; }
  const ReputationConfig& config() const { return config_; }

 private:
  ReputationConfig config_;
  std::map<std::string, double, std::less<>> scores_;
  std::vector<HistoryEntry> history_;
};

struct Committee {
  std::vector<std::string> members;
  std::uint64_t round = 0;

  bool Contains(std::string_view id) const;
  std::size_t size() const { return members.size(); }
};

// Top-m eligible devices by score (ties: lexicographic id), skipping the
// previous committee. Previous members are used only to fill seats the rest
// of the pool cannot. Throws kInvalidArgument (m == 0), kUnknownDevice, or
// kInsufficientCandidates when fewer than m distinct devices are eligible.
Committee SelectCommittee(const ReputationLedger& ledger, std::span<const std::string> eligible,
                          std::size_t m, const Committee& previous, std::uint64_t round = 0);

struct CCScore {
  std::string device_id;
  double score = 0.0;               // median of per_member
  std::vector<double> per_member;   // committee order
  bool accepted = false;            // score >= floor
};

// Median; even-sized input averages the two middle values. Throws kEmptyInput.
double Median(std::vector<double> values);

// Validation loss (MSE) to a [0, 1] quality score: 1 / (1 + loss). Non-finite
// losses score 0.
double LossToScore(double loss);

// Every member evaluates the update on its own shard; the median member score
// becomes the update's CC-score. Throws kMissingShard.
CCScore CommitteeValidate(const Committee& committee, const ClientUpdate& update,
                          const std::map<std::string, Dataset, std::less<>>& shards,
                          double floor);

}  // namespace fedchain

#endif  // FEDCHAIN_REPUTATION_HPP_
