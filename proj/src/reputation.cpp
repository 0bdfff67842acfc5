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

#include "fedchain/reputation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fedchain/error.hpp"

namespace fedchain {

std::string_view EventName(ReputationEvent event) {
  switch (event) {
    case ReputationEvent::kInterested: return "interested";
    case ReputationEvent::kResponseDelay: return "response_delay";
    case ReputationEvent::kSuccessfulUpdate: return "successful_update";
    case ReputationEvent::kResourceInability: return "resource_inability";
    case ReputationEvent::kDivergentUpdate: return "divergent_update";
  }
  return "interested";
}

std::optional<ReputationEvent> ParseEvent(std::string_view name) {
  for (auto e : {ReputationEvent::kInterested, ReputationEvent::kResponseDelay,
                 ReputationEvent::kSuccessfulUpdate, ReputationEvent::kResourceInability,
                 ReputationEvent::kDivergentUpdate}) {
    if (EventName(e) == name) return e;
  }
  return std::nullopt;
}

double ReputationDeltas::Of(ReputationEvent event) const {
  switch (event) {
    case ReputationEvent::kInterested: return interested;
    case ReputationEvent::kResponseDelay: return response_delay;
    case ReputationEvent::kSuccessfulUpdate: return successful_update;
    case ReputationEvent::kResourceInability: return resource_inability;
    case ReputationEvent::kDivergentUpdate: return divergent_update;
  }
  return 0.0;
}

namespace {
double Clamp(double s) { return std::clamp(s, kMinScore, kMaxScore); }
}  // namespace

ReputationLedger::ReputationLedger(ReputationConfig config) : config_(config) {
  if (!(config_.initial_score >= kMinScore && config_.initial_score <= kMaxScore)) {
    throw Error(ErrorCode::kInvalidArgument, "initial score outside [0,100]");
  }
}

void ReputationLedger::Enroll(const std::string& device_id) {
  scores_.try_emplace(device_id, config_.initial_score);
}

bool ReputationLedger::Contains(std::string_view device_id) const {
  return scores_.find(device_id) != scores_.end();
}

double ReputationLedger::Apply(std::string_view device_id, ReputationEvent event,
                               std::uint64_t round) {
  auto it = scores_.find(device_id);
  if (it == scores_.end()) throw Error(ErrorCode::kUnknownDevice, std::string(device_id));
  const double delta = config_.deltas.Of(event);
  it->second = Clamp(it->second + delta);
  history_.push_back({round, std::string(device_id), event, delta});
  return it->second;
}

double ReputationLedger::Score(std::string_view device_id) const {
  auto it = scores_.find(device_id);
  if (it == scores_.end()) throw Error(ErrorCode::kUnknownDevice, std::string(device_id));
  return it->second;
}

bool ReputationLedger::CanParticipate(std::string_view device_id) const {
  return Score(device_id) > config_.participation_floor;
}

std::map<std::string, double, std::less<>> ReputationLedger::Replay() const {
  std::map<std::string, double, std::less<>> out;
  for (const auto& [id, _] : scores_) out.emplace(id, config_.initial_score);
  for (const auto& h : history_) {
    auto [it, _] = out.try_emplace(h.device_id, config_.initial_score);
    it->second = Clamp(it->second + h.delta);
  }
  return out;
}

bool Committee::Contains(std::string_view id) const {
  return std::find(members.begin(), members.end(), id) != members.end();
}

Committee SelectCommittee(const ReputationLedger& ledger, std::span<const std::string> eligible,
                          std::size_t m, const Committee& previous, std::uint64_t round) {
  if (m == 0) throw Error(ErrorCode::kInvalidArgument, "committee size must be >= 1");
  std::set<std::string, std::less<>> unique(eligible.begin(), eligible.end());
  if (unique.size() < m) {
    throw Error(ErrorCode::kInsufficientCandidates,
                std::to_string(unique.size()) + " eligible devices for " + std::to_string(m) +
                    " committee seats");
  }
  struct Candidate {
    double score;
    std::string id;
  };
  std::vector<Candidate> fresh, repeat;
  for (const auto& id : unique) {
    Candidate c{ledger.Score(id), id};
    (previous.Contains(id) ? repeat : fresh).push_back(std::move(c));
  }
  auto by_rank = [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  };
  std::sort(fresh.begin(), fresh.end(), by_rank);
  std::sort(repeat.begin(), repeat.end(), by_rank);

  Committee out;
  out.round = round;
  for (const auto& c : fresh) {
    if (out.members.size() == m) break;
    out.members.push_back(c.id);
  }
  for (const auto& c : repeat) {
    if (out.members.size() == m) break;
    out.members.push_back(c.id);
  }
  return out;
}

double Median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "median of nothing");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double LossToScore(double loss) {
  if (!std::isfinite(loss) || loss < 0.0) return 0.0;
  return 1.0 / (1.0 + loss);
}

CCScore CommitteeValidate(const Committee& committee, const ClientUpdate& update,
                          const std::map<std::string, Dataset, std::less<>>& shards,
                          double floor) {
  if (committee.members.empty()) throw Error(ErrorCode::kEmptyInput, "empty committee");
  CCScore out;
  out.device_id = update.device_id;
  out.per_member.reserve(committee.size());
  for (const auto& member : committee.members) {
    auto it = shards.find(member);
    if (it == shards.end()) throw Error(ErrorCode::kMissingShard, member);
    out.per_member.push_back(LossToScore(Evaluate(update.params, it->second)));
  }
  out.score = Median(out.per_member);
  out.accepted = out.score >= floor;
  return out;
}

}  // namespace fedchain
