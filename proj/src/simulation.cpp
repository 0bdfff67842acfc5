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

#include "fedchain/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "fedchain/chain_io.hpp"
#include "fedchain/defense.hpp"
#include "fedchain/error.hpp"
#include "fedchain/metrics.hpp"
#include "fedchain/privacy.hpp"
#include "fedchain/random.hpp"
#include "fedchain/text.hpp"

namespace fedchain {

namespace {

// Stream tags for DeriveSeed.
enum SeedTag : std::uint64_t {
  kTagData = 1,
  kTagHoldout,
  kTagPartition,
  kTagRoles,
  kTagShardNoise,
  kTagPoison,
  kTagPrivacy,
  kTagKMeans,
  kTagPoet,
  kTagGenesis,
};

std::string DeviceName(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "dev-%03zu", i);
  return buf;
}

std::vector<RosterEntry> GeneratedRoster(const SimConfig& c) {
  std::vector<RosterEntry> roster(c.n_clients);
  for (std::size_t i = 0; i < c.n_clients; ++i) roster[i].device_id = DeviceName(i);
  std::vector<std::size_t> order(c.n_clients);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(DeriveSeed(c.seed, {kTagRoles}));
  rng.Shuffle(std::span(order));
  const double n = static_cast<double>(c.n_clients);
  const auto poisoners = static_cast<std::size_t>(std::llround(c.poisoner_fraction * n));
  const auto stragglers = static_cast<std::size_t>(std::llround(c.straggler_fraction * n));
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k < poisoners) {
      roster[order[k]].role = DeviceRole::kPoisoner;
    } else if (k < poisoners + stragglers) {
      roster[order[k]].role = DeviceRole::kStraggler;
    }
  }
  return roster;
}

std::string JoinIds(const std::vector<std::string>& ids) {
  return ids.empty() ? std::string("-") : text::Join(ids, ',');
}

}  // namespace

Simulation::Simulation(SimConfig config) : Simulation(std::move(config), nullptr) {}

Simulation::Simulation(SimConfig config, std::shared_ptr<const ResourceProbe> probe)
    : config_(std::move(config)), ledger_(config_.reputation) {
  config_.Validate();
  Setup(std::move(probe));
}

void Simulation::Log(const std::string& line) const {
  if (logger_) logger_(line);
}

void Simulation::Setup(std::shared_ptr<const ResourceProbe> probe) {
  const SimConfig& c = config_;

  Dataset all = c.data_path.empty()
                    ? GenerateSynthetic(c.synthetic_rows, DeriveSeed(c.seed, {kTagData}),
                                        c.synthetic_noise)
                    : LoadTurbofan(c.data_path);
  auto [train, eval] = SplitHoldout(all, c.holdout_fraction, DeriveSeed(c.seed, {kTagHoldout}));
  eval_ = std::move(eval);
  if (eval_.empty()) throw Error(ErrorCode::kInvalidArgument, "holdout split is empty");

  std::vector<RosterEntry> roster =
      c.roster_path.empty() ? GeneratedRoster(c) : LoadRoster(c.roster_path);
  if (roster.size() < 2) throw Error(ErrorCode::kInvalidArgument, "need at least 2 devices");

  if (!probe) {
    auto simulated = std::make_shared<SimulatedProbe>();
    for (const auto& e : roster) {
      simulated->Configure(e.device_id, e.profile);
      if (e.offline) simulated->SetOffline(e.device_id);
    }
    probe = std::move(simulated);
  }
  registry_ = std::make_unique<Registry>(c.registry_seed, std::move(probe));

  for (const auto& e : roster) {
    registry_->Register(e.device_id, e.role, 0);
    ledger_.Enroll(e.device_id);
    ledger_.Apply(e.device_id, ReputationEvent::kInterested, 0);
    double delay = e.delay_s.value_or(e.role == DeviceRole::kStraggler ? c.straggler_delay_s : 0.0);
    delays_[e.device_id] = delay;
  }

  auto parts = Partition(train, roster.size(), DeriveSeed(c.seed, {kTagPartition}));
  const double noise_sd = c.noise_level / 100.0 * TargetStddev(train);
  for (std::size_t i = 0; i < roster.size(); ++i) {
    AddTargetNoise(parts[i], noise_sd, DeriveSeed(c.seed, {kTagShardNoise, i}));
    shards_.emplace(roster[i].device_id, std::move(parts[i]));
  }

  ParamVector global = ZeroModel();
  global_ref_ = ModelRef(global);
  models_.emplace(global_ref_, std::move(global));

  for (std::size_t i = 0; i < roster.size(); ++i) {
    const std::string& id = roster[i].device_id;
    Chain chain(id);
    SealSpec seal{c.consensus, c.pow_bits, {}, c.poet_mean_ms};
    if (c.consensus == ConsensusKind::kPoet) {
      std::vector<std::string> self{id};
      seal.poet = PoetElect(self, DeriveSeed(c.seed, {kTagGenesis, i}), c.poet_mean_ms);
    }
    BlockBody body;
    body.participant_id = id;
    body.model_ref = global_ref_;
    ValidateAndAppend(chain, MakeBlock(chain, body, 0, 0, seal));
    chains_.emplace(id, std::move(chain));
  }
}

std::vector<std::string> Simulation::devices_with_role(DeviceRole role) const {
  std::vector<std::string> out;
  for (const auto& id : registry_->devices()) {
    if (registry_->Record(id).declared_role == role) out.push_back(id);
  }
  return out;
}

RoundReport Simulation::RunRound() {
  const SimConfig& c = config_;
  const std::uint64_t r = ++round_;
  const auto wall_start = std::chrono::steady_clock::now();
  RoundReport rep;
  rep.round = r;
  std::vector<std::pair<std::string, ReputationEvent>> events;
  auto phase = [&](const char* name, const std::string& detail) {
    rep.phases.emplace_back(name);
    Log("round " + std::to_string(r) + " " + name + ": " + detail);
  };

  // Gate: devices above the reputation floor that answer the probe and meet
  // the resource policy.
  for (const auto& id : registry_->devices()) {
    if (!ledger_.CanParticipate(id)) continue;
    ResourceProfile profile;
    try {
      profile = registry_->PingDevice(registry_->TokenOf(id).token);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kProbeTimeout) throw;
      events.emplace_back(id, ReputationEvent::kResponseDelay);
      continue;
    }
    if (CheckEligibility(profile, c.eligibility).eligible) {
      rep.eligible.push_back(id);
    } else {
      events.emplace_back(id, ReputationEvent::kResourceInability);
    }
  }
  phase("gate", "eligible=" + JoinIds(rep.eligible));
  auto apply_events = [&] {
    for (const auto& [id, ev] : events) ledger_.Apply(id, ev, r);
    events.clear();
  };
  if (rep.eligible.empty()) {
    apply_events();
    throw Error(ErrorCode::kNoEligibleDevices, "no device passed the gate");
  }

  Committee committee = SelectCommittee(ledger_, rep.eligible, c.committee_size,
                                        previous_committee_, r);
  rep.committee = committee.members;
  for (const auto& id : rep.eligible) {
    if (!committee.Contains(id)) rep.trainers.push_back(id);
  }
  if (rep.trainers.empty()) {
    apply_events();
    throw Error(ErrorCode::kNoEligibleDevices, "every eligible device sits on the committee");
  }

  // Distribute: the model referenced by the latest sealed block.
  const ParamVector global = models_.at(global_ref_);
  phase("distribute", "model=" + ToHex(global_ref_).substr(0, 16));

  std::vector<ClientUpdate> updates;
  std::vector<ParamVector> clean;
  double train_phase_s = 0.0;
  for (std::size_t i = 0; i < rep.trainers.size(); ++i) {
    const std::string& id = rep.trainers[i];
    ClientUpdate u = LocalTrain(id, global, shards_.at(id), c.train);
    if (double delay = delays_.at(id); delay > 0.0) {
      u.train_time_s += delay;
      events.emplace_back(id, ReputationEvent::kResponseDelay);
    }
    if (registry_->Record(id).declared_role == DeviceRole::kPoisoner) {
      u = InjectPoison(std::move(u), c.poison, DeriveSeed(c.seed, {kTagPoison, r, i}));
    }
    clean.push_back(u.params);
    if (c.dp_sigma > 0.0) {
      u.params = Obfuscate(u.params, c.dp_sigma, DeriveSeed(c.seed, {kTagPrivacy, r, i}));
    }
    train_phase_s = std::max(train_phase_s, u.train_time_s);
    updates.push_back(std::move(u));
  }
  if (c.dp_sigma > 0.0 && clean.size() >= 2) {
    rep.epsilon = EpsilonBound({c.dp_sigma, c.dp_delta, Sensitivity(clean)});
  }
  phase("train", "updates=" + std::to_string(updates.size()));

  std::vector<ClientUpdate> kept;
  if (c.defense_enabled && updates.size() >= 2) {
    DefenseConfig dc{c.outlier_sigma, c.kmeans_iters, DeriveSeed(c.seed, {kTagKMeans, r})};
    FilterResult filtered = FilterUpdates(updates, dc);
    kept = std::move(filtered.kept);
    rep.excluded_devices = std::move(filtered.excluded);
    for (const auto& id : rep.excluded_devices) {
      events.emplace_back(id, ReputationEvent::kDivergentUpdate);
    }
  } else {
    kept = updates;
  }
  phase("defend", "excluded=" + JoinIds(rep.excluded_devices));

  // Validate: members score every kept update in parallel, updates one after
  // another.
  std::size_t committee_rows = 0;
  for (const auto& m : committee.members) committee_rows = std::max(committee_rows, shards_.at(m).rows());
  double validate_phase_s = 0.0;
  std::vector<ClientUpdate> accepted;
  for (auto& u : kept) {
    CCScore cc = CommitteeValidate(committee, u, shards_, c.cc_floor);
    validate_phase_s += static_cast<double>(committee_rows) * kEvalSecondsPerSample;
    rep.cc_scores[u.device_id] = cc.score;
    if (cc.accepted) {
      rep.accepted_devices.push_back(u.device_id);
      events.emplace_back(u.device_id, ReputationEvent::kSuccessfulUpdate);
      accepted.push_back(std::move(u));
    } else {
      rep.rejected_devices.push_back(u.device_id);
      events.emplace_back(u.device_id, ReputationEvent::kDivergentUpdate);
    }
  }
  phase("validate", "accepted=" + JoinIds(rep.accepted_devices) +
                        " rejected=" + JoinIds(rep.rejected_devices));

  std::optional<ParamVector> next_global;
  if (accepted.empty()) {
    rep.skipped = true;
  } else {
    std::vector<double> weights;
    for (const auto& u : accepted) weights.push_back(static_cast<double>(u.samples));
    next_global = FedAvg(std::span<const ClientUpdate>(accepted), weights);
  }
  phase("aggregate", rep.skipped ? "skipped" : "fedavg over " + std::to_string(accepted.size()));

  apply_events();
  for (const auto& [id, score] : ledger_.scores()) rep.reputation[id] = score;
  phase("reputation", "events applied");

  const double pre_seal_s = train_phase_s + validate_phase_s;
  double seal_s = 0.0;
  if (next_global) {
    global_ref_ = ModelRef(*next_global);
    models_.emplace(global_ref_, std::move(*next_global));
    SealSpec seal{c.consensus, c.pow_bits, {}, c.poet_mean_ms};
    if (c.consensus == ConsensusKind::kPoet) {
      seal.poet = PoetElect(committee.members, DeriveSeed(c.seed, {kTagPoet, r}), c.poet_mean_ms);
      seal_s = seal.poet.wait_ms / 1000.0;
    }
    const auto timestamp_ms =
        static_cast<std::uint64_t>(std::llround((clock_s_ + pre_seal_s) * 1000.0));
    std::uint64_t max_attempts = 0;
    for (const auto& id : rep.accepted_devices) {
      Chain& chain = chains_.at(id);
      BlockBody body;
      body.participant_id = id;
      body.model_ref = global_ref_;
      body.total_time_s = pre_seal_s;
      body.cc_score = rep.cc_scores.at(id);
      std::uint64_t attempts = 0;
      ValidateAndAppend(chain, MakeBlock(chain, body, r, timestamp_ms, seal, &attempts));
      max_attempts = std::max(max_attempts, attempts);
      ++rep.blocks_appended;
    }
    // Owners mine their own chains concurrently.
    if (c.consensus == ConsensusKind::kPow) seal_s = static_cast<double>(max_attempts) * kHashSeconds;
  }
  phase("seal", "blocks=" + std::to_string(rep.blocks_appended));

  previous_committee_ = committee;
  rep.simulated_time_s = pre_seal_s + seal_s;
  clock_s_ += rep.simulated_time_s;
  rep.cumulative_time_s = clock_s_;
  rep.global_loss = Evaluate(models_.at(global_ref_), eval_);
  if (!std::isfinite(rep.global_loss)) {
    throw Error(ErrorCode::kNumericalDivergence, "global loss is not finite");
  }
  for (const auto& [id, chain] : chains_) {
    rep.total_blocks += chain.size();
    if (!chain.empty()) rep.tip_index = std::max(rep.tip_index, chain.tip().header.index);
  }
  rep.block_size_mb = BlockSizeMb(rep.tip_index);
  rep.chain_size_mb = ChainSizeMb(rep.tip_index);
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return rep;
}

bool Simulation::Converged(const std::vector<RoundReport>& reports) const {
  const std::size_t w = config_.convergence_window;
  if (reports.size() <= w) return false;
  const double reference = reports[reports.size() - 1 - w].global_loss;
  double best = reference;
  for (std::size_t k = reports.size() - w; k < reports.size(); ++k) {
    best = std::min(best, reports[k].global_loss);
  }
  return reference - best < config_.convergence_tol * std::fabs(reference);
}

std::vector<RoundReport> Simulation::Run() {
  std::vector<RoundReport> reports;
  for (std::size_t k = 0; k < config_.n_rounds; ++k) {
    try {
      reports.push_back(RunRound());
    } catch (const Error& e) {
      throw Error(e.code(), "round " + std::to_string(round_) + ": " + e.what());
    }
    if (config_.early_stop && Converged(reports)) {
      Log("converged after round " + std::to_string(round_));
      break;
    }
  }
  return reports;
}

void Simulation::WriteArtifacts(const std::filesystem::path& dir,
                                const std::vector<RoundReport>& reports) const {
  EmitMetrics(reports, chains_, dir, config_.record_wall_clock);
  for (const auto& [id, chain] : chains_) ExportChain(chain, dir / "chains" / id, &models_);
  text::WriteFile(dir / "final_model.vec", SerializeParams(global_model()));
}

std::vector<RoundReport> RunSimulation(const SimConfig& config) {
  Simulation sim(config);
  auto reports = sim.Run();
  sim.WriteArtifacts(config.output_dir, reports);
  return reports;
}

}  // namespace fedchain
