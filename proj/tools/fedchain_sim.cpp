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

// fedchain-sim: run a simulation, verify a chain export, or restore one from
// its block metadata files.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fedchain/chain_io.hpp"
#include "fedchain/config.hpp"
#include "fedchain/error.hpp"
#include "fedchain/simulation.hpp"
#include "fedchain/text.hpp"

namespace {

using fedchain::Error;

// Flag name -> config key.
const std::vector<std::pair<std::string, std::string>> kOverrides = {
    {"--roster", "roster_path"},
    {"--data", "data_path"},
    {"--synthetic-rows", "synthetic_rows"},
    {"--clients", "n_clients"},
    {"--rounds", "n_rounds"},
    {"--epochs", "epochs"},
    {"--lr", "lr"},
    {"--batch-size", "batch_size"},
    {"--poisoners", "poisoner_fraction"},
    {"--poison-mode", "poison_mode"},
    {"--poison-magnitude", "poison_magnitude"},
    {"--noise-level", "noise_level"},
    {"--committee", "committee_size"},
    {"--dp-sigma", "dp_sigma"},
    {"--dp-delta", "dp_delta"},
    {"--outlier-sigma", "outlier_sigma"},
    {"--kmeans-iters", "kmeans_iters"},
    {"--consensus", "consensus"},
    {"--pow-bits", "pow_bits"},
    {"--poet-mean-ms", "poet_mean_ms"},
    {"--seed", "seed"},
    {"--export", "output_dir"},
};

int Verify(const std::string& dir) {
  fedchain::Chain chain = fedchain::ReadExport(dir);
  if (auto bad = fedchain::VerifyChain(chain)) {
    std::printf("%s: block %zu fails verification\n", dir.c_str(), *bad);
    return 1;
  }
  std::printf("%s: %zu blocks verified, owner %s\n", dir.c_str(), chain.size(),
              chain.owner().c_str());
  return 0;
}

int Restore(const std::string& dir) {
  fedchain::Chain chain = fedchain::RestoreFromMetadata(dir);
  if (auto bad = fedchain::VerifyChain(chain)) {
    std::printf("%s: block %zu fails verification, nothing rewritten\n", dir.c_str(), *bad);
    return 1;
  }
  fedchain::ExportChain(chain, dir);
  std::printf("%s: restored %zu blocks, chain.csv rewritten\n", dir.c_str(), chain.size());
  return 0;
}

int Run(const std::string& config_path, const std::map<std::string, std::string>& overrides,
        const std::vector<std::string>& sets, bool quiet) {
  fedchain::SimConfig config;
  if (!config_path.empty()) config = fedchain::LoadConfig(config_path);
  for (const auto& [key, value] : overrides) fedchain::SetConfigValue(config, key, value);
  for (const auto& kv : sets) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw Error(fedchain::ErrorCode::kParseError, "--set expects key=value, got " + kv);
    }
    fedchain::SetConfigValue(config, fedchain::text::Trim(kv.substr(0, eq)),
                             fedchain::text::Trim(kv.substr(eq + 1)));
  }

  fedchain::Simulation sim(config);
  if (!quiet) sim.set_logger([](const std::string& line) { std::cerr << line << '\n'; });
  auto reports = sim.Run();
  sim.WriteArtifacts(config.output_dir, reports);
  const auto& last = reports.back();
  std::printf("rounds=%zu final_loss=%s simulated_time_s=%s blocks=%zu output=%s\n",
              reports.size(), fedchain::text::FormatDouble(last.global_loss).c_str(),
              fedchain::text::FormatDouble(last.cumulative_time_s).c_str(), last.total_blocks,
              config.output_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blockchain-backed federated learning simulator"};
  app.require_subcommand(0, 1);

  std::string restore_dir;
  app.add_option("--restore", restore_dir, "Shorthand for `restore --chain-dir <dir>`");

  auto* run = app.add_subcommand("run", "Run a simulation");
  std::string config_path;
  bool quiet = false;
  std::vector<std::string> sets;
  std::map<std::string, std::string> overrides;
  run->add_option("--config", config_path, "key=value config file")->check(CLI::ExistingFile);
  run->add_option("--set", sets, "Override any config key (key=value), repeatable");
  run->add_flag("-q,--quiet", quiet, "No per-phase log on stderr");
  std::vector<std::string> values(kOverrides.size());
  for (std::size_t i = 0; i < kOverrides.size(); ++i) {
    run->add_option(kOverrides[i].first, values[i], "Sets " + kOverrides[i].second);
  }

  auto* verify = app.add_subcommand("verify", "Verify an exported chain");
  std::string verify_dir;
  verify->add_option("--chain-dir", verify_dir, "Chain export directory")->required();

  auto* restore = app.add_subcommand("restore", "Rebuild chain.csv from block files");
  std::string restore_sub_dir;
  restore->add_option("--chain-dir", restore_sub_dir, "Chain export directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) return Verify(verify_dir);
    if (*restore) return Restore(restore_sub_dir);
    if (!restore_dir.empty()) return Restore(restore_dir);
    if (*run) {
      for (std::size_t i = 0; i < kOverrides.size(); ++i) {
        if (run->count(kOverrides[i].first) > 0) overrides[kOverrides[i].second] = values[i];
      }
      return Run(config_path, overrides, sets, quiet);
    }
    std::cout << app.help();
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
