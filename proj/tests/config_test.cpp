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

#include <string>

#include <gtest/gtest.h>

#include "fedchain/config.hpp"
#include "fedchain/error.hpp"
#include "fedchain/text.hpp"
#include "test_util.hpp"

namespace fedchain {
namespace {

TEST(ConfigTest, DefaultsAreValid) {
  SimConfig c;
  EXPECT_NO_THROW(c.Validate());
  EXPECT_EQ(c.outlier_sigma, 2.0);
  EXPECT_EQ(c.committee_size, 3u);
  EXPECT_EQ(c.pow_bits, 12u);
  EXPECT_EQ(c.reputation.initial_score, 50.0);
  EXPECT_EQ(c.reputation.participation_floor, 20.0);
}

TEST(ConfigTest, ParsesKeyValueText) {
  SimConfig c = ParseConfig(
      "# experiment\n"
      "n_clients = 25\n"
      "poisoner_fraction=0.2\n"
      "poison_mode=random_noise\n"
      "poison_magnitude=3\n"
      "consensus=poet\n"
      "epochs=7\n"
      "lr=0.005\n"
      "delta_divergent_update=-4\n"
      "min_battery_pct_unplugged=35\n"
      "defense_enabled=false\n");
  EXPECT_EQ(c.n_clients, 25u);
  EXPECT_EQ(c.poisoner_fraction, 0.2);
  EXPECT_EQ(c.poison.kind, PoisonMode::Kind::kRandomNoise);
  EXPECT_EQ(c.poison.magnitude, 3.0);
  EXPECT_EQ(c.consensus, ConsensusKind::kPoet);
  EXPECT_EQ(c.train.epochs, 7u);
  EXPECT_EQ(c.train.lr, 0.005);
  EXPECT_EQ(c.reputation.deltas.divergent_update, -4.0);
  EXPECT_EQ(c.eligibility.min_battery_pct_unplugged, 35.0);
  EXPECT_FALSE(c.defense_enabled);
}

TEST(ConfigTest, DumpParsesBackIdentically) {
  SimConfig c;
  c.n_clients = 17;
  c.noise_level = 75;
  c.dp_sigma = 0.3;
  c.output_dir = "out/dir";
  c.seed = 123456789012345ull;
  const std::string dumped = DumpConfig(c);
  EXPECT_EQ(DumpConfig(ParseConfig(dumped)), dumped);
}

TEST(ConfigTest, ErrorsNameKeyAndLine) {
  EXPECT_FC_ERROR(ParseConfig("nonsense=1\n"), ErrorCode::kParseError);
  EXPECT_FC_ERROR(ParseConfig("n_clients=ten\n"), ErrorCode::kParseError);
  EXPECT_FC_ERROR(ParseConfig("consensus=pos\n"), ErrorCode::kParseError);
  try {
    ParseConfig("seed=1\nno equals sign\n");
    FAIL() << "expected ParseError";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(ConfigTest, ValidateRejectsOutOfRange) {
  SimConfig c;
  c.poisoner_fraction = 0.5;
  EXPECT_FC_ERROR(c.Validate(), ErrorCode::kInvalidArgument);
  c = {};
  c.n_rounds = 0;
  EXPECT_FC_ERROR(c.Validate(), ErrorCode::kInvalidArgument);
  c = {};
  c.dp_delta = 1.0;
  EXPECT_FC_ERROR(c.Validate(), ErrorCode::kInvalidArgument);
  c = {};
  c.pow_bits = 33;
  EXPECT_FC_ERROR(c.Validate(), ErrorCode::kInvalidArgument);
}

TEST(ConfigTest, LoadFromFile) {
  testing::TempDir dir("config");
  text::WriteFile(dir.path() / "run.conf", "n_rounds=3\n");
  EXPECT_EQ(LoadConfig(dir.path() / "run.conf").n_rounds, 3u);
  EXPECT_FC_ERROR(LoadConfig(dir.path() / "none.conf"), ErrorCode::kIoError);
}

}  // namespace
}  // namespace fedchain
