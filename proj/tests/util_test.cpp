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

#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fedchain/error.hpp"
#include "fedchain/hash.hpp"
#include "fedchain/random.hpp"
#include "fedchain/text.hpp"
#include "test_util.hpp"

namespace fedchain {
namespace {

// FIPS 180-2 test vectors.
TEST(Sha256Test, KnownVectors) {
  EXPECT_EQ(ToHex(Sha256("")), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(ToHex(Sha256("abc")),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(ToHex(Sha256("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq")),
            "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST(Sha256Test, HexRoundTrip) {
  Digest d = Sha256("round trip");
  auto back = DigestFromHex(ToHex(d));
  ASSERT_TRUE(back.has_value());
  EXPECT_EQ(*back, d);
  EXPECT_FALSE(DigestFromHex("abc").has_value());
  EXPECT_FALSE(DigestFromHex(std::string(64, 'g')).has_value());
}

TEST(Sha256Test, LeadingZeroBits) {
  Digest d{};
  EXPECT_EQ(LeadingZeroBits(d), 256);
  d[0] = 0x80;
  EXPECT_EQ(LeadingZeroBits(d), 0);
  d[0] = 0x00;
  d[1] = 0x10;
  EXPECT_EQ(LeadingZeroBits(d), 11);
}

TEST(RngTest, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(a.NextU64(), b.NextU64());
    EXPECT_EQ(a.Normal(), b.Normal());
  }
}

TEST(RngTest, UniformInUnitInterval) {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    double u = rng.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(RngTest, BelowIsInRangeAndCoversIt) {
  Rng rng(2);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) {
    auto k = rng.Below(7);
    ASSERT_LT(k, 7u);
    ++hits[k];
  }
  for (int h : hits) EXPECT_GT(h, 800);
}

TEST(RngTest, NormalMoments) {
  Rng rng(3);
  const int n = 200000;
  double sum = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    double z = rng.Normal();
    sum += z;
    sq += z * z;
  }
  double mean = sum / n;
  EXPECT_NEAR(mean, 0.0, 0.01);
  EXPECT_NEAR(sq / n - mean * mean, 1.0, 0.01);
}

TEST(RngTest, ExponentialMean) {
  Rng rng(4);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) sum += rng.Exponential(3.0);
  EXPECT_NEAR(sum / 100000, 3.0, 0.05);
}

TEST(RngTest, ShuffleIsPermutation) {
  Rng rng(5);
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  rng.Shuffle(std::span(v));
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
}

TEST(DeriveSeedTest, DistinctTagsDistinctSeeds) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 50; ++a) {
    for (std::uint64_t b = 0; b < 50; ++b) seen.insert(DeriveSeed(9, {a, b}));
  }
  EXPECT_EQ(seen.size(), 2500u);
  EXPECT_EQ(DeriveSeed(9, {1, 2}), DeriveSeed(9, {1, 2}));
  EXPECT_NE(DeriveSeed(9, {1, 2}), DeriveSeed(9, {2, 1}));
}

TEST(TextTest, FormatDoubleRoundTrips) {
  Rng rng(6);
  for (int i = 0; i < 1000; ++i) {
    double v = rng.Normal(0.0, 1e3) * std::pow(10.0, rng.Uniform(-8, 8));
    double back = 0;
    ASSERT_TRUE(text::ParseDouble(text::FormatDouble(v), back));
    EXPECT_EQ(back, v);
  }
  EXPECT_EQ(text::FormatDouble(0.04), "0.04");
  EXPECT_EQ(text::FormatDouble(5.5), "5.5");
}

TEST(TextTest, ParseRejectsJunk) {
  double d;
  std::uint64_t u;
  EXPECT_FALSE(text::ParseDouble("1.5x", d));
  EXPECT_FALSE(text::ParseDouble("", d));
  EXPECT_TRUE(text::ParseDouble("+2.5", d));
  EXPECT_EQ(d, 2.5);
  EXPECT_FALSE(text::ParseU64("-1", u));
  EXPECT_TRUE(text::ParseU64("18446744073709551615", u));
  EXPECT_EQ(u, 18446744073709551615ull);
}

TEST(TextTest, SplitAndJoin) {
  auto parts = text::SplitWhitespace("  a\tbb   c \n");
  ASSERT_EQ(parts.size(), 3u);
  EXPECT_EQ(parts[1], "bb");
  auto fields = text::Split("x,,y", ',');
  ASSERT_EQ(fields.size(), 3u);
  EXPECT_EQ(fields[1], "");
  EXPECT_EQ(text::Join({"a", "b", "c"}, ';'), "a;b;c");
  EXPECT_EQ(text::Trim("  pad \t"), "pad");
}

TEST(TextTest, MissingFileIsIoError) {
  EXPECT_FC_ERROR(text::ReadFile("/nonexistent/fedchain/file"), ErrorCode::kIoError);
}

TEST(ErrorTest, MessageCarriesCodeName) {
  Error e(ErrorCode::kBadLink, "index 3");
  EXPECT_EQ(e.code(), ErrorCode::kBadLink);
  EXPECT_NE(std::string(e.what()).find("BadLink"), std::string::npos);
  EXPECT_NE(std::string(e.what()).find("index 3"), std::string::npos);
}

}  // namespace
}  // namespace fedchain
