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

#ifndef FEDCHAIN_HASH_HPP_
#define FEDCHAIN_HASH_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace fedchain {

using Digest = std::array<std::uint8_t, 32>;

// SHA-256 (backed by OpenSSL libcrypto).
Digest Sha256(std::span<const std::uint8_t> bytes);
Digest Sha256(std::string_view bytes);

std::string ToHex(std::span<const std::uint8_t> bytes);
std::optional<Digest> DigestFromHex(std::string_view hex);

// Number of leading zero bits, MSB of byte 0 first.
int LeadingZeroBits(const Digest& d);

}  // namespace fedchain

#endif  // FEDCHAIN_HASH_HPP_
