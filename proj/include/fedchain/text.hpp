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

#ifndef FEDCHAIN_TEXT_HPP_
#define FEDCHAIN_TEXT_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fedchain::text {

// Shortest decimal string that parses back to exactly the same double.
std::string FormatDouble(double value);

// Strict parsers: the whole token must be consumed. Return false on failure.
bool ParseDouble(std::string_view token, double& out);
bool ParseU64(std::string_view token, std::uint64_t& out);

std::string_view Trim(std::string_view s);
std::vector<std::string_view> SplitWhitespace(std::string_view line);
std::vector<std::string> Split(std::string_view s, char sep);
std::string Join(const std::vector<std::string>& parts, char sep);

// Throw Error(kIoError) on failure.
std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view contents);

}  // namespace fedchain::text

#endif  // FEDCHAIN_TEXT_HPP_
