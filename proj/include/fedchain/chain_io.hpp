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

#ifndef FEDCHAIN_CHAIN_IO_HPP_
#define FEDCHAIN_CHAIN_IO_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "fedchain/chain.hpp"

namespace fedchain {

// Export layout:
//   <dir>/chain.csv         header row + one row per block
//   <dir>/block-<n>.txt     key=value metadata for block n, same fields
//   <dir>/models/<hex>.vec  SerializeParams bytes, named by model_ref
//
// Column / key order is kBlockFields.
extern const std::vector<std::string> kBlockFields;

std::string BlockCsvHeader();
std::string BlockCsvRow(const Block& block);
std::string BlockMetadata(const Block& block);

// Writes chain.csv and block files; model files for every model_ref found in
// `models` (pass nullptr to skip). Throws kIoError.
void ExportChain(const Chain& chain, const std::filesystem::path& dir,
                 const ModelStore* models = nullptr);

// Parses an export without verifying it. Every chain.csv row must have a
// matching block-<n>.txt with identical fields. Throws kIoError or
// kCorruptExport naming the offending file or row.
Chain ReadExport(const std::filesystem::path& dir);

// ReadExport followed by VerifyChain; a failed verification is kCorruptExport.
Chain ImportRestore(const std::filesystem::path& dir);

// Rebuilds a chain from block-<n>.txt files alone (n = 0, 1, ... until the
// first missing file), ignoring chain.csv. Not verified.
Chain RestoreFromMetadata(const std::filesystem::path& dir);

// Loads <dir>/models/*.vec, checking each file hashes to its name.
ModelStore ImportModels(const std::filesystem::path& dir);

}  // namespace fedchain

#endif  // FEDCHAIN_CHAIN_IO_HPP_
