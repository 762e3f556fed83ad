// Copyright 2026 The memecover Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Batch command-line surface: ingest, efficiency, cover, optimize, egonet
// and synth subcommands writing TSV (and optionally JSON-lines) reports.

#ifndef MEMECOVER_CLI_HPP_
#define MEMECOVER_CLI_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "memecover/error.hpp"
#include "memecover/model.hpp"

namespace memecover::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitEmpty = 3;
inline constexpr int kExitInternal = 4;

int ExitCodeFor(ErrorCode code);

// Runs one invocation; args exclude the program name.
int Run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

// Histogram with fixed-width bins over [0, 1]; 1.0 lands in the last bin.
inline constexpr double kHistogramBinWidth = 0.02;
std::vector<std::size_t> HistogramCounts(std::span<const double> values,
                                         double bin_width = kHistogramBinWidth);

// Index of the logarithmic bin [2^b, 2^(b+1)) holding `count` (count >= 1).
std::size_t Log2Bin(std::size_t count);

// Users with at least one followee, ascending; a seeded uniform sample of
// `n` of them when requested.
std::vector<UserId> SampleEgos(const Corpus& corpus, std::optional<std::size_t> n,
                               std::uint64_t seed);

void SaveCorpusCache(const Corpus& corpus, const std::filesystem::path& path);
Corpus LoadCorpusCache(const std::filesystem::path& path);

}  // namespace memecover::cli

#endif  // MEMECOVER_CLI_HPP_
