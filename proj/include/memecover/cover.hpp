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

// Greedy set-cover engines over a poster pool, plus an exhaustive oracle.
//
// All engines pick the candidate minimizing weight / |uncovered memes it
// posts| until ceil(p * |universe|) memes are covered:
//
//   GreedyMinCover       weight 1 (fewest users)
//   GreedyWeightedCover  weight N^v (least in-flow)
//   JointCover           weight N^v^alpha * T_v^beta
//
// Ties go to the smaller UserId. Candidates that add nothing are skipped.

#ifndef MEMECOVER_COVER_HPP_
#define MEMECOVER_COVER_HPP_

#include <cstddef>
#include <optional>
#include <vector>

#include "memecover/model.hpp"

namespace memecover {

struct CoverSpec {
  std::vector<MemeIndex> universe;
  // Defaults to every poster of at least one universe meme.
  std::optional<std::vector<UserId>> candidates;
  // Removed from the pool either way (the ego itself, typically).
  std::vector<UserId> excluded;
  double coverage = 1.0;  // p in (0, 1]
  double alpha = 1.0;
  double beta = 0.5;
};

enum class CoverObjective { kCardinality, kInflow };

inline constexpr std::size_t kBruteForceMaxCandidates = 20;

// Number of memes a cover at fraction p must reach: ceil(p * n).
std::size_t CoverTarget(std::size_t universe_size, double coverage);

// Sorted, deduplicated candidate pool for a spec.
std::vector<UserId> CandidatePool(const Corpus& corpus, const CoverSpec& spec);

CoverResult GreedyMinCover(const Corpus& corpus, const CoverSpec& spec);
CoverResult GreedyWeightedCover(const Corpus& corpus, const CoverSpec& spec);
CoverResult JointCover(const Corpus& corpus, const CoverSpec& spec);

// For each universe meme, its earliest poster in the pool (ties by UserId),
// in order of first appearance. Full coverage only.
CoverResult DelayOptimalCover(const Corpus& corpus, const CoverSpec& spec);

// Exact optimum at full coverage by subset enumeration; among optima the
// lexicographically smallest ascending user list. Throws kTooLarge above
// kBruteForceMaxCandidates.
CoverResult BruteForceCover(const Corpus& corpus, const CoverSpec& spec,
                            CoverObjective objective);

// Universe memes posted by at least one of `users`, ascending.
std::vector<MemeIndex> CoveredBy(const Corpus& corpus,
                                 std::span<const MemeIndex> universe,
                                 std::span<const UserId> users);

}  // namespace memecover

#endif  // MEMECOVER_COVER_HPP_
