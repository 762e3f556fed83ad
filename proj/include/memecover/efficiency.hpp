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

// Link, in-flow and delay efficiency of an ego's followee set, the
// cross-efficiencies between the per-metric optimal sets, and the efficiency
// of a jointly optimized set.
//
//   E^l = |U^l| / |U_u|
//   E^f = f(U^f) / f(U_u),  f(U) = sum of N^v over U
//   E^t = 1 / (1 + <t_i - t_i^0>_i),  delays in days

#ifndef MEMECOVER_EFFICIENCY_HPP_
#define MEMECOVER_EFFICIENCY_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "memecover/model.hpp"

namespace memecover {

// Followees posting at least one covered meme. At full coverage these are
// all of ctx.followees.
std::vector<UserId> EffectiveFollowees(const Corpus& corpus,
                                       const EgoContext& ctx,
                                       const CoverResult& cover);

// Unclamped |cover.selected| / |effective followees|.
double LinkEfficiency(const Corpus& corpus, const EgoContext& ctx,
                      const CoverResult& cover);
// Unclamped f(cover.selected) / f(effective followees).
double InflowEfficiency(const Corpus& corpus, const EgoContext& ctx,
                        const CoverResult& cover);
// From the ego's own receipt times.
double DelayEfficiency(const Corpus& corpus, const EgoContext& ctx);

// 1 / (1 + mean delay) when `users` deliver `universe`; every universe meme
// must be posted by some user.
double SetDelayEfficiency(const Corpus& corpus,
                          std::span<const MemeIndex> universe,
                          std::span<const UserId> users);

struct CrossEfficiencies {
  double link_of_inflow = 0.0;   // |U^l| / |U^f|
  double link_of_delay = 0.0;    // |U^l| / |U^t|
  double inflow_of_link = 0.0;   // f(U^f) / f(U^l)
  double inflow_of_delay = 0.0;  // f(U^f) / f(U^t)
  double delay_of_link = 0.0;    // delay efficiency of U^l
  double delay_of_inflow = 0.0;  // delay efficiency of U^f
};

CrossEfficiencies ComputeCrossEfficiencies(const Corpus& corpus,
                                           const EgoContext& ctx,
                                           const CoverResult& link,
                                           const CoverResult& inflow,
                                           const CoverResult& delay);

struct JointEfficiencies {
  double link = 0.0;    // |U^l| / |U^a|
  double inflow = 0.0;  // f(U^f) / f(U^a)
  double delay = 0.0;   // delay efficiency of U^a
};

JointEfficiencies ComputeJointEfficiencies(const Corpus& corpus,
                                           const EgoContext& ctx,
                                           const CoverResult& joint,
                                           const CoverResult& link,
                                           const CoverResult& inflow);

// optimized / original; > 1 is an improvement. Throws kInvalidOriginal
// unless original > 0.
double EfficiencyRatio(double optimized_value, double original_value);

struct EvaluationOptions {
  double coverage = 1.0;
  double alpha = 1.0;
  double beta = 0.5;
};

struct EfficiencyReport {
  UserId ego;
  MemeKind kind = MemeKind::kHashtag;
  double coverage = 1.0;

  std::size_t num_memes = 0;      // |I_u|
  std::size_t num_covered = 0;
  std::size_t num_followees = 0;  // effective followees at this coverage
  std::uint64_t followee_inflow = 0;

  CoverResult link_cover;
  CoverResult inflow_cover;
  double e_link = 0.0;
  double e_inflow = 0.0;
  double e_delay = 0.0;
  // Set when the greedy set was larger or heavier than the followees and
  // the value was clamped to 1.
  bool link_clamped = false;
  bool inflow_clamped = false;

  // Full coverage only.
  std::optional<CoverResult> delay_cover;
  std::optional<CoverResult> joint_cover;
  std::optional<CrossEfficiencies> cross;
  std::optional<CrossEfficiencies> cross_ratio;  // cross / matching original
  std::optional<JointEfficiencies> joint;
  std::optional<JointEfficiencies> joint_ratio;  // joint / matching original
};

EfficiencyReport Evaluate(const Corpus& corpus, const EgoContext& ctx,
                          const EvaluationOptions& options);

}  // namespace memecover

#endif  // MEMECOVER_EFFICIENCY_HPP_
