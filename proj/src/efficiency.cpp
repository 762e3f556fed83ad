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

#include "memecover/efficiency.hpp"

#include <algorithm>
#include <string>

#include "memecover/cover.hpp"
#include "memecover/error.hpp"

namespace memecover {

namespace {

double MeanDelayEfficiency(double total_delay_days, std::size_t count) {
  return 1.0 / (1.0 + total_delay_days / static_cast<double>(count));
}

}  // namespace

std::vector<UserId> EffectiveFollowees(const Corpus& corpus,
                                       const EgoContext& ctx,
                                       const CoverResult& cover) {
  std::vector<UserId> out;
  for (UserId v : ctx.followees) {
    for (const UserMeme& um : corpus.memes_of(v)) {
      if (std::binary_search(cover.covered.begin(), cover.covered.end(),
                             um.meme)) {
        out.push_back(v);
        break;
      }
    }
  }
  return out;
}

double LinkEfficiency(const Corpus& corpus, const EgoContext& ctx,
                      const CoverResult& cover) {
  const auto followees = EffectiveFollowees(corpus, ctx, cover);
  if (followees.empty()) {
    throw Error(ErrorCode::kEmptyFollowees,
                "no followee posts a covered meme");
  }
  return static_cast<double>(cover.selected.size()) /
         static_cast<double>(followees.size());
}

double InflowEfficiency(const Corpus& corpus, const EgoContext& ctx,
                        const CoverResult& cover) {
  const auto followees = EffectiveFollowees(corpus, ctx, cover);
  if (followees.empty()) {
    throw Error(ErrorCode::kEmptyFollowees,
                "no followee posts a covered meme");
  }
  const std::uint64_t original = Inflow(corpus, followees);
  if (original == 0) {
    throw Error(ErrorCode::kZeroInflow, "followees posted nothing");
  }
  return static_cast<double>(Inflow(corpus, cover.selected)) /
         static_cast<double>(original);
}

double DelayEfficiency(const Corpus& corpus, const EgoContext& ctx) {
  if (ctx.received.empty()) {
    throw Error(ErrorCode::kNoMemes, "ego received no memes");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < ctx.received.size(); ++k) {
    total += SecondsToDays(ctx.receipt_time[k] -
                           corpus.first_mention(ctx.received[k]));
  }
  return MeanDelayEfficiency(total, ctx.received.size());
}

double SetDelayEfficiency(const Corpus& corpus,
                          std::span<const MemeIndex> universe,
                          std::span<const UserId> users) {
  if (universe.empty()) {
    throw Error(ErrorCode::kNoMemes, "empty meme universe");
  }
  double total = 0.0;
  for (MemeIndex m : universe) {
    std::optional<Timestamp> earliest;
    for (UserId v : users) {
      if (auto t = corpus.FirstMentionBy(v, m); t && (!earliest || *t < *earliest)) {
        earliest = t;
      }
    }
    if (!earliest) {
      throw Error(ErrorCode::kInfeasibleCover,
                  "user set does not deliver " + ToString(corpus.meme(m)));
    }
    total += SecondsToDays(*earliest - corpus.first_mention(m));
  }
  return MeanDelayEfficiency(total, universe.size());
}

CrossEfficiencies ComputeCrossEfficiencies(const Corpus& corpus,
                                           const EgoContext& ctx,
                                           const CoverResult& link,
                                           const CoverResult& inflow,
                                           const CoverResult& delay) {
  const auto size = [](const CoverResult& c) {
    return static_cast<double>(c.selected.size());
  };
  const auto flow = [&](const CoverResult& c) {
    return static_cast<double>(Inflow(corpus, c.selected));
  };
  CrossEfficiencies out;
  out.link_of_inflow = size(link) / size(inflow);
  out.link_of_delay = size(link) / size(delay);
  out.inflow_of_link = flow(inflow) / flow(link);
  out.inflow_of_delay = flow(inflow) / flow(delay);
  out.delay_of_link = SetDelayEfficiency(corpus, ctx.received, link.selected);
  out.delay_of_inflow = SetDelayEfficiency(corpus, ctx.received, inflow.selected);
  return out;
}

JointEfficiencies ComputeJointEfficiencies(const Corpus& corpus,
                                           const EgoContext& ctx,
                                           const CoverResult& joint,
                                           const CoverResult& link,
                                           const CoverResult& inflow) {
  JointEfficiencies out;
  out.link = static_cast<double>(link.selected.size()) /
             static_cast<double>(joint.selected.size());
  out.inflow = static_cast<double>(Inflow(corpus, inflow.selected)) /
               static_cast<double>(Inflow(corpus, joint.selected));
  out.delay = SetDelayEfficiency(corpus, ctx.received, joint.selected);
  return out;
}

double EfficiencyRatio(double optimized_value, double original_value) {
  if (!(original_value > 0.0)) {
    throw Error(ErrorCode::kInvalidOriginal,
                "original efficiency must be positive, got " +
                    std::to_string(original_value));
  }
  return optimized_value / original_value;
}

EfficiencyReport Evaluate(const Corpus& corpus, const EgoContext& ctx,
                          const EvaluationOptions& options) {
  EfficiencyReport r;
  r.ego = ctx.ego;
  r.kind = ctx.kind;
  r.coverage = options.coverage;
  r.num_memes = ctx.received.size();

  CoverSpec spec;
  spec.universe = ctx.received;
  spec.coverage = options.coverage;
  spec.alpha = options.alpha;
  spec.beta = options.beta;
  spec.excluded = {ctx.ego};

  r.link_cover = GreedyMinCover(corpus, spec);
  r.inflow_cover = GreedyWeightedCover(corpus, spec);
  r.num_covered = r.link_cover.covered.size();

  const auto followees = EffectiveFollowees(corpus, ctx, r.link_cover);
  r.num_followees = followees.size();
  r.followee_inflow = Inflow(corpus, followees);

  r.e_link = LinkEfficiency(corpus, ctx, r.link_cover);
  r.e_inflow = InflowEfficiency(corpus, ctx, r.inflow_cover);
  if (r.e_link > 1.0) {
    r.e_link = 1.0;
    r.link_clamped = true;
  }
  if (r.e_inflow > 1.0) {
    r.e_inflow = 1.0;
    r.inflow_clamped = true;
  }
  r.e_delay = DelayEfficiency(corpus, ctx);

  if (options.coverage != 1.0) return r;

  r.delay_cover = DelayOptimalCover(corpus, spec);
  r.joint_cover = JointCover(corpus, spec);
  r.cross = ComputeCrossEfficiencies(corpus, ctx, r.link_cover, r.inflow_cover,
                                     *r.delay_cover);
  r.joint = ComputeJointEfficiencies(corpus, ctx, *r.joint_cover, r.link_cover,
                                     r.inflow_cover);

  const CrossEfficiencies& c = *r.cross;
  r.cross_ratio = CrossEfficiencies{
      EfficiencyRatio(c.link_of_inflow, r.e_link),
      EfficiencyRatio(c.link_of_delay, r.e_link),
      EfficiencyRatio(c.inflow_of_link, r.e_inflow),
      EfficiencyRatio(c.inflow_of_delay, r.e_inflow),
      EfficiencyRatio(c.delay_of_link, r.e_delay),
      EfficiencyRatio(c.delay_of_inflow, r.e_delay),
  };
  r.joint_ratio = JointEfficiencies{
      EfficiencyRatio(r.joint->link, r.e_link),
      EfficiencyRatio(r.joint->inflow, r.e_inflow),
      EfficiencyRatio(r.joint->delay, r.e_delay),
  };
  return r;
}

}  // namespace memecover
