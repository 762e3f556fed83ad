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

#include "memecover/cover.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>

#include "memecover/error.hpp"

namespace memecover {

namespace {

std::vector<MemeIndex> SortedUniverse(const CoverSpec& spec) {
  std::vector<MemeIndex> universe = spec.universe;
  std::sort(universe.begin(), universe.end());
  universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
  return universe;
}

// Candidate sets expressed as positions in the sorted universe.
struct Instance {
  std::vector<MemeIndex> universe;
  std::vector<UserId> users;
  std::vector<std::vector<std::uint32_t>> sets;
};

Instance MakeInstance(const Corpus& corpus, const CoverSpec& spec) {
  if (!(spec.coverage > 0.0 && spec.coverage <= 1.0)) {
    throw Error(ErrorCode::kInvalidSpec, "coverage fraction must lie in (0, 1]");
  }
  Instance inst;
  inst.universe = SortedUniverse(spec);
  for (UserId v : CandidatePool(corpus, spec)) {
    std::vector<std::uint32_t> set;
    for (const UserMeme& um : corpus.memes_of(v)) {
      auto it = std::lower_bound(inst.universe.begin(), inst.universe.end(),
                                 um.meme);
      if (it != inst.universe.end() && *it == um.meme) {
        set.push_back(static_cast<std::uint32_t>(it - inst.universe.begin()));
      }
    }
    if (set.empty()) continue;
    inst.users.push_back(v);
    inst.sets.push_back(std::move(set));
  }
  return inst;
}

// Greedy by minimum weight / gain. `weights` is parallel to inst.users.
CoverResult RunGreedy(const Instance& inst, const std::vector<double>& weights,
                      double coverage) {
  const std::size_t n = inst.universe.size();
  const std::size_t target = CoverTarget(n, coverage);
  CoverResult result;

  std::vector<std::vector<std::uint32_t>> holders(n);
  std::vector<std::size_t> gain(inst.users.size());
  for (std::size_t c = 0; c < inst.users.size(); ++c) {
    gain[c] = inst.sets[c].size();
    for (std::uint32_t m : inst.sets[c]) {
      holders[m].push_back(static_cast<std::uint32_t>(c));
    }
  }
  std::vector<bool> covered(n, false);
  std::size_t covered_count = 0;

  while (covered_count < target) {
    std::size_t best = inst.users.size();
    for (std::size_t c = 0; c < inst.users.size(); ++c) {
      if (gain[c] == 0) continue;
      if (best == inst.users.size()) {
        best = c;
        continue;
      }
      // weight_c / gain_c < weight_best / gain_best, without division.
      // Users are ascending, so an exact tie keeps the earlier candidate.
      const double lhs = weights[c] * static_cast<double>(gain[best]);
      const double rhs = weights[best] * static_cast<double>(gain[c]);
      if (lhs < rhs) best = c;
    }
    if (best == inst.users.size()) {
      throw Error(ErrorCode::kInfeasibleCover,
                  "candidates cover " + std::to_string(covered_count) + " of " +
                      std::to_string(target) + " required memes");
    }
    std::size_t newly = 0;
    for (std::uint32_t m : inst.sets[best]) {
      if (covered[m]) continue;
      covered[m] = true;
      ++newly;
      for (std::uint32_t holder : holders[m]) --gain[holder];
    }
    covered_count += newly;
    result.selected.push_back(inst.users[best]);
    result.per_step.push_back({inst.users[best], newly});
  }
  for (std::size_t m = 0; m < n; ++m) {
    if (covered[m]) result.covered.push_back(inst.universe[m]);
  }
  return result;
}

std::vector<double> InflowWeights(const Corpus& corpus, const Instance& inst) {
  std::vector<double> weights;
  weights.reserve(inst.users.size());
  for (UserId v : inst.users) {
    weights.push_back(static_cast<double>(corpus.post_count(v)));
  }
  return weights;
}

// T_v over the user's memes whose kind occurs in the universe.
double AverageDelayDays(const Corpus& corpus, UserId user,
                        const std::set<MemeKind>& kinds) {
  double total = 0.0;
  std::size_t count = 0;
  for (const UserMeme& um : corpus.memes_of(user)) {
    if (!kinds.contains(corpus.meme(um.meme).kind)) continue;
    total += SecondsToDays(um.first_time - corpus.first_mention(um.meme));
    ++count;
  }
  return count == 0 ? 0.0 : total / static_cast<double>(count);
}

}  // namespace

std::size_t CoverTarget(std::size_t universe_size, double coverage) {
  // The epsilon absorbs representation error such as 0.7 * 10 = 7.000...01.
  const double raw = coverage * static_cast<double>(universe_size) - 1e-9;
  const auto target = static_cast<std::size_t>(std::max(0.0, std::ceil(raw)));
  return std::min(target, universe_size);
}

std::vector<UserId> CandidatePool(const Corpus& corpus, const CoverSpec& spec) {
  std::vector<UserId> pool;
  if (spec.candidates) {
    pool = *spec.candidates;
  } else {
    for (MemeIndex m : spec.universe) {
      const auto posters = corpus.posters_of(m);
      pool.insert(pool.end(), posters.begin(), posters.end());
    }
  }
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  std::erase_if(pool, [&](UserId v) {
    return std::find(spec.excluded.begin(), spec.excluded.end(), v) !=
           spec.excluded.end();
  });
  return pool;
}

CoverResult GreedyMinCover(const Corpus& corpus, const CoverSpec& spec) {
  const Instance inst = MakeInstance(corpus, spec);
  CoverResult result =
      RunGreedy(inst, std::vector<double>(inst.users.size(), 1.0), spec.coverage);
  result.objective = static_cast<double>(result.selected.size());
  return result;
}

CoverResult GreedyWeightedCover(const Corpus& corpus, const CoverSpec& spec) {
  const Instance inst = MakeInstance(corpus, spec);
  CoverResult result = RunGreedy(inst, InflowWeights(corpus, inst), spec.coverage);
  result.objective = static_cast<double>(Inflow(corpus, result.selected));
  return result;
}

CoverResult JointCover(const Corpus& corpus, const CoverSpec& spec) {
  if (!(spec.alpha >= 0.0) || !(spec.beta >= 0.0)) {
    throw Error(ErrorCode::kInvalidSpec, "alpha and beta must be non-negative");
  }
  const Instance inst = MakeInstance(corpus, spec);
  std::set<MemeKind> kinds;
  for (MemeIndex m : inst.universe) kinds.insert(corpus.meme(m).kind);

  std::vector<double> weights;
  weights.reserve(inst.users.size());
  for (UserId v : inst.users) {
    const double inflow = static_cast<double>(corpus.post_count(v));
    const double delay = AverageDelayDays(corpus, v, kinds);
    // std::pow(0, 0) == 1, so zero exponents drop the factor entirely.
    weights.push_back(std::pow(inflow, spec.alpha) * std::pow(delay, spec.beta));
  }
  CoverResult result = RunGreedy(inst, weights, spec.coverage);
  result.objective = static_cast<double>(Inflow(corpus, result.selected));

  if (!result.covered.empty()) {
    double total = 0.0;
    for (MemeIndex m : result.covered) {
      std::optional<Timestamp> earliest;
      for (UserId v : result.selected) {
        if (auto t = corpus.FirstMentionBy(v, m); t && (!earliest || *t < *earliest)) {
          earliest = t;
        }
      }
      total += SecondsToDays(*earliest - corpus.first_mention(m));
    }
    result.average_delay_days = total / static_cast<double>(result.covered.size());
  }
  return result;
}

CoverResult DelayOptimalCover(const Corpus& corpus, const CoverSpec& spec) {
  if (spec.coverage != 1.0) {
    throw Error(ErrorCode::kInvalidSpec,
                "delay-optimal cover is defined for full coverage only");
  }
  const std::vector<MemeIndex> universe = SortedUniverse(spec);
  const std::vector<UserId> pool = CandidatePool(corpus, spec);
  const bool restricted = spec.candidates.has_value() || !spec.excluded.empty();

  CoverResult result;
  // Each meme is credited to its first mentioner, in selection order.
  for (MemeIndex m : universe) {
    std::optional<UserId> best;
    Timestamp best_time = 0;
    for (UserId v : corpus.posters_of(m)) {  // ascending UserId
      if (restricted && !std::binary_search(pool.begin(), pool.end(), v)) continue;
      const Timestamp t = *corpus.FirstMentionBy(v, m);
      if (!best || t < best_time) {
        best = v;
        best_time = t;
      }
    }
    if (!best) {
      throw Error(ErrorCode::kInfeasibleCover,
                  "no candidate posts " + ToString(corpus.meme(m)));
    }
    auto it = std::find(result.selected.begin(), result.selected.end(), *best);
    if (it == result.selected.end()) {
      result.selected.push_back(*best);
      result.per_step.push_back({*best, 1});
    } else {
      ++result.per_step[static_cast<std::size_t>(it - result.selected.begin())].newly_covered;
    }
  }
  result.covered = universe;
  result.objective = static_cast<double>(result.selected.size());
  return result;
}

CoverResult BruteForceCover(const Corpus& corpus, const CoverSpec& spec,
                            CoverObjective objective) {
  CoverSpec full = spec;
  full.coverage = 1.0;
  const Instance inst = MakeInstance(corpus, full);
  const std::size_t k = inst.users.size();
  if (k > kBruteForceMaxCandidates) {
    throw Error(ErrorCode::kTooLarge,
                std::to_string(k) + " candidates exceed the exhaustive bound of " +
                    std::to_string(kBruteForceMaxCandidates));
  }
  const std::size_t n = inst.universe.size();
  const std::size_t words = (n + 63) / 64;
  std::vector<std::vector<std::uint64_t>> masks(k, std::vector<std::uint64_t>(words, 0));
  std::vector<std::uint64_t> full_mask(words, 0);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::uint32_t m : inst.sets[c]) masks[c][m / 64] |= std::uint64_t{1} << (m % 64);
  }
  for (std::size_t m = 0; m < n; ++m) full_mask[m / 64] |= std::uint64_t{1} << (m % 64);

  std::vector<double> cost(k);
  for (std::size_t c = 0; c < k; ++c) {
    cost[c] = objective == CoverObjective::kCardinality
                  ? 1.0
                  : static_cast<double>(corpus.post_count(inst.users[c]));
  }

  std::optional<std::uint32_t> best_mask;
  double best_cost = 0.0;
  std::vector<UserId> best_users;
  std::vector<std::uint64_t> acc(words);
  const std::uint32_t limit = std::uint32_t{1} << k;
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    std::fill(acc.begin(), acc.end(), 0);
    double total = 0.0;
    std::vector<UserId> users;
    for (std::size_t c = 0; c < k; ++c) {
      if (!(mask >> c & 1U)) continue;
      for (std::size_t w = 0; w < words; ++w) acc[w] |= masks[c][w];
      total += cost[c];
      users.push_back(inst.users[c]);
    }
    if (acc != full_mask) continue;
    if (!best_mask || total < best_cost ||
        (total == best_cost && users < best_users)) {
      best_mask = mask;
      best_cost = total;
      best_users = std::move(users);
    }
  }
  if (!best_mask) {
    throw Error(ErrorCode::kInfeasibleCover, "candidates cannot cover the universe");
  }

  CoverResult result;
  result.selected = best_users;
  result.objective = best_cost;
  result.covered = inst.universe;
  std::vector<bool> covered(n, false);
  for (UserId v : best_users) {
    const auto c = static_cast<std::size_t>(
        std::lower_bound(inst.users.begin(), inst.users.end(), v) - inst.users.begin());
    std::size_t newly = 0;
    for (std::uint32_t m : inst.sets[c]) {
      if (!covered[m]) {
        covered[m] = true;
        ++newly;
      }
    }
    result.per_step.push_back({v, newly});
  }
  return result;
}

std::vector<MemeIndex> CoveredBy(const Corpus& corpus,
                                 std::span<const MemeIndex> universe,
                                 std::span<const UserId> users) {
  std::vector<MemeIndex> out;
  for (MemeIndex m : universe) {
    for (UserId v : users) {
      if (corpus.FirstMentionBy(v, m)) {
        out.push_back(m);
        break;
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace memecover
