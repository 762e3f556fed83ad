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

// Ego-networks over a member set and their structural measures.

#ifndef MEMECOVER_EGONET_HPP_
#define MEMECOVER_EGONET_HPP_

#include <span>
#include <utility>
#include <vector>

#include "memecover/model.hpp"

namespace memecover {

struct EgoNetwork {
  UserId ego;
  std::vector<UserId> members;  // ascending, never contains ego
  // Directed follow edges among members and ego, ascending, no self-loops.
  std::vector<std::pair<UserId, UserId>> edges;
};

// Induced follow subgraph on {ego} + members. Throws kEmptyMembers.
EgoNetwork BuildEgoNetwork(const Corpus& corpus, UserId ego,
                           std::span<const UserId> members);

// Fraction of member pairs joined by an edge in either direction; edges
// touching the ego do not count. Throws kTooFewMembers below two members.
double LocalClusteringCoefficient(const EgoNetwork& net);

// |optimal & followees| / |optimal|. Throws kEmptyOptimal.
double Overlap(std::span<const UserId> optimal,
               std::span<const UserId> followees);

// Pearson product-moment correlation. Throws kDegenerateVariance when
// there are fewer than two points or either coordinate is constant.
double PearsonCorrelation(std::span<const std::pair<double, double>> points);

}  // namespace memecover

#endif  // MEMECOVER_EGONET_HPP_
