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

#include "memecover/egonet.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "memecover/error.hpp"

namespace memecover {

EgoNetwork BuildEgoNetwork(const Corpus& corpus, UserId ego,
                           std::span<const UserId> members) {
  EgoNetwork net;
  net.ego = ego;
  net.members.assign(members.begin(), members.end());
  std::sort(net.members.begin(), net.members.end());
  net.members.erase(std::unique(net.members.begin(), net.members.end()),
                    net.members.end());
  std::erase(net.members, ego);
  if (net.members.empty()) {
    throw Error(ErrorCode::kEmptyMembers, "ego-network needs members");
  }
  std::vector<UserId> nodes = net.members;
  nodes.insert(std::lower_bound(nodes.begin(), nodes.end(), ego), ego);
  for (UserId a : nodes) {
    for (UserId b : corpus.followees(a)) {
      if (std::binary_search(nodes.begin(), nodes.end(), b)) {
        net.edges.emplace_back(a, b);
      }
    }
  }
  return net;
}

double LocalClusteringCoefficient(const EgoNetwork& net) {
  const std::size_t k = net.members.size();
  if (k < 2) {
    throw Error(ErrorCode::kTooFewMembers,
                "clustering coefficient needs at least two members");
  }
  std::set<std::pair<UserId, UserId>> pairs;
  for (const auto& [a, b] : net.edges) {
    if (a == net.ego || b == net.ego || a == b) continue;
    pairs.insert(std::minmax(a, b));
  }
  const double possible = static_cast<double>(k) * static_cast<double>(k - 1) / 2.0;
  return static_cast<double>(pairs.size()) / possible;
}

double Overlap(std::span<const UserId> optimal,
               std::span<const UserId> followees) {
  std::vector<UserId> opt(optimal.begin(), optimal.end());
  std::sort(opt.begin(), opt.end());
  opt.erase(std::unique(opt.begin(), opt.end()), opt.end());
  if (opt.empty()) throw Error(ErrorCode::kEmptyOptimal, "optimal set is empty");
  std::vector<UserId> fol(followees.begin(), followees.end());
  std::sort(fol.begin(), fol.end());
  const auto shared = std::count_if(opt.begin(), opt.end(), [&](UserId v) {
    return std::binary_search(fol.begin(), fol.end(), v);
  });
  return static_cast<double>(shared) / static_cast<double>(opt.size());
}

double PearsonCorrelation(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) {
    throw Error(ErrorCode::kDegenerateVariance, "need at least two points");
  }
  const double n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (const auto& [x, y] : points) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorCode::kDegenerateVariance, "a coordinate has zero variance");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace memecover
