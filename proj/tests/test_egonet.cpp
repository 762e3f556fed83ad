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

#include <algorithm>
#include <utility>
#include <vector>

#include "doctest.h"
#include "memecover/egonet.hpp"
#include "memecover/error.hpp"
#include "memecover/rng.hpp"
#include "test_support.hpp"

namespace memecover {
namespace {

using testing::DatasetBuilder;
using testing::Node;
using testing::U;
using testing::Users;

std::vector<UserId> NodeIds(const Corpus& corpus, const std::vector<std::size_t>& nodes) {
  std::vector<UserId> out;
  for (std::size_t i : nodes) out.push_back(U(corpus, Node(i)));
  return out;
}

TEST_CASE("members without mutual edges form a star") {
  DatasetBuilder b;
  for (const char* m : {"A", "B", "C"}) b.Follow("E", m);
  b.Plain("E", 1);
  const Corpus corpus = b.Build();
  const EgoNetwork net = BuildEgoNetwork(corpus, U(corpus, "E"), Users(corpus, {"A", "B", "C"}));
  CHECK(net.edges.size() == 3);
  for (const auto& [a, c] : net.edges) CHECK(a == net.ego);
  CHECK(LocalClusteringCoefficient(net) == 0.0);
}

TEST_CASE("induced subgraph keeps member edges only") {
  DatasetBuilder b;
  b.Follow("E", "A").Follow("A", "B").Follow("B", "Z").Follow("Z", "A").Plain("E", 1);
  const Corpus corpus = b.Build();
  const EgoNetwork net = BuildEgoNetwork(corpus, U(corpus, "E"), Users(corpus, {"A", "B"}));
  const std::pair ab{U(corpus, "A"), U(corpus, "B")};
  CHECK(std::find(net.edges.begin(), net.edges.end(), ab) != net.edges.end());
  CHECK(net.edges.size() == 2);
}

TEST_CASE("outside members get no ego edge unless followed") {
  DatasetBuilder b;
  b.Follow("E", "A").Follow("X", "Y").Follow("Y", "X").Plain("E", 1);
  const Corpus corpus = b.Build();
  const EgoNetwork net = BuildEgoNetwork(corpus, U(corpus, "E"), Users(corpus, {"X", "Y"}));
  for (const auto& [a, c] : net.edges) {
    CHECK(a != net.ego);
    CHECK(c != net.ego);
  }
  CHECK(LocalClusteringCoefficient(net) == 1.0);
}

TEST_CASE("complete neighborhood has unit clustering") {
  DatasetBuilder b;
  b.Follow("A", "B").Follow("B", "C").Follow("C", "A").Plain("E", 1);
  const Corpus corpus = b.Build();
  const EgoNetwork net = BuildEgoNetwork(corpus, U(corpus, "E"), Users(corpus, {"A", "B", "C"}));
  CHECK(LocalClusteringCoefficient(net) == 1.0);
}

TEST_CASE("two of six pairs connected") {
  DatasetBuilder b;
  b.Follow("A", "B").Follow("B", "A").Follow("C", "D").Plain("E", 1);
  const Corpus corpus = b.Build();
  const EgoNetwork net =
      BuildEgoNetwork(corpus, U(corpus, "E"), Users(corpus, {"A", "B", "C", "D"}));
  CHECK(LocalClusteringCoefficient(net) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("degenerate inputs") {
  DatasetBuilder b;
  b.Follow("E", "A").Plain("E", 1);
  const Corpus corpus = b.Build();
  const UserId ego = U(corpus, "E");
  CHECK_THROWS_AS((void)BuildEgoNetwork(corpus, ego, std::vector<UserId>{}), Error);
  CHECK_THROWS_AS((void)BuildEgoNetwork(corpus, ego, std::vector{ego}), Error);
  CHECK_THROWS_AS(
      (void)LocalClusteringCoefficient(BuildEgoNetwork(corpus, ego, Users(corpus, {"A"}))),
      Error);
  CHECK_THROWS_AS((void)Overlap(std::vector<UserId>{}, std::vector{ego}), Error);
}

TEST_CASE("overlap") {
  const std::vector<UserId> five{{1}, {2}, {3}, {4}, {5}};
  CHECK(Overlap(std::vector<UserId>{{2}, {3}}, five) == 1.0);
  CHECK(Overlap(std::vector<UserId>{{7}, {8}}, five) == 0.0);
  CHECK(Overlap(five, std::vector<UserId>{{1}, {4}, {9}}) == 0.4);
}

TEST_CASE("pearson correlation") {
  using P = std::pair<double, double>;
  CHECK(PearsonCorrelation(std::vector<P>{{0, 1}, {1, 3}, {2, 5}}) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(PearsonCorrelation(std::vector<P>{{0, 5}, {1, 3}, {2, 1}}) ==
        doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(PearsonCorrelation(std::vector<P>{{0, 0}, {1, 1}, {0, 1}, {1, 0}}) == 0.0);
  CHECK_THROWS_AS((void)PearsonCorrelation(std::vector<P>{{0, 1}, {0, 2}}), Error);
  CHECK_THROWS_AS((void)PearsonCorrelation(std::vector<P>{{0, 1}}), Error);
}

TEST_CASE("property: clustering matches pair enumeration on random graphs") {
  Rng rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + rng.Index(8);
    const testing::SmallGraph g = testing::RandomGraph(rng, n, rng.Uniform());
    const Corpus corpus = testing::GraphCorpus(g);
    std::vector<std::size_t> members;
    for (std::size_t i = 1; i < n; ++i) {
      if (rng.Bernoulli(0.7)) members.push_back(i);
    }
    if (members.size() < 2) members = {1, 2};
    const EgoNetwork net = BuildEgoNetwork(corpus, U(corpus, Node(0)), NodeIds(corpus, members));
    const double lcc = LocalClusteringCoefficient(net);
    CHECK(std::abs(lcc - testing::PairCountLcc(g, members)) <= 1e-12);
    CHECK(lcc >= 0.0);
    CHECK(lcc <= 1.0);
    for (const auto& [a, c] : net.edges) CHECK(a != c);
  }
}

TEST_CASE("property: adding a member edge never lowers clustering") {
  Rng rng(62);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 4 + rng.Index(6);
    testing::SmallGraph g = testing::RandomGraph(rng, n, 0.3);
    std::vector<std::size_t> members;
    for (std::size_t i = 1; i < n; ++i) members.push_back(i);
    const Corpus before_corpus = testing::GraphCorpus(g);
    const double before = LocalClusteringCoefficient(BuildEgoNetwork(
        before_corpus, U(before_corpus, Node(0)), NodeIds(before_corpus, members)));
    const std::size_t a = 1 + rng.Index(n - 1);
    std::size_t c = 1 + rng.Index(n - 1);
    if (c == a) c = a == 1 ? 2 : 1;
    g.adj[a][c] = true;
    const Corpus after_corpus = testing::GraphCorpus(g);
    const double after = LocalClusteringCoefficient(BuildEgoNetwork(
        after_corpus, U(after_corpus, Node(0)), NodeIds(after_corpus, members)));
    CHECK(after >= before);
  }
}

TEST_CASE("property: overlap bounds and self identity") {
  Rng rng(63);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<UserId> a, c;
    for (std::uint32_t i = 0; i < 10; ++i) {
      if (rng.Bernoulli(0.5)) a.push_back({i});
      if (rng.Bernoulli(0.5)) c.push_back({i});
    }
    if (a.empty()) continue;
    const double o = Overlap(a, c);
    CHECK(o >= 0.0);
    CHECK(o <= 1.0);
    CHECK(Overlap(a, a) == 1.0);
  }
}

}  // namespace
}  // namespace memecover
