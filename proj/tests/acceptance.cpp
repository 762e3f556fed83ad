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

// Acceptance gate: runs every criterion and prints one PASS/FAIL line each.
// Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "memecover/cli.hpp"
#include "memecover/cover.hpp"
#include "memecover/efficiency.hpp"
#include "memecover/egonet.hpp"
#include "memecover/error.hpp"
#include "memecover/ingest.hpp"
#include "memecover/rng.hpp"
#include "memecover/synth.hpp"
#include "test_support.hpp"

namespace memecover {
namespace {

namespace fs = std::filesystem;
using testing::DatasetBuilder;

// Collects failed checks; the first few are reported.
class Verdict {
 public:
  void Check(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    if (failures_.size() < 3) failures_.push_back(what);
    ++failed_;
  }
  void Note(const std::string& note) { notes_.push_back(note); }

  bool passed() const { return failed_ == 0; }
  std::string Detail() const {
    std::string out = std::to_string(checks_) + " checks";
    for (const auto& n : notes_) out += "; " + n;
    if (failed_ > 0) {
      out += "; " + std::to_string(failed_) + " failed";
      for (const auto& f : failures_) out += "; " + f;
    }
    return out;
  }

 private:
  std::size_t checks_ = 0;
  std::size_t failed_ = 0;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string Fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

EgoContext ContextOf(const Corpus& corpus, UserId ego) {
  return MakeEgoContext(corpus, ego, MemeKind::kHashtag, 0);
}

CoverSpec FullSpec(const Corpus& corpus) {
  CoverSpec spec;
  spec.universe = testing::AllMemes(corpus);
  return spec;
}

// Random ego corpora: a random instance plus an ego following some posters.
std::vector<std::pair<Corpus, UserId>> RandomEgoCorpora(std::uint64_t seed, int count) {
  Rng rng(seed);
  std::vector<std::pair<Corpus, UserId>> out;
  while (static_cast<int>(out.size()) < count) {
    DatasetBuilder b = testing::RandomInstance(rng, 2 + rng.Index(11), 1 + rng.Index(15));
    for (std::size_t c = 0; c < 12; ++c) {
      if (rng.Bernoulli(0.5)) b.Follow("ego", "c" + std::to_string(100 + c));
    }
    b.Plain("ego", 1);
    Corpus corpus = b.Build();
    const UserId ego = *corpus.FindUser("ego");
    try {
      (void)ContextOf(corpus, ego);
    } catch (const Error&) {
      continue;
    }
    out.emplace_back(std::move(corpus), ego);
  }
  return out;
}

std::vector<std::pair<Corpus, UserId>> ArchetypeEgos() {
  std::vector<std::pair<Corpus, UserId>> out;
  for (Archetype a : {Archetype::kRedundantFollowees, Archetype::kSuperuserShadow}) {
    SynthSpec spec;
    spec.archetype = a;
    spec.ego_followee_count = 8;
    spec.n_users = 40;
    SynthOutput s = Generate(spec);
    out.emplace_back(std::move(s.corpus), s.ego);
  }
  for (const DatasetBuilder& b : {testing::LinkExample(), testing::InflowExample(),
                                  testing::DelayExample()}) {
    Corpus corpus = b.Build();
    const UserId ego = *corpus.FindUser("E");
    out.emplace_back(std::move(corpus), ego);
  }
  return out;
}

Verdict WorkedExampleGoldens() {
  Verdict v;
  struct Case {
    const char* name;
    DatasetBuilder data;
    double expected;
    double EfficiencyReport::*field;
  };
  const Case cases[] = {
      {"link 3/5", testing::LinkExample(), 3.0 / 5.0, &EfficiencyReport::e_link},
      {"inflow 30/60", testing::InflowExample(), 0.5, &EfficiencyReport::e_inflow},
      {"delay 1/(1+30/13)", testing::DelayExample(), 1.0 / (1.0 + 30.0 / 13.0),
       &EfficiencyReport::e_delay},
  };
  for (const Case& c : cases) {
    const Corpus corpus = c.data.Build();
    const EgoContext ctx = ContextOf(corpus, *corpus.FindUser("E"));
    const double got = Evaluate(corpus, ctx, {}).*c.field;
    v.Check(std::abs(got - c.expected) <= 1e-9,
            std::string(c.name) + " got " + Fmt(got));
  }
  return v;
}

Verdict ArchetypeGoldens() {
  Verdict v;
  for (std::size_t k : {2, 5, 10, 100}) {
    for (Archetype a : {Archetype::kRedundantFollowees, Archetype::kSuperuserShadow}) {
      SynthSpec spec;
      spec.archetype = a;
      spec.ego_followee_count = k;
      spec.n_users = k + 10;
      spec.n_memes = std::max<std::size_t>(k, 30);
      const SynthOutput s = Generate(spec);
      const EgoContext ctx = ContextOf(s.corpus, s.ego);
      CoverSpec cover_spec;
      cover_spec.universe = ctx.received;
      cover_spec.excluded = {s.ego};
      const CoverResult link = GreedyMinCover(s.corpus, cover_spec);
      const double e = LinkEfficiency(s.corpus, ctx, link);
      const std::string label = std::string(ArchetypeName(a)) + " k=" + std::to_string(k);
      v.Check(e == 1.0 / static_cast<double>(k), label + " E_link " + Fmt(e));
      if (a == Archetype::kSuperuserShadow) {
        v.Check(link.selected.size() == 1 &&
                    s.corpus.user_name(link.selected[0]) == std::to_string(k + 2),
                label + " did not select the superuser");
      }
    }
  }
  return v;
}

Verdict OracleEquivalence() {
  Verdict v;
  Rng rng(2024);
  std::size_t instances = 0, link_exact = 0, inflow_exact = 0;
  while (instances < 1000) {
    const Corpus corpus =
        testing::RandomInstance(rng, 1 + rng.Index(12), 1 + rng.Index(15)).Build();
    const CoverSpec spec = FullSpec(corpus);
    const auto pool = CandidatePool(corpus, spec);
    std::size_t d = 0;
    for (UserId u : pool) d = std::max(d, corpus.memes_of(u).size());
    const double h = testing::Harmonic(d);
    const double link = GreedyMinCover(corpus, spec).objective;
    const double inflow = GreedyWeightedCover(corpus, spec).objective;
    const double opt_link = BruteForceCover(corpus, spec, CoverObjective::kCardinality).objective;
    const double opt_inflow = BruteForceCover(corpus, spec, CoverObjective::kInflow).objective;
    v.Check(link <= h * opt_link + 1e-9, "link bound on instance " + std::to_string(instances));
    v.Check(inflow <= h * opt_inflow + 1e-9,
            "inflow bound on instance " + std::to_string(instances));
    link_exact += link == opt_link;
    inflow_exact += inflow == opt_inflow;
    ++instances;
  }
  v.Note(std::to_string(instances) + " instances");
  v.Note("exact optimum rate link " + Fmt(100.0 * link_exact / instances) + "%, inflow " +
         Fmt(100.0 * inflow_exact / instances) + "%");
  return v;
}

Verdict CoverageCompleteness() {
  Verdict v;
  auto corpora = RandomEgoCorpora(404, 200);
  for (auto& e : ArchetypeEgos()) corpora.push_back(std::move(e));
  for (const auto& [corpus, ego] : corpora) {
    const EgoContext ctx = ContextOf(corpus, ego);
    for (double p : {0.2, 0.5, 0.8, 1.0}) {
      CoverSpec spec;
      spec.universe = ctx.received;
      spec.excluded = {ego};
      spec.coverage = p;
      const std::size_t target = CoverTarget(ctx.received.size(), p);
      std::vector<CoverResult> covers = {GreedyMinCover(corpus, spec),
                                         GreedyWeightedCover(corpus, spec),
                                         JointCover(corpus, spec)};
      if (p == 1.0) covers.push_back(DelayOptimalCover(corpus, spec));
      for (const CoverResult& c : covers) {
        v.Check(c.covered.size() >= target, "p=" + Fmt(p) + " below target");
        if (p == 1.0) v.Check(c.covered == ctx.received, "p=1 cover misses memes");
      }
    }
  }
  return v;
}

Verdict ReductionIdentities() {
  Verdict v;
  Rng rng(505);
  for (int i = 0; i < 100; ++i) {
    const Corpus corpus =
        testing::RandomInstance(rng, 1 + rng.Index(12), 1 + rng.Index(15)).Build();
    CoverSpec spec = FullSpec(corpus);
    spec.alpha = 1.0;
    spec.beta = 0.0;
    v.Check(JointCover(corpus, spec).selected == GreedyWeightedCover(corpus, spec).selected,
            "alpha=1 beta=0 differs on instance " + std::to_string(i));
    spec.alpha = 0.0;
    v.Check(JointCover(corpus, spec).selected == GreedyMinCover(corpus, spec).selected,
            "alpha=0 beta=0 differs on instance " + std::to_string(i));
  }
  return v;
}

Verdict DelayOptimality() {
  Verdict v;
  Rng rng(606);
  for (int i = 0; i < 200; ++i) {
    DatasetBuilder b = testing::RandomInstance(rng, 2 + rng.Index(11), 1 + rng.Index(15));
    const Corpus plain = b.Build();
    const CoverResult delay = DelayOptimalCover(plain, FullSpec(plain));
    for (MemeIndex m : delay.covered) {
      Timestamp earliest = plain.window().end + 1;
      for (UserId u : delay.selected) {
        if (auto t = plain.FirstMentionBy(u, m)) earliest = std::min(earliest, *t);
      }
      v.Check(earliest == plain.first_mention(m), "nonzero delay on instance " +
                                                      std::to_string(i));
    }
    // An ego following every first mentioner, plus some other posters.
    for (UserId u : delay.selected) b.Follow("ego", plain.user_name(u));
    for (std::size_t c = 0; c < 12; ++c) {
      if (rng.Bernoulli(0.3)) b.Follow("ego", "c" + std::to_string(100 + c));
    }
    const Corpus corpus = b.Build();
    const EgoContext ctx = ContextOf(corpus, *corpus.FindUser("ego"));
    v.Check(DelayEfficiency(corpus, ctx) == 1.0, "E_delay below 1 on instance " +
                                                     std::to_string(i));
  }
  return v;
}

Verdict EgoNetworkProperties() {
  Verdict v;
  Rng rng(707);
  for (std::size_t k : {2, 3, 6, 9}) {
    testing::SmallGraph star = testing::RandomGraph(rng, k + 1, 0.0);
    testing::SmallGraph complete = testing::RandomGraph(rng, k + 1, 1.0);
    for (std::size_t i = 1; i <= k; ++i) star.adj[0][i] = true;
    for (const auto* g : {&star, &complete}) {
      const Corpus corpus = testing::GraphCorpus(*g);
      std::vector<UserId> ids;
      for (std::size_t i = 1; i <= k; ++i) ids.push_back(*corpus.FindUser(testing::Node(i)));
      const double lcc = LocalClusteringCoefficient(
          BuildEgoNetwork(corpus, *corpus.FindUser(testing::Node(0)), ids));
      v.Check(lcc == (g == &star ? 0.0 : 1.0), "star/complete LCC " + Fmt(lcc));
    }
  }
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 3 + rng.Index(8);
    const testing::SmallGraph g = testing::RandomGraph(rng, n, rng.Uniform());
    const Corpus corpus = testing::GraphCorpus(g);
    std::vector<std::size_t> members;
    std::vector<UserId> ids;
    for (std::size_t j = 1; j < n; ++j) {
      if (members.size() < 2 || rng.Bernoulli(0.7)) {
        members.push_back(j);
        ids.push_back(*corpus.FindUser(testing::Node(j)));
      }
    }
    const double lcc = LocalClusteringCoefficient(
        BuildEgoNetwork(corpus, *corpus.FindUser(testing::Node(0)), ids));
    v.Check(std::abs(lcc - testing::PairCountLcc(g, members)) <= 1e-12,
            "graph " + std::to_string(i) + " LCC " + Fmt(lcc));
  }
  for (int i = 0; i < 500; ++i) {
    std::vector<UserId> a, b;
    for (std::uint32_t u = 0; u < 12; ++u) {
      if (rng.Bernoulli(0.5)) a.push_back({u});
      if (rng.Bernoulli(0.5)) b.push_back({u});
    }
    if (a.empty()) continue;
    const double o = Overlap(a, b);
    v.Check(o >= 0.0 && o <= 1.0, "overlap out of range");
    v.Check(Overlap(a, a) == 1.0, "overlap(S, S) != 1");
    std::vector<UserId> disjoint;
    for (UserId u : a) disjoint.push_back({u.value + 100});
    v.Check(Overlap(a, disjoint) == 0.0, "disjoint overlap != 0");
  }
  return v;
}

Verdict PartialConsistency() {
  Verdict v;
  auto corpora = RandomEgoCorpora(808, 200);
  for (auto& e : ArchetypeEgos()) corpora.push_back(std::move(e));
  for (const auto& [corpus, ego] : corpora) {
    const EgoContext ctx = ContextOf(corpus, ego);
    CoverSpec spec;
    spec.universe = ctx.received;
    spec.excluded = {ego};
    // Full-coverage definitions: the whole meme-posting followee set.
    const CoverResult link = GreedyMinCover(corpus, spec);
    const CoverResult inflow = GreedyWeightedCover(corpus, spec);
    const double e_link = std::min(
        1.0, static_cast<double>(link.selected.size()) / static_cast<double>(ctx.followees.size()));
    const double e_inflow =
        std::min(1.0, static_cast<double>(Inflow(corpus, inflow.selected)) /
                          static_cast<double>(Inflow(corpus, ctx.followees)));
    const EfficiencyReport r = Evaluate(corpus, ctx, {1.0, 1.0, 0.5});
    v.Check(r.e_link == e_link, "E_link differs for ego " + corpus.user_name(ego));
    v.Check(r.e_inflow == e_inflow, "E_inflow differs for ego " + corpus.user_name(ego));
    v.Check(r.e_delay == DelayEfficiency(corpus, ctx), "E_delay differs");
    v.Check(r.num_followees == ctx.followees.size(), "filtered followees differ");
  }
  return v;
}

Verdict ClusteringReproduction() {
  Verdict v;
  SynthSpec spec;
  spec.seed = 7;
  spec.n_users = 400;
  spec.n_memes = 200;
  spec.ego_followee_count = 20;
  spec.triadic_bias = 0.8;
  const SynthOutput s = Generate(spec);
  const Corpus& corpus = s.corpus;
  double original = 0.0, link = 0.0, inflow = 0.0, delay = 0.0;
  std::size_t n_original = 0, n_link = 0, n_inflow = 0, n_delay = 0, egos = 0;
  auto lcc = [&](UserId ego, const std::vector<UserId>& members, double& sum, std::size_t& n) {
    const EgoNetwork net = BuildEgoNetwork(corpus, ego, members);
    if (net.members.size() < 2) return;
    sum += LocalClusteringCoefficient(net);
    ++n;
  };
  for (std::uint32_t u = 0; u < corpus.num_users(); ++u) {
    const UserId ego{u};
    EgoContext ctx;
    try {
      ctx = MakeEgoContext(corpus, ego, spec.kind, 20);
    } catch (const Error&) {
      continue;
    }
    ++egos;
    const EfficiencyReport r = Evaluate(corpus, ctx, {});
    lcc(ego, ctx.followees, original, n_original);
    lcc(ego, r.link_cover.selected, link, n_link);
    lcc(ego, r.inflow_cover.selected, inflow, n_inflow);
    lcc(ego, r.delay_cover->selected, delay, n_delay);
  }
  v.Check(egos >= 200, "only " + std::to_string(egos) + " egos");
  const double m_original = original / n_original;
  const double m_link = link / n_link;
  const double m_inflow = inflow / n_inflow;
  const double m_delay = delay / n_delay;
  v.Check(m_link < m_original, "link mean LCC not lower");
  v.Check(m_inflow < m_original, "inflow mean LCC not lower");
  v.Check(m_delay < m_original, "delay mean LCC not lower");
  v.Note(std::to_string(egos) + " egos");
  v.Note("mean LCC original " + Fmt(m_original) + ", link " + Fmt(m_link) + ", inflow " +
         Fmt(m_inflow) + ", delay " + Fmt(m_delay));
  return v;
}

Verdict CliDeterminism() {
  Verdict v;
  const fs::path root = testing::TempDir("acceptance_determinism");
  const Window w = SynthSpec{}.window();
  for (const char* run : {"a", "b"}) {
    const fs::path dir = root / run;
    const std::vector<std::string> inputs = {
        "--posts", (root / "a" / "posts.tsv").string(), "--follows",
        (root / "a" / "follows.tsv").string(), "--window-start", std::to_string(w.start),
        "--window-end", std::to_string(w.end), "--min-followees", "3"};
    const std::vector<std::vector<std::string>> commands = {
        {"synth", "--n-users", "150", "--followees", "8", "--triadic-bias", "0.5", "--seed",
         "11"},
        {"ingest"},
        {"efficiency", "--coverage", "0.2", "--coverage", "0.5", "--coverage", "0.8",
         "--coverage", "1.0"},
        {"cover", "--sample-n", "50", "--seed", "5"},
        {"optimize"},
        {"egonet"}};
    for (const auto& cmd : commands) {
      std::vector<std::string> args = cmd;
      if (cmd[0] != "synth") args.insert(args.begin() + 1, inputs.begin(), inputs.end());
      args.insert(args.end(), {"--out", dir.string(), "--no-header-timestamp", "--format",
                               "jsonl"});
      std::ostringstream out, err;
      const int code = cli::Run(args, out, err);
      v.Check(code == cli::kExitOk, cmd[0] + " exited " + std::to_string(code));
      if (cmd[0] == "synth" && std::string(run) == "b") {
        v.Check(testing::ReadFile(root / "a" / "posts.tsv") ==
                    testing::ReadFile(root / "b" / "posts.tsv"),
                "synth posts differ");
      }
    }
  }
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(root / "a")) {
    const fs::path other = root / "b" / entry.path().filename();
    v.Check(fs::exists(other) &&
                testing::ReadFile(entry.path()) == testing::ReadFile(other),
            entry.path().filename().string() + " differs");
    ++files;
  }
  v.Note(std::to_string(files) + " files compared");
  return v;
}

struct Criterion {
  const char* name;
  double limit_seconds;
  std::function<Verdict()> run;
};

}  // namespace
}  // namespace memecover

int main() {
  using namespace memecover;
  const Criterion criteria[] = {
      {"1 worked-example goldens", 1.0, WorkedExampleGoldens},
      {"2 archetype goldens", 1.0, ArchetypeGoldens},
      {"3 oracle equivalence", 60.0, OracleEquivalence},
      {"4 coverage completeness", 0.0, CoverageCompleteness},
      {"5 reduction identities", 0.0, ReductionIdentities},
      {"6 delay-optimal property", 0.0, DelayOptimality},
      {"7 ego-network properties", 0.0, EgoNetworkProperties},
      {"8 partial-coverage consistency", 0.0, PartialConsistency},
      {"9 optimized ego-networks cluster less", 120.0, ClusteringReproduction},
      {"10 cli determinism", 0.0, CliDeterminism},
  };
  bool all = true;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.Check(false, std::string("threw: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0.0) {
      v.Check(seconds < c.limit_seconds, "over the " + Fmt(c.limit_seconds) + " s limit");
    }
    all = all && v.passed();
    std::cout << (v.passed() ? "PASS" : "FAIL") << "  criterion " << c.name << " ("
              << Fmt(seconds) << " s): " << v.Detail() << '\n';
  }
  return all ? 0 : 1;
}
