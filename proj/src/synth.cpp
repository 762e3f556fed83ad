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

#include "memecover/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "memecover/error.hpp"
#include "memecover/rng.hpp"

namespace memecover {

namespace {

constexpr std::size_t kMaxParetoPosts = 10000;

std::string UserName(std::size_t i) { return std::to_string(i + 1); }

MemeId MakeMeme(MemeKind kind, std::string_view prefix, std::size_t j) {
  const std::string tag = std::string(prefix) + std::to_string(j);
  switch (kind) {
    case MemeKind::kHashtag: return {kind, tag};
    case MemeKind::kUrl: return {kind, "example.org/" + tag};
    case MemeKind::kNewsDomain: return {kind, tag + ".news.example"};
    case MemeKind::kYoutubeVideo: return {kind, tag};
  }
  return {kind, tag};
}

class DatasetWriter {
 public:
  DatasetWriter(const SynthSpec& spec, Rng& rng) : spec_(spec), rng_(rng) {
    raw_.window = spec.window();
  }

  Timestamp RandomTime() {
    const auto span = static_cast<std::size_t>(raw_.window.end - raw_.window.start);
    return raw_.window.start + static_cast<Timestamp>(rng_.Index(span + 1));
  }

  void PreWindowPost(std::size_t user) {
    raw_.posts.push_back(
        {UserName(user),
         raw_.window.start - 3600 - static_cast<Timestamp>(rng_.Index(86400)),
         {}});
  }

  void MemePost(std::size_t user, MemeId meme, Timestamp time) {
    raw_.posts.push_back({UserName(user), time, {std::move(meme)}});
  }

  void PlainPosts(std::size_t user, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      raw_.posts.push_back({UserName(user), RandomTime(), {}});
    }
  }

  void Follow(std::size_t a, std::size_t b) {
    raw_.follows.emplace_back(UserName(a), UserName(b));
  }

  RawDataset Take() { return std::move(raw_); }

 private:
  const SynthSpec& spec_;
  Rng& rng_;
  RawDataset raw_;
};

// Every user follows min(k, n - 1) others. With bias > 0 a quarter of the
// edges are seeded uniformly and the rest close triangles with probability
// `bias`.
std::vector<std::vector<std::size_t>> FollowGraph(std::size_t n, std::size_t k,
                                                  double bias, Rng& rng) {
  const std::size_t degree = std::min(k, n - 1);
  std::vector<std::vector<std::size_t>> out(n);
  auto has = [&](std::size_t u, std::size_t v) {
    return std::find(out[u].begin(), out[u].end(), v) != out[u].end();
  };
  auto add_uniform = [&](std::size_t u) {
    for (;;) {
      const std::size_t v = rng.Index(n);
      if (v != u && !has(u, v)) {
        out[u].push_back(v);
        return;
      }
    }
  };
  const std::size_t seeds =
      bias > 0.0 ? std::max<std::size_t>(1, degree / 4) : degree;
  for (std::size_t u = 0; u < n; ++u) {
    while (out[u].size() < std::min(seeds, degree)) add_uniform(u);
  }
  for (std::size_t u = 0; u < n; ++u) {
    while (out[u].size() < degree) {
      bool closed = false;
      if (rng.Bernoulli(bias)) {
        for (int attempt = 0; attempt < 8 && !closed; ++attempt) {
          const std::size_t w = out[u][rng.Index(out[u].size())];
          if (out[w].empty()) continue;
          const std::size_t x = out[w][rng.Index(out[w].size())];
          if (x != u && !has(u, x)) {
            out[u].push_back(x);
            closed = true;
          }
        }
      }
      if (!closed) add_uniform(u);
    }
  }
  return out;
}

RawDataset GenerateRandom(const SynthSpec& spec, Rng& rng) {
  DatasetWriter w(spec, rng);
  const std::size_t n = spec.n_users;
  for (std::size_t u = 0; u < n; ++u) {
    w.PreWindowPost(u);
    const bool hub = rng.Bernoulli(0.05);
    const std::size_t meme_posts = hub ? 10 + rng.Index(30) : 1 + rng.Index(6);
    for (std::size_t p = 0; p < meme_posts; ++p) {
      // Popularity skewed toward low meme numbers.
      const double x = rng.Uniform();
      const auto j = static_cast<std::size_t>(static_cast<double>(spec.n_memes) * x * x);
      w.MemePost(u, MakeMeme(spec.kind, "m", j), w.RandomTime());
    }
    std::size_t plain = 0;
    if (spec.archetype == Archetype::kParetoInflow) {
      const double draw = std::floor(std::pow(1.0 - rng.Uniform(), -1.0 / spec.pareto_exponent));
      plain = static_cast<std::size_t>(std::min<double>(draw, kMaxParetoPosts)) - 1;
    } else {
      plain = rng.Index(10);
    }
    w.PlainPosts(u, plain);
  }
  const auto graph = FollowGraph(n, spec.ego_followee_count, spec.triadic_bias, rng);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v : graph[u]) w.Follow(u, v);
  }
  return w.Take();
}

// Users past the archetype's cast post memes of their own so the corpus is
// not empty of background activity.
void BackgroundUsers(const SynthSpec& spec, DatasetWriter& w, Rng& rng,
                     std::size_t first) {
  for (std::size_t u = first; u < spec.n_users; ++u) {
    w.PreWindowPost(u);
    const std::size_t count = 1 + rng.Index(3);
    for (std::size_t p = 0; p < count; ++p) {
      w.MemePost(u, MakeMeme(spec.kind, "z", rng.Index(spec.n_memes)), w.RandomTime());
    }
    w.PlainPosts(u, rng.Index(5));
  }
}

RawDataset GenerateRedundant(const SynthSpec& spec, Rng& rng) {
  DatasetWriter w(spec, rng);
  const std::size_t k = spec.ego_followee_count;
  w.PreWindowPost(0);
  for (std::size_t f = 1; f <= k; ++f) {
    w.PreWindowPost(f);
    for (std::size_t j = 0; j < spec.n_memes; ++j) {
      w.MemePost(f, MakeMeme(spec.kind, "m", j), w.RandomTime());
    }
    w.PlainPosts(f, rng.Index(5));
    w.Follow(0, f);
  }
  BackgroundUsers(spec, w, rng, k + 1);
  return w.Take();
}

RawDataset GenerateShadow(const SynthSpec& spec, Rng& rng) {
  DatasetWriter w(spec, rng);
  const std::size_t k = spec.ego_followee_count;
  const std::size_t superuser = k + 1;
  w.PreWindowPost(0);
  w.PreWindowPost(superuser);
  for (std::size_t f = 1; f <= k; ++f) {
    w.PreWindowPost(f);
    w.Follow(0, f);
    w.PlainPosts(f, rng.Index(5));
  }
  // Round-robin partition of the memes over the followees.
  for (std::size_t j = 0; j < spec.n_memes; ++j) {
    const std::size_t f = 1 + j % k;
    w.MemePost(f, MakeMeme(spec.kind, "m", j), w.RandomTime());
    w.MemePost(superuser, MakeMeme(spec.kind, "m", j), w.RandomTime());
  }
  BackgroundUsers(spec, w, rng, k + 2);
  return w.Take();
}

}  // namespace

std::string_view ArchetypeName(Archetype archetype) {
  switch (archetype) {
    case Archetype::kRandomBipartite: return "random_bipartite";
    case Archetype::kRedundantFollowees: return "redundant_followees";
    case Archetype::kSuperuserShadow: return "superuser_shadow";
    case Archetype::kParetoInflow: return "pareto_inflow";
  }
  return "unknown";
}

std::optional<Archetype> ParseArchetype(std::string_view name) {
  for (Archetype a : {Archetype::kRandomBipartite, Archetype::kRedundantFollowees,
                      Archetype::kSuperuserShadow, Archetype::kParetoInflow}) {
    if (ArchetypeName(a) == name) return a;
  }
  return std::nullopt;
}

Window SynthSpec::window() const {
  return {window_start,
          window_start + static_cast<Timestamp>(std::llround(window_days * kSecondsPerDay))};
}

void SynthSpec::Validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidSpec, what);
  };
  if (n_users < 1 || n_memes < 1 || ego_followee_count < 1) {
    fail("counts must be at least 1");
  }
  if (!(window_days > 0.0)) fail("window_days must be positive");
  if (!(pareto_exponent > 0.0)) fail("pareto exponent must be positive");
  if (!(triadic_bias >= 0.0 && triadic_bias <= 1.0)) {
    fail("triadic_bias must lie in [0, 1]");
  }
  switch (archetype) {
    case Archetype::kRandomBipartite:
    case Archetype::kParetoInflow:
      if (n_users < 2) fail("need at least two users");
      break;
    case Archetype::kRedundantFollowees:
      if (n_users < ego_followee_count + 1) fail("n_users must be >= followees + 1");
      break;
    case Archetype::kSuperuserShadow:
      if (n_users < ego_followee_count + 2) fail("n_users must be >= followees + 2");
      if (n_memes < ego_followee_count) fail("n_memes must be >= followees");
      break;
  }
}

Corpus BuildCorpus(const RawDataset& raw) {
  CorpusBuilder builder;
  for (const auto& post : raw.posts) builder.AddPost(post.user, post.time, post.memes);
  for (const auto& [a, b] : raw.follows) builder.AddFollow(a, b);
  return builder.Build(raw.window, /*require_pre_window_activity=*/true);
}

SynthOutput Generate(const SynthSpec& spec) {
  spec.Validate();
  Rng rng(spec.seed);
  RawDataset raw;
  switch (spec.archetype) {
    case Archetype::kRandomBipartite:
    case Archetype::kParetoInflow:
      raw = GenerateRandom(spec, rng);
      break;
    case Archetype::kRedundantFollowees:
      raw = GenerateRedundant(spec, rng);
      break;
    case Archetype::kSuperuserShadow:
      raw = GenerateShadow(spec, rng);
      break;
  }
  Corpus corpus = BuildCorpus(raw);
  const UserId ego = *corpus.FindUser(UserName(0));
  return {std::move(corpus), ego, std::move(raw)};
}

std::string RenderMeme(const MemeId& meme) {
  switch (meme.kind) {
    case MemeKind::kHashtag: return "#" + meme.key;
    case MemeKind::kUrl: return "http://" + meme.key;
    case MemeKind::kNewsDomain: return "http://" + meme.key + "/story";
    case MemeKind::kYoutubeVideo: return "https://www.youtube.com/watch?v=" + meme.key;
  }
  return meme.key;
}

std::optional<std::filesystem::path> WriteDataset(
    const RawDataset& raw, const std::filesystem::path& posts_path,
    const std::filesystem::path& follows_path, PostsFormat format) {
  std::ofstream posts(posts_path);
  std::ofstream follows(follows_path);
  if (!posts || !follows) {
    throw Error(ErrorCode::kIo, "cannot write dataset files");
  }
  std::set<std::string> domains;
  for (const auto& post : raw.posts) {
    if (format == PostsFormat::kText) {
      posts << post.user << '\t' << post.time << '\t' << "post";
      for (const MemeId& m : post.memes) {
        posts << ' ' << RenderMeme(m);
        if (m.kind == MemeKind::kNewsDomain) domains.insert(m.key);
      }
      posts << '\n';
    } else if (post.memes.empty()) {
      posts << post.user << '\t' << post.time << "\tnone\t-\n";
    } else {
      for (const MemeId& m : post.memes) {
        posts << post.user << '\t' << post.time << '\t' << MemeKindName(m.kind)
              << '\t' << m.key << '\n';
      }
    }
  }
  for (const auto& [a, b] : raw.follows) follows << a << '\t' << b << '\n';
  if (domains.empty()) return std::nullopt;
  auto list_path = posts_path;
  list_path.replace_filename(posts_path.stem().string() + ".news_domains.txt");
  std::ofstream list(list_path);
  for (const auto& d : domains) list << d << '\n';
  return list_path;
}

}  // namespace memecover
