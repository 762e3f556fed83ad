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

// Seeded synthetic corpora, including the textbook inefficiency archetypes:
//
//   redundant_followees  every followee posts the same memes
//   superuser_shadow     followees post disjoint memes and one user outside
//                        the followee set posts all of them
//   pareto_inflow        per-user post volume drawn from a discrete Pareto
//   random_bipartite     random posters and memes; optional triadic-closure
//                        bias in the follow graph

#ifndef MEMECOVER_SYNTH_HPP_
#define MEMECOVER_SYNTH_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "memecover/ingest.hpp"
#include "memecover/model.hpp"

namespace memecover {

enum class Archetype {
  kRandomBipartite,
  kRedundantFollowees,
  kSuperuserShadow,
  kParetoInflow,
};

std::string_view ArchetypeName(Archetype archetype);
std::optional<Archetype> ParseArchetype(std::string_view name);

struct SynthSpec {
  std::uint64_t seed = 1;
  std::size_t n_users = 200;
  std::size_t n_memes = 100;
  double window_days = 7.0;
  Archetype archetype = Archetype::kRandomBipartite;
  double pareto_exponent = 1.5;
  std::size_t ego_followee_count = 20;
  // Probability that a follow edge closes a triangle (follows a followee's
  // followee) instead of picking a uniform target.
  double triadic_bias = 0.0;
  MemeKind kind = MemeKind::kHashtag;
  Timestamp window_start = 1246406400;  // 2009-07-01T00:00:00Z

  Window window() const;
  // Throws kInvalidSpec.
  void Validate() const;
};

// The uncompiled input behind a synthetic corpus, as it would appear in the
// posts and follows files. Includes one pre-window post per user.
struct RawDataset {
  struct Post {
    std::string user;
    Timestamp time = 0;
    std::vector<MemeId> memes;
  };
  Window window;
  std::vector<Post> posts;
  std::vector<std::pair<std::string, std::string>> follows;
};

struct SynthOutput {
  Corpus corpus;
  UserId ego;
  RawDataset raw;
};

SynthOutput Generate(const SynthSpec& spec);

// Builds the corpus the way LoadCorpus would for this dataset.
Corpus BuildCorpus(const RawDataset& raw);

// Post text that ExtractMemes maps back onto `meme`.
std::string RenderMeme(const MemeId& meme);

// Writes the dataset in the ingest formats. With kText, a news-domain list is
// written next to the posts file when any news_domain meme occurs; the return
// value is its path.
std::optional<std::filesystem::path> WriteDataset(
    const RawDataset& raw, const std::filesystem::path& posts_path,
    const std::filesystem::path& follows_path, PostsFormat format);

}  // namespace memecover

#endif  // MEMECOVER_SYNTH_HPP_
