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

// Reading posts and follow edges into a Corpus, meme extraction from post
// text, and the per-ego timeline reconstruction.

#ifndef MEMECOVER_INGEST_HPP_
#define MEMECOVER_INGEST_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "memecover/model.hpp"

namespace memecover {

enum class PostsFormat {
  kText,       // user_id \t unix_seconds \t text
  kExtracted,  // user_id \t unix_seconds \t meme_kind \t meme_key
};

struct IngestConfig {
  Window window;
  std::size_t min_followees = 20;
  bool require_pre_window_activity = true;
  std::vector<MemeKind> meme_kinds{std::begin(kAllMemeKinds),
                                   std::end(kAllMemeKinds)};
  std::optional<std::filesystem::path> news_domain_list;
  std::optional<std::filesystem::path> url_alias_map;
  PostsFormat posts_format = PostsFormat::kText;

  bool KindEnabled(MemeKind kind) const;
  // Throws kInvalidConfig.
  void Validate() const;
};

using NewsDomains = std::set<std::string, std::less<>>;
using UrlAliases = std::map<std::string, std::string, std::less<>>;

// Strips the scheme and trailing punctuation and lower-cases the host.
// Idempotent.
std::string NormalizeUrl(std::string_view url);

// Memes carried by one post, in order of appearance, without duplicates.
std::vector<MemeId> ExtractMemes(std::string_view raw_text,
                                 const IngestConfig& config,
                                 const NewsDomains& news_domains,
                                 const UrlAliases& url_aliases);

NewsDomains LoadNewsDomains(const std::filesystem::path& path);
UrlAliases LoadUrlAliases(const std::filesystem::path& path);

// Throws kMalformedRecord (message names file and line) or kEmptyCorpus.
Corpus LoadCorpus(const std::filesystem::path& posts_path,
                  const std::filesystem::path& follows_path,
                  const IngestConfig& config);

// Followees of `ego` restricted to those posting at least one meme of
// `kind`, the memes they deliver, and the earliest receipt of each.
// Throws kTooFewFollowees when fewer than max(1, min_followees) remain.
EgoContext MakeEgoContext(const Corpus& corpus, UserId ego, MemeKind kind,
                          std::size_t min_followees);

// Unix seconds, or ISO-8601 `YYYY-MM-DD[THH:MM[:SS]][Z|+HH:MM|-HH:MM]`.
std::optional<Timestamp> ParseTimestamp(std::string_view text);
std::string FormatTimestamp(Timestamp t);

}  // namespace memecover

#endif  // MEMECOVER_INGEST_HPP_
