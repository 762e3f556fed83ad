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

// Core domain types: users, memes, the indexed corpus, and the per-ego and
// per-cover records that the analysis modules exchange.

#ifndef MEMECOVER_MODEL_HPP_
#define MEMECOVER_MODEL_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace memecover {

// Seconds since the Unix epoch.
using Timestamp = std::int64_t;
inline constexpr double kSecondsPerDay = 86400.0;

inline double SecondsToDays(Timestamp seconds) {
  return static_cast<double>(seconds) / kSecondsPerDay;
}

// Dense surrogate for a user. Surrogates follow the canonical order of the
// external identifiers, so comparing UserIds is the global tie-break order.
struct UserId {
  std::uint32_t value = 0;
  friend auto operator<=>(const UserId&, const UserId&) = default;
};

// Dense index of an interned meme inside one Corpus.
using MemeIndex = std::uint32_t;

enum class MemeKind : std::uint8_t {
  kHashtag,
  kUrl,
  kNewsDomain,
  kYoutubeVideo,
};

inline constexpr MemeKind kAllMemeKinds[] = {
    MemeKind::kHashtag, MemeKind::kUrl, MemeKind::kNewsDomain,
    MemeKind::kYoutubeVideo};

std::string_view MemeKindName(MemeKind kind);
std::optional<MemeKind> ParseMemeKind(std::string_view name);

struct MemeId {
  MemeKind kind = MemeKind::kHashtag;
  std::string key;
  friend auto operator<=>(const MemeId&, const MemeId&) = default;
};

std::string ToString(const MemeId& meme);

// Closed observation interval [start, end].
struct Window {
  Timestamp start = 0;
  Timestamp end = 0;

  bool Contains(Timestamp t) const { return start <= t && t <= end; }
  double Days() const { return SecondsToDays(end - start); }
  friend bool operator==(const Window&, const Window&) = default;
};

// One user posting one meme at one time.
struct PostEvent {
  UserId user;
  MemeIndex meme = 0;
  Timestamp time = 0;
  friend auto operator<=>(const PostEvent&, const PostEvent&) = default;
};

// A meme as seen from one poster: the poster's earliest mention of it.
struct UserMeme {
  MemeIndex meme = 0;
  Timestamp first_time = 0;
  friend bool operator==(const UserMeme&, const UserMeme&) = default;
};

// Immutable indexed view of the retained events and the follow graph.
class Corpus {
 public:
  // Canonical content. Indexes are derived from it on construction.
  struct Data {
    Window window;
    std::vector<std::string> user_names;   // indexed by UserId
    std::vector<MemeId> memes;             // indexed by MemeIndex, sorted
    std::vector<PostEvent> events;         // meme-bearing posts in window
    std::vector<std::uint64_t> post_count; // all posts in window, per user
    std::vector<std::pair<UserId, UserId>> follows;  // follower -> followee
  };

  Corpus() = default;
  explicit Corpus(Data data);

  const Data& data() const { return data_; }
  const Window& window() const { return data_.window; }
  double window_days() const { return data_.window.Days(); }

  std::size_t num_users() const { return data_.user_names.size(); }
  std::size_t num_memes() const { return data_.memes.size(); }
  std::size_t num_events() const { return data_.events.size(); }

  const std::string& user_name(UserId user) const {
    return data_.user_names[user.value];
  }
  std::optional<UserId> FindUser(std::string_view name) const;

  const MemeId& meme(MemeIndex index) const { return data_.memes[index]; }
  std::optional<MemeIndex> FindMeme(const MemeId& meme) const;

  // Events of one user, ordered by (time, meme).
  std::span<const PostEvent> posts_of(UserId user) const;
  // Unique memes of one user (the set I^v) with first mention times,
  // ordered by MemeIndex.
  std::span<const UserMeme> memes_of(UserId user) const;
  // Users who posted a meme, ascending.
  std::span<const UserId> posters_of(MemeIndex meme) const;
  // N^v: every post of the user inside the window.
  std::uint64_t post_count(UserId user) const {
    return data_.post_count[user.value];
  }
  // t_i^0: earliest mention of the meme across all users.
  Timestamp first_mention(MemeIndex meme) const {
    return first_mention_[meme];
  }
  std::span<const UserId> followees(UserId user) const;
  std::span<const UserId> followers(UserId user) const;
  bool Follows(UserId follower, UserId followee) const;

  // Earliest mention of `meme` by `user`, if the user ever posted it.
  std::optional<Timestamp> FirstMentionBy(UserId user, MemeIndex meme) const;

 private:
  Data data_;
  std::vector<std::size_t> post_offsets_;
  std::vector<std::size_t> user_meme_offsets_;
  std::vector<UserMeme> user_memes_;
  std::vector<std::size_t> poster_offsets_;
  std::vector<UserId> posters_;
  std::vector<Timestamp> first_mention_;
  std::vector<std::size_t> followee_offsets_;
  std::vector<UserId> followees_;
  std::vector<std::size_t> follower_offsets_;
  std::vector<UserId> followers_;
};

// 64-bit FNV-1a digest of a corpus' canonical content.
std::uint64_t Fingerprint(const Corpus& corpus);

// Orders external user identifiers: all-digit names compare numerically,
// everything else lexicographically, digits first.
bool UserNameLess(std::string_view a, std::string_view b);

// Accumulates raw posts and follow edges keyed by external identifiers and
// produces a canonical Corpus. The result does not depend on insertion order.
class CorpusBuilder {
 public:
  // One post. `memes` may be empty: the post still counts toward N^v.
  void AddPost(std::string_view user, Timestamp time,
               std::span<const MemeId> memes);
  void AddFollow(std::string_view follower, std::string_view followee);

  // Keeps posts inside `window`. When `require_pre_window_activity` is set,
  // users without a post before window.start are dropped everywhere,
  // including from follow edges.
  Corpus Build(const Window& window, bool require_pre_window_activity) const;

 private:
  struct RawPost {
    std::string user;
    Timestamp time = 0;
    std::vector<MemeId> memes;
  };
  std::vector<RawPost> posts_;
  std::vector<std::pair<std::string, std::string>> follows_;
};

// Per-poster quantities used by the weighted covers.
struct PosterProfile {
  UserId user;
  std::vector<MemeIndex> memes;  // I^v restricted to one meme kind
  std::uint64_t inflow = 0;      // N^v
  // T_v: mean over the user's memes of (own first mention - t_i^0), in days.
  std::optional<double> avg_delay_days;
};

PosterProfile MakePosterProfile(const Corpus& corpus, UserId user,
                                MemeKind kind);

// What one ego receives from its (kind-restricted) followees.
struct EgoContext {
  UserId ego;
  MemeKind kind = MemeKind::kHashtag;
  std::vector<UserId> followees;         // ascending
  std::vector<MemeIndex> received;       // I_u, ascending
  std::vector<Timestamp> receipt_time;   // t_i, parallel to `received`
};

struct CoverStep {
  UserId user;
  std::size_t newly_covered = 0;
  friend bool operator==(const CoverStep&, const CoverStep&) = default;
};

struct CoverResult {
  std::vector<UserId> selected;   // selection order
  std::vector<MemeIndex> covered; // ascending, subset of the universe
  double objective = 0.0;
  std::vector<CoverStep> per_step;
  // Mean delay in days of the covered memes via the selected users; set by
  // the joint cover.
  std::optional<double> average_delay_days;
};

// Sum of N^v over a user set.
std::uint64_t Inflow(const Corpus& corpus, std::span<const UserId> users);

}  // namespace memecover

#endif  // MEMECOVER_MODEL_HPP_
