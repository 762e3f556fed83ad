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

#include "memecover/model.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "memecover/error.hpp"

namespace memecover {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedRecord: return "MalformedRecord";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kTooFewFollowees: return "TooFewFollowees";
    case ErrorCode::kUnknownUser: return "UnknownUser";
    case ErrorCode::kInfeasibleCover: return "InfeasibleCover";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kEmptyFollowees: return "EmptyFollowees";
    case ErrorCode::kZeroInflow: return "ZeroInflow";
    case ErrorCode::kNoMemes: return "NoMemes";
    case ErrorCode::kInvalidOriginal: return "InvalidOriginal";
    case ErrorCode::kEmptyMembers: return "EmptyMembers";
    case ErrorCode::kTooFewMembers: return "TooFewMembers";
    case ErrorCode::kEmptyOptimal: return "EmptyOptimal";
    case ErrorCode::kDegenerateVariance: return "DegenerateVariance";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kInvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

std::string_view MemeKindName(MemeKind kind) {
  switch (kind) {
    case MemeKind::kHashtag: return "hashtag";
    case MemeKind::kUrl: return "url";
    case MemeKind::kNewsDomain: return "news_domain";
    case MemeKind::kYoutubeVideo: return "youtube_video";
  }
  return "unknown";
}

std::optional<MemeKind> ParseMemeKind(std::string_view name) {
  for (MemeKind kind : kAllMemeKinds) {
    if (MemeKindName(kind) == name) return kind;
  }
  return std::nullopt;
}

std::string ToString(const MemeId& meme) {
  std::string out(MemeKindName(meme.kind));
  out += ':';
  out += meme.key;
  return out;
}

namespace {

template <typename T, typename KeyFn>
void BuildCsr(std::size_t num_rows, const std::vector<T>& items, KeyFn key,
              std::vector<std::size_t>& offsets) {
  offsets.assign(num_rows + 1, 0);
  for (const T& item : items) ++offsets[key(item) + 1];
  for (std::size_t i = 0; i < num_rows; ++i) offsets[i + 1] += offsets[i];
}

struct UserNameOrder {
  bool operator()(std::string_view a, std::string_view b) const {
    return UserNameLess(a, b);
  }
};

bool AllDigits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return c >= '0' && c <= '9';
  });
}

std::string_view StripLeadingZeros(std::string_view s) {
  while (s.size() > 1 && s.front() == '0') s.remove_prefix(1);
  return s;
}

}  // namespace

bool UserNameLess(std::string_view a, std::string_view b) {
  const bool a_num = AllDigits(a);
  const bool b_num = AllDigits(b);
  if (a_num != b_num) return a_num;
  if (a_num) {
    const std::string_view sa = StripLeadingZeros(a);
    const std::string_view sb = StripLeadingZeros(b);
    if (sa.size() != sb.size()) return sa.size() < sb.size();
    if (sa != sb) return sa < sb;
  }
  return a < b;
}

Corpus::Corpus(Data data) : data_(std::move(data)) {
  const std::size_t n_users = data_.user_names.size();
  const std::size_t n_memes = data_.memes.size();
  if (data_.post_count.size() != n_users) {
    throw Error(ErrorCode::kMalformedRecord,
                "post_count size does not match user table");
  }
  if (!std::is_sorted(data_.memes.begin(), data_.memes.end()) ||
      std::adjacent_find(data_.memes.begin(), data_.memes.end()) !=
          data_.memes.end()) {
    throw Error(ErrorCode::kMalformedRecord, "meme table is not canonical");
  }
  for (const PostEvent& e : data_.events) {
    if (e.user.value >= n_users || e.meme >= n_memes) {
      throw Error(ErrorCode::kMalformedRecord, "event references unknown id");
    }
  }
  for (const auto& [a, b] : data_.follows) {
    if (a.value >= n_users || b.value >= n_users) {
      throw Error(ErrorCode::kMalformedRecord,
                  "follow edge references unknown user");
    }
  }
  std::sort(data_.events.begin(), data_.events.end(),
            [](const PostEvent& x, const PostEvent& y) {
              return std::tie(x.user, x.time, x.meme) <
                     std::tie(y.user, y.time, y.meme);
            });
  std::sort(data_.follows.begin(), data_.follows.end());
  data_.follows.erase(std::unique(data_.follows.begin(), data_.follows.end()),
                      data_.follows.end());
  std::erase_if(data_.follows, [](const auto& e) { return e.first == e.second; });

  BuildCsr(n_users, data_.events,
           [](const PostEvent& e) { return e.user.value; }, post_offsets_);

  // Unique memes per user with the user's first mention.
  user_meme_offsets_.assign(n_users + 1, 0);
  user_memes_.clear();
  for (std::size_t u = 0; u < n_users; ++u) {
    std::map<MemeIndex, Timestamp> first;
    for (std::size_t k = post_offsets_[u]; k < post_offsets_[u + 1]; ++k) {
      const PostEvent& e = data_.events[k];
      auto [it, inserted] = first.emplace(e.meme, e.time);
      if (!inserted) it->second = std::min(it->second, e.time);
    }
    for (const auto& [meme, t] : first) user_memes_.push_back({meme, t});
    user_meme_offsets_[u + 1] = user_memes_.size();
  }

  first_mention_.assign(n_memes, 0);
  std::vector<bool> seen(n_memes, false);
  std::vector<std::pair<MemeIndex, UserId>> meme_user;
  meme_user.reserve(user_memes_.size());
  for (std::size_t u = 0; u < n_users; ++u) {
    for (std::size_t k = user_meme_offsets_[u]; k < user_meme_offsets_[u + 1];
         ++k) {
      const UserMeme& um = user_memes_[k];
      meme_user.emplace_back(um.meme, UserId{static_cast<std::uint32_t>(u)});
      if (!seen[um.meme] || um.first_time < first_mention_[um.meme]) {
        first_mention_[um.meme] = um.first_time;
        seen[um.meme] = true;
      }
    }
  }
  std::sort(meme_user.begin(), meme_user.end());
  BuildCsr(n_memes, meme_user, [](const auto& p) { return p.first; },
           poster_offsets_);
  posters_.clear();
  for (const auto& p : meme_user) posters_.push_back(p.second);

  BuildCsr(n_users, data_.follows, [](const auto& e) { return e.first.value; },
           followee_offsets_);
  followees_.clear();
  for (const auto& e : data_.follows) followees_.push_back(e.second);

  auto reversed = data_.follows;
  for (auto& e : reversed) std::swap(e.first, e.second);
  std::sort(reversed.begin(), reversed.end());
  BuildCsr(n_users, reversed, [](const auto& e) { return e.first.value; },
           follower_offsets_);
  followers_.clear();
  for (const auto& e : reversed) followers_.push_back(e.second);
}

std::optional<UserId> Corpus::FindUser(std::string_view name) const {
  const auto& names = data_.user_names;
  auto it = std::lower_bound(names.begin(), names.end(), name,
                             [](const std::string& a, std::string_view b) {
                               return UserNameLess(a, b);
                             });
  if (it == names.end() || *it != name) {
    // Names are canonical-sorted when built by CorpusBuilder; fall back to a
    // scan for hand-assembled data.
    it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
  }
  return UserId{static_cast<std::uint32_t>(it - names.begin())};
}

std::optional<MemeIndex> Corpus::FindMeme(const MemeId& meme) const {
  auto it = std::lower_bound(data_.memes.begin(), data_.memes.end(), meme);
  if (it == data_.memes.end() || *it != meme) return std::nullopt;
  return static_cast<MemeIndex>(it - data_.memes.begin());
}

std::span<const PostEvent> Corpus::posts_of(UserId user) const {
  return std::span<const PostEvent>(data_.events)
      .subspan(post_offsets_[user.value],
               post_offsets_[user.value + 1] - post_offsets_[user.value]);
}

std::span<const UserMeme> Corpus::memes_of(UserId user) const {
  return std::span<const UserMeme>(user_memes_)
      .subspan(user_meme_offsets_[user.value],
               user_meme_offsets_[user.value + 1] -
                   user_meme_offsets_[user.value]);
}

std::span<const UserId> Corpus::posters_of(MemeIndex meme) const {
  return std::span<const UserId>(posters_).subspan(
      poster_offsets_[meme], poster_offsets_[meme + 1] - poster_offsets_[meme]);
}

std::span<const UserId> Corpus::followees(UserId user) const {
  return std::span<const UserId>(followees_)
      .subspan(followee_offsets_[user.value],
               followee_offsets_[user.value + 1] -
                   followee_offsets_[user.value]);
}

std::span<const UserId> Corpus::followers(UserId user) const {
  return std::span<const UserId>(followers_)
      .subspan(follower_offsets_[user.value],
               follower_offsets_[user.value + 1] -
                   follower_offsets_[user.value]);
}

bool Corpus::Follows(UserId follower, UserId followee) const {
  const auto out = followees(follower);
  return std::binary_search(out.begin(), out.end(), followee);
}

std::optional<Timestamp> Corpus::FirstMentionBy(UserId user,
                                                MemeIndex meme) const {
  const auto memes = memes_of(user);
  auto it = std::lower_bound(
      memes.begin(), memes.end(), meme,
      [](const UserMeme& um, MemeIndex m) { return um.meme < m; });
  if (it == memes.end() || it->meme != meme) return std::nullopt;
  return it->first_time;
}

namespace {

class Fnv1a {
 public:
  void Add(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      hash_ ^= p[i];
      hash_ *= 1099511628211ULL;
    }
  }
  void Add(std::uint64_t v) {
    unsigned char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(v >> (8 * i));
    Add(bytes, 8);
  }
  void Add(std::string_view s) {
    Add(s.size());
    Add(s.data(), s.size());
  }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 14695981039346656037ULL;
};

}  // namespace

std::uint64_t Fingerprint(const Corpus& corpus) {
  const Corpus::Data& d = corpus.data();
  Fnv1a h;
  h.Add(static_cast<std::uint64_t>(d.window.start));
  h.Add(static_cast<std::uint64_t>(d.window.end));
  h.Add(d.user_names.size());
  for (const auto& name : d.user_names) h.Add(name);
  h.Add(d.memes.size());
  for (const auto& m : d.memes) {
    h.Add(static_cast<std::uint64_t>(m.kind));
    h.Add(m.key);
  }
  h.Add(d.events.size());
  for (const auto& e : d.events) {
    h.Add(e.user.value);
    h.Add(e.meme);
    h.Add(static_cast<std::uint64_t>(e.time));
  }
  for (auto c : d.post_count) h.Add(c);
  h.Add(d.follows.size());
  for (const auto& [a, b] : d.follows) {
    h.Add(a.value);
    h.Add(b.value);
  }
  return h.value();
}

void CorpusBuilder::AddPost(std::string_view user, Timestamp time,
                            std::span<const MemeId> memes) {
  posts_.push_back({std::string(user), time, {memes.begin(), memes.end()}});
}

void CorpusBuilder::AddFollow(std::string_view follower,
                              std::string_view followee) {
  follows_.emplace_back(std::string(follower), std::string(followee));
}

Corpus CorpusBuilder::Build(const Window& window,
                            bool require_pre_window_activity) const {
  if (!(window.start < window.end)) {
    throw Error(ErrorCode::kInvalidConfig, "window start must precede end");
  }
  std::unordered_set<std::string_view> active;
  if (require_pre_window_activity) {
    for (const RawPost& p : posts_) {
      if (p.time < window.start) active.insert(p.user);
    }
  }
  auto keep = [&](std::string_view user) {
    return !require_pre_window_activity || active.contains(user);
  };

  std::set<std::string_view, UserNameOrder> names;
  std::set<MemeId> memes;
  std::size_t in_window = 0;
  for (const RawPost& p : posts_) {
    if (!keep(p.user)) continue;
    names.insert(p.user);
    if (window.Contains(p.time)) {
      ++in_window;
      memes.insert(p.memes.begin(), p.memes.end());
    }
  }
  for (const auto& [a, b] : follows_) {
    if (keep(a) && keep(b)) {
      names.insert(a);
      names.insert(b);
    }
  }
  if (in_window == 0) {
    throw Error(ErrorCode::kEmptyCorpus, "empty corpus: no posts survive filtering");
  }

  Corpus::Data data;
  data.window = window;
  data.user_names.assign(names.begin(), names.end());
  data.memes.assign(memes.begin(), memes.end());
  data.post_count.assign(data.user_names.size(), 0);

  std::unordered_map<std::string_view, UserId> user_ids;
  for (std::size_t i = 0; i < data.user_names.size(); ++i) {
    user_ids.emplace(data.user_names[i], UserId{static_cast<std::uint32_t>(i)});
  }
  auto meme_index = [&](const MemeId& m) {
    return static_cast<MemeIndex>(
        std::lower_bound(data.memes.begin(), data.memes.end(), m) -
        data.memes.begin());
  };
  for (const RawPost& p : posts_) {
    if (!keep(p.user) || !window.Contains(p.time)) continue;
    const UserId uid = user_ids.at(p.user);
    ++data.post_count[uid.value];
    std::vector<MemeId> unique(p.memes);
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
    for (const MemeId& m : unique) {
      data.events.push_back({uid, meme_index(m), p.time});
    }
  }
  for (const auto& [a, b] : follows_) {
    if (keep(a) && keep(b)) {
      data.follows.emplace_back(user_ids.at(a), user_ids.at(b));
    }
  }
  return Corpus(std::move(data));
}

PosterProfile MakePosterProfile(const Corpus& corpus, UserId user,
                                MemeKind kind) {
  PosterProfile profile;
  profile.user = user;
  profile.inflow = corpus.post_count(user);
  double total_delay = 0.0;
  for (const UserMeme& um : corpus.memes_of(user)) {
    if (corpus.meme(um.meme).kind != kind) continue;
    profile.memes.push_back(um.meme);
    total_delay += SecondsToDays(um.first_time - corpus.first_mention(um.meme));
  }
  if (!profile.memes.empty()) {
    profile.avg_delay_days =
        total_delay / static_cast<double>(profile.memes.size());
  }
  return profile;
}

std::uint64_t Inflow(const Corpus& corpus, std::span<const UserId> users) {
  std::uint64_t total = 0;
  for (UserId u : users) total += corpus.post_count(u);
  return total;
}

}  // namespace memecover
