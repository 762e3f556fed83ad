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

#include "memecover/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>

#include "memecover/error.hpp"

namespace memecover {

namespace {

char AsciiLower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string Lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), AsciiLower);
  return out;
}

bool StartsWithNoCase(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (AsciiLower(s[i]) != prefix[i]) return false;
  }
  return true;
}

// Hashtag body characters. Non-ASCII bytes are accepted so UTF-8 letters
// stay inside the tag.
bool IsTagChar(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_';
}

bool IsTrailingPunct(char c) {
  switch (c) {
    case '.': case ',': case ';': case ':': case '!': case '?':
    case ')': case ']': case '}': case '\'': case '"': case '>':
      return true;
    default:
      return false;
  }
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r' || s.front() == '\n')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r' || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitTabs(std::string_view line,
                                        std::size_t max_fields) {
  std::vector<std::string_view> fields;
  while (fields.size() + 1 < max_fields) {
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) break;
    fields.push_back(line.substr(0, tab));
    line.remove_prefix(tab + 1);
  }
  fields.push_back(line);
  return fields;
}

struct UrlParts {
  std::string_view host;  // without port
  std::string_view path;  // from the first '/', before '?' or '#'
  std::string_view query; // after '?', before '#'
};

UrlParts SplitUrl(std::string_view url) {
  UrlParts parts;
  const auto host_end = url.find_first_of("/?#");
  std::string_view host = url.substr(0, host_end);
  if (const auto colon = host.find(':'); colon != std::string_view::npos) {
    host = host.substr(0, colon);
  }
  parts.host = host;
  if (host_end == std::string_view::npos) return parts;
  std::string_view rest = url.substr(host_end);
  const auto frag = rest.find('#');
  rest = rest.substr(0, frag);
  const auto q = rest.find('?');
  parts.path = rest.substr(0, q);
  if (q != std::string_view::npos) parts.query = rest.substr(q + 1);
  return parts;
}

std::optional<std::string> YoutubeVideoId(std::string_view url) {
  const UrlParts parts = SplitUrl(url);
  if (parts.host != "www.youtube.com" || parts.path != "/watch") {
    return std::nullopt;
  }
  std::string_view query = parts.query;
  while (!query.empty()) {
    const auto amp = query.find('&');
    const std::string_view param = query.substr(0, amp);
    if (param.starts_with("v=") && param.size() > 2) {
      return std::string(param.substr(2));
    }
    if (amp == std::string_view::npos) break;
    query.remove_prefix(amp + 1);
  }
  return std::nullopt;
}

std::optional<std::string> MatchNewsDomain(std::string_view url,
                                           const NewsDomains& news_domains) {
  std::string_view host = SplitUrl(url).host;
  while (!host.empty()) {
    if (auto it = news_domains.find(host); it != news_domains.end()) {
      return *it;
    }
    const auto dot = host.find('.');
    if (dot == std::string_view::npos) break;
    host.remove_prefix(dot + 1);
  }
  return std::nullopt;
}

void Emit(std::vector<MemeId>& out, const IngestConfig& config, MemeKind kind,
          std::string key) {
  if (key.empty() || !config.KindEnabled(kind)) return;
  MemeId meme{kind, std::move(key)};
  if (std::find(out.begin(), out.end(), meme) == out.end()) {
    out.push_back(std::move(meme));
  }
}

bool LooksLikeUrl(std::string_view token) {
  return StartsWithNoCase(token, "http://") ||
         StartsWithNoCase(token, "https://") ||
         StartsWithNoCase(token, "www.");
}

std::optional<std::int64_t> ParseInt(std::string_view s) {
  std::int64_t value = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) return std::nullopt;
  return value;
}

[[noreturn]] void Malformed(const std::filesystem::path& path,
                            std::size_t line_no, std::string_view what) {
  throw Error(ErrorCode::kMalformedRecord,
              path.string() + ": line " + std::to_string(line_no) + ": " +
                  std::string(what));
}

template <typename Fn>
void ForEachLine(const std::filesystem::path& path, Fn fn) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    fn(std::string_view(line), line_no);
  }
}

// Key normalization for the pre-extracted format.
std::string NormalizeKey(MemeKind kind, std::string_view key) {
  key = Trim(key);
  switch (kind) {
    case MemeKind::kHashtag:
      if (key.starts_with('#')) key.remove_prefix(1);
      return Lower(key);
    case MemeKind::kUrl:
      return NormalizeUrl(key);
    case MemeKind::kNewsDomain:
      return Lower(key);
    case MemeKind::kYoutubeVideo:
      return std::string(key);
  }
  return std::string(key);
}

}  // namespace

bool IngestConfig::KindEnabled(MemeKind kind) const {
  return std::find(meme_kinds.begin(), meme_kinds.end(), kind) !=
         meme_kinds.end();
}

void IngestConfig::Validate() const {
  if (!(window.start < window.end)) {
    throw Error(ErrorCode::kInvalidConfig, "window start must precede end");
  }
}

std::string NormalizeUrl(std::string_view url) {
  url = Trim(url);
  for (std::string_view scheme : {"http://", "https://"}) {
    if (StartsWithNoCase(url, scheme)) {
      url.remove_prefix(scheme.size());
      break;
    }
  }
  for (;;) {
    const std::size_t before = url.size();
    while (!url.empty() && IsTrailingPunct(url.back())) url.remove_suffix(1);
    const auto slash = url.find('/');
    if (slash != std::string_view::npos && slash + 1 == url.size()) {
      url.remove_suffix(1);
    }
    if (url.size() == before) break;
  }
  std::string out(url);
  const auto host_end = out.find_first_of("/?#");
  std::transform(out.begin(),
                 host_end == std::string::npos ? out.end()
                                               : out.begin() + host_end,
                 out.begin(), AsciiLower);
  return out;
}

std::vector<MemeId> ExtractMemes(std::string_view raw_text,
                                 const IngestConfig& config,
                                 const NewsDomains& news_domains,
                                 const UrlAliases& url_aliases) {
  std::vector<MemeId> out;
  std::string_view text = raw_text;
  while (!text.empty()) {
    const auto start = text.find_first_not_of(" \t\r\n");
    if (start == std::string_view::npos) break;
    text.remove_prefix(start);
    const auto end = text.find_first_of(" \t\r\n");
    const std::string_view token = text.substr(0, end);
    text.remove_prefix(token.size());

    if (LooksLikeUrl(token)) {
      std::string url = NormalizeUrl(token);
      if (url.empty()) continue;
      if (auto it = url_aliases.find(url); it != url_aliases.end()) {
        url = NormalizeUrl(it->second);
      }
      std::optional<std::string> video = YoutubeVideoId(url);
      std::optional<std::string> domain = MatchNewsDomain(url, news_domains);
      Emit(out, config, MemeKind::kUrl, std::move(url));
      if (video) Emit(out, config, MemeKind::kYoutubeVideo, std::move(*video));
      if (domain) Emit(out, config, MemeKind::kNewsDomain, std::move(*domain));
      continue;
    }

    for (std::size_t i = 0; i < token.size(); ++i) {
      if (token[i] != '#') continue;
      if (i > 0 && IsTagChar(token[i - 1])) continue;
      std::size_t j = i + 1;
      while (j < token.size() && IsTagChar(token[j])) ++j;
      if (j > i + 1) {
        Emit(out, config, MemeKind::kHashtag, Lower(token.substr(i + 1, j - i - 1)));
      }
      i = j - 1;
    }
  }
  return out;
}

NewsDomains LoadNewsDomains(const std::filesystem::path& path) {
  NewsDomains domains;
  ForEachLine(path, [&](std::string_view line, std::size_t) {
    std::string domain = Lower(Trim(line));
    if (domain.starts_with("www.")) domain.erase(0, 4);
    domains.insert(std::move(domain));
  });
  return domains;
}

UrlAliases LoadUrlAliases(const std::filesystem::path& path) {
  UrlAliases aliases;
  ForEachLine(path, [&](std::string_view line, std::size_t line_no) {
    const auto fields = SplitTabs(line, 3);
    if (fields.size() != 2 || Trim(fields[0]).empty() ||
        Trim(fields[1]).empty()) {
      Malformed(path, line_no, "expected short_url<TAB>resolved_url");
    }
    aliases[NormalizeUrl(fields[0])] = NormalizeUrl(fields[1]);
  });
  return aliases;
}

Corpus LoadCorpus(const std::filesystem::path& posts_path,
                  const std::filesystem::path& follows_path,
                  const IngestConfig& config) {
  config.Validate();
  NewsDomains news_domains;
  if (config.news_domain_list) news_domains = LoadNewsDomains(*config.news_domain_list);
  UrlAliases aliases;
  if (config.url_alias_map) aliases = LoadUrlAliases(*config.url_alias_map);

  CorpusBuilder builder;
  if (config.posts_format == PostsFormat::kText) {
    ForEachLine(posts_path, [&](std::string_view line, std::size_t line_no) {
      const auto fields = SplitTabs(line, 3);
      if (fields.size() != 3) {
        Malformed(posts_path, line_no, "expected user_id<TAB>unix_seconds<TAB>text");
      }
      const std::string_view user = Trim(fields[0]);
      const auto time = ParseInt(Trim(fields[1]));
      if (user.empty()) Malformed(posts_path, line_no, "empty user id");
      if (!time) Malformed(posts_path, line_no, "bad timestamp");
      const auto memes = ExtractMemes(fields[2], config, news_domains, aliases);
      builder.AddPost(user, *time, memes);
    });
  } else {
    // One line per (post, meme); lines sharing user and second form a post.
    std::map<std::pair<std::string, Timestamp>, std::vector<MemeId>> posts;
    ForEachLine(posts_path, [&](std::string_view line, std::size_t line_no) {
      const auto fields = SplitTabs(line, 5);
      if (fields.size() != 4) {
        Malformed(posts_path, line_no,
                  "expected user_id<TAB>unix_seconds<TAB>meme_kind<TAB>meme_key");
      }
      const std::string_view user = Trim(fields[0]);
      const auto time = ParseInt(Trim(fields[1]));
      if (user.empty()) Malformed(posts_path, line_no, "empty user id");
      if (!time) Malformed(posts_path, line_no, "bad timestamp");
      auto& memes = posts[{std::string(user), *time}];
      const std::string_view kind_name = Trim(fields[2]);
      if (kind_name == "none") return;
      const auto kind = ParseMemeKind(kind_name);
      if (!kind) Malformed(posts_path, line_no, "unknown meme kind");
      std::string key = NormalizeKey(*kind, fields[3]);
      if (key.empty()) Malformed(posts_path, line_no, "empty meme key");
      if (!config.KindEnabled(*kind)) return;
      MemeId meme{*kind, std::move(key)};
      if (std::find(memes.begin(), memes.end(), meme) == memes.end()) {
        memes.push_back(std::move(meme));
      }
    });
    for (const auto& [key, memes] : posts) {
      builder.AddPost(key.first, key.second, memes);
    }
  }

  ForEachLine(follows_path, [&](std::string_view line, std::size_t line_no) {
    const auto fields = SplitTabs(line, 3);
    if (fields.size() != 2 || Trim(fields[0]).empty() ||
        Trim(fields[1]).empty()) {
      Malformed(follows_path, line_no, "expected follower_id<TAB>followee_id");
    }
    builder.AddFollow(Trim(fields[0]), Trim(fields[1]));
  });
  return builder.Build(config.window, config.require_pre_window_activity);
}

EgoContext MakeEgoContext(const Corpus& corpus, UserId ego, MemeKind kind,
                          std::size_t min_followees) {
  if (ego.value >= corpus.num_users()) {
    throw Error(ErrorCode::kUnknownUser,
                "user id " + std::to_string(ego.value) + " not in corpus");
  }
  EgoContext ctx;
  ctx.ego = ego;
  ctx.kind = kind;
  std::map<MemeIndex, Timestamp> receipt;
  for (UserId v : corpus.followees(ego)) {
    bool posts_kind = false;
    for (const UserMeme& um : corpus.memes_of(v)) {
      if (corpus.meme(um.meme).kind != kind) continue;
      posts_kind = true;
      auto [it, inserted] = receipt.emplace(um.meme, um.first_time);
      if (!inserted) it->second = std::min(it->second, um.first_time);
    }
    if (posts_kind) ctx.followees.push_back(v);
  }
  if (ctx.followees.empty() || ctx.followees.size() < min_followees) {
    throw Error(ErrorCode::kTooFewFollowees,
                corpus.user_name(ego) + " has " +
                    std::to_string(ctx.followees.size()) + " followees posting " +
                    std::string(MemeKindName(kind)) + " (minimum " +
                    std::to_string(std::max<std::size_t>(1, min_followees)) +
                    ")");
  }
  ctx.received.reserve(receipt.size());
  ctx.receipt_time.reserve(receipt.size());
  for (const auto& [meme, t] : receipt) {
    ctx.received.push_back(meme);
    ctx.receipt_time.push_back(t);
  }
  return ctx;
}

std::optional<Timestamp> ParseTimestamp(std::string_view text) {
  text = Trim(text);
  if (auto seconds = ParseInt(text)) return *seconds;

  int year = 0;
  unsigned month = 0, day = 0, hour = 0, minute = 0, second = 0;
  auto take = [&](std::size_t n, auto& out) {
    if (text.size() < n) return false;
    const std::string_view part = text.substr(0, n);
    if (!std::all_of(part.begin(), part.end(),
                     [](char c) { return c >= '0' && c <= '9'; })) {
      return false;
    }
    std::from_chars(part.data(), part.data() + n, out);
    text.remove_prefix(n);
    return true;
  };
  auto expect = [&](char c) {
    if (text.empty() || text.front() != c) return false;
    text.remove_prefix(1);
    return true;
  };
  if (!take(4, year) || !expect('-') || !take(2, month) || !expect('-') ||
      !take(2, day)) {
    return std::nullopt;
  }
  if (!text.empty() && (text.front() == 'T' || text.front() == ' ')) {
    text.remove_prefix(1);
    if (!take(2, hour) || !expect(':') || !take(2, minute)) return std::nullopt;
    if (!text.empty() && text.front() == ':' ) {
      text.remove_prefix(1);
      if (!take(2, second)) return std::nullopt;
    }
  }
  std::int64_t offset = 0;
  if (!text.empty()) {
    if (text == "Z") {
      text.remove_prefix(1);
    } else if (text.front() == '+' || text.front() == '-') {
      const int sign = text.front() == '+' ? 1 : -1;
      text.remove_prefix(1);
      unsigned oh = 0, om = 0;
      if (!take(2, oh) || !expect(':') || !take(2, om)) return std::nullopt;
      offset = sign * static_cast<std::int64_t>(oh * 3600 + om * 60);
    }
  }
  if (!text.empty() || hour > 23 || minute > 59 || second > 60) {
    return std::nullopt;
  }
  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                           std::chrono::day{day}};
  if (!ymd.ok()) return std::nullopt;
  const std::int64_t days = sys_days{ymd}.time_since_epoch().count();
  return days * 86400 + hour * 3600 + minute * 60 + second - offset;
}

std::string FormatTimestamp(Timestamp t) {
  using namespace std::chrono;
  const auto day_count = (t >= 0 ? t : t - 86399) / 86400;
  const sys_days day{days{day_count}};
  const year_month_day ymd{day};
  const auto secs = t - day_count * 86400;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()),
                static_cast<long long>(secs / 3600),
                static_cast<long long>(secs % 3600 / 60),
                static_cast<long long>(secs % 60));
  return buf;
}

}  // namespace memecover
