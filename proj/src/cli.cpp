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

#include "memecover/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <variant>

#include "CLI11.hpp"
#include "json.hpp"
#include "memecover/cover.hpp"
#include "memecover/efficiency.hpp"
#include "memecover/egonet.hpp"
#include "memecover/ingest.hpp"
#include "memecover/rng.hpp"
#include "memecover/synth.hpp"

namespace memecover::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::string command;
  std::string posts;
  std::string follows;
  std::string corpus_cache;
  std::string cache_out;
  std::string window_start;
  std::string window_end;
  std::string meme_kind = "hashtag";
  std::string posts_format = "text";
  std::string news_domains;
  std::string url_aliases;
  bool no_activity_filter = false;
  std::vector<double> coverage;
  double alpha = 1.0;
  double beta = 0.5;
  std::size_t min_followees = 20;
  std::size_t sample_n = 0;
  std::vector<std::string> egos;
  std::uint64_t seed = 1;
  std::string out = ".";
  std::string format = "tsv";
  bool no_header_timestamp = false;
  unsigned threads = 0;

  // synth
  std::string archetype = "random_bipartite";
  std::size_t n_users = 200;
  std::size_t n_memes = 100;
  double window_days = 7.0;
  std::size_t followees = 20;
  double pareto_exponent = 1.5;
  double triadic_bias = 0.0;
};

// ---------------------------------------------------------------------------
// Report tables.

using Cell = std::variant<std::monostate, std::string, std::int64_t, double>;

Cell Na() { return std::monostate{}; }
Cell Int(std::uint64_t v) { return static_cast<std::int64_t>(v); }
Cell Real(double v) { return v; }
Cell Text(std::string v) { return v; }
Cell Real(const std::optional<double>& v) { return v ? Cell(*v) : Na(); }

std::string FormatReal(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string CellText(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "NA";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else {
          return FormatReal(v);
        }
      },
      cell);
}

json CellJson(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else {
          return v;
        }
      },
      cell);
}

std::string NowIso() {
  const auto now = std::chrono::system_clock::now();
  return FormatTimestamp(
      std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch())
          .count());
}

class Table {
 public:
  Table(const Options& options, std::string name, std::vector<std::string> columns)
      : options_(options), name_(std::move(name)), columns_(std::move(columns)) {}

  void Add(std::vector<Cell> row) {
    if (row.size() != columns_.size()) {
      throw Error(ErrorCode::kInvariantViolation,
                  "row width mismatch in " + name_);
    }
    rows_.push_back(std::move(row));
  }

  std::size_t size() const { return rows_.size(); }

  // Writes <out>/<name>.tsv, and <out>/<name>.jsonl for --format jsonl.
  void Write() const {
    const fs::path dir(options_.out);
    std::string header = "# memecover " + options_.command +
                         " seed=" + std::to_string(options_.seed);
    if (!options_.no_header_timestamp) header += " generated=" + NowIso();

    std::ofstream tsv(dir / (name_ + ".tsv"));
    if (!tsv) throw Error(ErrorCode::kIo, "cannot write " + (dir / name_).string());
    tsv << header << '\n';
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      tsv << (i ? "\t" : "") << columns_[i];
    }
    tsv << '\n';
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        tsv << (i ? "\t" : "") << CellText(row[i]);
      }
      tsv << '\n';
    }

    if (options_.format != "jsonl") return;
    std::ofstream jl(dir / (name_ + ".jsonl"));
    json meta = {{"command", options_.command}, {"seed", options_.seed}};
    if (!options_.no_header_timestamp) meta["generated"] = NowIso();
    jl << json{{"meta", meta}}.dump() << '\n';
    for (const auto& row : rows_) {
      json obj = json::object();
      for (std::size_t i = 0; i < row.size(); ++i) obj[columns_[i]] = CellJson(row[i]);
      jl << obj.dump() << '\n';
    }
  }

 private:
  const Options& options_;
  std::string name_;
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

void AddHistogramRows(Table& table, std::vector<Cell> prefix,
                      std::span<const double> values) {
  const auto counts = HistogramCounts(values);
  for (std::size_t b = 0; b < counts.size(); ++b) {
    std::vector<Cell> row = prefix;
    row.push_back(Real(static_cast<double>(b) * kHistogramBinWidth));
    row.push_back(Real(static_cast<double>(b + 1) * kHistogramBinWidth));
    row.push_back(Int(counts[b]));
    table.Add(std::move(row));
  }
}

double Mean(std::span<const double> values) {
  double total = 0.0;
  for (double v : values) total += v;
  return values.empty() ? 0.0 : total / static_cast<double>(values.size());
}

std::string JoinNames(const Corpus& corpus, std::span<const UserId> users) {
  std::string out;
  for (UserId u : users) {
    if (!out.empty()) out += ',';
    out += corpus.user_name(u);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Inputs.

Window ParseWindow(const Options& o) {
  if (o.window_start.empty() || o.window_end.empty()) {
    throw Error(ErrorCode::kInvalidConfig,
                "--window-start and --window-end are required");
  }
  const auto start = ParseTimestamp(o.window_start);
  const auto end = ParseTimestamp(o.window_end);
  if (!start || !end) {
    throw Error(ErrorCode::kInvalidConfig, "window bounds must be ISO-8601 or unix seconds");
  }
  return {*start, *end};
}

MemeKind ParseKindOption(const std::string& name) {
  const auto kind = ParseMemeKind(name);
  if (!kind) throw Error(ErrorCode::kInvalidConfig, "unknown meme kind " + name);
  return *kind;
}

PostsFormat ParsePostsFormat(const std::string& name) {
  if (name == "text") return PostsFormat::kText;
  if (name == "extracted") return PostsFormat::kExtracted;
  throw Error(ErrorCode::kInvalidConfig, "unknown posts format " + name);
}

Corpus AcquireCorpus(const Options& o) {
  if (!o.corpus_cache.empty()) return LoadCorpusCache(o.corpus_cache);
  if (o.posts.empty() || o.follows.empty()) {
    throw Error(ErrorCode::kInvalidConfig,
                "--posts and --follows (or --corpus) are required");
  }
  IngestConfig config;
  config.window = ParseWindow(o);
  config.min_followees = o.min_followees;
  config.require_pre_window_activity = !o.no_activity_filter;
  config.posts_format = ParsePostsFormat(o.posts_format);
  if (!o.news_domains.empty()) config.news_domain_list = o.news_domains;
  if (!o.url_aliases.empty()) config.url_alias_map = o.url_aliases;
  return LoadCorpus(o.posts, o.follows, config);
}

std::vector<double> CoverageLevels(const Options& o) {
  std::vector<double> levels = o.coverage.empty() ? std::vector<double>{1.0} : o.coverage;
  for (double p : levels) {
    if (!(p > 0.0 && p <= 1.0)) {
      throw Error(ErrorCode::kInvalidConfig, "coverage levels must lie in (0, 1]");
    }
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  return levels;
}

std::vector<UserId> SelectEgos(const Corpus& corpus, const Options& o) {
  if (!o.egos.empty()) {
    std::vector<UserId> egos;
    for (const auto& name : o.egos) {
      const auto id = corpus.FindUser(name);
      if (!id) throw Error(ErrorCode::kUnknownUser, "unknown ego " + name);
      egos.push_back(*id);
    }
    std::sort(egos.begin(), egos.end());
    egos.erase(std::unique(egos.begin(), egos.end()), egos.end());
    return egos;
  }
  return SampleEgos(corpus, o.sample_n ? std::optional(o.sample_n) : std::nullopt,
                    o.seed);
}

// ---------------------------------------------------------------------------
// Per-ego worker pool. Results land in input order; library errors skip the
// ego, anything else aborts the run.

template <typename R>
struct EgoOutcome {
  UserId ego;
  std::optional<R> value;
  std::string skip_reason;
};

template <typename R>
std::vector<EgoOutcome<R>> ForEachEgo(const std::vector<UserId>& egos,
                                      unsigned threads,
                                      const std::function<R(UserId)>& fn) {
  std::vector<EgoOutcome<R>> outcomes(egos.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= egos.size()) return;
      outcomes[i].ego = egos[i];
      try {
        outcomes[i].value = fn(egos[i]);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kInvariantViolation) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
        } else {
          outcomes[i].skip_reason = e.what();
        }
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1U, threads ? threads : std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return outcomes;
}

template <typename R>
std::size_t ReportSkips(const Corpus& corpus, const Options& o,
                        const std::vector<EgoOutcome<R>>& outcomes,
                        std::ostream& err) {
  Table skipped(o, o.command + "_skipped", {"ego", "reason"});
  for (const auto& oc : outcomes) {
    if (oc.value) continue;
    err << "skip " << corpus.user_name(oc.ego) << ": " << oc.skip_reason << '\n';
    skipped.Add({Text(corpus.user_name(oc.ego)), Text(oc.skip_reason)});
  }
  skipped.Write();
  return skipped.size();
}

void Require(bool condition, const std::string& what) {
  if (!condition) throw Error(ErrorCode::kInvariantViolation, what);
}

void CheckCover(const CoverResult& cover, std::size_t universe, double p,
                const std::string& label) {
  Require(cover.covered.size() >= CoverTarget(universe, p),
          label + " cover misses its coverage target");
  for (const auto& step : cover.per_step) {
    Require(step.newly_covered > 0, label + " cover made a step with no progress");
  }
}

void PrintRunSummary(std::ostream& out, std::size_t sampled, std::size_t evaluated,
                     std::size_t skipped) {
  out << "sampled\t" << sampled << "\nevaluated\t" << evaluated << "\nskipped\t"
      << skipped << '\n';
}

// ---------------------------------------------------------------------------
// Subcommands.

int CmdIngest(const Options& o, std::ostream& out) {
  const Corpus corpus = AcquireCorpus(o);
  fs::create_directories(o.out);
  const fs::path cache =
      o.cache_out.empty() ? fs::path(o.out) / "corpus.cbor" : fs::path(o.cache_out);
  SaveCorpusCache(corpus, cache);

  std::uint64_t posts = 0;
  for (std::size_t u = 0; u < corpus.num_users(); ++u) {
    posts += corpus.post_count(UserId{static_cast<std::uint32_t>(u)});
  }
  std::map<MemeKind, std::size_t> per_kind;
  for (std::size_t m = 0; m < corpus.num_memes(); ++m) {
    ++per_kind[corpus.meme(static_cast<MemeIndex>(m)).kind];
  }
  Table summary(o, "ingest_summary", {"metric", "value"});
  summary.Add({Text("users"), Int(corpus.num_users())});
  summary.Add({Text("posts"), Int(posts)});
  summary.Add({Text("meme_events"), Int(corpus.num_events())});
  summary.Add({Text("follow_edges"), Int(corpus.data().follows.size())});
  for (MemeKind kind : kAllMemeKinds) {
    summary.Add({Text("memes." + std::string(MemeKindName(kind))), Int(per_kind[kind])});
  }
  summary.Add({Text("window_start"), Text(FormatTimestamp(corpus.window().start))});
  summary.Add({Text("window_end"), Text(FormatTimestamp(corpus.window().end))});
  summary.Write();

  out << "users\t" << corpus.num_users() << "\nposts\t" << posts << "\nmeme_events\t"
      << corpus.num_events() << "\nfollow_edges\t" << corpus.data().follows.size()
      << '\n';
  for (MemeKind kind : kAllMemeKinds) {
    out << "memes." << MemeKindName(kind) << '\t' << per_kind[kind] << '\n';
  }
  out << "cache\t" << cache.string() << '\n';
  return kExitOk;
}

struct EgoEvaluation {
  EgoContext ctx;
  std::vector<EfficiencyReport> reports;
};

EgoEvaluation EvaluateEgo(const Corpus& corpus, UserId ego, const Options& o,
                          MemeKind kind, std::span<const double> levels) {
  EgoEvaluation ev;
  ev.ctx = MakeEgoContext(corpus, ego, kind, o.min_followees);
  for (double p : levels) {
    EfficiencyReport r = Evaluate(corpus, ev.ctx, {p, o.alpha, o.beta});
    const std::size_t n = ev.ctx.received.size();
    CheckCover(r.link_cover, n, p, "link");
    CheckCover(r.inflow_cover, n, p, "inflow");
    if (r.joint_cover) CheckCover(*r.joint_cover, n, p, "joint");
    if (r.delay_cover) Require(r.delay_cover->covered.size() == n, "delay cover incomplete");
    Require(r.e_delay > 0.0 && r.e_delay <= 1.0, "delay efficiency out of (0, 1]");
    ev.reports.push_back(std::move(r));
  }
  return ev;
}

int CmdEfficiency(const Options& o, std::ostream& out, std::ostream& err) {
  const Corpus corpus = AcquireCorpus(o);
  const MemeKind kind = ParseKindOption(o.meme_kind);
  const auto levels = CoverageLevels(o);
  const auto egos = SelectEgos(corpus, o);
  fs::create_directories(o.out);

  const auto outcomes = ForEachEgo<EgoEvaluation>(egos, o.threads, [&](UserId ego) {
    return EvaluateEgo(corpus, ego, o, kind, levels);
  });

  Table rows(o, "efficiency",
             {"ego", "meme_kind", "coverage", "followees", "memes", "covered",
              "link_size", "inflow_size", "inflow_followees", "inflow_optimal",
              "e_link", "e_inflow", "e_delay", "link_clamped", "inflow_clamped",
              "delay_size", "e_link_of_inflow", "e_link_of_delay",
              "e_inflow_of_link", "e_inflow_of_delay", "e_delay_of_link",
              "e_delay_of_inflow", "ratio_link_of_inflow", "ratio_link_of_delay",
              "ratio_inflow_of_link", "ratio_inflow_of_delay",
              "ratio_delay_of_link", "ratio_delay_of_inflow"});
  std::map<double, std::array<std::vector<double>, 3>> by_level;
  std::map<double, std::array<std::size_t, 2>> clamped;
  std::size_t evaluated = 0;
  for (const auto& oc : outcomes) {
    if (!oc.value) continue;
    ++evaluated;
    for (const EfficiencyReport& r : oc.value->reports) {
      std::vector<Cell> row = {
          Text(corpus.user_name(r.ego)), Text(std::string(MemeKindName(r.kind))),
          Real(r.coverage), Int(r.num_followees), Int(r.num_memes),
          Int(r.num_covered), Int(r.link_cover.selected.size()),
          Int(r.inflow_cover.selected.size()), Int(r.followee_inflow),
          Int(Inflow(corpus, r.inflow_cover.selected)), Real(r.e_link),
          Real(r.e_inflow), Real(r.e_delay), Int(r.link_clamped ? 1 : 0),
          Int(r.inflow_clamped ? 1 : 0)};
      if (r.cross) {
        const auto& c = *r.cross;
        const auto& q = *r.cross_ratio;
        for (Cell cell : {Int(r.delay_cover->selected.size()), Real(c.link_of_inflow),
                          Real(c.link_of_delay), Real(c.inflow_of_link),
                          Real(c.inflow_of_delay), Real(c.delay_of_link),
                          Real(c.delay_of_inflow), Real(q.link_of_inflow),
                          Real(q.link_of_delay), Real(q.inflow_of_link),
                          Real(q.inflow_of_delay), Real(q.delay_of_link),
                          Real(q.delay_of_inflow)}) {
          row.push_back(cell);
        }
      } else {
        row.resize(28, Na());
      }
      rows.Add(std::move(row));
      auto& bucket = by_level[r.coverage];
      bucket[0].push_back(r.e_link);
      bucket[1].push_back(r.e_inflow);
      bucket[2].push_back(r.e_delay);
      clamped[r.coverage][0] += r.link_clamped;
      clamped[r.coverage][1] += r.inflow_clamped;
    }
  }
  rows.Write();

  Table hist(o, "efficiency_hist", {"coverage", "metric", "bin_lo", "bin_hi", "count"});
  Table means(o, "efficiency_means",
              {"coverage", "egos", "mean_e_link", "mean_e_inflow", "mean_e_delay",
               "link_clamped", "inflow_clamped"});
  for (const auto& [p, bucket] : by_level) {
    const char* names[] = {"e_link", "e_inflow", "e_delay"};
    for (int m = 0; m < 3; ++m) AddHistogramRows(hist, {Real(p), Text(names[m])}, bucket[m]);
    means.Add({Real(p), Int(bucket[0].size()), Real(Mean(bucket[0])),
               Real(Mean(bucket[1])), Real(Mean(bucket[2])), Int(clamped[p][0]),
               Int(clamped[p][1])});
  }
  hist.Write();
  means.Write();
  const std::size_t skipped = ReportSkips(corpus, o, outcomes, err);
  PrintRunSummary(out, egos.size(), evaluated, skipped);
  return kExitOk;
}

int CmdCover(const Options& o, std::ostream& out, std::ostream& err) {
  const Corpus corpus = AcquireCorpus(o);
  const MemeKind kind = ParseKindOption(o.meme_kind);
  const auto levels = CoverageLevels(o);
  const auto egos = SelectEgos(corpus, o);
  fs::create_directories(o.out);

  struct Run {
    std::string algorithm;
    double coverage;
    CoverResult cover;
  };
  const auto outcomes = ForEachEgo<std::vector<Run>>(egos, o.threads, [&](UserId ego) {
    const EgoContext ctx = MakeEgoContext(corpus, ego, kind, o.min_followees);
    std::vector<Run> runs;
    for (double p : levels) {
      CoverSpec spec;
      spec.universe = ctx.received;
      spec.coverage = p;
      spec.alpha = o.alpha;
      spec.beta = o.beta;
      spec.excluded = {ego};
      runs.push_back({"link", p, GreedyMinCover(corpus, spec)});
      runs.push_back({"inflow", p, GreedyWeightedCover(corpus, spec)});
      if (p == 1.0) runs.push_back({"delay", p, DelayOptimalCover(corpus, spec)});
      runs.push_back({"joint", p, JointCover(corpus, spec)});
    }
    for (const Run& run : runs) {
      CheckCover(run.cover, ctx.received.size(), run.coverage, run.algorithm);
    }
    return runs;
  });

  Table rows(o, "cover",
             {"ego", "meme_kind", "algorithm", "coverage", "size", "objective",
              "covered", "avg_delay_days", "selected"});
  std::size_t evaluated = 0;
  for (const auto& oc : outcomes) {
    if (!oc.value) continue;
    ++evaluated;
    for (const Run& run : *oc.value) {
      rows.Add({Text(corpus.user_name(oc.ego)), Text(std::string(MemeKindName(kind))),
                Text(run.algorithm), Real(run.coverage), Int(run.cover.selected.size()),
                Real(run.cover.objective), Int(run.cover.covered.size()),
                Real(run.cover.average_delay_days),
                Text(JoinNames(corpus, run.cover.selected))});
    }
  }
  rows.Write();
  const std::size_t skipped = ReportSkips(corpus, o, outcomes, err);
  PrintRunSummary(out, egos.size(), evaluated, skipped);
  return kExitOk;
}

int CmdOptimize(const Options& o, std::ostream& out, std::ostream& err) {
  const Corpus corpus = AcquireCorpus(o);
  const MemeKind kind = ParseKindOption(o.meme_kind);
  const auto egos = SelectEgos(corpus, o);
  fs::create_directories(o.out);
  const std::vector<double> full{1.0};

  const auto outcomes = ForEachEgo<EgoEvaluation>(egos, o.threads, [&](UserId ego) {
    return EvaluateEgo(corpus, ego, o, kind, full);
  });

  Table rows(o, "optimize",
             {"ego", "meme_kind", "followees", "joint_size", "joint_inflow",
              "joint_avg_delay_days", "e_link_joint", "e_inflow_joint",
              "e_delay_joint", "e_link", "e_inflow", "e_delay", "ratio_link",
              "ratio_inflow", "ratio_delay", "selected"});
  std::map<std::size_t, std::array<std::vector<double>, 3>> bins;
  std::size_t evaluated = 0;
  for (const auto& oc : outcomes) {
    if (!oc.value) continue;
    ++evaluated;
    const EfficiencyReport& r = oc.value->reports.front();
    const CoverResult& joint = *r.joint_cover;
    rows.Add({Text(corpus.user_name(r.ego)), Text(std::string(MemeKindName(kind))),
              Int(oc.value->ctx.followees.size()), Int(joint.selected.size()),
              Int(Inflow(corpus, joint.selected)), Real(joint.average_delay_days),
              Real(r.joint->link), Real(r.joint->inflow), Real(r.joint->delay),
              Real(r.e_link), Real(r.e_inflow), Real(r.e_delay),
              Real(r.joint_ratio->link), Real(r.joint_ratio->inflow),
              Real(r.joint_ratio->delay), Text(JoinNames(corpus, joint.selected))});
    auto& bin = bins[Log2Bin(oc.value->ctx.followees.size())];
    bin[0].push_back(r.joint_ratio->link);
    bin[1].push_back(r.joint_ratio->inflow);
    bin[2].push_back(r.joint_ratio->delay);
  }
  rows.Write();

  Table binned(o, "optimize_bins",
               {"followees_lo", "followees_hi", "egos", "mean_ratio_link",
                "mean_ratio_inflow", "mean_ratio_delay"});
  for (const auto& [b, values] : bins) {
    binned.Add({Int(std::uint64_t{1} << b), Int((std::uint64_t{1} << (b + 1)) - 1),
                Int(values[0].size()), Real(Mean(values[0])), Real(Mean(values[1])),
                Real(Mean(values[2]))});
  }
  binned.Write();
  const std::size_t skipped = ReportSkips(corpus, o, outcomes, err);
  PrintRunSummary(out, egos.size(), evaluated, skipped);
  return kExitOk;
}

struct EgoStructure {
  std::size_t followees = 0;
  std::optional<double> lcc_original;
  struct Optimized {
    std::string name;
    std::size_t members = 0;
    std::optional<double> lcc;
    double overlap = 0.0;
  };
  std::vector<Optimized> optimized;
};

std::optional<double> LccOrMissing(const Corpus& corpus, UserId ego,
                                   std::span<const UserId> members) {
  const EgoNetwork net = BuildEgoNetwork(corpus, ego, members);
  if (net.members.size() < 2) return std::nullopt;
  return LocalClusteringCoefficient(net);
}

int CmdEgonet(const Options& o, std::ostream& out, std::ostream& err) {
  const Corpus corpus = AcquireCorpus(o);
  const MemeKind kind = ParseKindOption(o.meme_kind);
  const auto egos = SelectEgos(corpus, o);
  fs::create_directories(o.out);
  const std::vector<double> full{1.0};

  const auto outcomes = ForEachEgo<EgoStructure>(egos, o.threads, [&](UserId ego) {
    const EgoEvaluation ev = EvaluateEgo(corpus, ego, o, kind, full);
    const EfficiencyReport& r = ev.reports.front();
    EgoStructure s;
    s.followees = ev.ctx.followees.size();
    s.lcc_original = LccOrMissing(corpus, ego, ev.ctx.followees);
    const std::pair<const char*, const CoverResult*> sets[] = {
        {"link", &r.link_cover},
        {"inflow", &r.inflow_cover},
        {"delay", &*r.delay_cover},
        {"joint", &*r.joint_cover}};
    for (const auto& [name, cover] : sets) {
      EgoStructure::Optimized opt;
      opt.name = name;
      opt.members = cover->selected.size();
      opt.lcc = LccOrMissing(corpus, ego, cover->selected);
      opt.overlap = Overlap(cover->selected, ev.ctx.followees);
      Require(opt.overlap >= 0.0 && opt.overlap <= 1.0, "overlap out of [0, 1]");
      s.optimized.push_back(std::move(opt));
    }
    return s;
  });

  Table rows(o, "egonet",
             {"ego", "meme_kind", "optimization", "followees", "members",
              "lcc_original", "lcc_optimized", "overlap"});
  std::map<std::string, std::vector<double>> lcc_values;
  std::map<std::string, std::vector<std::pair<double, double>>> lcc_overlap;
  std::map<std::pair<std::size_t, std::string>, std::vector<double>> bins;
  const std::vector<std::string> order{"original", "link", "inflow", "delay", "joint"};
  std::size_t evaluated = 0;
  for (const auto& oc : outcomes) {
    if (!oc.value) continue;
    ++evaluated;
    const EgoStructure& s = *oc.value;
    const std::size_t bin = Log2Bin(s.followees);
    if (s.lcc_original) {
      lcc_values["original"].push_back(*s.lcc_original);
      bins[{bin, "original"}].push_back(*s.lcc_original);
    }
    for (const auto& opt : s.optimized) {
      rows.Add({Text(corpus.user_name(oc.ego)), Text(std::string(MemeKindName(kind))),
                Text(opt.name), Int(s.followees), Int(opt.members),
                Real(s.lcc_original), Real(opt.lcc), Real(opt.overlap)});
      if (opt.lcc) {
        lcc_values[opt.name].push_back(*opt.lcc);
        lcc_overlap[opt.name].emplace_back(*opt.lcc, opt.overlap);
        bins[{bin, opt.name}].push_back(*opt.lcc);
      }
    }
  }
  rows.Write();

  Table hist(o, "egonet_hist", {"network", "bin_lo", "bin_hi", "count"});
  Table means(o, "egonet_means", {"network", "egos", "mean_lcc"});
  for (const auto& name : order) {
    AddHistogramRows(hist, {Text(name)}, lcc_values[name]);
    means.Add({Text(name), Int(lcc_values[name].size()), Real(Mean(lcc_values[name]))});
  }
  hist.Write();
  means.Write();

  Table corr(o, "egonet_correlation", {"optimization", "points", "pearson_r"});
  for (std::size_t i = 1; i < order.size(); ++i) {
    const auto& points = lcc_overlap[order[i]];
    Cell r = Na();
    try {
      r = Real(PearsonCorrelation(points));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateVariance) throw;
    }
    corr.Add({Text(order[i]), Int(points.size()), r});
  }
  corr.Write();

  Table binned(o, "egonet_bins",
               {"followees_lo", "followees_hi", "network", "egos", "mean_lcc"});
  for (const auto& [key, values] : bins) {
    binned.Add({Int(std::uint64_t{1} << key.first),
                Int((std::uint64_t{1} << (key.first + 1)) - 1), Text(key.second),
                Int(values.size()), Real(Mean(values))});
  }
  binned.Write();
  const std::size_t skipped = ReportSkips(corpus, o, outcomes, err);
  PrintRunSummary(out, egos.size(), evaluated, skipped);
  return kExitOk;
}

int CmdSynth(const Options& o, std::ostream& out) {
  SynthSpec spec;
  spec.seed = o.seed;
  spec.n_users = o.n_users;
  spec.n_memes = o.n_memes;
  spec.window_days = o.window_days;
  spec.ego_followee_count = o.followees;
  spec.pareto_exponent = o.pareto_exponent;
  spec.triadic_bias = o.triadic_bias;
  spec.kind = ParseKindOption(o.meme_kind);
  const auto archetype = ParseArchetype(o.archetype);
  if (!archetype) throw Error(ErrorCode::kInvalidConfig, "unknown archetype " + o.archetype);
  spec.archetype = *archetype;
  if (!o.window_start.empty()) {
    const auto start = ParseTimestamp(o.window_start);
    if (!start) throw Error(ErrorCode::kInvalidConfig, "bad --window-start");
    spec.window_start = *start;
  }

  const SynthOutput synth = Generate(spec);
  fs::create_directories(o.out);
  const fs::path dir(o.out);
  const auto domains = WriteDataset(synth.raw, dir / "posts.tsv", dir / "follows.tsv",
                                    ParsePostsFormat(o.posts_format));
  char fingerprint[32];
  std::snprintf(fingerprint, sizeof fingerprint, "%016llx",
                static_cast<unsigned long long>(Fingerprint(synth.corpus)));

  Table summary(o, "synth_summary", {"metric", "value"});
  summary.Add({Text("archetype"), Text(o.archetype)});
  summary.Add({Text("ego"), Text(synth.corpus.user_name(synth.ego))});
  summary.Add({Text("window_start"), Text(FormatTimestamp(synth.corpus.window().start))});
  summary.Add({Text("window_end"), Text(FormatTimestamp(synth.corpus.window().end))});
  summary.Add({Text("users"), Int(synth.corpus.num_users())});
  summary.Add({Text("memes"), Int(synth.corpus.num_memes())});
  summary.Add({Text("meme_events"), Int(synth.corpus.num_events())});
  summary.Add({Text("fingerprint"), Text(fingerprint)});
  if (domains) summary.Add({Text("news_domains"), Text(domains->filename().string())});
  summary.Write();

  out << "ego\t" << synth.corpus.user_name(synth.ego) << "\nwindow_start\t"
      << FormatTimestamp(synth.corpus.window().start) << "\nwindow_end\t"
      << FormatTimestamp(synth.corpus.window().end) << "\nusers\t"
      << synth.corpus.num_users() << "\nfingerprint\t" << fingerprint << '\n';
  return kExitOk;
}

void AddCommon(CLI::App& sub, Options& o) {
  sub.add_option("--posts", o.posts, "Posts file");
  sub.add_option("--follows", o.follows, "Follows file");
  sub.add_option("--corpus", o.corpus_cache, "Corpus cache written by `ingest`");
  sub.add_option("--window-start", o.window_start, "Window start (ISO-8601 or unix seconds)");
  sub.add_option("--window-end", o.window_end, "Window end, inclusive");
  sub.add_option("--meme-kind", o.meme_kind,
                 "hashtag | url | news_domain | youtube_video");
  sub.add_option("--posts-format", o.posts_format, "text | extracted");
  sub.add_option("--news-domains", o.news_domains, "News domain list");
  sub.add_option("--url-aliases", o.url_aliases, "short_url<TAB>resolved_url map");
  sub.add_flag("--no-activity-filter", o.no_activity_filter,
               "Keep users without pre-window posts");
  sub.add_option("--coverage", o.coverage, "Coverage fraction (repeatable)");
  sub.add_option("--alpha", o.alpha, "In-flow exponent of the joint cover");
  sub.add_option("--beta", o.beta, "Delay exponent of the joint cover");
  sub.add_option("--min-followees", o.min_followees, "Minimum kind-posting followees");
  sub.add_option("--sample-n", o.sample_n, "Random sample of egos (0 = all)");
  sub.add_option("--egos", o.egos, "Explicit ego ids")->delimiter(',');
  sub.add_option("--seed", o.seed, "Run seed");
  sub.add_option("--out", o.out, "Output directory");
  sub.add_option("--format", o.format, "tsv | jsonl")
      ->check(CLI::IsMember({"tsv", "jsonl"}));
  sub.add_flag("--no-header-timestamp", o.no_header_timestamp,
               "Omit the generation time from report headers");
  sub.add_option("--threads", o.threads, "Worker threads (0 = hardware)");
}

}  // namespace

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedRecord:
    case ErrorCode::kInvalidConfig:
    case ErrorCode::kInvalidSpec:
    case ErrorCode::kUnknownUser:
    case ErrorCode::kIo:
      return kExitInput;
    case ErrorCode::kEmptyCorpus:
    case ErrorCode::kInfeasibleCover:
    case ErrorCode::kTooFewFollowees:
    case ErrorCode::kEmptyFollowees:
    case ErrorCode::kZeroInflow:
    case ErrorCode::kNoMemes:
      return kExitEmpty;
    default:
      return kExitInternal;
  }
}

int Run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Information-acquisition efficiency of follow networks", "memecover"};
  app.require_subcommand(1);
  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"ingest", "Parse posts and follows into a corpus cache"},
      {"efficiency", "Link, in-flow and delay efficiency per ego"},
      {"cover", "Optimal followee sets per ego"},
      {"optimize", "Joint in-flow/delay optimization per ego"},
      {"egonet", "Clustering and overlap of original vs optimized ego-networks"},
      {"synth", "Write a synthetic corpus"},
  };
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    AddCommon(*sub, o);
    if (std::string_view(s.name) == "ingest") {
      sub->add_option("--cache", o.cache_out, "Cache path (default <out>/corpus.cbor)");
    }
    if (std::string_view(s.name) == "synth") {
      sub->add_option("--archetype", o.archetype,
                      "random_bipartite | redundant_followees | superuser_shadow | "
                      "pareto_inflow");
      sub->add_option("--n-users", o.n_users, "Users");
      sub->add_option("--n-memes", o.n_memes, "Memes");
      sub->add_option("--window-days", o.window_days, "Window length in days");
      sub->add_option("--followees", o.followees, "Followees per user / of the ego");
      sub->add_option("--pareto-exponent", o.pareto_exponent, "Pareto exponent");
      sub->add_option("--triadic-bias", o.triadic_bias,
                      "Probability that a follow edge closes a triangle");
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  o.command = app.get_subcommands().front()->get_name();

  try {
    if (o.command == "ingest") return CmdIngest(o, out);
    if (o.command == "efficiency") return CmdEfficiency(o, out, err);
    if (o.command == "cover") return CmdCover(o, out, err);
    if (o.command == "optimize") return CmdOptimize(o, out, err);
    if (o.command == "egonet") return CmdEgonet(o, out, err);
    if (o.command == "synth") return CmdSynth(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}

std::vector<std::size_t> HistogramCounts(std::span<const double> values,
                                         double bin_width) {
  const auto bins = static_cast<std::size_t>(std::llround(1.0 / bin_width));
  std::vector<std::size_t> counts(bins, 0);
  for (double v : values) {
    const double clamped = std::clamp(v, 0.0, 1.0);
    auto b = static_cast<std::size_t>(std::floor(clamped / bin_width));
    ++counts[std::min(b, bins - 1)];
  }
  return counts;
}

std::size_t Log2Bin(std::size_t count) {
  std::size_t b = 0;
  while ((count >> (b + 1)) != 0) ++b;
  return b;
}

std::vector<UserId> SampleEgos(const Corpus& corpus, std::optional<std::size_t> n,
                               std::uint64_t seed) {
  std::vector<UserId> eligible;
  for (std::size_t u = 0; u < corpus.num_users(); ++u) {
    const UserId id{static_cast<std::uint32_t>(u)};
    if (!corpus.followees(id).empty()) eligible.push_back(id);
  }
  if (!n || *n >= eligible.size()) return eligible;
  Rng rng(seed);
  for (std::size_t i = 0; i < *n; ++i) {
    std::swap(eligible[i], eligible[i + rng.Index(eligible.size() - i)]);
  }
  eligible.resize(*n);
  std::sort(eligible.begin(), eligible.end());
  return eligible;
}

void SaveCorpusCache(const Corpus& corpus, const fs::path& path) {
  const Corpus::Data& d = corpus.data();
  json j;
  j["format"] = "memecover-corpus";
  j["version"] = 1;
  j["window"] = {d.window.start, d.window.end};
  j["users"] = d.user_names;
  json memes = json::array();
  for (const auto& m : d.memes) memes.push_back({MemeKindName(m.kind), m.key});
  j["memes"] = std::move(memes);
  json events = json::array();
  for (const auto& e : d.events) events.push_back({e.user.value, e.meme, e.time});
  j["events"] = std::move(events);
  j["post_count"] = d.post_count;
  json follows = json::array();
  for (const auto& [a, b] : d.follows) follows.push_back({a.value, b.value});
  j["follows"] = std::move(follows);

  const std::vector<std::uint8_t> bytes = json::to_cbor(j);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
}

Corpus LoadCorpusCache(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                        std::istreambuf_iterator<char>());
  try {
    const json j = json::from_cbor(bytes);
    if (j.at("format") != "memecover-corpus" || j.at("version") != 1) {
      throw Error(ErrorCode::kMalformedRecord, path.string() + ": not a corpus cache");
    }
    Corpus::Data d;
    d.window = {j.at("window").at(0).get<Timestamp>(), j.at("window").at(1).get<Timestamp>()};
    d.user_names = j.at("users").get<std::vector<std::string>>();
    for (const auto& m : j.at("memes")) {
      const auto kind = ParseMemeKind(m.at(0).get<std::string>());
      if (!kind) throw Error(ErrorCode::kMalformedRecord, "unknown meme kind in cache");
      d.memes.push_back({*kind, m.at(1).get<std::string>()});
    }
    for (const auto& e : j.at("events")) {
      d.events.push_back({UserId{e.at(0).get<std::uint32_t>()}, e.at(1).get<MemeIndex>(),
                          e.at(2).get<Timestamp>()});
    }
    d.post_count = j.at("post_count").get<std::vector<std::uint64_t>>();
    for (const auto& e : j.at("follows")) {
      d.follows.emplace_back(UserId{e.at(0).get<std::uint32_t>()},
                             UserId{e.at(1).get<std::uint32_t>()});
    }
    return Corpus(std::move(d));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedRecord, path.string() + ": " + e.what());
  }
}

}  // namespace memecover::cli
