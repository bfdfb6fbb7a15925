#pragma once

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "icf/enumerate.hpp"
#include "icf/report.hpp"

namespace icf {

struct SweepConfig {
  enum class Mode { exhaustive, random };
  Mode mode = Mode::exhaustive;
  int n = 3;
  bool preconditions_only = false;
  bool require_empty_set = false;
  std::vector<ClaimId> claims{kAllClaims.begin(), kAllClaims.end()};
  int jobs = 1;
  std::int64_t witness_limit = 16;
  std::string witness_dir;  // empty: no dump files
  // Random mining only.
  std::int64_t samples = 0;
  int generators = 0;
  std::uint64_t seed = 0;
  // Exhaustive n = 5 is refused unless explicitly allowed.
  bool allow_large_exhaustive = false;
  // Checkpoint support (exhaustive mode).
  std::string checkpoint_path;
  std::int64_t checkpoint_every = 10'000'000;
};

struct ClaimTally {
  std::int64_t ran = 0;
  std::int64_t held = 0;
  std::int64_t failed = 0;
  std::int64_t skipped = 0;
};

struct SweepWitness {
  std::string claim;
  int n = 0;
  std::vector<Mask> sets;
};

struct SweepSummary {
  std::string mode;
  int n = 0;
  bool preconditions_only = false;
  bool require_empty_set = false;
  std::vector<std::string> claims;
  std::int64_t samples = 0;
  int generators = 0;
  std::uint64_t seed = 0;
  std::int64_t witness_limit = 0;

  std::int64_t total_visited = 0;
  std::int64_t pass_preconditions = 0;
  std::int64_t pass_preconditions_after_reduction = 0;
  std::int64_t families_checked = 0;
  std::vector<std::pair<std::string, ClaimTally>> per_claim;
  std::int64_t claim_failures = 0;
  std::int64_t discarding_records = 0;
  std::int64_t rooted_records = 0;
  std::int64_t families_with_rooted_records = 0;
  std::vector<SweepWitness> witnesses;
  bool witnesses_truncated = false;
};

namespace detail {

struct SweepAccumulator {
  std::int64_t total_visited = 0;
  std::int64_t pass_preconditions = 0;
  std::int64_t pass_preconditions_after_reduction = 0;
  std::int64_t families_checked = 0;
  std::vector<ClaimTally> tallies;  // indexed by position in config.claims
  std::int64_t claim_failures = 0;
  std::int64_t discarding_records = 0;
  std::int64_t rooted_records = 0;
  std::int64_t families_with_rooted_records = 0;
  std::vector<SweepWitness> witnesses;
  bool witnesses_truncated = false;

  explicit SweepAccumulator(std::size_t claim_count = 0) : tallies(claim_count) {}

  void merge(const SweepAccumulator& o, std::int64_t witness_limit) {
    total_visited += o.total_visited;
    pass_preconditions += o.pass_preconditions;
    pass_preconditions_after_reduction += o.pass_preconditions_after_reduction;
    families_checked += o.families_checked;
    for (std::size_t i = 0; i < tallies.size(); ++i) {
      tallies[i].ran += o.tallies[i].ran;
      tallies[i].held += o.tallies[i].held;
      tallies[i].failed += o.tallies[i].failed;
      tallies[i].skipped += o.tallies[i].skipped;
    }
    claim_failures += o.claim_failures;
    discarding_records += o.discarding_records;
    rooted_records += o.rooted_records;
    families_with_rooted_records += o.families_with_rooted_records;
    for (const auto& w : o.witnesses) {
      if (static_cast<std::int64_t>(witnesses.size()) < witness_limit)
        witnesses.push_back(w);
      else
        witnesses_truncated = true;
    }
    witnesses_truncated = witnesses_truncated || o.witnesses_truncated;
  }
};

// Claim pipeline shared by both sweep modes. Claims run on the canonical
// relabeling; families failing the preconditions get every gated claim
// counted as skipped (unless the filter drops them entirely).
inline void sweep_visit(const SweepConfig& cfg, const Family& f,
                        SweepAccumulator& acc) {
  ++acc.total_visited;
  const RelabelResult rl = canonical_relabel(f);
  const Family& g = rl.family;
  const PreconditionReport pre = check_preconditions(g);
  if (pre.pass()) {
    // A passing family has no universal element and no equal columns, so
    // it is already a reduction fixpoint.
    ++acc.pass_preconditions;
    ++acc.pass_preconditions_after_reduction;
  } else {
    const ReduceResult rr = reduce_family(g);
    if (rr.family.n() > 0 &&
        check_preconditions(canonical_relabel(rr.family).family).pass())
      ++acc.pass_preconditions_after_reduction;
  }
  if (cfg.require_empty_set && !g.contains(Mask::empty_set())) return;
  if (cfg.preconditions_only && !pre.pass()) return;
  ++acc.families_checked;

  if (pre.pass()) {
    const BoundTrace tr = bound_trace(g, PreconditionPolicy::skip);
    acc.discarding_records += tr.total_records();
    acc.rooted_records += tr.rooted_records();
    if (tr.rooted_records() > 0) ++acc.families_with_rooted_records;
  }

  for (std::size_t ci = 0; ci < cfg.claims.size(); ++ci) {
    const ClaimId id = cfg.claims[ci];
    ClaimTally& tally = acc.tallies[ci];
    if (!pre.pass() && id != ClaimId::rare_element) {
      ++tally.skipped;  // checkers require the ordering preconditions
      continue;
    }
    ClaimResult res;
    switch (id) {
      case ClaimId::lemma1: res = check_lemma1(g, PreconditionPolicy::skip); break;
      case ClaimId::lemma2: res = check_lemma2(g, PreconditionPolicy::skip); break;
      case ClaimId::lemma3: res = check_lemma3(g, PreconditionPolicy::skip); break;
      case ClaimId::thm1_ineq4:
        res = check_theorem1(g, PreconditionPolicy::skip).first;
        break;
      case ClaimId::thm1_ineq5:
        res = check_theorem1(g, PreconditionPolicy::skip).second;
        break;
      case ClaimId::cor1_frankl:
        res = check_frankl(g, PreconditionPolicy::skip);
        break;
      case ClaimId::rare_element: res = check_rare_element(g); break;
      case ClaimId::lemma5: res = check_lemma5(g, PreconditionPolicy::skip); break;
      case ClaimId::cor2_boolean:
        res = check_boolean_characterization(g, PreconditionPolicy::skip);
        break;
      case ClaimId::equ3_chain: res = check_equ3(g, PreconditionPolicy::skip); break;
    }
    if (!res.ran) {
      ++tally.skipped;
      continue;
    }
    ++tally.ran;
    if (res.holds) {
      ++tally.held;
    } else {
      ++tally.failed;
      ++acc.claim_failures;
      if (static_cast<std::int64_t>(acc.witnesses.size()) < cfg.witness_limit)
        acc.witnesses.push_back(
            {std::string(to_string(id)), g.n(), g.sets()});
      else
        acc.witnesses_truncated = true;
    }
  }
}

inline std::string config_signature(const SweepConfig& cfg) {
  std::ostringstream os;
  os << (cfg.mode == SweepConfig::Mode::exhaustive ? "exhaustive" : "random")
     << " n=" << cfg.n << " pre=" << cfg.preconditions_only
     << " empty=" << cfg.require_empty_set << " claims=";
  for (ClaimId id : cfg.claims) os << to_string(id) << ",";
  if (cfg.mode == SweepConfig::Mode::random)
    os << " samples=" << cfg.samples << " gens=" << cfg.generators
       << " seed=" << cfg.seed;
  os << " witness_limit=" << cfg.witness_limit;
  return os.str();
}

}  // namespace detail

nlohmann::ordered_json summary_to_json(const SweepSummary& s);
SweepSummary summary_from_json(const nlohmann::ordered_json& j);

namespace detail {

// Work units processed by an ordered worker pool: shard index -> partial
// accumulator. Results merge strictly in shard order, so the outcome is
// identical for every worker count; a checkpoint, when requested, is the
// merged prefix plus the index of the next unmerged shard.
class OrderedReducer {
public:
  OrderedReducer(std::size_t shard_count, std::size_t claim_count,
                 std::int64_t witness_limit)
      : pending_(shard_count), done_(shard_count, false),
        acc_(claim_count), witness_limit_(witness_limit) {}

  void start_from(std::size_t prefix, SweepAccumulator seeded) {
    next_merge_ = prefix;
    acc_ = std::move(seeded);
  }

  void deliver(std::size_t shard, SweepAccumulator part,
               const std::function<void(std::size_t, const SweepAccumulator&)>&
                   on_prefix_advanced) {
    std::lock_guard<std::mutex> lock(mu_);
    pending_[shard] = std::move(part);
    done_[shard] = true;
    bool advanced = false;
    while (next_merge_ < done_.size() && done_[next_merge_]) {
      acc_.merge(pending_[next_merge_], witness_limit_);
      pending_[next_merge_] = SweepAccumulator();  // release memory
      ++next_merge_;
      advanced = true;
    }
    if (advanced && on_prefix_advanced) on_prefix_advanced(next_merge_, acc_);
  }

  std::size_t merged_prefix() const { return next_merge_; }
  const SweepAccumulator& result() const { return acc_; }

private:
  std::mutex mu_;
  std::vector<SweepAccumulator> pending_;
  std::vector<bool> done_;
  std::size_t next_merge_ = 0;
  SweepAccumulator acc_;
  std::int64_t witness_limit_ = 0;
};

inline void write_checkpoint(const std::string& path, const SweepConfig& cfg,
                             std::size_t shard_count, std::size_t prefix,
                             const SweepSummary& partial) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << "icflab-checkpoint 1\n";
    out << config_signature(cfg) << "\n";
    out << "shards=" << shard_count << " next=" << prefix << "\n";
    out << summary_to_json(partial).dump() << "\n";
  }
  std::filesystem::rename(tmp, path);
}

struct Checkpoint {
  std::size_t shard_count = 0;
  std::size_t prefix = 0;
  SweepSummary partial;
};

inline std::optional<Checkpoint> read_checkpoint(const std::string& path,
                                                 const SweepConfig& cfg) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::string header, signature, cursor, body;
  std::getline(in, header);
  std::getline(in, signature);
  std::getline(in, cursor);
  std::getline(in, body);
  if (header != "icflab-checkpoint 1")
    throw InputError("unrecognized checkpoint header in " + path);
  if (signature != config_signature(cfg))
    throw InputError("checkpoint configuration does not match this run");
  Checkpoint cp;
  if (std::sscanf(cursor.c_str(), "shards=%zu next=%zu", &cp.shard_count,
                  &cp.prefix) != 2)
    throw InputError("malformed checkpoint cursor in " + path);
  cp.partial = summary_from_json(nlohmann::ordered_json::parse(body));
  return cp;
}

inline SweepAccumulator accumulator_from_summary(const SweepSummary& s,
                                                 std::size_t claim_count) {
  SweepAccumulator acc(claim_count);
  acc.total_visited = s.total_visited;
  acc.pass_preconditions = s.pass_preconditions;
  acc.pass_preconditions_after_reduction = s.pass_preconditions_after_reduction;
  acc.families_checked = s.families_checked;
  for (std::size_t i = 0; i < claim_count && i < s.per_claim.size(); ++i)
    acc.tallies[i] = s.per_claim[i].second;
  acc.claim_failures = s.claim_failures;
  acc.discarding_records = s.discarding_records;
  acc.rooted_records = s.rooted_records;
  acc.families_with_rooted_records = s.families_with_rooted_records;
  acc.witnesses = s.witnesses;
  acc.witnesses_truncated = s.witnesses_truncated;
  return acc;
}

inline SweepSummary finish_summary(const SweepConfig& cfg,
                                   const SweepAccumulator& acc) {
  SweepSummary s;
  s.mode = cfg.mode == SweepConfig::Mode::exhaustive ? "exhaustive" : "random";
  s.n = cfg.n;
  s.preconditions_only = cfg.preconditions_only;
  s.require_empty_set = cfg.require_empty_set;
  for (ClaimId id : cfg.claims) s.claims.emplace_back(to_string(id));
  s.samples = cfg.samples;
  s.generators = cfg.generators;
  s.seed = cfg.seed;
  s.witness_limit = cfg.witness_limit;
  s.total_visited = acc.total_visited;
  s.pass_preconditions = acc.pass_preconditions;
  s.pass_preconditions_after_reduction = acc.pass_preconditions_after_reduction;
  s.families_checked = acc.families_checked;
  for (std::size_t i = 0; i < cfg.claims.size(); ++i)
    s.per_claim.emplace_back(std::string(to_string(cfg.claims[i])),
                             acc.tallies[i]);
  s.claim_failures = acc.claim_failures;
  s.discarding_records = acc.discarding_records;
  s.rooted_records = acc.rooted_records;
  s.families_with_rooted_records = acc.families_with_rooted_records;
  s.witnesses = acc.witnesses;
  s.witnesses_truncated = acc.witnesses_truncated;
  return s;
}

// Runs `unit(index)` for indices [first, count) on cfg.jobs threads and
// reduces the partial results in index order.
inline SweepAccumulator run_ordered(const SweepConfig& cfg, std::size_t count,
                                    std::size_t first, SweepAccumulator seeded,
                                    const std::function<SweepAccumulator(std::size_t)>& unit,
                                    const std::function<void(std::size_t, const SweepAccumulator&)>& on_advance) {
  OrderedReducer reducer(count, cfg.claims.size(), cfg.witness_limit);
  reducer.start_from(first, std::move(seeded));
  std::atomic<std::size_t> cursor{first};
  const int jobs = std::max(1, cfg.jobs);
  auto work = [&] {
    for (;;) {
      const std::size_t idx = cursor.fetch_add(1);
      if (idx >= count) break;
      reducer.deliver(idx, unit(idx), on_advance);
    }
  };
  if (jobs == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int t = 0; t < jobs; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return reducer.result();
}

}  // namespace detail

// Run the configured claim set over an exhaustively enumerated or randomly
// mined family stream. The summary is a pure function of the configuration:
// identical for every worker count and across runs.
inline SweepSummary sweep(const SweepConfig& cfg) {
  if (cfg.jobs < 1) throw InputError("jobs must be >= 1");
  if (cfg.witness_limit < 0) throw InputError("witness limit must be >= 0");
  SweepConfig c = cfg;
  if (c.claims.empty()) c.claims.assign(kAllClaims.begin(), kAllClaims.end());

  detail::SweepAccumulator acc(c.claims.size());
  if (c.mode == SweepConfig::Mode::exhaustive) {
    if (c.n < 1 || c.n > kEnumerateMaxN)
      throw LimitError("exhaustive sweeps support 1 <= n <= " +
                       std::to_string(kEnumerateMaxN));
    if (c.n >= 5 && !c.allow_large_exhaustive)
      throw LimitError("exhaustive n = 5 visits millions of families; pass "
                       "--big-exhaustive to run anyway");
    const auto shards =
        detail::make_shards(c.n, detail::default_shard_depth(c.n));
    std::size_t first = 0;
    detail::SweepAccumulator seeded(c.claims.size());
    if (!c.checkpoint_path.empty()) {
      if (auto cp = detail::read_checkpoint(c.checkpoint_path, c)) {
        if (cp->shard_count != shards.size())
          throw InputError("checkpoint shard count does not match this build");
        first = cp->prefix;
        seeded = detail::accumulator_from_summary(cp->partial, c.claims.size());
      }
    }
    std::int64_t last_checkpoint_visited = seeded.total_visited;
    auto on_advance = [&](std::size_t prefix, const detail::SweepAccumulator& a) {
      if (c.checkpoint_path.empty()) return;
      if (a.total_visited - last_checkpoint_visited < c.checkpoint_every) return;
      last_checkpoint_visited = a.total_visited;
      detail::write_checkpoint(c.checkpoint_path, c, shards.size(), prefix,
                               detail::finish_summary(c, a));
    };
    auto unit = [&](std::size_t idx) {
      detail::SweepAccumulator part(c.claims.size());
      detail::enumerate_from(c.n, shards[idx], [&](const Family& f) {
        detail::sweep_visit(c, f, part);
      });
      return part;
    };
    acc = detail::run_ordered(c, shards.size(), first, std::move(seeded), unit,
                              on_advance);
    if (!c.checkpoint_path.empty())
      detail::write_checkpoint(c.checkpoint_path, c, shards.size(), shards.size(),
                               detail::finish_summary(c, acc));
  } else {
    detail::require_ground_set(c.n);
    if (c.samples < 0) throw InputError("samples must be >= 0");
    if (c.generators < 0) throw InputError("generators must be >= 0");
    // One logical stream per sample, keyed by (seed, index): the drawn
    // families do not depend on the worker count.
    constexpr std::int64_t kBlock = 512;
    const std::size_t blocks =
        static_cast<std::size_t>((c.samples + kBlock - 1) / kBlock);
    auto unit = [&](std::size_t b) {
      detail::SweepAccumulator part(c.claims.size());
      const std::int64_t lo = static_cast<std::int64_t>(b) * kBlock;
      const std::int64_t hi = std::min(c.samples, lo + kBlock);
      for (std::int64_t s = lo; s < hi; ++s) {
        const Family f =
            random_closed(c.n, c.generators, sample_seed(c.seed, static_cast<std::uint64_t>(s)));
        detail::sweep_visit(c, f, part);
      }
      return part;
    };
    acc = detail::run_ordered(c, blocks, 0, detail::SweepAccumulator(c.claims.size()),
                              unit, nullptr);
  }

  SweepSummary summary = detail::finish_summary(c, acc);
  if (!c.witness_dir.empty() && !summary.witnesses.empty()) {
    std::filesystem::create_directories(c.witness_dir);
    for (std::size_t i = 0; i < summary.witnesses.size(); ++i) {
      const auto& w = summary.witnesses[i];
      char name[64];
      std::snprintf(name, sizeof name, "witness-%04zu-%s.fam", i, w.claim.c_str());
      std::ofstream out(std::filesystem::path(c.witness_dir) / name,
                        std::ios::binary);
      out << "n=" << w.n << "\n";
      for (Mask m : w.sets) {
        const auto elems = m.elements();
        if (elems.empty()) {
          out << "-\n";
          continue;
        }
        for (std::size_t e = 0; e < elems.size(); ++e)
          out << (e ? "," : "") << elems[e];
        out << "\n";
      }
    }
  }
  return summary;
}

inline nlohmann::ordered_json summary_to_json(const SweepSummary& s) {
  nlohmann::ordered_json j;
  j["mode"] = s.mode;
  j["n"] = s.n;
  j["preconditions_only"] = s.preconditions_only;
  j["require_empty_set"] = s.require_empty_set;
  j["claims"] = s.claims;
  if (s.mode == "random") {
    j["samples"] = s.samples;
    j["generators"] = s.generators;
    j["seed"] = s.seed;
  }
  j["witness_limit"] = s.witness_limit;
  j["total_visited"] = s.total_visited;
  j["pass_preconditions"] = s.pass_preconditions;
  j["pass_preconditions_after_reduction"] = s.pass_preconditions_after_reduction;
  j["families_checked"] = s.families_checked;
  nlohmann::ordered_json claims = nlohmann::ordered_json::array();
  for (const auto& [name, t] : s.per_claim) {
    nlohmann::ordered_json c;
    c["claim"] = name;
    c["ran"] = t.ran;
    c["held"] = t.held;
    c["failed"] = t.failed;
    c["skipped"] = t.skipped;
    claims.push_back(std::move(c));
  }
  j["per_claim"] = std::move(claims);
  j["claim_failures"] = s.claim_failures;
  j["discarding_records"] = s.discarding_records;
  j["rooted_records"] = s.rooted_records;
  j["families_with_rooted_records"] = s.families_with_rooted_records;
  nlohmann::ordered_json wit = nlohmann::ordered_json::array();
  for (const auto& w : s.witnesses) {
    nlohmann::ordered_json e;
    e["claim"] = w.claim;
    e["n"] = w.n;
    nlohmann::ordered_json sets = nlohmann::ordered_json::array();
    for (Mask m : w.sets) sets.push_back(m.elements());
    e["sets"] = std::move(sets);
    wit.push_back(std::move(e));
  }
  j["witnesses"] = std::move(wit);
  j["witnesses_truncated"] = s.witnesses_truncated;
  return j;
}

inline SweepSummary summary_from_json(const nlohmann::ordered_json& j) {
  SweepSummary s;
  s.mode = j.at("mode").get<std::string>();
  s.n = j.at("n").get<int>();
  s.preconditions_only = j.at("preconditions_only").get<bool>();
  s.require_empty_set = j.at("require_empty_set").get<bool>();
  s.claims = j.at("claims").get<std::vector<std::string>>();
  if (s.mode == "random") {
    s.samples = j.at("samples").get<std::int64_t>();
    s.generators = j.at("generators").get<int>();
    s.seed = j.at("seed").get<std::uint64_t>();
  }
  s.witness_limit = j.at("witness_limit").get<std::int64_t>();
  s.total_visited = j.at("total_visited").get<std::int64_t>();
  s.pass_preconditions = j.at("pass_preconditions").get<std::int64_t>();
  s.pass_preconditions_after_reduction =
      j.at("pass_preconditions_after_reduction").get<std::int64_t>();
  s.families_checked = j.at("families_checked").get<std::int64_t>();
  for (const auto& c : j.at("per_claim")) {
    ClaimTally t;
    t.ran = c.at("ran").get<std::int64_t>();
    t.held = c.at("held").get<std::int64_t>();
    t.failed = c.at("failed").get<std::int64_t>();
    t.skipped = c.at("skipped").get<std::int64_t>();
    s.per_claim.emplace_back(c.at("claim").get<std::string>(), t);
  }
  s.claim_failures = j.at("claim_failures").get<std::int64_t>();
  s.discarding_records = j.at("discarding_records").get<std::int64_t>();
  s.rooted_records = j.at("rooted_records").get<std::int64_t>();
  s.families_with_rooted_records =
      j.at("families_with_rooted_records").get<std::int64_t>();
  for (const auto& w : j.at("witnesses")) {
    SweepWitness sw;
    sw.claim = w.at("claim").get<std::string>();
    sw.n = w.at("n").get<int>();
    for (const auto& arr : w.at("sets")) {
      Mask m;
      for (int e : arr.get<std::vector<int>>()) m = m.with(e);
      sw.sets.push_back(m);
    }
    s.witnesses.push_back(std::move(sw));
  }
  s.witnesses_truncated = j.at("witnesses_truncated").get<bool>();
  return s;
}

inline std::string serialize_summary(const SweepSummary& s, bool as_json) {
  if (as_json) return summary_to_json(s).dump(2) + "\n";
  std::ostringstream os;
  os << "sweep mode=" << s.mode << " n=" << s.n;
  if (s.mode == "random")
    os << " samples=" << s.samples << " gens=" << s.generators
       << " seed=" << s.seed;
  os << "\n";
  os << "visited " << s.total_visited << ", preconditions pass "
     << s.pass_preconditions << " (after reduction "
     << s.pass_preconditions_after_reduction << "), checked "
     << s.families_checked << "\n";
  os << "discarding records " << s.discarding_records << ", rooted "
     << s.rooted_records << " (in " << s.families_with_rooted_records
     << " families)\n";
  for (const auto& [name, t] : s.per_claim)
    os << "  " << name << ": ran " << t.ran << ", held " << t.held
       << ", failed " << t.failed << ", skipped " << t.skipped << "\n";
  os << "claim failures: " << s.claim_failures << "\n";
  for (const auto& w : s.witnesses) {
    os << "  witness " << w.claim << " n=" << w.n << ":";
    for (Mask m : w.sets) os << " " << m.to_string();
    os << "\n";
  }
  if (s.witnesses_truncated) os << "  (witness list truncated)\n";
  return os.str();
}

}  // namespace icf
