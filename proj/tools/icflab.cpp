// icflab: inspect intersection-closed set systems from the command line.
//
// Exit codes: 0 = ran, no checked claim failed; 1 = ran, at least one
// checked claim failed; 2 = input or precondition error; 3 = internal
// limit exceeded.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "icf/enumerate.hpp"
#include "icf/io.hpp"
#include "icf/sweep.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw icf::InputError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<int> parse_perm(const std::string& spec) {
  std::vector<int> perm;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ','))
    perm.push_back(icf::detail::parse_int(icf::detail::trim(tok), "--perm"));
  return perm;
}

std::vector<icf::ClaimId> parse_claims(const std::string& spec) {
  std::vector<icf::ClaimId> out;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const std::string t = icf::detail::trim(tok);
    const auto id = icf::claim_from_string(t);
    if (!id) throw icf::InputError("unknown claim id: " + t);
    out.push_back(*id);
  }
  if (out.empty()) throw icf::InputError("--claims needs at least one claim id");
  return out;
}

void print_trace_text(const icf::BoundTrace& tr) {
  std::cout << "t =";
  for (std::int64_t v : tr.t) std::cout << " " << v;
  std::cout << "\n";
  for (const auto& lv : tr.levels) {
    std::cout << "level " << lv.level << ": excluded " << lv.excluded;
    for (const auto& rec : lv.records) {
      std::cout << " " << rec.a.to_string();
      if (rec.root) std::cout << "[root " << *rec.root << "]";
      std::cout << "(|H|=" << rec.h_size << ")";
    }
    std::cout << "\n";
  }
}

struct CheckArgs {
  std::string file;
  bool json = false;
  bool no_reduce = false;
  std::string perm;
};

int run_check(const CheckArgs& a) {
  const icf::RawFamily raw = icf::parse_family(read_file(a.file));
  const icf::Family fam = icf::Family::validated(raw);
  icf::ReportOptions opt;
  opt.allow_reduce = !a.no_reduce;
  if (!a.perm.empty()) opt.perm = parse_perm(a.perm);
  const icf::ClaimReport rep = icf::full_report(fam, opt);
  std::cout << icf::serialize_report(rep, raw, a.json);
  return icf::exit_code_for(rep);
}

int run_trace(const CheckArgs& a) {
  const icf::RawFamily raw = icf::parse_family(read_file(a.file));
  const icf::Family fam = icf::Family::validated(raw);
  icf::ReportOptions opt;
  opt.allow_reduce = !a.no_reduce;
  opt.claims.clear();
  if (!a.perm.empty()) opt.perm = parse_perm(a.perm);
  const icf::ClaimReport rep = icf::full_report(fam, opt);
  if (rep.degenerate || rep.precondition_failure) {
    std::cout << icf::serialize_report(rep, raw, a.json);
    return 2;
  }
  if (a.json) {
    nlohmann::ordered_json j = icf::report_to_json(rep, raw);
    std::cout << j["trace"].dump(2) << "\n";
  } else {
    print_trace_text(*rep.trace);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification laboratory for intersection-closed set systems"};
  app.require_subcommand(1);

  CheckArgs check_args;
  auto* check = app.add_subcommand("check", "run every claim on a family file");
  check->add_option("file", check_args.file, "family file (text or JSON)")->required();
  check->add_flag("--json", check_args.json, "machine-readable report");
  check->add_flag("--no-reduce", check_args.no_reduce,
                  "fail instead of reducing when preconditions do not hold");
  check->add_option("--perm", check_args.perm,
                    "explicit numbering old->new, e.g. \"2,3,1\"");

  CheckArgs trace_args;
  auto* trace = app.add_subcommand("trace", "print the bound trace t^0..t^n");
  trace->add_option("file", trace_args.file, "family file (text or JSON)")->required();
  trace->add_flag("--json", trace_args.json, "machine-readable trace");
  trace->add_flag("--no-reduce", trace_args.no_reduce,
                  "fail instead of reducing when preconditions do not hold");
  trace->add_option("--perm", trace_args.perm, "explicit numbering old->new");

  std::string closure_file;
  bool closure_json = false;
  auto* closure = app.add_subcommand("closure", "intersection closure of a family file");
  closure->add_option("file", closure_file, "family file")->required();
  closure->add_flag("--json", closure_json, "JSON output");

  std::string reduce_file;
  bool reduce_json = false;
  auto* reduce = app.add_subcommand("reduce", "quotient out universal and duplicated elements");
  reduce->add_option("file", reduce_file, "family file")->required();
  reduce->add_flag("--json", reduce_json, "JSON output");

  icf::SweepConfig sweep_cfg;
  bool sweep_json = false;
  std::string sweep_claims;
  auto* sweep_cmd = app.add_subcommand("sweep", "exhaustive claim sweep over all closed families");
  sweep_cmd->add_option("--n", sweep_cfg.n, "ground-set size")->required();
  sweep_cmd->add_option("--jobs", sweep_cfg.jobs, "worker threads");
  sweep_cmd->add_option("--out", sweep_cfg.witness_dir, "directory for witness dumps");
  sweep_cmd->add_flag("--preconditions-only", sweep_cfg.preconditions_only,
                      "check only families passing the ordering preconditions");
  sweep_cmd->add_flag("--require-empty", sweep_cfg.require_empty_set,
                      "check only families containing the empty set");
  sweep_cmd->add_option("--claims", sweep_claims, "comma-separated claim ids");
  sweep_cmd->add_option("--witness-limit", sweep_cfg.witness_limit,
                        "keep at most this many failing families");
  sweep_cmd->add_flag("--big-exhaustive", sweep_cfg.allow_large_exhaustive,
                      "allow the full n=5 scan");
  sweep_cmd->add_option("--checkpoint", sweep_cfg.checkpoint_path,
                        "progress file to write and resume from");
  sweep_cmd->add_flag("--json", sweep_json, "machine-readable summary");

  icf::SweepConfig mine_cfg;
  mine_cfg.mode = icf::SweepConfig::Mode::random;
  bool mine_json = false;
  std::string mine_claims;
  auto* mine = app.add_subcommand("mine", "claim sweep over seeded random closures");
  mine->add_option("--n", mine_cfg.n, "ground-set size")->required();
  mine->add_option("--samples", mine_cfg.samples, "number of families to draw")->required();
  mine->add_option("--gens", mine_cfg.generators, "generator sets per family")->required();
  mine->add_option("--seed", mine_cfg.seed, "stream seed");
  mine->add_option("--jobs", mine_cfg.jobs, "worker threads");
  mine->add_option("--out", mine_cfg.witness_dir, "directory for witness dumps");
  mine->add_flag("--preconditions-only", mine_cfg.preconditions_only,
                 "check only families passing the ordering preconditions");
  mine->add_flag("--require-empty", mine_cfg.require_empty_set,
                 "check only families containing the empty set");
  mine->add_option("--claims", mine_claims, "comma-separated claim ids");
  mine->add_option("--witness-limit", mine_cfg.witness_limit,
                   "keep at most this many failing families");
  mine->add_flag("--json", mine_json, "machine-readable summary");

  int count_n = 0;
  bool count_oracle = false;
  bool count_big = false;
  icf::EnumFilters count_filters;
  auto* count = app.add_subcommand("count", "count intersection-closed families");
  count->add_option("--n", count_n, "ground-set size")->required();
  count->add_flag("--oracle", count_oracle, "force the naive 2^(2^n) scan");
  count->add_flag("--preconditions-only", count_filters.preconditions_only,
                  "count only families passing the ordering preconditions");
  count->add_flag("--require-empty", count_filters.require_empty_set,
                  "count only families containing the empty set");
  count->add_flag("--big-exhaustive", count_big, "allow the n=5 scan");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) return run_check(check_args);
    if (trace->parsed()) return run_trace(trace_args);
    if (closure->parsed()) {
      const icf::RawFamily raw = icf::parse_family(read_file(closure_file));
      const icf::Family fam = icf::intersection_closure(raw);
      if (closure_json)
        std::cout << icf::family_to_json(fam.n(), fam.sets()).dump(2) << "\n";
      else
        std::cout << icf::family_to_text(fam);
      return 0;
    }
    if (reduce->parsed()) {
      const icf::RawFamily raw = icf::parse_family(read_file(reduce_file));
      const icf::Family fam = icf::Family::validated(raw);
      const icf::ReduceResult rr = icf::reduce_family(fam);
      if (reduce_json) {
        nlohmann::ordered_json j;
        j["family"] = icf::family_to_json(rr.family.n(), rr.family.sets());
        nlohmann::ordered_json steps = nlohmann::ordered_json::array();
        for (const auto& s : rr.steps) {
          nlohmann::ordered_json e;
          e["kind"] = s.kind == icf::ReductionStep::Kind::remove_universal
                          ? "remove_universal"
                          : "merge";
          e["element"] = s.element;
          if (s.kind == icf::ReductionStep::Kind::merge) e["into"] = s.into;
          steps.push_back(std::move(e));
        }
        j["steps"] = std::move(steps);
        j["label_map"] = rr.label_map;
        std::cout << j.dump(2) << "\n";
      } else {
        for (const auto& s : rr.steps) {
          if (s.kind == icf::ReductionStep::Kind::remove_universal)
            std::cerr << "drop universal element " << s.element << "\n";
          else
            std::cerr << "merge element " << s.element << " into " << s.into << "\n";
        }
        std::cout << icf::family_to_text(rr.family);
      }
      return 0;
    }
    if (sweep_cmd->parsed()) {
      if (!sweep_claims.empty()) sweep_cfg.claims = parse_claims(sweep_claims);
      const icf::SweepSummary s = icf::sweep(sweep_cfg);
      std::cout << icf::serialize_summary(s, sweep_json);
      return s.claim_failures > 0 ? 1 : 0;
    }
    if (mine->parsed()) {
      if (!mine_claims.empty()) mine_cfg.claims = parse_claims(mine_claims);
      const icf::SweepSummary s = icf::sweep(mine_cfg);
      std::cout << icf::serialize_summary(s, mine_json);
      return s.claim_failures > 0 ? 1 : 0;
    }
    if (count->parsed()) {
      std::int64_t value = 0;
      if (count_oracle) {
        if (count_filters.preconditions_only || count_filters.require_empty_set) {
          std::int64_t kept = 0;
          icf::naive_enumerate(count_n, [&](const icf::Family& f) {
            if (count_filters.admits(f)) ++kept;
          });
          value = kept;
        } else {
          value = icf::naive_enumerate(count_n, [](const icf::Family&) {});
        }
      } else {
        if (count_n >= 5 && !count_big)
          throw icf::LimitError("counting at n = 5 visits millions of families; "
                                "pass --big-exhaustive to run anyway");
        value = icf::enumerate_closed(count_n, [](const icf::Family&) {},
                                      count_filters);
      }
      std::cout << value << "\n";
      return 0;
    }
  } catch (const icf::LimitError& e) {
    std::cerr << "limit: " << e.what() << "\n";
    return 3;
  } catch (const icf::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
