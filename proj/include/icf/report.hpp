#pragma once

#include <optional>
#include <string>
#include <vector>

#include "icf/claims.hpp"

namespace icf {

struct ReduceInfo {
  std::vector<ReductionStep> steps;
  std::vector<int> label_map;  // labels of the relabeled input -> reduced, 0 = dropped
  int reduced_n = 0;
  std::vector<int> post_permutation;  // canonical relabel applied after reduction
};

struct ClaimReport {
  int input_n = 0;
  std::int64_t input_size = 0;
  std::vector<int> permutation;  // input labels -> analyzed labels
  std::optional<ReduceInfo> reduction;
  bool degenerate = false;
  std::string degenerate_note;
  bool precondition_failure = false;  // claims withheld (reduction disabled)
  Family family;                      // the family the claims ran on
  FrequencyVector frequencies;
  PreconditionReport preconditions;
  std::optional<BoundTrace> trace;
  std::vector<ClaimResult> claims;

  std::vector<std::string> failed_claims() const {
    std::vector<std::string> out;
    for (const auto& c : claims)
      if (c.failed()) out.emplace_back(to_string(c.id));
    return out;
  }
  bool any_claim_failed() const { return !failed_claims().empty(); }
};

struct ReportOptions {
  // Explicit numbering to use instead of the canonical relabeling; must be
  // admissible (nonincreasing frequencies).
  std::optional<std::vector<int>> perm;
  bool allow_reduce = true;
  std::vector<ClaimId> claims{kAllClaims.begin(), kAllClaims.end()};
};

namespace detail {

inline bool wants(const ReportOptions& opt, ClaimId id) {
  for (ClaimId c : opt.claims)
    if (c == id) return true;
  return false;
}

inline void run_claims(ClaimReport& rep, const Family& g, const ReportOptions& opt) {
  rep.trace = bound_trace(g, PreconditionPolicy::skip);
  const bool want4 = wants(opt, ClaimId::thm1_ineq4);
  const bool want5 = wants(opt, ClaimId::thm1_ineq5);
  for (ClaimId id : kAllClaims) {
    if (!wants(opt, id)) continue;
    switch (id) {
      case ClaimId::lemma1:
        rep.claims.push_back(check_lemma1(g, PreconditionPolicy::skip));
        break;
      case ClaimId::lemma2:
        rep.claims.push_back(check_lemma2(g, PreconditionPolicy::skip));
        break;
      case ClaimId::lemma3:
        rep.claims.push_back(check_lemma3(g, PreconditionPolicy::skip));
        break;
      case ClaimId::thm1_ineq4: {
        auto pair = check_theorem1(g, PreconditionPolicy::skip);
        rep.claims.push_back(std::move(pair.first));
        if (want5) rep.claims.push_back(std::move(pair.second));
        break;
      }
      case ClaimId::thm1_ineq5:
        if (!want4)
          rep.claims.push_back(check_theorem1(g, PreconditionPolicy::skip).second);
        break;
      case ClaimId::cor1_frankl:
        rep.claims.push_back(check_frankl(g, PreconditionPolicy::skip));
        break;
      case ClaimId::rare_element:
        rep.claims.push_back(check_rare_element(g));
        break;
      case ClaimId::lemma5:
        rep.claims.push_back(check_lemma5(g, PreconditionPolicy::skip));
        break;
      case ClaimId::cor2_boolean:
        rep.claims.push_back(check_boolean_characterization(g, PreconditionPolicy::skip));
        break;
      case ClaimId::equ3_chain:
        rep.claims.push_back(check_equ3(g, PreconditionPolicy::skip));
        break;
    }
  }
}

}  // namespace detail

// Relabel (canonically or by the requested permutation), reduce when the
// ordering preconditions fail and reduction is allowed, then run every
// requested claim on the resulting family. Precondition failures and
// degenerate reductions are reported, not thrown.
inline ClaimReport full_report(const Family& f, const ReportOptions& opt = {}) {
  ClaimReport rep;
  rep.input_n = f.n();
  rep.input_size = f.size();

  Family g;
  if (opt.perm) {
    g = apply_permutation(f, *opt.perm);
    rep.permutation = *opt.perm;
    if (!check_preconditions(g).ordered)
      throw InputError("permutation is not admissible: frequencies not nonincreasing");
  } else {
    RelabelResult rl = canonical_relabel(f);
    g = std::move(rl.family);
    rep.permutation = std::move(rl.perm);
  }

  rep.preconditions = check_preconditions(g);
  if (!rep.preconditions.pass() && opt.allow_reduce) {
    ReduceResult rr = reduce_family(g);
    ReduceInfo info;
    info.steps = std::move(rr.steps);
    info.label_map = std::move(rr.label_map);
    info.reduced_n = rr.family.n();
    if (rr.family.n() == 0 || rr.family.size() == 0) {
      info.post_permutation = {};
      rep.reduction = std::move(info);
      rep.family = std::move(rr.family);
      rep.frequencies = element_frequencies(rep.family);
      rep.preconditions = check_preconditions(rep.family);
      rep.degenerate = true;
      rep.degenerate_note = rep.family.size() == 0
                                ? "family reduced to the empty family"
                                : "family reduced to ground set of size 0";
      return rep;
    }
    RelabelResult rl = canonical_relabel(rr.family);
    info.post_permutation = std::move(rl.perm);
    rep.reduction = std::move(info);
    g = std::move(rl.family);
    rep.preconditions = check_preconditions(g);
  }

  rep.family = g;
  rep.frequencies = element_frequencies(g);
  if (!rep.preconditions.pass()) {
    rep.precondition_failure = true;
    return rep;
  }
  detail::run_claims(rep, g, opt);
  return rep;
}

// CLI exit-code partition: 0 all checked claims hold, 1 some claim failed,
// 2 input or precondition trouble (3 is reserved for limit overruns).
inline int exit_code_for(const ClaimReport& rep) {
  if (rep.degenerate || rep.precondition_failure) return 2;
  return rep.any_claim_failed() ? 1 : 0;
}

}  // namespace icf
