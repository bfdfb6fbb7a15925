#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "icf/machinery.hpp"

namespace icf {

enum class ClaimId {
  lemma1,
  lemma2,
  lemma3,
  thm1_ineq4,
  thm1_ineq5,
  cor1_frankl,
  rare_element,
  lemma5,
  cor2_boolean,
  equ3_chain,
};

inline constexpr std::array<ClaimId, 10> kAllClaims = {
    ClaimId::lemma1,       ClaimId::lemma2,      ClaimId::lemma3,
    ClaimId::thm1_ineq4,   ClaimId::thm1_ineq5,  ClaimId::cor1_frankl,
    ClaimId::rare_element, ClaimId::lemma5,      ClaimId::cor2_boolean,
    ClaimId::equ3_chain,
};

inline std::string_view to_string(ClaimId id) {
  switch (id) {
    case ClaimId::lemma1: return "lemma1";
    case ClaimId::lemma2: return "lemma2";
    case ClaimId::lemma3: return "lemma3";
    case ClaimId::thm1_ineq4: return "thm1_ineq4";
    case ClaimId::thm1_ineq5: return "thm1_ineq5";
    case ClaimId::cor1_frankl: return "cor1_frankl";
    case ClaimId::rare_element: return "rare_element";
    case ClaimId::lemma5: return "lemma5";
    case ClaimId::cor2_boolean: return "cor2_boolean";
    case ClaimId::equ3_chain: return "equ3_chain";
  }
  return "?";
}

inline std::optional<ClaimId> claim_from_string(std::string_view s) {
  for (ClaimId id : kAllClaims)
    if (to_string(id) == s) return id;
  return std::nullopt;
}

struct ClaimDetail {
  int index = 0;  // level or k, 0 for whole-family comparisons
  std::int64_t lhs = 0;
  std::int64_t rhs = 0;
  bool holds = true;
  std::string note;
};

struct ClaimWitness {
  int level = 0;
  std::vector<Mask> masks;
  std::string description;
};

struct ClaimResult {
  ClaimId id{};
  bool ran = false;     // false: skipped with skip_reason (premise not met)
  bool holds = false;   // meaningful only when ran
  std::string skip_reason;
  std::vector<ClaimDetail> details;
  std::vector<ClaimWitness> witnesses;

  bool failed() const { return ran && !holds; }
};

namespace detail {

inline void gate(const Family& f, PreconditionPolicy policy) {
  if (policy == PreconditionPolicy::require && !check_preconditions(f).pass())
    throw InputError("family does not satisfy the ordering preconditions");
}

// |F \ (F_from u ... u F_n)|: members avoiding every element >= from.
inline std::int64_t members_avoiding_from(const Family& f, int from) {
  const Mask high = Mask::universe(f.n()) - Mask::prefix(from - 1);
  std::int64_t c = 0;
  for (Mask m : f.sets())
    if (!m.intersects(high)) ++c;
  return c;
}

// |F_i \ (F_{i+1} u ... u F_n)|: members containing i and nothing above it.
inline std::int64_t members_topped_by(const Family& f, int i) {
  const Mask above = Mask::universe(f.n()) - Mask::prefix(i);
  std::int64_t c = 0;
  for (Mask m : f.sets())
    if (m.contains(i) && !m.intersects(above)) ++c;
  return c;
}

inline std::int64_t min_frequency(const FrequencyVector& freq) {
  std::int64_t m = freq.empty() ? 0 : freq[0];
  for (std::int64_t v : freq)
    if (v < m) m = v;
  return m;
}

}  // namespace detail

// Every pair of extensions of a discarding set meets above the level, the
// common intersection of all of them is nonempty, and adjoining it stays
// inside the family.
inline ClaimResult check_lemma1(const Family& f,
                                PreconditionPolicy policy = PreconditionPolicy::require) {
  detail::gate(f, policy);
  ClaimResult r;
  r.id = ClaimId::lemma1;
  r.ran = true;
  r.holds = true;
  for (int i = 1; i <= f.n(); ++i) {
    const std::vector<Mask> ds = discarding_sets(f, i);
    if (ds.empty()) continue;
    ClaimDetail d;
    d.index = i;
    d.rhs = static_cast<std::int64_t>(ds.size());
    for (Mask a : ds) {
      const std::vector<Mask> exts = extensions(f, a, i);
      bool ok = true;
      for (std::size_t p = 0; p < exts.size() && ok; ++p)
        for (std::size_t q = p + 1; q < exts.size(); ++q)
          if (!exts[p].intersects(exts[q])) {
            ok = false;
            r.witnesses.push_back({i,
                                   {a, exts[p], exts[q]},
                                   "extensions of " + a.to_string() + " at level " +
                                       std::to_string(i) + " are disjoint"});
            break;
          }
      if (ok && !exts.empty()) {
        Mask common = Mask::universe(f.n());
        for (Mask x : exts) common = common & x;
        if (common.empty()) {
          ok = false;
          r.witnesses.push_back({i, {a}, "extensions of " + a.to_string() +
                                             " have empty common intersection"});
        } else if (!f.contains(a.with(i) | common)) {
          ok = false;
          r.witnesses.push_back({i,
                                 {a, common},
                                 "closure of the common intersection left the family"});
        }
      }
      if (ok) ++d.lhs;
    }
    d.holds = d.lhs == d.rhs;
    r.holds = r.holds && d.holds;
    r.details.push_back(std::move(d));
  }
  return r;
}

// Exclusion sets have exactly the closed-form cardinality 2^(n-i), or
// 2^(n-i-1) in the rooted case, for levels up to n-1.
inline ClaimResult check_lemma2(const Family& f,
                                PreconditionPolicy policy = PreconditionPolicy::require,
                                std::int64_t budget = kDefaultMaterializeBudget) {
  detail::gate(f, policy);
  ClaimResult r;
  r.id = ClaimId::lemma2;
  r.ran = true;
  r.holds = true;
  for (int i = 1; i <= f.n() - 1; ++i) {
    const std::vector<Mask> ds = discarding_sets(f, i);
    if (ds.empty()) continue;
    ClaimDetail d;
    d.index = i;
    for (Mask a : ds) {
      const ExclusionCylinder cyl = h_cylinder(f, a, i);
      const std::int64_t closed_form = cyl.cardinality();
      const std::int64_t bound = std::int64_t{1}
                                 << (f.n() - i - (cyl.forbidden ? 1 : 0));
      std::int64_t measured = closed_form;
      if (const auto sets = h_materialize(cyl, budget))
        measured = static_cast<std::int64_t>(sets->size());
      else
        d.note = "cardinalities beyond the budget taken from the closed form";
      d.lhs += measured;
      d.rhs += closed_form;
      if (measured < bound || measured != closed_form) {
        d.holds = false;
        r.witnesses.push_back({i,
                               {a},
                               "exclusion set of " + a.to_string() + " at level " +
                                   std::to_string(i) + " has size " +
                                   std::to_string(measured) + ", expected " +
                                   std::to_string(closed_form)});
      }
    }
    d.holds = d.holds && d.lhs == d.rhs;
    r.holds = r.holds && d.holds;
    r.details.push_back(std::move(d));
  }
  return r;
}

// All exclusion cylinders of one family, across all levels and discarding
// sets, are pairwise disjoint. Symbolic test everywhere; for n <= 12 a
// materialized occupancy map cross-checks it.
inline ClaimResult check_lemma3(const Family& f,
                                PreconditionPolicy policy = PreconditionPolicy::require) {
  detail::gate(f, policy);
  ClaimResult r;
  r.id = ClaimId::lemma3;
  r.ran = true;
  r.holds = true;
  std::vector<ExclusionCylinder> cyls;
  for (int i = 1; i <= f.n(); ++i)
    for (Mask a : discarding_sets(f, i)) cyls.push_back(h_cylinder(f, a, i));
  ClaimDetail d;
  d.index = 0;
  d.rhs = static_cast<std::int64_t>(cyls.size() * (cyls.size() - 1) / 2);
  for (std::size_t p = 0; p < cyls.size(); ++p)
    for (std::size_t q = p + 1; q < cyls.size(); ++q) {
      if (cylinders_disjoint(cyls[p], cyls[q])) {
        ++d.lhs;
      } else {
        const ExclusionCylinder& lo =
            cyls[p].level <= cyls[q].level ? cyls[p] : cyls[q];
        const ExclusionCylinder& hi =
            cyls[p].level <= cyls[q].level ? cyls[q] : cyls[p];
        r.witnesses.push_back(
            {lo.level,
             {lo.prefix, hi.prefix},
             "cylinders at levels " + std::to_string(lo.level) + " and " +
                 std::to_string(hi.level) + " share " + hi.prefix.to_string()});
      }
    }
  if (f.n() <= 12) {
    std::vector<std::uint64_t> seen((std::size_t{1} << f.n()) / 64 + 1, 0);
    for (const auto& c : cyls) {
      const auto sets = h_materialize(c, std::int64_t{1} << 12);
      for (Mask m : *sets) {
        std::uint64_t& w = seen[m.bits >> 6];
        if ((w >> (m.bits & 63)) & 1u) {
          r.witnesses.push_back({c.level,
                                 {m},
                                 "materialized cylinders overlap on " + m.to_string()});
        }
        w |= std::uint64_t{1} << (m.bits & 63);
      }
    }
  }
  d.holds = d.lhs == d.rhs && r.witnesses.empty();
  r.holds = d.holds;
  r.details.push_back(std::move(d));
  return r;
}

// Inequality (4): t^i >= |F_i| at every level.
// Inequality (5): 2^(n-i) * |F \ (F_i u ... u F_n)| >= t^(i-1).
inline std::pair<ClaimResult, ClaimResult> check_theorem1(
    const Family& f, PreconditionPolicy policy = PreconditionPolicy::require) {
  detail::gate(f, policy);
  const BoundTrace tr = bound_trace(f, PreconditionPolicy::skip);
  const FrequencyVector freq = element_frequencies(f);
  ClaimResult r4, r5;
  r4.id = ClaimId::thm1_ineq4;
  r5.id = ClaimId::thm1_ineq5;
  r4.ran = r5.ran = true;
  r4.holds = r5.holds = true;
  for (int i = 1; i <= f.n(); ++i) {
    ClaimDetail d4;
    d4.index = i;
    d4.lhs = tr.t[static_cast<std::size_t>(i)];
    d4.rhs = freq[static_cast<std::size_t>(i - 1)];
    d4.holds = d4.lhs >= d4.rhs;
    if (!d4.holds) {
      r4.holds = false;
      r4.witnesses.push_back({i,
                              {},
                              "t^" + std::to_string(i) + " = " + std::to_string(d4.lhs) +
                                  " < " + std::to_string(d4.rhs) + " = |F_" +
                                  std::to_string(i) + "|"});
    }
    r4.details.push_back(std::move(d4));

    ClaimDetail d5;
    d5.index = i;
    d5.lhs = (std::int64_t{1} << (f.n() - i)) * detail::members_avoiding_from(f, i);
    d5.rhs = tr.t[static_cast<std::size_t>(i - 1)];
    d5.holds = d5.lhs >= d5.rhs;
    if (!d5.holds) {
      r5.holds = false;
      r5.witnesses.push_back({i,
                              {},
                              "2^(n-" + std::to_string(i) + ") * |F avoiding >= " +
                                  std::to_string(i) + "| = " + std::to_string(d5.lhs) +
                                  " < t^" + std::to_string(i - 1) + " = " +
                                  std::to_string(d5.rhs)});
    }
    r5.details.push_back(std::move(d5));
  }
  return {std::move(r4), std::move(r5)};
}

// |F| >= |F_{n-1}| + |F_n|.
inline ClaimResult check_frankl(const Family& f,
                                PreconditionPolicy policy = PreconditionPolicy::require) {
  detail::gate(f, policy);
  ClaimResult r;
  r.id = ClaimId::cor1_frankl;
  if (f.n() < 2) {
    r.skip_reason = "needs a ground set with at least two elements";
    return r;
  }
  r.ran = true;
  const FrequencyVector freq = element_frequencies(f);
  ClaimDetail d;
  d.lhs = f.size();
  d.rhs = freq[static_cast<std::size_t>(f.n() - 2)] +
          freq[static_cast<std::size_t>(f.n() - 1)];
  d.holds = d.lhs >= d.rhs;
  r.holds = d.holds;
  if (!d.holds)
    r.witnesses.push_back({f.n(),
                           {},
                           "|F| = " + std::to_string(d.lhs) + " < |F_{n-1}|+|F_n| = " +
                               std::to_string(d.rhs)});
  r.details.push_back(std::move(d));
  return r;
}

// Some element occurs in at most half the members: 2 * min_i |F_i| <= |F|.
// Under the canonical numbering the minimum is |F_n|.
inline ClaimResult check_rare_element(const Family& f) {
  ClaimResult r;
  r.id = ClaimId::rare_element;
  if (f.size() < 1) {
    r.skip_reason = "empty family";
    return r;
  }
  if (f.n() == 0 || (f.size() == 1 && f.sets()[0] == Mask::universe(f.n()))) {
    r.skip_reason = "family is {N}";
    return r;
  }
  r.ran = true;
  const FrequencyVector freq = element_frequencies(f);
  ClaimDetail d;
  d.lhs = 2 * detail::min_frequency(freq);
  d.rhs = f.size();
  d.holds = d.lhs <= d.rhs;
  r.holds = d.holds;
  if (!d.holds)
    r.witnesses.push_back({f.n(),
                           {},
                           "least frequent element occurs in more than half the members"});
  r.details.push_back(std::move(d));
  return r;
}

// Whenever |F \ (F_i u ... u F_n)| - |D_i| = |F_i \ (F_{i+1} u ... u F_n)|,
// every A within {1..i-1} with A u {i} in F is itself a member (the
// direction the counting identity actually forces). The details also record
// how the full biconditional fares: its forward direction fails exactly on
// the discarding sets of the level, and that is reported, not asserted.
inline ClaimResult check_lemma5(const Family& f,
                                PreconditionPolicy policy = PreconditionPolicy::require) {
  detail::gate(f, policy);
  ClaimResult r;
  r.id = ClaimId::lemma5;
  r.ran = true;
  r.holds = true;
  for (int i = 1; i <= f.n(); ++i) {
    const std::vector<Mask> ds = discarding_sets(f, i);
    ClaimDetail d;
    d.index = i;
    d.lhs = detail::members_avoiding_from(f, i) - static_cast<std::int64_t>(ds.size());
    d.rhs = detail::members_topped_by(f, i);
    if (d.lhs != d.rhs) {
      d.note = "condition not met";
      r.details.push_back(std::move(d));
      continue;
    }
    // Backward direction: members of F_i topped by i drop back into F.
    const Mask fixed = Mask::prefix(i);
    const Mask above = Mask::universe(f.n()) - fixed;
    bool backward = true;
    for (Mask m : f.sets())
      if (m.contains(i) && !m.intersects(above) && !f.contains(m.without(i))) {
        backward = false;
        r.witnesses.push_back({i,
                               {m},
                               m.to_string() + " is a member but " +
                                   m.without(i).to_string() + " is not"});
      }
    d.holds = backward;
    if (backward && ds.empty())
      d.note = "condition met; A <-> A u {i} holds for all A";
    else if (backward)
      d.note = "condition met; forward direction of A <-> A u {" + std::to_string(i) +
               "} fails for " + std::to_string(ds.size()) +
               " member(s), first " + ds.front().to_string();
    else
      d.note = "condition met; backward direction violated";
    r.holds = r.holds && d.holds;
    r.details.push_back(std::move(d));
  }
  return r;
}

struct BooleanDecomposition {
  Mask base;
  std::vector<Mask> blocks;  // pairwise disjoint, nonempty, ascending
};

// F = {base u (union of chosen blocks)} over all block subsets, with the
// blocks recovered as the equal-column classes of the covered elements.
inline std::optional<BooleanDecomposition> boolean_decomposition(const Family& f) {
  if (f.size() < 1) return std::nullopt;
  const Mask base = f.common_core();
  assert(f.contains(base));
  // Group covered non-base elements by identical member columns.
  std::vector<Mask> blocks;
  const FrequencyVector freq = element_frequencies(f);
  std::vector<bool> grouped(static_cast<std::size_t>(f.n()), false);
  for (int e = 1; e <= f.n(); ++e) {
    if (grouped[static_cast<std::size_t>(e - 1)] || base.contains(e) ||
        freq[static_cast<std::size_t>(e - 1)] == 0)
      continue;
    Mask block = Mask::single(e);
    for (int g = e + 1; g <= f.n(); ++g) {
      if (grouped[static_cast<std::size_t>(g - 1)] || base.contains(g) ||
          freq[static_cast<std::size_t>(g - 1)] == 0)
        continue;
      bool same = true;
      for (Mask m : f.sets())
        if (m.contains(e) != m.contains(g)) {
          same = false;
          break;
        }
      if (same) {
        block = block.with(g);
        grouped[static_cast<std::size_t>(g - 1)] = true;
      }
    }
    grouped[static_cast<std::size_t>(e - 1)] = true;
    blocks.push_back(block);
  }
  const int k = static_cast<int>(blocks.size());
  if (k > 62 || f.size() != (std::int64_t{1} << k)) return std::nullopt;
  for (Mask m : f.sets()) {
    if ((m & base) != base) return std::nullopt;
    Mask rest = m - base;
    for (Mask b : blocks) {
      if (rest.intersects(b)) {
        if (!b.subset_of(rest)) return std::nullopt;  // partial block
        rest = rest - b;
      }
    }
    if (!rest.empty()) return std::nullopt;  // stray elements
  }
  // Distinct members map to distinct block subsets; with |F| = 2^k the map
  // is onto, so every combination occurs.
  return BooleanDecomposition{base, std::move(blocks)};
}

inline bool is_boolean_algebra(const Family& f) {
  return boolean_decomposition(f).has_value();
}

// 2 * |F_n| = |F| compared against the decomposition test, both ways.
inline ClaimResult check_boolean_characterization(
    const Family& f, PreconditionPolicy policy = PreconditionPolicy::require) {
  detail::gate(f, policy);
  ClaimResult r;
  r.id = ClaimId::cor2_boolean;
  r.ran = true;
  const FrequencyVector freq = element_frequencies(f);
  const bool half = 2 * detail::min_frequency(freq) == f.size();
  const auto decomp = boolean_decomposition(f);
  ClaimDetail d;
  d.lhs = half ? 1 : 0;
  d.rhs = decomp ? 1 : 0;
  d.holds = half == decomp.has_value();
  if (decomp) {
    d.note = "B0=" + decomp->base.to_string() + "; blocks=";
    for (std::size_t i = 0; i < decomp->blocks.size(); ++i)
      d.note += (i ? "," : "") + decomp->blocks[i].to_string();
    if (decomp->blocks.empty()) d.note += "(none)";
  }
  r.holds = d.holds;
  if (!d.holds)
    r.witnesses.push_back({0,
                           {},
                           half ? "2|F_n| = |F| but no Boolean decomposition exists"
                                : "family is a Boolean algebra but 2|F_n| != |F|"});
  r.details.push_back(std::move(d));
  return r;
}

// Under 2|F_n| = |F|: 2^(n-k) * |F \ (F_k u ... u F_n)| = t^(k-1) for
// every k = n..1.
inline ClaimResult check_equ3(const Family& f,
                              PreconditionPolicy policy = PreconditionPolicy::require) {
  detail::gate(f, policy);
  ClaimResult r;
  r.id = ClaimId::equ3_chain;
  const FrequencyVector freq = element_frequencies(f);
  if (f.size() < 1 || 2 * detail::min_frequency(freq) != f.size()) {
    r.skip_reason = "premise 2|F_n| = |F| not met";
    return r;
  }
  r.ran = true;
  r.holds = true;
  const BoundTrace tr = bound_trace(f, PreconditionPolicy::skip);
  for (int k = f.n(); k >= 1; --k) {
    ClaimDetail d;
    d.index = k;
    d.lhs = (std::int64_t{1} << (f.n() - k)) * detail::members_avoiding_from(f, k);
    d.rhs = tr.t[static_cast<std::size_t>(k - 1)];
    d.holds = d.lhs == d.rhs;
    if (!d.holds) {
      r.holds = false;
      r.witnesses.push_back({k,
                             {},
                             "2^(n-k)*|F avoiding >= k| = " + std::to_string(d.lhs) +
                                 " != t^" + std::to_string(k - 1) + " = " +
                                 std::to_string(d.rhs)});
    }
    r.details.push_back(std::move(d));
  }
  return r;
}

}  // namespace icf
