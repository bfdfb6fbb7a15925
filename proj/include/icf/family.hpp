#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "icf/errors.hpp"
#include "icf/mask.hpp"

namespace icf {

namespace detail {

// O(1) membership over the 2^n subset lattice. Bit table up to n = 20,
// hash set beyond (2^n bits would start to hurt per-family allocations
// in sweeps long before correctness does).
inline constexpr int kSmallTableMaxN = 6;
inline constexpr int kTableMaxN = 20;

class MemberIndex {
public:
  MemberIndex() = default;
  explicit MemberIndex(int n) : n_(n) {
    if (n_ > kSmallTableMaxN && n_ <= kTableMaxN)
      table_.assign((std::size_t{1} << n_) / 64 + 1, 0);
  }

  void insert(Mask m) {
    if (n_ <= kSmallTableMaxN) {
      small_ |= std::uint64_t{1} << m.bits;
    } else if (n_ <= kTableMaxN) {
      table_[m.bits >> 6] |= std::uint64_t{1} << (m.bits & 63);
    } else {
      hash_.insert(m.bits);
    }
  }

  bool contains(Mask m) const {
    if (n_ <= kSmallTableMaxN) return (small_ >> m.bits) & 1u;
    if (n_ <= kTableMaxN) return (table_[m.bits >> 6] >> (m.bits & 63)) & 1u;
    return hash_.contains(m.bits);
  }

private:
  int n_ = 0;
  std::uint64_t small_ = 0;
  std::vector<std::uint64_t> table_;
  std::unordered_set<std::uint32_t> hash_;
};

inline void require_ground_set(int n) {
  if (n < 1 || n > kMaxGroundSetSize)
    throw InputError("ground-set size out of supported range [1," +
                     std::to_string(kMaxGroundSetSize) +
                     "]: " + std::to_string(n));
}

}  // namespace detail

// A duplicate-free collection of subsets of {1..n}, not necessarily closed.
// This is the only input container; Family (below) is produced from it by
// intersection_closure or by the validating constructor.
struct RawFamily {
  int n = 0;
  std::vector<Mask> sets;

  static RawFamily from_sets(int n, std::vector<Mask> sets) {
    detail::require_ground_set(n);
    const Mask uni = Mask::universe(n);
    std::vector<Mask> sorted = sets;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (!sorted[i].subset_of(uni))
        throw InputError("set " + sorted[i].to_string() +
                         " has elements outside {1.." + std::to_string(n) + "}");
      if (i > 0 && sorted[i] == sorted[i - 1])
        throw InputError("duplicate set " + sorted[i].to_string());
    }
    return RawFamily{n, std::move(sets)};
  }
};

// A witnessed closure violation: a & b is missing from the family.
struct ClosureViolation {
  Mask a, b;
};

// An intersection-closed family over {1..n}: sorted, duplicate-free member
// list plus an O(1) membership index. Immutable after construction; the
// only producers are intersection_closure and the validating factory.
class Family {
public:
  Family() = default;

  // Validates closedness; throws InputError with a witness pair otherwise.
  static Family validated(const RawFamily& raw) {
    Family f = assemble(raw.n, raw.sets);
    for (std::size_t i = 0; i < f.sets_.size(); ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        const Mask d = f.sets_[i] & f.sets_[j];
        if (!f.contains(d))
          throw InputError("family is not intersection-closed: " +
                           f.sets_[i].to_string() + " \xE2\x88\xA9 " +
                           f.sets_[j].to_string() + " = " + d.to_string() +
                           " is missing");
      }
    return f;
  }

  // For constructions that are closed by design (closure output, relabelings,
  // reductions, enumerator leaves). Checked only via assertions.
  static Family closed_unchecked(int n, std::vector<Mask> sets) {
    Family f = assemble(n, std::move(sets));
#ifndef NDEBUG
    for (std::size_t i = 0; i < f.sets_.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        assert(f.contains(f.sets_[i] & f.sets_[j]));
#endif
    return f;
  }

  int n() const { return n_; }
  std::int64_t size() const { return static_cast<std::int64_t>(sets_.size()); }
  const std::vector<Mask>& sets() const { return sets_; }
  bool contains(Mask m) const { return index_.contains(m); }
  bool operator==(const Family& o) const { return n_ == o.n_ && sets_ == o.sets_; }

  // Intersection of all members; only defined for nonempty families.
  Mask common_core() const {
    assert(!sets_.empty());
    Mask acc = Mask::universe(n_);
    for (Mask m : sets_) acc = acc & m;
    return acc;
  }

private:
  static Family assemble(int n, std::vector<Mask> sets) {
    if (n != 0) detail::require_ground_set(n);
    Family f;
    f.n_ = n;
    f.sets_ = std::move(sets);
    std::sort(f.sets_.begin(), f.sets_.end());
    f.sets_.erase(std::unique(f.sets_.begin(), f.sets_.end()), f.sets_.end());
    const Mask uni = Mask::universe(n);
    for (Mask m : f.sets_)
      if (!m.subset_of(uni))
        throw InputError("set " + m.to_string() + " has elements outside {1.." +
                         std::to_string(n) + "}");
    f.index_ = detail::MemberIndex(n);
    for (Mask m : f.sets_) f.index_.insert(m);
    return f;
  }

  int n_ = 0;
  std::vector<Mask> sets_;
  detail::MemberIndex index_;
};

// counts[i-1] = |F_i|, the number of members containing element i.
using FrequencyVector = std::vector<std::int64_t>;

inline FrequencyVector element_frequencies(const Family& f) {
  FrequencyVector counts(static_cast<std::size_t>(f.n()), 0);
  for (Mask m : f.sets())
    for (std::uint32_t rest = m.bits; rest != 0; rest &= rest - 1)
      ++counts[static_cast<std::size_t>(std::countr_zero(rest))];
  return counts;
}

// Smallest intersection-closed superfamily of the input (pairwise fixpoint).
inline Family intersection_closure(const RawFamily& input) {
  detail::require_ground_set(input.n);
  detail::MemberIndex seen(input.n);
  std::vector<Mask> all;
  all.reserve(input.sets.size());
  for (Mask m : input.sets) {
    if (!m.subset_of(Mask::universe(input.n)))
      throw InputError("set " + m.to_string() + " has elements outside {1.." +
                       std::to_string(input.n) + "}");
    if (!seen.contains(m)) {
      seen.insert(m);
      all.push_back(m);
    }
  }
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const Mask d = all[i] & all[j];
      if (!seen.contains(d)) {
        seen.insert(d);
        all.push_back(d);
      }
    }
  return Family::closed_unchecked(input.n, std::move(all));
}

// First violating pair in sorted scan order, or nullopt if closed.
inline std::optional<ClosureViolation> closure_violation(const RawFamily& input) {
  detail::require_ground_set(input.n);
  std::vector<Mask> sorted = input.sets;
  std::sort(sorted.begin(), sorted.end());
  detail::MemberIndex seen(input.n);
  for (Mask m : sorted) seen.insert(m);
  for (std::size_t i = 0; i < sorted.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j)
      if (!seen.contains(sorted[i] & sorted[j]))
        return ClosureViolation{sorted[j], sorted[i]};
  return std::nullopt;
}

inline bool is_intersection_closed(const RawFamily& input) {
  return !closure_violation(input).has_value();
}

struct RelabelResult {
  Family family;
  // perm[e-1] is the new label of original element e.
  std::vector<int> perm;
};

inline Family apply_permutation(const Family& f, const std::vector<int>& perm) {
  const int n = f.n();
  if (static_cast<int>(perm.size()) != n)
    throw InputError("permutation must list all of 1.." + std::to_string(n));
  std::vector<bool> hit(static_cast<std::size_t>(n), false);
  for (int img : perm) {
    if (img < 1 || img > n || hit[static_cast<std::size_t>(img - 1)])
      throw InputError("not a permutation of 1.." + std::to_string(n));
    hit[static_cast<std::size_t>(img - 1)] = true;
  }
  std::vector<Mask> remapped;
  remapped.reserve(f.sets().size());
  for (Mask m : f.sets()) {
    Mask out;
    for (int e : m.elements()) out = out.with(perm[static_cast<std::size_t>(e - 1)]);
    remapped.push_back(out);
  }
  return Family::closed_unchecked(n, std::move(remapped));
}

// Relabel elements so frequencies are nonincreasing. Ties keep the original
// order (stable), so the result is deterministic.
inline RelabelResult canonical_relabel(const Family& f) {
  const int n = f.n();
  const FrequencyVector freq = element_frequencies(f);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return freq[static_cast<std::size_t>(a - 1)] > freq[static_cast<std::size_t>(b - 1)];
  });
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int pos = 0; pos < n; ++pos)
    perm[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)] - 1)] = pos + 1;
  return RelabelResult{apply_permutation(f, perm), std::move(perm)};
}

inline std::vector<int> identity_permutation(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 1);
  return p;
}

struct PreconditionReport {
  bool ordered = false;            // |F_1| >= ... >= |F_n|
  bool f1_proper = false;          // F_1 != F
  bool pairwise_distinct = false;  // F_i != F_j as collections for i != j
  bool empty_in_f = false;         // {} is a member
  // false only if the derived implication (ordered + f1_proper + closedness
  // force the empty set into F) failed; cannot happen for a valid Family.
  bool implication_ok = true;
  std::vector<std::string> failures;

  bool pass() const {
    return ordered && f1_proper && pairwise_distinct && empty_in_f;
  }
};

inline PreconditionReport check_preconditions(const Family& f) {
  PreconditionReport r;
  const int n = f.n();
  if (n == 0) {
    r.ordered = true;
    r.pairwise_distinct = true;
    r.empty_in_f = f.contains(Mask::empty_set());
    r.failures.push_back("ground set is empty (n=0)");
    return r;
  }
  const FrequencyVector freq = element_frequencies(f);
  r.ordered = true;
  for (int i = 0; i + 1 < n; ++i)
    if (freq[static_cast<std::size_t>(i)] < freq[static_cast<std::size_t>(i + 1)]) {
      r.ordered = false;
      r.failures.push_back("frequencies not nonincreasing: |F_" + std::to_string(i + 1) +
                           "| = " + std::to_string(freq[static_cast<std::size_t>(i)]) +
                           " < |F_" + std::to_string(i + 2) +
                           "| = " + std::to_string(freq[static_cast<std::size_t>(i + 1)]));
      break;
    }
  r.f1_proper = freq[0] < f.size();
  if (f.size() == 0)
    r.failures.push_back("family is empty: F_1 = F");
  else if (!r.f1_proper)
    r.failures.push_back("F_1 = F: element 1 occurs in every member");
  r.pairwise_distinct = true;
  for (int i = 1; i <= n && r.pairwise_distinct; ++i)
    for (int j = i + 1; j <= n; ++j) {
      bool equal = true;
      for (Mask m : f.sets())
        if (m.contains(i) != m.contains(j)) {
          equal = false;
          break;
        }
      if (equal) {
        r.pairwise_distinct = false;
        r.failures.push_back("F_" + std::to_string(i) + " = F_" + std::to_string(j) +
                             ": elements co-occur in every member");
        break;
      }
    }
  r.empty_in_f = f.contains(Mask::empty_set());
  if (r.ordered && r.f1_proper && !r.empty_in_f) {
    r.implication_ok = false;
    r.failures.push_back(
        "empty set missing although ordering, F_1 != F and closedness imply it");
  }
  return r;
}

struct ReductionStep {
  enum class Kind { remove_universal, merge };
  Kind kind;
  int element = 0;  // original label of the removed/merged element
  int into = 0;     // original label of the representative (merge only)
};

struct ReduceResult {
  Family family;
  std::vector<ReductionStep> steps;
  // label_map[e-1] = final label of original element e, or 0 if removed.
  std::vector<int> label_map;
};

// Quotient out universal elements and duplicated element columns until the
// family satisfies F_1 != F and F_i != F_j, or collapses to n' = 0.
inline ReduceResult reduce_family(const Family& f) {
  ReduceResult out;
  Family cur = f;
  // original_of[c-1] = original label carried by current label c.
  std::vector<int> original_of(static_cast<std::size_t>(f.n()));
  std::iota(original_of.begin(), original_of.end(), 1);

  for (;;) {
    const int n = cur.n();
    if (n == 0) break;
    std::vector<bool> drop(static_cast<std::size_t>(n), false);
    // (a) elements contained in every member (vacuously all, when empty).
    Mask universal = Mask::universe(n);
    for (Mask m : cur.sets()) universal = universal & m;
    if (cur.size() == 0) universal = Mask::universe(n);
    for (int e : universal.elements()) {
      drop[static_cast<std::size_t>(e - 1)] = true;
      out.steps.push_back({ReductionStep::Kind::remove_universal,
                           original_of[static_cast<std::size_t>(e - 1)], 0});
    }
    // (b) merge j into i when the member columns of i and j coincide.
    if (universal.empty()) {
      for (int i = 1; i <= n; ++i) {
        if (drop[static_cast<std::size_t>(i - 1)]) continue;
        for (int j = i + 1; j <= n; ++j) {
          if (drop[static_cast<std::size_t>(j - 1)]) continue;
          bool equal = true;
          for (Mask m : cur.sets())
            if (m.contains(i) != m.contains(j)) {
              equal = false;
              break;
            }
          if (equal) {
            drop[static_cast<std::size_t>(j - 1)] = true;
            out.steps.push_back({ReductionStep::Kind::merge,
                                 original_of[static_cast<std::size_t>(j - 1)],
                                 original_of[static_cast<std::size_t>(i - 1)]});
          }
        }
      }
    }
    if (std::none_of(drop.begin(), drop.end(), [](bool b) { return b; })) break;
    // Compact surviving labels to {1..n'} preserving relative order.
    std::vector<int> new_label(static_cast<std::size_t>(n), 0);
    std::vector<int> next_original;
    int next = 0;
    for (int e = 1; e <= n; ++e)
      if (!drop[static_cast<std::size_t>(e - 1)]) {
        new_label[static_cast<std::size_t>(e - 1)] = ++next;
        next_original.push_back(original_of[static_cast<std::size_t>(e - 1)]);
      }
    std::vector<Mask> remapped;
    remapped.reserve(cur.sets().size());
    for (Mask m : cur.sets()) {
      Mask r;
      for (int e : m.elements())
        if (int nl = new_label[static_cast<std::size_t>(e - 1)]; nl != 0) r = r.with(nl);
      remapped.push_back(r);
    }
    cur = Family::closed_unchecked(next, std::move(remapped));
    original_of = std::move(next_original);
  }

  out.label_map.assign(static_cast<std::size_t>(f.n()), 0);
  for (int c = 1; c <= cur.n(); ++c)
    out.label_map[static_cast<std::size_t>(original_of[static_cast<std::size_t>(c - 1)] - 1)] = c;
  out.family = std::move(cur);
  return out;
}

}  // namespace icf
