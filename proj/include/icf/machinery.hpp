#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "icf/family.hpp"

namespace icf {

enum class PreconditionPolicy { require, skip };

inline void require_level(const Family& f, int level) {
  if (level < 1 || level > f.n())
    throw InputError("level out of range: " + std::to_string(level) +
                     " not in [1," + std::to_string(f.n()) + "]");
}

// A member A of F with A within {1..i-1} and A u {i} not in F, together
// with its root (if any extension exists) and the exact size of the
// exclusion set it certifies absent.
struct DiscardingRecord {
  int level = 0;
  Mask a;
  std::optional<int> root;
  std::int64_t h_size = 0;
};

// Symbolic form of one exclusion set: all supersets prefix u X with
// X within {level+1..n}, minus those containing the forbidden element.
// All coordinates in {1..level} are fixed by the prefix.
struct ExclusionCylinder {
  int n = 0;
  int level = 0;
  Mask prefix;                   // a u {level}
  std::optional<int> forbidden;  // the root, when present

  std::int64_t cardinality() const {
    const int free = n - level - (forbidden ? 1 : 0);
    return std::int64_t{1} << free;
  }
};

inline constexpr std::int64_t kDefaultMaterializeBudget = std::int64_t{1} << 20;

// Members A of F with A within {1..i-1} whose extension by i leaves F,
// in ascending mask order.
inline std::vector<Mask> discarding_sets(const Family& f, int level) {
  require_level(f, level);
  std::vector<Mask> out;
  const Mask bound = Mask::prefix(level - 1);
  for (Mask a : f.sets()) {
    if (a > bound) break;  // ascending order: subsets of {1..i-1} come first
    if (!f.contains(a.with(level))) out.push_back(a);
  }
  return out;
}

// All X within {level+1..n} with a u {level} u X a member, ascending.
// Meaningful for any family; ordering preconditions are not consulted.
inline std::vector<Mask> extensions(const Family& f, Mask a, int level) {
  require_level(f, level);
  assert(a.subset_of(Mask::prefix(level - 1)));
  const Mask fixed = Mask::prefix(level);
  const Mask target = a.with(level);
  std::vector<Mask> out;
  for (Mask b : f.sets())
    if ((b & fixed) == target) out.push_back(b - fixed);
  return out;
}

inline bool is_discarding(const Family& f, Mask a, int level) {
  return a.subset_of(Mask::prefix(level - 1)) && f.contains(a) &&
         !f.contains(a.with(level));
}

// The minimum element common to all extensions, or nullopt when no
// extension exists. Closedness makes the common intersection nonempty:
// the intersection of all a u {level} u X is a member and cannot equal
// a u {level}.
inline std::optional<int> root_of(const Family& f, Mask a, int level) {
  require_level(f, level);
  if (!is_discarding(f, a, level))
    throw InputError("set " + a.to_string() + " is not discarding at level " +
                     std::to_string(level));
  const std::vector<Mask> exts = extensions(f, a, level);
  if (exts.empty()) return std::nullopt;
  Mask common = Mask::universe(f.n());
  for (Mask x : exts) common = common & x;
  assert(!common.empty());
  return common.min_element();
}

inline ExclusionCylinder h_cylinder(const Family& f, Mask a, int level) {
  return ExclusionCylinder{f.n(), level, a.with(level), root_of(f, a, level)};
}

// Explicit member list of the cylinder, ascending; nullopt when the
// cardinality exceeds the budget (the cylinder stays symbolic).
inline std::optional<std::vector<Mask>> h_materialize(
    const ExclusionCylinder& c, std::int64_t budget = kDefaultMaterializeBudget) {
  if (c.cardinality() > budget) return std::nullopt;
  Mask free = Mask::universe(c.n) - Mask::prefix(c.level);
  if (c.forbidden) free = free.without(*c.forbidden);
  std::vector<Mask> out;
  out.reserve(static_cast<std::size_t>(c.cardinality()));
  std::uint32_t sub = free.bits;
  for (;;) {
    out.push_back(Mask{c.prefix.bits | sub});
    if (sub == 0) break;
    sub = (sub - 1) & free.bits;
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Symbolic emptiness test of the denoted intersection. Two cylinders
// meet iff their fixed coordinates agree on the overlap and neither
// forbidden element is forced by the other's prefix; the deeper prefix
// itself is then a common set.
inline bool cylinders_disjoint(const ExclusionCylinder& c1,
                               const ExclusionCylinder& c2) {
  assert(c1.n == c2.n);
  const ExclusionCylinder& lo = c1.level <= c2.level ? c1 : c2;
  const ExclusionCylinder& hi = c1.level <= c2.level ? c2 : c1;
  if ((hi.prefix & Mask::prefix(lo.level)) != lo.prefix) return true;
  if (lo.forbidden && hi.prefix.contains(*lo.forbidden)) return true;
  // hi.forbidden exceeds hi.level, so it cannot lie in either prefix.
  return false;
}

struct LevelRecords {
  int level = 0;
  std::vector<DiscardingRecord> records;
  std::int64_t excluded = 0;  // sum of h_size over the level
};

// t[0] = 2^(n-1); t[i] = t[i-1] minus the total exclusion size at level i.
struct BoundTrace {
  int n = 0;
  std::vector<std::int64_t> t;
  std::vector<LevelRecords> levels;

  std::int64_t total_records() const {
    std::int64_t c = 0;
    for (const auto& lv : levels) c += static_cast<std::int64_t>(lv.records.size());
    return c;
  }
  std::int64_t rooted_records() const {
    std::int64_t c = 0;
    for (const auto& lv : levels)
      for (const auto& rec : lv.records) c += rec.root ? 1 : 0;
    return c;
  }
};

inline BoundTrace bound_trace(const Family& f,
                              PreconditionPolicy policy = PreconditionPolicy::require) {
  if (f.n() < 1) throw InputError("bound trace needs a nonempty ground set");
  if (policy == PreconditionPolicy::require && !check_preconditions(f).pass())
    throw InputError("family does not satisfy the ordering preconditions");
  BoundTrace tr;
  tr.n = f.n();
  tr.t.assign(static_cast<std::size_t>(f.n()) + 1, 0);
  tr.t[0] = std::int64_t{1} << (f.n() - 1);
  for (int i = 1; i <= f.n(); ++i) {
    LevelRecords lv;
    lv.level = i;
    for (Mask a : discarding_sets(f, i)) {
      DiscardingRecord rec;
      rec.level = i;
      rec.a = a;
      rec.root = root_of(f, a, i);
      rec.h_size = ExclusionCylinder{f.n(), i, a.with(i), rec.root}.cardinality();
      lv.excluded += rec.h_size;
      lv.records.push_back(rec);
    }
    tr.t[static_cast<std::size_t>(i)] = tr.t[static_cast<std::size_t>(i - 1)] - lv.excluded;
    tr.levels.push_back(std::move(lv));
  }
  return tr;
}

}  // namespace icf
