#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "icf/family.hpp"

namespace icf {

inline constexpr int kNaiveEnumerateMaxN = 4;
inline constexpr int kEnumerateMaxN = 5;

// Characteristic vector of the family over the 2^n subset lattice:
// bit m is set iff mask m is a member. Defined for n <= 6.
inline std::uint64_t family_encoding_bits(const Family& f) {
  if (f.n() > 6) throw LimitError("family encoding only defined for n <= 6");
  std::uint64_t enc = 0;
  for (Mask m : f.sets()) enc |= std::uint64_t{1} << m.bits;
  return enc;
}

// Lowercase hex rendering of the characteristic vector, fixed width
// ceil(2^n / 4) so encodings of one ground set align.
inline std::string family_hex_encoding(const Family& f) {
  const std::uint64_t enc = family_encoding_bits(f);
  const int digits = std::max(1, (1 << f.n()) / 4);
  std::string out(static_cast<std::size_t>(digits), '0');
  for (int d = 0; d < digits; ++d) {
    const unsigned nib = static_cast<unsigned>(enc >> (4 * (digits - 1 - d))) & 0xF;
    out[static_cast<std::size_t>(d)] = "0123456789abcdef"[nib];
  }
  return out;
}

inline Family family_from_encoding(int n, std::uint64_t enc) {
  std::vector<Mask> sets;
  for (std::uint64_t rest = enc; rest != 0; rest &= rest - 1)
    sets.push_back(Mask{static_cast<std::uint32_t>(std::countr_zero(rest))});
  return Family::closed_unchecked(n, std::move(sets));
}

// Scan all 2^(2^n) candidate subfamilies of the subset lattice and visit
// the intersection-closed ones, in ascending characteristic order.
// The independent oracle the pruned enumerator is checked against.
template <class Visitor>
std::int64_t naive_enumerate(int n, Visitor&& visit) {
  if (n < 1 || n > kNaiveEnumerateMaxN)
    throw LimitError("naive enumeration supports 1 <= n <= " +
                     std::to_string(kNaiveEnumerateMaxN));
  const int lattice = 1 << n;
  std::int64_t count = 0;
  for (std::uint64_t enc = 0; enc < (std::uint64_t{1} << lattice); ++enc) {
    std::vector<std::uint32_t> members;
    for (std::uint64_t rest = enc; rest != 0; rest &= rest - 1)
      members.push_back(static_cast<std::uint32_t>(std::countr_zero(rest)));
    bool closed = true;
    for (std::size_t i = 0; i < members.size() && closed; ++i)
      for (std::size_t j = 0; j <= i; ++j)
        if (!((enc >> (members[i] & members[j])) & 1u)) {
          closed = false;
          break;
        }
    if (!closed) continue;
    ++count;
    visit(family_from_encoding(n, enc));
  }
  return count;
}

namespace detail {

// Backtracking state: masks are decided in descending numeric order, so
// every intersection of already-included masks lands strictly below the
// cursor and can be recorded as a demand that forces inclusion later.
struct EnumShard {
  int next_value = 0;            // next mask value to decide (counting down)
  std::vector<Mask> included;    // descending
  std::uint64_t demands = 0;     // bit v: mask v must be included
};

inline void include_mask(EnumShard& s, std::uint32_t v) {
  s.demands &= ~(std::uint64_t{1} << v);
  for (Mask m : s.included) {
    const std::uint32_t d = m.bits & v;
    if (d != v) s.demands |= std::uint64_t{1} << d;
  }
  s.included.push_back(Mask{v});
}

// Iterative DFS, exclude branch first.
template <class Visitor>
void enumerate_from(int n, EnumShard state, Visitor&& visit) {
  std::vector<EnumShard> stack;
  stack.push_back(std::move(state));
  while (!stack.empty()) {
    EnumShard cur = std::move(stack.back());
    stack.pop_back();
    for (;;) {
      if (cur.next_value < 0) {
        visit(Family::closed_unchecked(n, cur.included));
        break;
      }
      const std::uint32_t v = static_cast<std::uint32_t>(cur.next_value);
      const bool forced = (cur.demands >> v) & 1u;
      --cur.next_value;
      if (forced) {
        include_mask(cur, v);
      } else {
        EnumShard inc = cur;
        include_mask(inc, v);
        stack.push_back(std::move(inc));  // deferred; cur goes on excluding v
      }
    }
  }
}

// Expand the decision tree for the top `depth` mask values; the leaves are
// disjoint deterministic shards covering the whole space, listed in the
// same DFS order enumerate_from uses.
inline std::vector<EnumShard> make_shards(int n, int depth) {
  const int lattice = 1 << n;
  std::vector<EnumShard> shards;
  std::vector<EnumShard> work;
  work.push_back(EnumShard{lattice - 1, {}, 0});
  while (!work.empty()) {
    EnumShard cur = std::move(work.back());
    work.pop_back();
    if (cur.next_value < lattice - depth) {
      shards.push_back(std::move(cur));
      continue;
    }
    const std::uint32_t v = static_cast<std::uint32_t>(cur.next_value);
    const bool forced = (cur.demands >> v) & 1u;
    EnumShard inc = cur;
    --inc.next_value;
    include_mask(inc, v);
    if (!forced) {
      EnumShard exc = std::move(cur);
      --exc.next_value;
      work.push_back(std::move(inc));   // popped after exc: exclude-first order
      work.push_back(std::move(exc));
    } else {
      work.push_back(std::move(inc));
    }
  }
  return shards;
}

inline int default_shard_depth(int n) {
  // Enough shards to keep workers busy and checkpoints granular.
  const int lattice = 1 << n;
  if (n >= 5) return 12;
  return lattice < 8 ? lattice : 8;
}

}  // namespace detail

struct EnumFilters {
  bool preconditions_only = false;  // canonical relabeling passes the preconditions
  bool require_empty_set = false;

  bool admits(const Family& f) const {
    if (require_empty_set && !f.contains(Mask::empty_set())) return false;
    if (preconditions_only &&
        !check_preconditions(canonical_relabel(f).family).pass())
      return false;
    return true;
  }
};

// Visit every intersection-closed family over {1..n} passing the filters
// exactly once, in a fixed deterministic order; single-threaded. Visits the
// exact same family set as naive_enumerate where both are defined.
template <class Visitor>
std::int64_t enumerate_closed(int n, Visitor&& visit, EnumFilters filters = {}) {
  if (n < 1 || n > kEnumerateMaxN)
    throw LimitError("exhaustive enumeration supports 1 <= n <= " +
                     std::to_string(kEnumerateMaxN));
  std::int64_t count = 0;
  auto counting = [&](const Family& f) {
    if (!filters.admits(f)) return;
    ++count;
    visit(f);
  };
  for (const auto& shard : detail::make_shards(n, detail::default_shard_depth(n)))
    detail::enumerate_from(n, shard, counting);
  return count;
}

// Intersection closure of `generator_count` masks drawn independently and
// uniformly from the subset lattice. Same (n, count, seed) always yields
// the same family, on every platform.
inline Family random_closed(int n, int generator_count, std::uint64_t seed) {
  detail::require_ground_set(n);
  if (generator_count < 0) throw InputError("generator count must be nonnegative");
  std::mt19937_64 rng(seed);
  std::vector<Mask> gens;
  detail::MemberIndex seen(n);
  for (int i = 0; i < generator_count; ++i) {
    const Mask m{static_cast<std::uint32_t>(rng() & Mask::universe(n).bits)};
    if (!seen.contains(m)) {
      seen.insert(m);
      gens.push_back(m);
    }
  }
  return intersection_closure(RawFamily{n, std::move(gens)});
}

// Stream seed for one logical sample of a mining run (splitmix64 step).
inline std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace icf
