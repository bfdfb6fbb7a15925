// Straight-from-the-definition evaluators used to cross-check the library.
// Everything here works on a plain mask list with linear scans and full
// 2^k subset enumerations; nothing reuses the library's sorted prefixes,
// membership indexes, or cylinder arithmetic.
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "icf/family.hpp"

namespace naive {

using icf::Mask;

inline bool member(const std::vector<Mask>& fam, Mask m) {
  for (Mask s : fam)
    if (s == m) return true;
  return false;
}

inline std::vector<Mask> closure_fixpoint(int n, std::vector<Mask> sets) {
  (void)n;
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  for (;;) {
    bool grew = false;
    const std::vector<Mask> snapshot = sets;
    for (Mask a : snapshot)
      for (Mask b : snapshot)
        if (!member(sets, a & b)) {
          sets.push_back(a & b);
          grew = true;
        }
    if (!grew) break;
  }
  std::sort(sets.begin(), sets.end());
  return sets;
}

// All subsets of {1..i-1} that are members and lose membership when i joins.
inline std::vector<Mask> discarding(const std::vector<Mask>& fam, int i) {
  std::vector<Mask> out;
  const std::uint32_t limit = Mask::prefix(i - 1).bits;
  for (std::uint32_t a = 0;; ++a) {
    const Mask cand{a & limit};
    if (cand.bits == a && member(fam, cand) && !member(fam, cand.with(i)))
      out.push_back(cand);
    if (a == limit) break;
  }
  return out;
}

inline std::vector<Mask> extensions(const std::vector<Mask>& fam, int n, Mask a,
                                    int i) {
  std::vector<Mask> out;
  const std::uint32_t high = (Mask::universe(n) - Mask::prefix(i)).bits;
  for (std::uint32_t x = 0;; ++x) {
    const Mask cand{x & high};
    if (cand.bits == x && member(fam, Mask{a.bits} | Mask::single(i) | cand))
      out.push_back(cand);
    if (x == high) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::optional<int> root(const std::vector<Mask>& fam, int n, Mask a, int i) {
  const std::vector<Mask> exts = extensions(fam, n, a, i);
  if (exts.empty()) return std::nullopt;
  Mask common = Mask::universe(n);
  for (Mask x : exts) common = common & x;
  return common.min_element();
}

// The excluded supersets, materialized literally from the case split.
inline std::vector<Mask> h_sets(const std::vector<Mask>& fam, int n, Mask a, int i) {
  const std::optional<int> r = root(fam, n, a, i);
  const std::uint32_t high = (Mask::universe(n) - Mask::prefix(i)).bits;
  std::vector<Mask> out;
  for (std::uint32_t x = 0;; ++x) {
    if ((x & high) == x) {
      const Mask ext{x};
      if (!r || !ext.contains(*r)) out.push_back(a | Mask::single(i) | ext);
    }
    if (x == high) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::int64_t> trace_t(const std::vector<Mask>& fam, int n) {
  std::vector<std::int64_t> t(static_cast<std::size_t>(n) + 1);
  t[0] = std::int64_t{1} << (n - 1);
  for (int i = 1; i <= n; ++i) {
    std::int64_t excluded = 0;
    for (Mask a : discarding(fam, i))
      excluded += static_cast<std::int64_t>(h_sets(fam, n, a, i).size());
    t[static_cast<std::size_t>(i)] = t[static_cast<std::size_t>(i - 1)] - excluded;
  }
  return t;
}

inline std::int64_t frequency(const std::vector<Mask>& fam, int e) {
  std::int64_t c = 0;
  for (Mask m : fam)
    if (m.contains(e)) ++c;
  return c;
}

// |F \ (F_from u ... u F_n)|.
inline std::int64_t avoiding_from(const std::vector<Mask>& fam, int n, int from) {
  std::int64_t c = 0;
  for (Mask m : fam) {
    bool hit = false;
    for (int e = from; e <= n; ++e)
      if (m.contains(e)) hit = true;
    if (!hit) ++c;
  }
  return c;
}

// |F_i \ (F_{i+1} u ... u F_n)|.
inline std::int64_t topped_by(const std::vector<Mask>& fam, int n, int i) {
  std::int64_t c = 0;
  for (Mask m : fam) {
    if (!m.contains(i)) continue;
    bool hit = false;
    for (int e = i + 1; e <= n; ++e)
      if (m.contains(e)) hit = true;
    if (!hit) ++c;
  }
  return c;
}

// Boolean-algebra test by materialization: group the covered non-core
// elements into equal-column classes, then explicitly build all block
// unions and compare the resulting family with F.
inline bool boolean_by_materialization(const std::vector<Mask>& fam, int n) {
  if (fam.empty()) return false;
  Mask base = Mask::universe(n);
  for (Mask m : fam) base = base & m;
  if (!member(fam, base)) return false;
  std::vector<Mask> blocks;
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (int e = 1; e <= n; ++e) {
    if (used[static_cast<std::size_t>(e - 1)] || base.contains(e) ||
        frequency(fam, e) == 0)
      continue;
    Mask blk = Mask::single(e);
    for (int g = e + 1; g <= n; ++g) {
      if (used[static_cast<std::size_t>(g - 1)] || base.contains(g) ||
          frequency(fam, g) == 0)
        continue;
      bool same = true;
      for (Mask m : fam)
        if (m.contains(e) != m.contains(g)) same = false;
      if (same) {
        blk = blk.with(g);
        used[static_cast<std::size_t>(g - 1)] = true;
      }
    }
    used[static_cast<std::size_t>(e - 1)] = true;
    blocks.push_back(blk);
  }
  if (blocks.size() > 20) return false;
  std::vector<Mask> built;
  for (std::uint32_t choice = 0; choice < (std::uint32_t{1} << blocks.size());
       ++choice) {
    Mask m = base;
    for (std::size_t b = 0; b < blocks.size(); ++b)
      if ((choice >> b) & 1u) m = m | blocks[b];
    built.push_back(m);
  }
  std::sort(built.begin(), built.end());
  built.erase(std::unique(built.begin(), built.end()), built.end());
  std::vector<Mask> sorted = fam;
  std::sort(sorted.begin(), sorted.end());
  return built == sorted;
}

}  // namespace naive
