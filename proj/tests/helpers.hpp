#pragma once

#include <initializer_list>
#include <vector>

#include "icf/family.hpp"

namespace testutil {

inline icf::RawFamily raw(int n,
                          std::initializer_list<std::initializer_list<int>> sets) {
  std::vector<icf::Mask> ms;
  for (const auto& s : sets) ms.push_back(icf::Mask::of(s));
  return icf::RawFamily::from_sets(n, std::move(ms));
}

inline icf::Family fam(int n,
                       std::initializer_list<std::initializer_list<int>> sets) {
  return icf::Family::validated(raw(n, sets));
}

inline std::vector<int> sorted_sizes(const icf::Family& f) {
  std::vector<int> out;
  for (icf::Mask m : f.sets()) out.push_back(m.count());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace testutil
