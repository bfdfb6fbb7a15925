#pragma once

#include <bit>
#include <cassert>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace icf {

// Largest supported ground set. One subset always fits a 32-bit word.
inline constexpr int kMaxGroundSetSize = 24;

// One subset of the ground set {1..n}. Element e lives at bit e-1; all
// element-facing APIs speak 1-based labels, bit positions stay internal.
struct Mask {
  std::uint32_t bits = 0;

  constexpr Mask() = default;
  constexpr explicit Mask(std::uint32_t b) : bits(b) {}

  static constexpr Mask empty_set() { return Mask{0}; }
  static constexpr Mask single(int e) {
    return Mask{std::uint32_t{1} << (e - 1)};
  }
  // {1,..,i}; prefix(0) is the empty set.
  static constexpr Mask prefix(int i) {
    return Mask{i <= 0 ? 0u : (i >= 32 ? ~0u : ((std::uint32_t{1} << i) - 1u))};
  }
  static constexpr Mask universe(int n) { return prefix(n); }
  static Mask of(std::initializer_list<int> elems) {
    Mask m;
    for (int e : elems) m = m.with(e);
    return m;
  }

  constexpr bool empty() const { return bits == 0; }
  constexpr int count() const { return std::popcount(bits); }
  constexpr bool contains(int e) const { return (bits >> (e - 1)) & 1u; }
  constexpr Mask with(int e) const { return Mask{bits | single(e).bits}; }
  constexpr Mask without(int e) const { return Mask{bits & ~single(e).bits}; }
  constexpr bool subset_of(Mask o) const { return (bits & o.bits) == bits; }
  constexpr bool intersects(Mask o) const { return (bits & o.bits) != 0; }
  // Smallest element; the mask must be nonempty.
  constexpr int min_element() const {
    assert(bits != 0);
    return std::countr_zero(bits) + 1;
  }
  constexpr int max_element() const {
    assert(bits != 0);
    return 32 - std::countl_zero(bits);
  }

  friend constexpr Mask operator&(Mask a, Mask b) { return Mask{a.bits & b.bits}; }
  friend constexpr Mask operator|(Mask a, Mask b) { return Mask{a.bits | b.bits}; }
  // Set difference.
  friend constexpr Mask operator-(Mask a, Mask b) { return Mask{a.bits & ~b.bits}; }
  friend constexpr bool operator==(Mask a, Mask b) = default;
  friend constexpr auto operator<=>(Mask a, Mask b) { return a.bits <=> b.bits; }

  std::vector<int> elements() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(count()));
    for (std::uint32_t rest = bits; rest != 0; rest &= rest - 1)
      out.push_back(std::countr_zero(rest) + 1);
    return out;
  }

  // "{}", "{2}", "{1,3,4}", ...
  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (int e : elements()) {
      if (!first) s += ',';
      s += std::to_string(e);
      first = false;
    }
    s += '}';
    return s;
  }
};

}  // namespace icf
