#include <catch2/catch_amalgamated.hpp>

#include "icf/enumerate.hpp"
#include "icf/family.hpp"
#include "helpers.hpp"
#include "naive_oracle.hpp"

using icf::Family;
using icf::Mask;
using icf::RawFamily;
using testutil::fam;
using testutil::raw;

TEST_CASE("mask primitives") {
  const Mask m = Mask::of({1, 3});
  CHECK(m.contains(1));
  CHECK_FALSE(m.contains(2));
  CHECK(m.count() == 2);
  CHECK(m.min_element() == 1);
  CHECK(m.max_element() == 3);
  CHECK((m & Mask::of({3})) == Mask::of({3}));
  CHECK((m | Mask::of({2})) == Mask::of({1, 2, 3}));
  CHECK((m - Mask::of({1})) == Mask::of({3}));
  CHECK(Mask::of({3}).subset_of(m));
  CHECK(Mask::prefix(2) == Mask::of({1, 2}));
  CHECK(Mask::empty_set().to_string() == "{}");
  CHECK(m.to_string() == "{1,3}");
  CHECK(m.elements() == std::vector<int>{1, 3});
}

TEST_CASE("raw family validation") {
  CHECK_THROWS_AS(raw(0, {}), icf::InputError);
  CHECK_THROWS_AS(raw(25, {}), icf::InputError);
  CHECK_THROWS_AS(raw(2, {{1}, {1}}), icf::InputError);
  CHECK_THROWS_AS(raw(2, {{3}}), icf::InputError);
  CHECK_NOTHROW(raw(2, {{}, {1}, {2}, {1, 2}}));
}

TEST_CASE("closure of the two-set generator") {
  const Family c = icf::intersection_closure(raw(3, {{1, 2}, {2, 3}}));
  CHECK(c == fam(3, {{2}, {1, 2}, {2, 3}}));
}

TEST_CASE("closure of nothing is nothing") {
  const Family c = icf::intersection_closure(raw(3, {}));
  CHECK(c.size() == 0);
  CHECK(c.n() == 3);
}

TEST_CASE("chains are already closed") {
  const RawFamily chain = raw(2, {{}, {1}, {1, 2}});
  const Family c = icf::intersection_closure(chain);
  CHECK(c == fam(2, {{}, {1}, {1, 2}}));
}

TEST_CASE("closure equals the naive fixpoint, is idempotent and minimal") {
  // Every subfamily of the n <= 3 lattice.
  for (int n = 1; n <= 3; ++n) {
    const int lattice = 1 << n;
    // All closed families, for the minimality quantifier.
    std::vector<std::uint64_t> closed_encodings;
    icf::enumerate_closed(n, [&](const Family& f) {
      closed_encodings.push_back(icf::family_encoding_bits(f));
    });
    for (std::uint64_t enc = 0; enc < (std::uint64_t{1} << lattice); ++enc) {
      std::vector<Mask> sets;
      for (int v = 0; v < lattice; ++v)
        if ((enc >> v) & 1u) sets.push_back(Mask{static_cast<std::uint32_t>(v)});
      const Family c = icf::intersection_closure(RawFamily{n, sets});
      const std::vector<Mask> expect = naive::closure_fixpoint(n, sets);
      REQUIRE(c.sets() == expect);
      // Idempotence.
      const Family c2 = icf::intersection_closure(RawFamily{n, c.sets()});
      CHECK(c2 == c);
      // Minimality: every closed superfamily of the input contains c.
      const std::uint64_t cenc = icf::family_encoding_bits(c);
      for (std::uint64_t t : closed_encodings)
        if ((t & enc) == enc) CHECK((t & cenc) == cenc);
    }
  }
}

TEST_CASE("closedness witness") {
  CHECK(icf::is_intersection_closed(raw(2, {{}, {1}, {2}, {1, 2}})));
  CHECK(icf::is_intersection_closed(raw(1, {{}})));
  const auto v = icf::closure_violation(raw(3, {{1, 2}, {2, 3}}));
  REQUIRE(v.has_value());
  CHECK((v->a & v->b) == Mask::of({2}));
  CHECK_FALSE(icf::is_intersection_closed(raw(3, {{1, 2}, {2, 3}})));
}

TEST_CASE("element frequencies") {
  CHECK(icf::element_frequencies(fam(3, {{}, {1}, {1, 2}, {1, 2, 3}})) ==
        icf::FrequencyVector{3, 2, 1});
  CHECK(icf::element_frequencies(fam(2, {{}, {1}, {2}, {1, 2}})) ==
        icf::FrequencyVector{2, 2});
  CHECK(icf::element_frequencies(fam(2, {{}})) == icf::FrequencyVector{0, 0});
}

TEST_CASE("frequency sum equals total element occurrences") {
  icf::enumerate_closed(3, [](const Family& f) {
    std::int64_t total = 0;
    for (Mask m : f.sets()) total += m.count();
    const auto freq = icf::element_frequencies(f);
    std::int64_t sum = 0;
    for (auto v : freq) sum += v;
    CHECK(sum == total);
  });
}

TEST_CASE("canonical relabel sorts frequencies, stable on ties") {
  SECTION("descending frequency relabel") {
    const auto rl = icf::canonical_relabel(fam(3, {{}, {2}, {2, 3}, {1, 2, 3}}));
    CHECK(rl.family == fam(3, {{}, {1}, {1, 2}, {1, 2, 3}}));
    CHECK(rl.perm == std::vector<int>{3, 1, 2});  // 1->3, 2->1, 3->2
  }
  SECTION("already ordered keeps identity") {
    const Family f = fam(3, {{}, {1}, {1, 2}, {1, 2, 3}});
    const auto rl = icf::canonical_relabel(f);
    CHECK(rl.family == f);
    CHECK(rl.perm == icf::identity_permutation(3));
  }
  SECTION("ties keep original order") {
    const Family f = fam(2, {{}, {1}, {2}});
    const auto rl = icf::canonical_relabel(f);
    CHECK(rl.family == f);
    CHECK(rl.perm == icf::identity_permutation(2));
  }
}

TEST_CASE("relabel preserves size, closedness and the size multiset") {
  icf::enumerate_closed(3, [](const Family& f) {
    const auto rl = icf::canonical_relabel(f);
    CHECK(rl.family.size() == f.size());
    CHECK(testutil::sorted_sizes(rl.family) == testutil::sorted_sizes(f));
    const auto freq = icf::element_frequencies(rl.family);
    for (std::size_t i = 0; i + 1 < freq.size(); ++i) CHECK(freq[i] >= freq[i + 1]);
    CHECK(icf::is_intersection_closed(RawFamily{rl.family.n(), rl.family.sets()}));
  });
}

TEST_CASE("apply_permutation validates its argument") {
  const Family f = fam(2, {{}, {1}});
  CHECK_THROWS_AS(icf::apply_permutation(f, {1}), icf::InputError);
  CHECK_THROWS_AS(icf::apply_permutation(f, {1, 1}), icf::InputError);
  CHECK_THROWS_AS(icf::apply_permutation(f, {0, 1}), icf::InputError);
  CHECK(icf::apply_permutation(f, {2, 1}) == fam(2, {{}, {2}}));
}

TEST_CASE("preconditions on the running examples") {
  SECTION("chain passes everything") {
    const auto r = icf::check_preconditions(fam(3, {{}, {1}, {1, 2}, {1, 2, 3}}));
    CHECK(r.ordered);
    CHECK(r.f1_proper);
    CHECK(r.pairwise_distinct);
    CHECK(r.empty_in_f);
    CHECK(r.pass());
    CHECK(r.failures.empty());
  }
  SECTION("universal element 1 breaks F_1 != F") {
    const auto r = icf::check_preconditions(fam(2, {{1}, {1, 2}}));
    CHECK_FALSE(r.f1_proper);
    CHECK_FALSE(r.pass());
  }
  SECTION("co-occurring elements break pairwise distinctness") {
    const auto r = icf::check_preconditions(fam(3, {{}, {1, 2}, {1, 2, 3}}));
    CHECK_FALSE(r.pairwise_distinct);
    CHECK(r.f1_proper);
    CHECK_FALSE(r.pass());
  }
}

TEST_CASE("ordering plus F_1 != F force the empty set into closed families") {
  for (int n = 1; n <= 4; ++n)
    icf::enumerate_closed(n, [](const Family& f) {
      const auto r = icf::check_preconditions(f);
      CHECK(r.implication_ok);
      if (r.ordered && r.f1_proper) CHECK(r.empty_in_f);
    });
}

TEST_CASE("reduction drops a universal element") {
  const auto rr = icf::reduce_family(fam(2, {{1}, {1, 2}}));
  CHECK(rr.family == fam(1, {{}, {1}}));
  REQUIRE(rr.steps.size() == 1);
  CHECK(rr.steps[0].kind == icf::ReductionStep::Kind::remove_universal);
  CHECK(rr.steps[0].element == 1);
  CHECK(rr.label_map == std::vector<int>{0, 1});
}

TEST_CASE("reduction merges co-occurring elements") {
  const auto rr = icf::reduce_family(fam(3, {{}, {1, 2}, {1, 2, 3}}));
  CHECK(rr.family == fam(2, {{}, {1}, {1, 2}}));
  REQUIRE(rr.steps.size() == 1);
  CHECK(rr.steps[0].kind == icf::ReductionStep::Kind::merge);
  CHECK(rr.steps[0].element == 2);
  CHECK(rr.steps[0].into == 1);
  CHECK(rr.label_map == std::vector<int>{1, 0, 2});
}

TEST_CASE("the one-member family collapses to the empty ground set") {
  const auto rr = icf::reduce_family(fam(2, {{1, 2}}));
  CHECK(rr.family.n() == 0);
  CHECK(rr.family.size() == 1);
  CHECK(rr.family.sets()[0] == Mask::empty_set());
  CHECK(rr.label_map == std::vector<int>{0, 0});
}

TEST_CASE("large ground sets fall back to hashed membership") {
  // n = 22 exceeds the bit-table ceiling of 20.
  std::vector<Mask> chain;
  Mask cur;
  chain.push_back(cur);
  for (int e = 1; e <= 22; ++e) {
    cur = cur.with(e);
    chain.push_back(cur);
  }
  const Family f = Family::validated(RawFamily::from_sets(22, chain));
  CHECK(f.size() == 23);
  CHECK(f.contains(Mask::prefix(17)));
  CHECK_FALSE(f.contains(Mask::of({2})));
  CHECK(icf::element_frequencies(f)[0] == 22);
  CHECK(icf::check_preconditions(f).pass());
  const Family c = icf::random_closed(24, 8, 11);
  CHECK(icf::is_intersection_closed(RawFamily{c.n(), c.sets()}));
}

TEST_CASE("reduction output has no universal element and no equal columns") {
  for (int n = 1; n <= 3; ++n)
    icf::enumerate_closed(n, [](const Family& f) {
      const auto rr = icf::reduce_family(f);
      CHECK(rr.family.size() == f.size());
      if (rr.family.n() == 0) return;
      const auto pre = icf::check_preconditions(rr.family);
      CHECK(pre.f1_proper);
      CHECK(pre.pairwise_distinct);
      // Idempotent.
      const auto again = icf::reduce_family(rr.family);
      CHECK(again.family == rr.family);
      CHECK(again.steps.empty());
    });
}
