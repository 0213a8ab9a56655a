// Randomized property suites, 1000 cases each with fixed seeds.
#include <doctest.h>

#include "support.hpp"

TEST_SUITE("properties") {
  TEST_CASE("subtype partial-order laws") {
    auto r = mmtest::prop_subtype_laws(101, 1000);
    CHECK_MESSAGE(r.ok(), r.firstFailure);
    CHECK(r.cases >= 1000);
  }
  TEST_CASE("super_type upper bound") {
    auto r = mmtest::prop_super_type_upper_bound(102, 1000);
    CHECK_MESSAGE(r.ok(), r.firstFailure);
  }
  TEST_CASE("union normalization idempotence") {
    auto r = mmtest::prop_union_normalization(103, 1000);
    CHECK_MESSAGE(r.ok(), r.firstFailure);
  }
  TEST_CASE("combine/specialize algebra") {
    auto r = mmtest::prop_combine_specialize(104, 1000);
    CHECK_MESSAGE(r.ok(), r.firstFailure);
  }
  TEST_CASE("parser round trip on the corpus and random programs") {
    auto r = mmtest::prop_parser_round_trip(105, 1000);
    CHECK_MESSAGE(r.ok(), r.firstFailure);
    CHECK(r.cases > 1000);
  }
  TEST_CASE("branch merge is a supertype of every branch") {
    auto r = mmtest::prop_branch_merge(106, 1000);
    CHECK_MESSAGE(r.ok(), r.firstFailure);
  }
  TEST_CASE("loops leave the environment unchanged") {
    auto r = mmtest::prop_loop_fixed_point(107, 1000);
    CHECK_MESSAGE(r.ok(), r.firstFailure);
  }
  TEST_CASE("errors are absorbing") {
    auto r = mmtest::prop_error_absorption(108, 1000);
    CHECK_MESSAGE(r.ok(), r.firstFailure);
  }
}
