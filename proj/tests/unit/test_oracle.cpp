#include "helpers.hpp"

#include "hfree/errors.hpp"
#include "hfree/oracle.hpp"
#include "hfree/patterns.hpp"

#include <doctest.h>

#include <algorithm>

using namespace hfree;

TEST_CASE("naive closed set") {
  const auto c3 = parse_pattern("C3");
  CHECK(oracle::naive_closed_set(testutil::graph(3, {{1, 2}, {2, 3}}), c3) ==
        std::vector<PairId>{pair_index(0, 2, 3)});
  CHECK(oracle::naive_closed_set(SimpleGraph::new_empty(6), c3).empty());

  // A chord of a 5-cycle only creates 3- and 4-cycles, never a 5-cycle
  // through the chord.
  const auto c5 = parse_pattern("C5");
  CHECK(oracle::naive_closed_set(testutil::cycle(5), c5).empty());
  // On a 6-cycle the pairs at distance 2 have a 4-path the other way round.
  const auto closed = oracle::naive_closed_set(testutil::cycle(6), c5);
  std::vector<PairId> want;
  for (Vertex v = 0; v < 6; ++v) want.push_back(pair_index(v, (v + 2) % 6, 6));
  std::sort(want.begin(), want.end());
  CHECK(closed == want);
  CHECK_THROWS_AS(oracle::naive_closed_set(SimpleGraph::new_empty(26), c3), SizeLimitExceeded);
}

TEST_CASE("naive classes and maximality") {
  const auto c3 = parse_pattern("C3");
  const auto star = testutil::graph(4, {{1, 2}, {1, 3}, {1, 4}});
  const auto cls = oracle::naive_classes(star, c3);
  CHECK(std::count(cls.begin(), cls.end(), PairClass::Edge) == 3);
  CHECK(std::count(cls.begin(), cls.end(), PairClass::Closed) == 3);
  CHECK(oracle::naive_is_maximal_h_free(star, c3));
  CHECK(oracle::naive_is_maximal_h_free(testutil::cycle(4), c3));
  CHECK_FALSE(oracle::naive_is_maximal_h_free(testutil::graph(4, {{1, 2}, {3, 4}}), c3));
  CHECK_FALSE(oracle::naive_is_maximal_h_free(testutil::complete(4), c3));
}

TEST_CASE("naive max density") {
  CHECK(oracle::naive_max_density(testutil::complete(4)).density == Rational(3, 2));
  const auto star = testutil::graph(6, {{1, 2}, {1, 3}, {1, 4}, {1, 5}, {1, 6}});
  const auto s = oracle::naive_max_density(star);
  CHECK(s.density == Rational(5, 6));
  CHECK(s.witness.size() == 6);
  CHECK(oracle::naive_max_density(SimpleGraph::new_empty(3)).density == Rational(0));
  CHECK(oracle::naive_max_density(star, 3).density == Rational(2, 3));
  CHECK_THROWS_AS(oracle::naive_max_density(SimpleGraph::new_empty(30)), SizeLimitExceeded);
  CHECK_NOTHROW(oracle::naive_max_density(SimpleGraph::new_empty(30), 4));
  CHECK_THROWS_AS(oracle::naive_max_density(SimpleGraph::new_empty(61), 4), SizeLimitExceeded);
}

TEST_CASE("naive copy counts") {
  CHECK(oracle::naive_count_copies(parse_pattern("C3"), testutil::complete(4)) == 4);
  CHECK(oracle::naive_count_copies(parse_pattern("C5"), testutil::petersen()) == 12);
  const auto g = testutil::random_graph(9, 400, 11);
  CHECK(oracle::naive_count_copies(parse_pattern("edges: 1-2"), g) == g.edge_count());
  CHECK(oracle::naive_count_copies(parse_pattern("C4"), testutil::complete(4)) == 3);
  CHECK_THROWS_AS(oracle::naive_count_copies(parse_pattern("C7"), testutil::complete(7)), SizeLimitExceeded);
}

TEST_CASE("fast counts agree with the oracle") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto g = testutil::random_graph(10, 200 + 15 * seed, seed);
    for (const char* spec : {"C3", "C4", "C5", "K4", "K2,3", "K1,3", "edges: 1-2,2-3,3-4"}) {
      const auto p = parse_pattern(spec);
      CAPTURE(seed);
      CAPTURE(spec);
      CHECK(count_copies(p, g) == oracle::naive_count_copies(p, g));
      CHECK(contains_copy(p, g) == oracle::naive_contains_copy(p, g));
    }
  }
}
