#include "helpers.hpp"

#include "hfree/errors.hpp"
#include "hfree/oracle.hpp"
#include "hfree/patterns.hpp"

#include <doctest.h>

using namespace hfree;

namespace {

// Strict 2-balance straight from the definition: every vertex subset S with
// 3 <= |S| < v spans at most as many edges as needed for a smaller 2-density.
bool brute_strictly_2_balanced(const Pattern& p) {
  const int v = p.vertex_count();
  if (v < 3 || p.edge_count() < 3) return false;
  const Rational d2(p.edge_count() - 1, v - 2);
  for (std::uint32_t mask = 0; mask < (1u << v) - 1; ++mask) {
    const int size = __builtin_popcount(mask);
    if (size < 3) continue;
    int e = 0;
    for (const auto& edge : p.edges()) e += ((mask >> edge.a) & 1) && ((mask >> edge.b) & 1);
    if (e == 0) continue;
    if (!(Rational(e - 1, size - 2) < d2)) return false;
  }
  return true;
}

} // namespace

TEST_CASE("parse_pattern families") {
  const auto c3 = parse_pattern("C3");
  CHECK(c3.vertex_count() == 3);
  CHECK(c3.edge_count() == 3);
  const auto k4 = parse_pattern("K4");
  CHECK(k4.vertex_count() == 4);
  CHECK(k4.edge_count() == 6);
  const auto k33 = parse_pattern("K3,3");
  CHECK(k33.vertex_count() == 6);
  CHECK(k33.edge_count() == 9);
  const auto q3 = parse_pattern("Q3");
  CHECK(q3.vertex_count() == 8);
  CHECK(q3.edge_count() == 12);
  const auto path = parse_pattern("edges: 1-2, 2-3");
  CHECK(path.vertex_count() == 3);
  CHECK(path.edge_count() == 2);

  CHECK_THROWS_AS(parse_pattern("C2"), InvalidArgument);
  CHECK_THROWS_AS(parse_pattern("X7"), InvalidArgument);
  CHECK_THROWS_AS(parse_pattern("edges:"), InvalidArgument);
  CHECK_THROWS_AS(parse_pattern("edges: 1-1"), InvalidArgument);
}

TEST_CASE("automorphism counts") {
  CHECK(count_automorphisms(parse_pattern("C3")) == 6);
  CHECK(count_automorphisms(parse_pattern("K4")) == 24);
  // Oracle: all 4! vertex maps.
  CHECK(oracle::naive_automorphisms(parse_pattern("C4")) == 8);
  CHECK(count_automorphisms(parse_pattern("C4")) == 8);
  for (const char* spec : {"C5", "C6", "C7", "K5", "K2,3", "K3,3", "Q3", "K1,4", "edges: 1-2,2-3,3-1,3-4"}) {
    const auto p = parse_pattern(spec);
    CAPTURE(spec);
    CHECK(p.aut() == oracle::naive_automorphisms(p));
  }
  CHECK(parse_pattern("Q3").aut() == 48);
  CHECK(parse_pattern("K6").aut() == 720);
}

TEST_CASE("2-density and strict balance") {
  CHECK(density_2(parse_pattern("C3")) == Rational(2));
  CHECK(density_2(parse_pattern("K4")) == Rational(5, 2));
  CHECK(density_2(parse_pattern("C4")) == Rational(3, 2));
  CHECK_THROWS_AS(density_2(parse_pattern("edges: 1-2")), InvalidArgument);

  CHECK(is_strictly_2_balanced(parse_pattern("C5")));
  CHECK(is_strictly_2_balanced(parse_pattern("K4")));
  const auto pendant = parse_pattern("edges: 1-2,2-3,3-1,3-4");
  CHECK_FALSE(is_strictly_2_balanced(pendant));
  CHECK_FALSE(brute_strictly_2_balanced(pendant));
  // The triangle inside has 2-density 2 > 3/2.
  CHECK(density_2(pendant) == Rational(3, 2));

  for (const char* spec : {"C3", "C4", "C5", "C8", "K4", "K5", "K2,3", "K3,3", "Q3", "K1,3", "edges: 1-2,2-3,3-4,4-1,1-3",
                           "edges: 1-2,2-3,3-1,4-5,5-6,6-4,1-4"}) {
    const auto p = parse_pattern(spec);
    CAPTURE(spec);
    CHECK(is_strictly_2_balanced(p) == brute_strictly_2_balanced(p));
  }
}

TEST_CASE("forbidden pattern requirements") {
  CHECK_NOTHROW(require_forbidden_pattern(parse_pattern("C3")));
  CHECK_NOTHROW(require_forbidden_pattern(parse_pattern("Q3")));
  CHECK_THROWS_AS(require_forbidden_pattern(parse_pattern("edges: 1-2,2-3,3-1,3-4")), InvalidArgument);
  CHECK_THROWS_AS(require_forbidden_pattern(parse_pattern("edges: 1-2,2-3,3-1,4-5,5-6,6-4")), InvalidArgument);
  CHECK_THROWS_AS(require_forbidden_pattern(parse_pattern("edges: 1-2")), InvalidArgument);
}

TEST_CASE("maximum density") {
  CHECK(max_density(testutil::complete(4)).density == Rational(3, 2));
  CHECK(max_density(testutil::cycle(5)).density == Rational(1));
  const auto pet = max_density(testutil::petersen());
  CHECK(pet.density == Rational(3, 2));
  CHECK(pet.witness.size() == 10);
  CHECK(oracle::naive_max_density(testutil::petersen()).density == Rational(3, 2));
  CHECK(max_density(parse_pattern("K4")).density == Rational(3, 2));
  CHECK(max_density(parse_pattern("C5")).density == Rational(1));

  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto g = testutil::random_graph(11 + seed % 8, 150 + 10 * (seed % 60), seed);
    const std::optional<std::uint32_t> cap =
        seed % 3 == 0 ? std::nullopt : std::optional<std::uint32_t>(2 + seed % 7);
    const auto fast = max_density(g, cap);
    const auto slow = oracle::naive_max_density(g, cap);
    CAPTURE(seed);
    CHECK(fast.density == slow.density);
    CHECK(fast.witness == slow.witness);
  }
  CHECK_THROWS_AS(max_density(SimpleGraph::new_empty(30)), SizeLimitExceeded);
}

TEST_CASE("embeddings") {
  const auto c3 = parse_pattern("C3");
  CHECK(count_embeddings(c3, testutil::complete(4)) == 24);
  CHECK(oracle::naive_count_embeddings(c3, testutil::complete(4)) == 24);
  CHECK(enumerate_embeddings(c3, testutil::cycle(5)).empty());
  const auto edge = parse_pattern("edges: 1-2");
  CHECK(count_embeddings(edge, testutil::graph(5, {{1, 2}, {2, 3}, {4, 5}})) == 6);

  const auto anchored = enumerate_embeddings(c3, testutil::complete(4), std::make_pair(c3.edges()[0], std::make_pair(0u, 1u)));
  CHECK(anchored.size() == 4);
  for (const auto& emb : anchored) {
    const Vertex a = emb[c3.edges()[0].a], b = emb[c3.edges()[0].b];
    CHECK(std::min(a, b) == 0);
    CHECK(std::max(a, b) == 1);
  }

  CHECK_FALSE(contains_copy(c3, testutil::graph(3, {{1, 2}, {2, 3}})));
  CHECK(contains_copy(c3, testutil::complete(3)));
  CHECK(contains_copy(parse_pattern("C4"), testutil::complete(4)));

  CHECK(oracle::naive_count_copies(c3, testutil::complete(4)) == 4);
  CHECK(oracle::naive_count_copies(parse_pattern("C5"), testutil::petersen()) == 12);
  CHECK(count_copies(parse_pattern("C5"), testutil::petersen()) == 12);
}

TEST_CASE("closure templates") {
  const auto c3 = closure_templates(parse_pattern("C3"));
  REQUIRE(c3.size() == 1);
  CHECK(c3[0].base.vertex_count() == 3);
  CHECK(c3[0].base.edge_count() == 2);
  CHECK_FALSE(c3[0].base.has_edge(c3[0].missing_pair.a, c3[0].missing_pair.b));
  CHECK(c3[0].base.degree(c3[0].missing_pair.a) == 1);
  CHECK(c3[0].base.degree(c3[0].missing_pair.b) == 1);

  const auto k4 = closure_templates(parse_pattern("K4"));
  REQUIRE(k4.size() == 1);
  CHECK(k4[0].base.edge_count() == 5);

  const auto c5 = closure_templates(parse_pattern("C5"));
  REQUIRE(c5.size() == 1);
  CHECK(c5[0].base.edge_count() == 4);
  CHECK(max_density(c5[0].base).density == Rational(4, 5));

  CHECK(closure_templates(parse_pattern("K2,3")).size() == 1);
  // Wheel on a 5-cycle: spokes and rim form two edge orbits.
  const auto wheel = parse_pattern("edges: 1-2,1-3,1-4,1-5,1-6,2-3,3-4,4-5,5-6,6-2");
  REQUIRE(brute_strictly_2_balanced(wheel));
  CHECK(closure_templates(wheel).size() == 2);
  CHECK_THROWS_AS(closure_templates(parse_pattern("edges: 1-2,2-3,3-1,3-4")), InvalidArgument);

  for (const char* spec : {"C3", "C4", "C5", "K4", "Q3", "K3,3", "edges: 1-2,1-3,1-4,1-5,1-6,2-3,3-4,4-5,5-6,6-2"}) {
    const auto h = parse_pattern(spec);
    for (const auto& t : closure_templates(h)) {
      CAPTURE(spec);
      CHECK(t.base.edge_count() == h.edge_count() - 1);
      CHECK_FALSE(t.anchor_roles.empty());
      for (const auto& role : t.anchor_roles) CHECK(t.base.has_edge(role.a, role.b));
    }
  }
}
