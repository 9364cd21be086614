#include "helpers.hpp"

#include "hfree/errors.hpp"
#include "hfree/graph.hpp"

#include <doctest.h>

#include <set>
#include <sstream>

using namespace hfree;

TEST_CASE("empty graphs") {
  const auto g = SimpleGraph::new_empty(5);
  CHECK(g.edge_count() == 0);
  for (Vertex v = 0; v < 5; ++v) CHECK(g.degree(v) == 0);
  CHECK(SimpleGraph::new_empty(1).n() == 1);
  CHECK_THROWS_AS(SimpleGraph::new_empty(0), InvalidArgument);
  CHECK_THROWS_AS(SimpleGraph::new_empty(kMaxVertices + 1), InvalidArgument);
}

TEST_CASE("path degrees") {
  const auto g = testutil::graph(3, {{1, 2}, {2, 3}});
  CHECK(g.degree(0) == 1);
  CHECK(g.degree(1) == 2);
  CHECK(g.degree(2) == 1);
  CHECK(g.max_degree() == 2);
}

TEST_CASE("add_edge rejects loops, duplicates and bad vertices") {
  auto g = SimpleGraph::new_empty(4);
  g.add_edge(0, 1);
  CHECK(g.edge_count() == 1);
  CHECK_THROWS_AS(g.add_edge(0, 1), InvalidArgument);
  CHECK_THROWS_AS(g.add_edge(1, 0), InvalidArgument);
  CHECK_THROWS_AS(g.add_edge(2, 2), InvalidArgument);
  CHECK_THROWS_AS(g.add_edge(0, 4), InvalidArgument);
  CHECK(g.edge_count() == 1);
}

TEST_CASE("induced edge counts") {
  const auto k4 = testutil::complete(4);
  const std::vector<Vertex> all{0, 1, 2, 3}, one{0};
  CHECK(k4.induced_edge_count(all) == 6);
  CHECK(k4.induced_edge_count(one) == 0);
  const auto c5 = testutil::cycle(5);
  const std::vector<Vertex> seg{0, 1, 2};
  CHECK(c5.induced_edge_count(seg) == 2);
  const std::vector<Vertex> dup{0, 1, 1, 2};
  CHECK(c5.induced_edge_count(dup) == 2);
}

TEST_CASE("pair index is a bijection") {
  std::set<PairId> ids;
  for (Vertex u = 0; u < 4; ++u)
    for (Vertex v = u + 1; v < 4; ++v) {
      const auto id = pair_index(u, v, 4);
      CHECK(id < 6);
      ids.insert(id);
    }
  CHECK(ids.size() == 6);
  CHECK(pair_index(1, 0, 4) == pair_index(0, 1, 4));
  for (PairId id = 0; id < pair_count(10); ++id) {
    const auto [u, v] = pair_from_index(id, 10);
    CHECK(u < v);
    CHECK(pair_index(u, v, 10) == id);
  }
  const std::uint32_t big = 65536;
  for (PairId id : {PairId{0}, PairId{65534}, PairId{65535}, static_cast<PairId>(pair_count(big) - 1)}) {
    const auto [u, v] = pair_from_index(id, big);
    CHECK(pair_index(u, v, big) == id);
  }
  CHECK_THROWS_AS(pair_index(2, 2, 4), InvalidArgument);
  CHECK_THROWS_AS(pair_index(0, 4, 4), InvalidArgument);
}

TEST_CASE("edge list round trip") {
  const auto g = testutil::petersen();
  std::stringstream ss;
  write_edge_list(ss, g);
  const auto back = read_edge_list(ss);
  CHECK(back == g);

  std::istringstream in("# comment\n# n=6\n1 2\n\n2 3\n");
  const auto h = read_edge_list(in);
  CHECK(h.n() == 6);
  CHECK(h.edge_count() == 2);
  CHECK(h.has_edge(1, 2));

  std::istringstream bad("1 1\n");
  CHECK_THROWS_AS(read_edge_list(bad), InvalidArgument);
}

TEST_CASE("neighbors and rows agree") {
  const auto g = testutil::random_graph(130, 300, 7);
  for (Vertex v = 0; v < g.n(); ++v) {
    std::vector<Vertex> from_row;
    for_each_bit(g.row(v), [&](Vertex u) { from_row.push_back(u); });
    CHECK(from_row == g.neighbors(v));
    CHECK(from_row.size() == g.degree(v));
  }
}
