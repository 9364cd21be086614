#include "hfree/graph.hpp"

#include "hfree/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace hfree {

namespace {

std::uint64_t row_start(std::uint64_t u, std::uint64_t n) { return u * n - u * (u + 1) / 2; }

} // namespace

PairId pair_index(Vertex u, Vertex v, std::uint32_t n) {
  if (u == v) throw InvalidArgument("pair_index: u == v");
  if (u >= n || v >= n) throw InvalidArgument("pair_index: vertex out of range");
  if (u > v) std::swap(u, v);
  return static_cast<PairId>(row_start(u, n) + (v - u - 1));
}

std::pair<Vertex, Vertex> pair_from_index(PairId id, std::uint32_t n) {
  if (id >= pair_count(n)) throw InvalidArgument("pair_from_index: id out of range");
  // Largest u with row_start(u) <= id, seeded from the closed form and fixed up.
  const double nn = static_cast<double>(n);
  const double disc = (2 * nn - 1) * (2 * nn - 1) - 8.0 * static_cast<double>(id);
  auto u = static_cast<std::int64_t>(std::floor(((2 * nn - 1) - std::sqrt(std::max(disc, 0.0))) / 2));
  u = std::clamp<std::int64_t>(u, 0, n - 2);
  while (u > 0 && row_start(u, n) > id) --u;
  while (u + 1 <= static_cast<std::int64_t>(n) - 2 && row_start(u + 1, n) <= id) ++u;
  const auto v = id - row_start(u, n) + u + 1;
  return {static_cast<Vertex>(u), static_cast<Vertex>(v)};
}

SimpleGraph::SimpleGraph(std::uint32_t n)
    : n_(n), words_(words_for(n)), rows_(static_cast<std::size_t>(n) * words_for(n), 0), degrees_(n, 0) {}

SimpleGraph SimpleGraph::new_empty(std::uint32_t n) {
  if (n == 0) throw InvalidArgument("graph needs at least one vertex");
  if (n > kMaxVertices) throw InvalidArgument("graph too large: n > " + std::to_string(kMaxVertices));
  return SimpleGraph(n);
}

std::uint32_t SimpleGraph::max_degree() const {
  return degrees_.empty() ? 0 : *std::max_element(degrees_.begin(), degrees_.end());
}

void SimpleGraph::add_edge(Vertex u, Vertex v) {
  if (u >= n_ || v >= n_) throw InvalidArgument("add_edge: vertex out of range");
  if (u == v) throw InvalidArgument("add_edge: self-loop " + std::to_string(u + 1));
  if (has_edge(u, v))
    throw InvalidArgument("add_edge: duplicate edge " + std::to_string(u + 1) + "-" + std::to_string(v + 1));
  rows_[u * words_ + (v >> 6)] |= Word{1} << (v & 63);
  rows_[v * words_ + (u >> 6)] |= Word{1} << (u & 63);
  ++degrees_[u];
  ++degrees_[v];
  ++edge_count_;
}

std::vector<Vertex> SimpleGraph::neighbors(Vertex v) const {
  std::vector<Vertex> out;
  out.reserve(degrees_[v]);
  for_each_bit(row(v), [&](Vertex w) { out.push_back(w); });
  return out;
}

std::vector<std::pair<Vertex, Vertex>> SimpleGraph::edges() const {
  std::vector<std::pair<Vertex, Vertex>> out;
  out.reserve(edge_count_);
  for (Vertex u = 0; u < n_; ++u)
    for_each_bit(row(u), [&](Vertex w) {
      if (u < w) out.emplace_back(u, w);
    });
  return out;
}

std::uint64_t SimpleGraph::induced_edge_count(std::span<const Vertex> vertices) const {
  std::vector<Word> mask(words_, 0);
  for (Vertex v : vertices) {
    if (v >= n_) throw InvalidArgument("induced_edge_count: vertex out of range");
    mask[v >> 6] |= Word{1} << (v & 63);
  }
  std::uint64_t twice = 0;
  for_each_bit(mask, [&](Vertex v) {
    const auto r = row(v);
    for (std::size_t w = 0; w < words_; ++w) twice += std::popcount(r[w] & mask[w]);
  });
  return twice / 2;
}

SimpleGraph read_edge_list(std::istream& in, std::optional<std::uint32_t> n_hint) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> raw;
  std::optional<std::uint64_t> declared_n;
  std::uint64_t max_vertex = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      const auto pos = line.find("n=");
      if (pos != std::string::npos) {
        try {
          declared_n = std::stoull(line.substr(pos + 2));
        } catch (const std::exception&) {
          // ordinary comment
        }
      }
      continue;
    }
    std::istringstream ls(line);
    long long u = 0, v = 0;
    if (!(ls >> u >> v) || u < 1 || v < 1)
      throw InvalidArgument("edge list line " + std::to_string(line_no) + ": expected two 1-based vertices");
    raw.emplace_back(u - 1, v - 1);
    max_vertex = std::max<std::uint64_t>(max_vertex, std::max(u, v));
  }
  std::uint64_t n = declared_n.value_or(n_hint.value_or(max_vertex));
  if (n < max_vertex) throw InvalidArgument("edge list: vertex exceeds declared n");
  if (n == 0 || n > kMaxVertices) throw InvalidArgument("edge list: invalid vertex count");
  auto g = SimpleGraph::new_empty(static_cast<std::uint32_t>(n));
  for (auto [u, v] : raw) g.add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v));
  return g;
}

void write_edge_list(std::ostream& out, const SimpleGraph& g) {
  out << "# n=" << g.n() << "\n";
  for (auto [u, v] : g.edges()) out << (u + 1) << ' ' << (v + 1) << '\n';
}

} // namespace hfree
