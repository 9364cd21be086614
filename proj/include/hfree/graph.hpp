#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace hfree {

using Vertex = std::uint32_t;
using PairId = std::uint32_t;
using Word = std::uint64_t;

/// Largest vertex count for which every pair id fits in a PairId.
inline constexpr std::uint32_t kMaxVertices = 65536;

inline constexpr std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

/// Number of unordered pairs on n vertices.
inline constexpr std::uint64_t pair_count(std::uint64_t n) { return n * (n - 1) / 2; }

/// Canonical index of the unordered pair {u, v}, row-major over u < v.
PairId pair_index(Vertex u, Vertex v, std::uint32_t n);

/// Inverse of pair_index; returns (min, max).
std::pair<Vertex, Vertex> pair_from_index(PairId id, std::uint32_t n);

/// Simple undirected graph on {0, ..., n-1} with one adjacency bitset row
/// per vertex. Edges can only be added.
class SimpleGraph {
public:
  static SimpleGraph new_empty(std::uint32_t n);

  std::uint32_t n() const { return n_; }
  std::uint64_t edge_count() const { return edge_count_; }
  std::uint32_t degree(Vertex v) const { return degrees_[v]; }
  std::uint32_t max_degree() const;
  std::size_t words_per_row() const { return words_; }

  bool has_edge(Vertex u, Vertex v) const {
    return (rows_[u * words_ + (v >> 6)] >> (v & 63)) & 1u;
  }

  /// Throws InvalidArgument on loops, duplicates and out-of-range vertices.
  void add_edge(Vertex u, Vertex v);

  std::span<const Word> row(Vertex v) const {
    return {rows_.data() + static_cast<std::size_t>(v) * words_, words_};
  }

  std::vector<Vertex> neighbors(Vertex v) const;

  /// All edges as (u, v) with u < v, sorted.
  std::vector<std::pair<Vertex, Vertex>> edges() const;

  /// e(A): edges with both endpoints in A. Duplicates in A are ignored.
  std::uint64_t induced_edge_count(std::span<const Vertex> vertices) const;

  bool operator==(const SimpleGraph&) const = default;

private:
  explicit SimpleGraph(std::uint32_t n);

  std::uint32_t n_ = 0;
  std::size_t words_ = 0;
  std::uint64_t edge_count_ = 0;
  std::vector<Word> rows_;
  std::vector<std::uint32_t> degrees_;
};

/// Calls fn(v) for every set bit v in the given words.
template <typename Fn>
void for_each_bit(std::span<const Word> words, Fn&& fn) {
  for (std::size_t w = 0; w < words.size(); ++w) {
    Word bits = words[w];
    while (bits) {
      const int b = __builtin_ctzll(bits);
      fn(static_cast<Vertex>(w * 64 + b));
      bits &= bits - 1;
    }
  }
}

/// Edge-list text: one "u v" per line with 1-based vertices; lines starting
/// with '#' are comments. A comment of the form "# n=<count>" fixes the
/// vertex count, otherwise it is the largest vertex seen (or n_hint).
SimpleGraph read_edge_list(std::istream& in, std::optional<std::uint32_t> n_hint = std::nullopt);
void write_edge_list(std::ostream& out, const SimpleGraph& g);

} // namespace hfree
