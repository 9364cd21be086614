#pragma once

#include "hfree/graph.hpp"

#include <boost/rational.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hfree {

/// Exact rational used for every density comparison.
using Rational = boost::rational<std::int64_t>;

/// Patterns are tiny; adjacency fits in one 32-bit mask per vertex.
inline constexpr int kMaxPatternVertices = 16;
/// Subgraph enumeration for strict 2-balancedness is 2^v.
inline constexpr int kMaxBalanceVertices = 12;
/// Exact maximum density by subset enumeration.
inline constexpr std::uint32_t kMaxDensityExactVertices = 24;

struct PatternEdge {
  int a = 0;
  int b = 0;
  bool operator==(const PatternEdge&) const = default;
};

struct ClosureTemplate;

/// Immutable fixed graph (H or F) with derived quantities precomputed.
class Pattern {
public:
  /// Vertices are 0-based; throws InvalidArgument on loops, duplicates,
  /// out-of-range endpoints or v outside [1, kMaxPatternVertices].
  static Pattern from_edges(int v, std::vector<std::pair<int, int>> edges, std::string name = {});

  const std::string& name() const { return name_; }
  int vertex_count() const { return v_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<PatternEdge>& edges() const { return edges_; }
  std::uint32_t adjacency(int u) const { return adj_[u]; }
  bool has_edge(int u, int w) const { return (adj_[u] >> w) & 1u; }
  int degree(int u) const { return __builtin_popcount(adj_[u]); }

  std::uint64_t aut() const { return aut_; }
  bool connected() const { return connected_; }
  /// (e-1)/(v-2); absent when v < 3.
  std::optional<Rational> d2() const { return d2_; }
  /// Absent when v exceeds kMaxBalanceVertices.
  std::optional<bool> strictly_2_balanced() const { return strictly_2_balanced_; }
  /// True when the pattern may be used as the forbidden graph H.
  bool usable_as_forbidden() const;
  /// One template per edge orbit; empty unless usable_as_forbidden().
  const std::vector<ClosureTemplate>& closure_templates() const;

  SimpleGraph to_graph() const;

private:
  Pattern() = default;

  std::string name_;
  int v_ = 0;
  std::vector<PatternEdge> edges_;
  std::vector<std::uint32_t> adj_;
  std::uint64_t aut_ = 1;
  bool connected_ = false;
  std::optional<Rational> d2_;
  std::optional<bool> strictly_2_balanced_;
  std::shared_ptr<const std::vector<ClosureTemplate>> templates_;
};

/// H with one edge f removed. An H-copy through a new edge e and a pair uv
/// exists iff the base embeds with some anchor role on e and missing_pair
/// onto uv.
struct ClosureTemplate {
  Pattern base;
  PatternEdge missing_pair;
  /// Representatives of the base edges under the stabilizer of missing_pair.
  std::vector<PatternEdge> anchor_roles;
};

/// Parses "C<k>", "K<k>", "K<a>,<b>", "Q3" or "edges: u-v,u-v,..." (1-based).
Pattern parse_pattern(std::string_view spec);

/// Throws InvalidArgument unless P is connected and strictly 2-balanced.
void require_forbidden_pattern(const Pattern& p);

struct AutomorphismGroup {
  std::uint64_t order = 1;
  /// Generating set (coset representatives of the stabilizer chain).
  std::vector<std::vector<int>> generators;
};

/// Colour-preserving automorphisms; colors may be empty (all equal).
AutomorphismGroup automorphism_group(const Pattern& p, std::span<const int> colors = {});

std::uint64_t count_automorphisms(const Pattern& p);

/// Exact (e-1)/(v-2); throws InvalidArgument when v < 3.
Rational density_2(const Pattern& p);

/// Throws SizeLimitExceeded when v > kMaxBalanceVertices.
bool is_strictly_2_balanced(const Pattern& p);

/// Orbits of the edge set (indices into p.edges()) under the group.
std::vector<std::vector<int>> edge_orbits(const Pattern& p, const AutomorphismGroup& group);

struct DensityResult {
  Rational density{0};
  std::vector<Vertex> witness;
};

/// m(G) = max e(A)/|A| over nonempty A with |A| <= size_cap. Exact subset
/// search; throws SizeLimitExceeded beyond kMaxDensityExactVertices vertices
/// (use analysis::bounded_density_scan for large hosts). Ties resolve to the
/// lexicographically smallest vertex list.
DensityResult max_density(const SimpleGraph& g, std::optional<std::uint32_t> size_cap = std::nullopt);
DensityResult max_density(const Pattern& p, std::optional<std::uint32_t> size_cap = std::nullopt);

/// Backtracking matcher for one pattern, optionally with one pattern edge
/// pinned to a host edge. Pattern vertices are visited in a greedy connected
/// order; candidates come from AND-ing host adjacency rows.
class EmbeddingPlan {
public:
  explicit EmbeddingPlan(const Pattern& p, std::optional<PatternEdge> anchor = std::nullopt);

  const Pattern& pattern() const { return pattern_; }
  bool anchored() const { return anchor_.has_value(); }

  /// Calls fn(image) for each injective homomorphism, where image[x] is the
  /// host vertex of pattern vertex x; fn returns false to stop. When anchored,
  /// host_anchor must be given and both orientations are tried. Returns false
  /// iff stopped early.
  template <typename Fn>
  bool for_each(const SimpleGraph& g, std::optional<std::pair<Vertex, Vertex>> host_anchor, Fn&& fn) const;

private:
  template <typename Fn>
  bool extend(const SimpleGraph& g, std::size_t depth, std::vector<Vertex>& image, std::vector<Word>& scratch,
              Fn& fn) const;

  Pattern pattern_;
  std::optional<PatternEdge> anchor_;
  std::vector<int> order_;
  /// For order_[k], pattern neighbours placed earlier in the order.
  std::vector<std::vector<int>> back_;
};

/// Every labelled embedding of P into g (optionally anchored at a pattern edge
/// and a host edge).
std::vector<std::vector<Vertex>> enumerate_embeddings(
    const Pattern& p, const SimpleGraph& g,
    std::optional<std::pair<PatternEdge, std::pair<Vertex, Vertex>>> anchor = std::nullopt);

std::uint64_t count_embeddings(const Pattern& p, const SimpleGraph& g);

/// Distinct subgraph copies: labelled embeddings / aut(P).
std::uint64_t count_copies(const Pattern& p, const SimpleGraph& g);

bool contains_copy(const Pattern& p, const SimpleGraph& g);

const std::vector<ClosureTemplate>& closure_templates(const Pattern& p);

// ---------------------------------------------------------------------------

template <typename Fn>
bool EmbeddingPlan::for_each(const SimpleGraph& g, std::optional<std::pair<Vertex, Vertex>> host_anchor,
                             Fn&& fn) const {
  const auto v = static_cast<std::size_t>(pattern_.vertex_count());
  if (v > g.n()) return true;
  std::vector<Vertex> image(v, 0);
  std::vector<Word> scratch(v * g.words_per_row(), 0);
  if (!anchor_) return extend(g, 0, image, scratch, fn);

  if (!host_anchor) return true;
  auto [x, y] = *host_anchor;
  if (x == y || x >= g.n() || y >= g.n() || !g.has_edge(x, y)) return true;
  for (int flip = 0; flip < 2; ++flip) {
    image[anchor_->a] = flip ? y : x;
    image[anchor_->b] = flip ? x : y;
    if (!extend(g, 2, image, scratch, fn)) return false;
  }
  return true;
}

template <typename Fn>
bool EmbeddingPlan::extend(const SimpleGraph& g, std::size_t depth, std::vector<Vertex>& image,
                           std::vector<Word>& scratch, Fn& fn) const {
  if (depth == order_.size()) return fn(std::span<const Vertex>(image));

  const int x = order_[depth];
  const auto& back = back_[depth];
  const std::size_t words = g.words_per_row();
  std::span<Word> cand(scratch.data() + depth * words, words);

  if (back.empty()) {
    std::fill(cand.begin(), cand.end(), ~Word{0});
    if (g.n() % 64) cand[words - 1] = (Word{1} << (g.n() % 64)) - 1;
  } else {
    const auto first = g.row(image[back[0]]);
    std::copy(first.begin(), first.end(), cand.begin());
    for (std::size_t i = 1; i < back.size(); ++i) {
      const auto r = g.row(image[back[i]]);
      for (std::size_t w = 0; w < words; ++w) cand[w] &= r[w];
    }
  }
  for (std::size_t k = 0; k < depth; ++k) {
    const Vertex used = image[order_[k]];
    cand[used >> 6] &= ~(Word{1} << (used & 63));
  }

  const auto need_degree = static_cast<std::uint32_t>(pattern_.degree(x));
  for (std::size_t w = 0; w < words; ++w) {
    Word bits = cand[w];
    while (bits) {
      const auto h = static_cast<Vertex>(w * 64 + __builtin_ctzll(bits));
      bits &= bits - 1;
      if (g.degree(h) < need_degree) continue;
      image[x] = h;
      if (!extend(g, depth + 1, image, scratch, fn)) return false;
    }
  }
  return true;
}

} // namespace hfree
