#include "hfree/patterns.hpp"

#include "hfree/errors.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <numeric>
#include <set>
#include <string>

namespace hfree {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

int parse_int(std::string_view s, std::string_view context) {
  int value = 0;
  const auto t = trim(s);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
    throw InvalidArgument("malformed pattern '" + std::string(context) + "': expected an integer, got '" + t + "'");
  return value;
}

class AutomorphismSearch {
public:
  AutomorphismSearch(const Pattern& p, std::span<const int> colors)
      : p_(p), colors_(colors), v_(p.vertex_count()), map_(v_, -1) {}

  AutomorphismGroup run() {
    AutomorphismGroup group;
    for (int level = 0; level < v_; ++level) {
      std::uint64_t orbit = 0;
      for (int target = 0; target < v_; ++target) {
        std::fill(map_.begin(), map_.end(), -1);
        used_ = 0;
        bool ok = true;
        for (int i = 0; i < level && ok; ++i) ok = assign(i, i);
        if (!ok) break;
        if (!assign(level, target)) continue;
        if (search(level + 1)) {
          ++orbit;
          if (target != level) group.generators.push_back(map_);
        }
      }
      group.order *= std::max<std::uint64_t>(orbit, 1);
    }
    return group;
  }

private:
  int color(int x) const { return colors_.empty() ? 0 : colors_[x]; }

  bool assign(int x, int y) {
    if ((used_ >> y) & 1u) return false;
    if (color(x) != color(y) || p_.degree(x) != p_.degree(y)) return false;
    for (int i = 0; i < x; ++i)
      if (p_.has_edge(i, x) != p_.has_edge(map_[i], y)) return false;
    map_[x] = y;
    used_ |= 1u << y;
    return true;
  }

  bool search(int x) {
    if (x == v_) return true;
    for (int y = 0; y < v_; ++y) {
      if (!assign(x, y)) continue;
      if (search(x + 1)) return true;
      used_ &= ~(1u << y);
      map_[x] = -1;
    }
    return false;
  }

  const Pattern& p_;
  std::span<const int> colors_;
  int v_;
  std::vector<int> map_;
  std::uint32_t used_ = 0;
};

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

bool is_connected(int v, const std::vector<std::uint32_t>& adj) {
  if (v == 0) return false;
  std::uint32_t seen = 1, frontier = 1;
  while (frontier) {
    std::uint32_t next = 0;
    for (std::uint32_t f = frontier; f; f &= f - 1) next |= adj[std::countr_zero(f)];
    frontier = next & ~seen;
    seen |= next;
  }
  return std::popcount(seen) == v;
}

std::vector<ClosureTemplate> build_templates(const Pattern& h);

} // namespace

Pattern Pattern::from_edges(int v, std::vector<std::pair<int, int>> edges, std::string name) {
  if (v < 1 || v > kMaxPatternVertices)
    throw InvalidArgument("pattern vertex count must be in [1, " + std::to_string(kMaxPatternVertices) + "]");
  Pattern p;
  p.name_ = std::move(name);
  p.v_ = v;
  p.adj_.assign(v, 0);
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= v || b >= v) throw InvalidArgument("pattern edge endpoint out of range");
    if (a == b) throw InvalidArgument("pattern edge is a self-loop");
    if (a > b) std::swap(a, b);
    if (p.has_edge(a, b)) throw InvalidArgument("pattern has a duplicate edge");
    p.adj_[a] |= 1u << b;
    p.adj_[b] |= 1u << a;
    p.edges_.push_back({a, b});
  }
  std::sort(p.edges_.begin(), p.edges_.end(),
            [](const PatternEdge& x, const PatternEdge& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  if (p.name_.empty()) {
    p.name_ = "edges:";
    for (std::size_t i = 0; i < p.edges_.size(); ++i)
      p.name_ += (i ? "," : "") + std::to_string(p.edges_[i].a + 1) + "-" + std::to_string(p.edges_[i].b + 1);
  }
  p.connected_ = is_connected(v, p.adj_);
  p.aut_ = automorphism_group(p).order;
  if (v >= 3) p.d2_ = density_2(p);
  if (v <= kMaxBalanceVertices) p.strictly_2_balanced_ = is_strictly_2_balanced(p);
  if (p.usable_as_forbidden())
    p.templates_ = std::make_shared<const std::vector<ClosureTemplate>>(build_templates(p));
  else
    p.templates_ = std::make_shared<const std::vector<ClosureTemplate>>();
  return p;
}

bool Pattern::usable_as_forbidden() const { return connected_ && strictly_2_balanced_.value_or(false); }

const std::vector<ClosureTemplate>& Pattern::closure_templates() const { return *templates_; }

SimpleGraph Pattern::to_graph() const {
  auto g = SimpleGraph::new_empty(static_cast<std::uint32_t>(v_));
  for (const auto& e : edges_) g.add_edge(e.a, e.b);
  return g;
}

Pattern parse_pattern(std::string_view spec) {
  const std::string s = trim(spec);
  if (s.empty()) throw InvalidArgument("malformed pattern: empty spec");

  if (s.rfind("edges:", 0) == 0) {
    std::vector<std::pair<int, int>> edges;
    int v = 0;
    std::string body = s.substr(6);
    std::replace(body.begin(), body.end(), ',', ' ');
    std::size_t pos = 0;
    while (pos < body.size()) {
      while (pos < body.size() && std::isspace(static_cast<unsigned char>(body[pos]))) ++pos;
      if (pos >= body.size()) break;
      auto end = pos;
      while (end < body.size() && !std::isspace(static_cast<unsigned char>(body[end]))) ++end;
      const std::string token = body.substr(pos, end - pos);
      pos = end;
      const auto dash = token.find('-');
      if (dash == std::string::npos) throw InvalidArgument("malformed pattern edge '" + token + "': expected u-v");
      const int a = parse_int(std::string_view(token).substr(0, dash), s);
      const int b = parse_int(std::string_view(token).substr(dash + 1), s);
      if (a < 1 || b < 1) throw InvalidArgument("malformed pattern edge '" + token + "': vertices are 1-based");
      edges.emplace_back(a - 1, b - 1);
      v = std::max({v, a, b});
    }
    if (edges.empty()) throw InvalidArgument("malformed pattern: edge list is empty");
    return Pattern::from_edges(v, std::move(edges), s);
  }

  if (s == "Q3") {
    std::vector<std::pair<int, int>> edges;
    for (int x = 0; x < 8; ++x)
      for (int bit = 0; bit < 3; ++bit)
        if (x < (x ^ (1 << bit))) edges.emplace_back(x, x ^ (1 << bit));
    return Pattern::from_edges(8, std::move(edges), s);
  }

  if (s.size() >= 2 && s[0] == 'C') {
    const int k = parse_int(std::string_view(s).substr(1), s);
    if (k < 3) throw InvalidArgument("malformed pattern '" + s + "': cycles need at least 3 vertices");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < k; ++i) edges.emplace_back(i, (i + 1) % k);
    return Pattern::from_edges(k, std::move(edges), s);
  }

  if (s.size() >= 2 && s[0] == 'K') {
    const auto comma = s.find(',');
    std::vector<std::pair<int, int>> edges;
    if (comma == std::string::npos) {
      const int k = parse_int(std::string_view(s).substr(1), s);
      if (k < 1) throw InvalidArgument("malformed pattern '" + s + "'");
      for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) edges.emplace_back(i, j);
      return Pattern::from_edges(k, std::move(edges), s);
    }
    const int a = parse_int(std::string_view(s).substr(1, comma - 1), s);
    const int b = parse_int(std::string_view(s).substr(comma + 1), s);
    if (a < 1 || b < 1) throw InvalidArgument("malformed pattern '" + s + "'");
    for (int i = 0; i < a; ++i)
      for (int j = 0; j < b; ++j) edges.emplace_back(i, a + j);
    return Pattern::from_edges(a + b, std::move(edges), s);
  }

  throw InvalidArgument("malformed pattern '" + s + "': expected C<k>, K<k>, K<a>,<b>, Q3 or edges: u-v,...");
}

void require_forbidden_pattern(const Pattern& p) {
  if (p.edge_count() == 0) throw InvalidArgument("pattern '" + p.name() + "' has no edges");
  if (!p.connected()) throw InvalidArgument("pattern '" + p.name() + "' is disconnected");
  if (!p.strictly_2_balanced().has_value())
    throw SizeLimitExceeded("pattern '" + p.name() + "' is too large to check strict 2-balancedness");
  if (!*p.strictly_2_balanced()) throw InvalidArgument("pattern '" + p.name() + "' is not strictly 2-balanced");
}

AutomorphismGroup automorphism_group(const Pattern& p, std::span<const int> colors) {
  if (!colors.empty() && colors.size() != static_cast<std::size_t>(p.vertex_count()))
    throw InvalidArgument("automorphism_group: one colour per vertex required");
  return AutomorphismSearch(p, colors).run();
}

std::uint64_t count_automorphisms(const Pattern& p) { return p.aut(); }

Rational density_2(const Pattern& p) {
  if (p.vertex_count() < 3) throw InvalidArgument("2-density needs at least 3 vertices");
  return Rational(p.edge_count() - 1, p.vertex_count() - 2);
}

bool is_strictly_2_balanced(const Pattern& p) {
  const int v = p.vertex_count();
  if (v > kMaxBalanceVertices) throw SizeLimitExceeded("strict 2-balancedness check limited to 12 vertices");
  const int e = p.edge_count();
  if (v < 3 || e < 3) return false;
  // A proper subgraph on the full vertex set has at most e-1 edges and is
  // always strictly below d2, so only induced subgraphs on proper vertex
  // subsets of size >= 3 need checking.
  const std::uint32_t full = (1u << v) - 1;
  for (std::uint32_t s = 1; s < full; ++s) {
    const int vs = std::popcount(s);
    if (vs < 3) continue;
    int es = 0;
    for (std::uint32_t r = s; r; r &= r - 1) es += std::popcount(p.adjacency(std::countr_zero(r)) & s);
    es /= 2;
    // (es-1)/(vs-2) < (e-1)/(v-2)
    if (static_cast<std::int64_t>(es - 1) * (v - 2) >= static_cast<std::int64_t>(e - 1) * (vs - 2)) return false;
  }
  return true;
}

std::vector<std::vector<int>> edge_orbits(const Pattern& p, const AutomorphismGroup& group) {
  const int v = p.vertex_count();
  const auto& edges = p.edges();
  std::vector<int> index(static_cast<std::size_t>(v * v), -1);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    index[edges[i].a * v + edges[i].b] = static_cast<int>(i);
    index[edges[i].b * v + edges[i].a] = static_cast<int>(i);
  }
  std::vector<int> parent(edges.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& gen : group.generators)
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const int j = index[gen[edges[i].a] * v + gen[edges[i].b]];
      const int ri = find_root(parent, static_cast<int>(i)), rj = find_root(parent, j);
      if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
    }
  std::vector<std::vector<int>> orbits;
  std::vector<int> slot(edges.size(), -1);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const int r = find_root(parent, static_cast<int>(i));
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(orbits.size());
      orbits.emplace_back();
    }
    orbits[slot[r]].push_back(static_cast<int>(i));
  }
  return orbits;
}

namespace {

std::vector<ClosureTemplate> build_templates(const Pattern& h) {
  std::vector<ClosureTemplate> out;
  const auto& edges = h.edges();
  const auto group = automorphism_group(h);
  for (const auto& orbit : edge_orbits(h, group)) {
    const PatternEdge f = edges[orbit.front()];
    std::vector<std::pair<int, int>> base_edges;
    for (const auto& e : edges)
      if (!(e == f)) base_edges.emplace_back(e.a, e.b);
    ClosureTemplate t{Pattern::from_edges(h.vertex_count(), base_edges, h.name() + "-e"), f, {}};

    std::vector<int> colors(h.vertex_count(), 0);
    colors[f.a] = colors[f.b] = 1;
    const auto stabilizer = automorphism_group(h, colors);
    for (const auto& sub : edge_orbits(h, stabilizer))
      if (!(edges[sub.front()] == f)) t.anchor_roles.push_back(edges[sub.front()]);
    out.push_back(std::move(t));
  }
  return out;
}

} // namespace

namespace {

// Lexicographic order on ascending vertex lists encoded as masks.
bool lex_less(std::uint32_t a, std::uint32_t b) {
  if (a == b) return false;
  const std::uint32_t diff = a ^ b;
  const std::uint32_t low = diff & (~diff + 1);
  const std::uint32_t above = ~((low << 1) - 1);
  if (a & low) return (b & above) != 0;  // b is a prefix of a otherwise
  return (a & above) == 0;
}

struct SubsetSearch {
  std::vector<std::uint32_t> adj;
  std::uint32_t n = 0;
  std::uint32_t cap = 0;
  std::int64_t best_e = 0;
  std::int64_t best_v = 1;
  std::uint32_t best_mask = 1;

  void consider(std::uint32_t mask, std::int64_t e, std::int64_t v) {
    const std::int64_t lhs = e * best_v, rhs = best_e * v;
    if (lhs > rhs || (lhs == rhs && lex_less(mask, best_mask))) {
      best_e = e;
      best_v = v;
      best_mask = mask;
    }
  }

  void dfs(std::uint32_t i, std::uint32_t mask, std::uint32_t size, std::int64_t e) {
    if (i == n) {
      if (size) consider(mask, e, size);
      return;
    }
    if (size < cap) dfs(i + 1, mask | (1u << i), size + 1, e + std::popcount(adj[i] & mask));
    dfs(i + 1, mask, size, e);
  }
};

} // namespace

DensityResult max_density(const SimpleGraph& g, std::optional<std::uint32_t> size_cap) {
  const std::uint32_t n = g.n();
  if (n == 0) throw InvalidArgument("max_density: empty graph");
  if (n > kMaxDensityExactVertices)
    throw SizeLimitExceeded("max_density: exact mode limited to " + std::to_string(kMaxDensityExactVertices) +
                            " vertices; use bounded_density_scan");
  if (size_cap && *size_cap == 0) throw InvalidArgument("max_density: size cap must be positive");
  SubsetSearch s;
  s.n = n;
  s.cap = std::min(n, size_cap.value_or(n));
  s.adj.assign(n, 0);
  for (Vertex v = 0; v < n; ++v) for_each_bit(g.row(v), [&](Vertex w) { s.adj[v] |= 1u << w; });
  s.best_e = 0;
  s.best_v = 1;
  s.best_mask = 1;
  s.dfs(0, 0, 0, 0);
  DensityResult r;
  r.density = Rational(s.best_e, s.best_v);
  for (std::uint32_t m = s.best_mask; m; m &= m - 1) r.witness.push_back(std::countr_zero(m));
  return r;
}

DensityResult max_density(const Pattern& p, std::optional<std::uint32_t> size_cap) {
  return max_density(p.to_graph(), size_cap);
}

EmbeddingPlan::EmbeddingPlan(const Pattern& p, std::optional<PatternEdge> anchor) : pattern_(p), anchor_(anchor) {
  const int v = p.vertex_count();
  if (anchor_) {
    if (!p.has_edge(anchor_->a, anchor_->b)) throw InvalidArgument("EmbeddingPlan: anchor is not a pattern edge");
    order_ = {anchor_->a, anchor_->b};
  }
  std::uint32_t placed = 0;
  for (int x : order_) placed |= 1u << x;
  while (static_cast<int>(order_.size()) < v) {
    int best = -1, best_links = -1, best_deg = -1;
    for (int x = 0; x < v; ++x) {
      if ((placed >> x) & 1u) continue;
      const int links = std::popcount(p.adjacency(x) & placed);
      const int deg = p.degree(x);
      if (links > best_links || (links == best_links && deg > best_deg)) {
        best = x;
        best_links = links;
        best_deg = deg;
      }
    }
    order_.push_back(best);
    placed |= 1u << best;
  }
  back_.resize(order_.size());
  for (std::size_t k = 0; k < order_.size(); ++k)
    for (std::size_t j = 0; j < k; ++j)
      if (p.has_edge(order_[k], order_[j])) back_[k].push_back(order_[j]);
}

std::vector<std::vector<Vertex>> enumerate_embeddings(
    const Pattern& p, const SimpleGraph& g, std::optional<std::pair<PatternEdge, std::pair<Vertex, Vertex>>> anchor) {
  std::vector<std::vector<Vertex>> out;
  auto collect = [&](std::span<const Vertex> image) {
    out.emplace_back(image.begin(), image.end());
    return true;
  };
  if (anchor) {
    EmbeddingPlan(p, anchor->first).for_each(g, anchor->second, collect);
  } else {
    EmbeddingPlan(p).for_each(g, std::nullopt, collect);
  }
  return out;
}

std::uint64_t count_embeddings(const Pattern& p, const SimpleGraph& g) {
  std::uint64_t count = 0;
  EmbeddingPlan(p).for_each(g, std::nullopt, [&](std::span<const Vertex>) {
    ++count;
    return true;
  });
  return count;
}

std::uint64_t count_copies(const Pattern& p, const SimpleGraph& g) { return count_embeddings(p, g) / p.aut(); }

bool contains_copy(const Pattern& p, const SimpleGraph& g) {
  return !EmbeddingPlan(p).for_each(g, std::nullopt, [](std::span<const Vertex>) { return false; });
}

const std::vector<ClosureTemplate>& closure_templates(const Pattern& p) {
  require_forbidden_pattern(p);
  return p.closure_templates();
}

} // namespace hfree
