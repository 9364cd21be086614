#include "hfree/oracle.hpp"

#include "hfree/errors.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace hfree::oracle {

namespace {

struct Matrix {
  std::uint32_t n = 0;
  std::vector<std::vector<bool>> adj;

  explicit Matrix(const SimpleGraph& g) : n(g.n()), adj(g.n(), std::vector<bool>(g.n(), false)) {
    for (auto [u, v] : g.edges()) adj[u][v] = adj[v][u] = true;
  }
};

void require_host(const SimpleGraph& g, std::uint32_t limit, const char* what) {
  if (g.n() > limit)
    throw SizeLimitExceeded(std::string(what) + ": host has " + std::to_string(g.n()) + " vertices, limit " +
                            std::to_string(limit));
}

// Pattern vertices in breadth-first order from the given start vertices,
// falling back to the smallest unvisited vertex for other components.
std::vector<int> bfs_order(const Pattern& p, std::vector<int> start) {
  const int v = p.vertex_count();
  std::vector<bool> seen(v, false);
  std::vector<int> order;
  for (int s : start) {
    seen[s] = true;
    order.push_back(s);
  }
  std::size_t head = 0;
  while (static_cast<int>(order.size()) < v) {
    if (head == order.size()) {
      for (int x = 0; x < v; ++x)
        if (!seen[x]) {
          seen[x] = true;
          order.push_back(x);
          break;
        }
    }
    const int x = order[head++];
    for (int y = 0; y < v; ++y)
      if (p.has_edge(x, y) && !seen[y]) {
        seen[y] = true;
        order.push_back(y);
      }
  }
  return order;
}

// Enumerates injective maps of the pattern into the host, assigning pattern
// vertices in `order` starting at position `from`. fn returns false to stop.
template <typename Fn>
bool extend(const Pattern& p, const Matrix& m, const std::vector<int>& order, std::size_t from,
            std::vector<int>& image, std::vector<bool>& used, Fn& fn) {
  if (from == order.size()) return fn(image);
  const int x = order[from];
  for (std::uint32_t h = 0; h < m.n; ++h) {
    if (used[h]) continue;
    bool ok = true;
    for (std::size_t k = 0; k < from && ok; ++k) {
      const int y = order[k];
      if (p.has_edge(x, y) && !m.adj[h][image[y]]) ok = false;
    }
    if (!ok) continue;
    image[x] = static_cast<int>(h);
    used[h] = true;
    const bool go_on = extend(p, m, order, from + 1, image, used, fn);
    used[h] = false;
    image[x] = -1;
    if (!go_on) return false;
  }
  return true;
}

// Copies of P through host edge {u, v}: every pattern edge in both orientations.
template <typename Fn>
bool for_each_copy_through(const Pattern& p, const Matrix& m, std::uint32_t u, std::uint32_t v, Fn fn) {
  for (const auto& e : p.edges()) {
    for (int flip = 0; flip < 2; ++flip) {
      const int a = flip ? e.b : e.a, b = flip ? e.a : e.b;
      const auto order = bfs_order(p, {a, b});
      std::vector<int> image(p.vertex_count(), -1);
      std::vector<bool> used(m.n, false);
      image[a] = static_cast<int>(u);
      image[b] = static_cast<int>(v);
      used[u] = used[v] = true;
      if (!extend(p, m, order, 2, image, used, fn)) return false;
    }
  }
  return true;
}

bool has_copy_through(const Pattern& p, const Matrix& m, std::uint32_t u, std::uint32_t v) {
  return !for_each_copy_through(p, m, u, v, [](const std::vector<int>&) { return false; });
}

bool lex_less(const std::vector<Vertex>& a, const std::vector<Vertex>& b) { return a < b; }

} // namespace

std::vector<PairId> naive_closed_set(const SimpleGraph& g, const Pattern& h) {
  require_host(g, kMaxHostVertices, "naive_closed_set");
  Matrix m(g);
  std::vector<PairId> out;
  for (std::uint32_t u = 0; u < m.n; ++u)
    for (std::uint32_t v = u + 1; v < m.n; ++v) {
      if (m.adj[u][v]) continue;
      m.adj[u][v] = m.adj[v][u] = true;
      if (has_copy_through(h, m, u, v)) out.push_back(pair_index(u, v, m.n));
      m.adj[u][v] = m.adj[v][u] = false;
    }
  return out;
}

std::vector<PairClass> naive_classes(const SimpleGraph& g, const Pattern& h) {
  std::vector<PairClass> classes(pair_count(g.n()), PairClass::Open);
  for (auto [u, v] : g.edges()) classes[pair_index(u, v, g.n())] = PairClass::Edge;
  for (PairId id : naive_closed_set(g, h)) classes[id] = PairClass::Closed;
  return classes;
}

std::vector<PairId> naive_C_uv(const SimpleGraph& g, const Pattern& h, PairId uv) {
  require_host(g, kMaxHostVertices, "naive_C_uv");
  const auto classes = naive_classes(g, h);
  if (uv >= classes.size() || classes[uv] != PairClass::Open) throw InvalidArgument("naive_C_uv: pair is not open");
  const auto [u, v] = pair_from_index(uv, g.n());
  Matrix m(g);
  m.adj[u][v] = m.adj[v][u] = true;
  std::vector<PairId> out;
  for (PairId xy = 0; xy < classes.size(); ++xy) {
    if (xy == uv || classes[xy] != PairClass::Open) continue;
    const auto [x, y] = pair_from_index(xy, g.n());
    m.adj[x][y] = m.adj[y][x] = true;
    const bool uses_both = !for_each_copy_through(h, m, u, v, [&](const std::vector<int>& image) {
      for (const auto& e : h.edges()) {
        const auto s = static_cast<Vertex>(image[e.a]), t = static_cast<Vertex>(image[e.b]);
        if ((s == x && t == y) || (s == y && t == x)) return false;
      }
      return true;
    });
    m.adj[x][y] = m.adj[y][x] = false;
    if (uses_both) out.push_back(xy);
  }
  return out;
}

bool naive_contains_copy(const Pattern& p, const SimpleGraph& g) {
  require_host(g, kMaxHostVertices, "naive_contains_copy");
  const Matrix m(g);
  const auto order = bfs_order(p, {});
  std::vector<int> image(p.vertex_count(), -1);
  std::vector<bool> used(m.n, false);
  auto stop = [](const std::vector<int>&) { return false; };
  return !extend(p, m, order, 0, image, used, stop);
}

bool naive_is_maximal_h_free(const SimpleGraph& g, const Pattern& h) {
  if (naive_contains_copy(h, g)) return false;
  const auto closed = naive_closed_set(g, h);
  return closed.size() + g.edge_count() == pair_count(g.n());
}

std::uint64_t naive_automorphisms(const Pattern& p) {
  const int v = p.vertex_count();
  if (v > 10) throw SizeLimitExceeded("naive_automorphisms: limited to 10 vertices");
  std::vector<int> perm(v);
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t count = 0;
  do {
    bool ok = true;
    for (int a = 0; a < v && ok; ++a)
      for (int b = a + 1; b < v && ok; ++b) ok = p.has_edge(a, b) == p.has_edge(perm[a], perm[b]);
    count += ok;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

std::uint64_t naive_count_embeddings(const Pattern& p, const SimpleGraph& g) {
  require_host(g, kMaxHostVertices, "naive_count_embeddings");
  if (p.vertex_count() > kMaxCountPatternVertices)
    throw SizeLimitExceeded("naive_count_embeddings: pattern limited to 6 vertices");
  const Matrix m(g);
  const auto order = bfs_order(p, {});
  std::vector<int> image(p.vertex_count(), -1);
  std::vector<bool> used(m.n, false);
  std::uint64_t count = 0;
  auto tally = [&](const std::vector<int>&) {
    ++count;
    return true;
  };
  extend(p, m, order, 0, image, used, tally);
  return count;
}

std::uint64_t naive_count_copies(const Pattern& f, const SimpleGraph& g) {
  return naive_count_embeddings(f, g) / naive_automorphisms(f);
}

DensityResult naive_max_density(const SimpleGraph& g, std::optional<std::uint32_t> size_cap) {
  const std::uint32_t n = g.n();
  const std::uint32_t cap = std::min(n, size_cap.value_or(n));
  if (cap == 0) throw InvalidArgument("naive_max_density: size cap must be positive");
  const bool full_scan = n <= kMaxDensityFullScan;
  const bool bounded = cap <= kMaxDensityBoundedCap && n <= kMaxDensityBoundedVertices;
  if (!full_scan && !bounded)
    throw SizeLimitExceeded("naive_max_density: needs n <= 20, or size cap <= 12 with n <= 60");

  const Matrix m(g);
  std::int64_t best_e = 0, best_v = 1;
  std::vector<Vertex> best{0};
  auto consider = [&](const std::vector<Vertex>& set) {
    std::int64_t e = 0;
    for (std::size_t i = 0; i < set.size(); ++i)
      for (std::size_t j = i + 1; j < set.size(); ++j) e += m.adj[set[i]][set[j]];
    const std::int64_t v = static_cast<std::int64_t>(set.size());
    if (e * best_v > best_e * v || (e * best_v == best_e * v && lex_less(set, best))) {
      best_e = e;
      best_v = v;
      best = set;
    }
  };

  std::vector<Vertex> set;
  auto rec = [&](auto&& self, Vertex next) -> void {
    if (!set.empty()) consider(set);
    if (set.size() == cap) return;
    for (Vertex x = next; x < n; ++x) {
      set.push_back(x);
      self(self, x + 1);
      set.pop_back();
    }
  };
  rec(rec, 0);
  return {Rational(best_e, best_v), best};
}

} // namespace hfree::oracle
