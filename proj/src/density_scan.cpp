#include "hfree/analysis.hpp"
#include "hfree/errors.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace hfree::analysis {

namespace {

using Adjacency = std::vector<std::vector<Vertex>>;

Adjacency adjacency_lists(const SimpleGraph& g) {
  Adjacency adj(g.n());
  for (Vertex v = 0; v < g.n(); ++v) adj[v] = g.neighbors(v);
  return adj;
}

struct Incumbent {
  std::int64_t e = 0;
  std::int64_t v = 1;
  std::vector<Vertex> set;

  bool beaten_by(std::int64_t e2, std::int64_t v2) const { return e2 * v > e * v2; }
  // Fewest edges a b-set needs to beat the incumbent.
  std::int64_t needed(std::int64_t b) const { return e * b / v + 1; }
};

std::int64_t induced_edges(const SimpleGraph& g, const std::vector<Vertex>& set) {
  std::int64_t e = 0;
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t j = i + 1; j < set.size(); ++j) e += g.has_edge(set[i], set[j]);
  return e;
}

// ---------------------------------------------------------------------------
// Randomised greedy growth with swap improvement.

class GreedySearch {
public:
  GreedySearch(const SimpleGraph& g, const Adjacency& adj, std::uint32_t k, std::uint64_t seed)
      : g_(g), adj_(adj), k_(k), rng_(seed), d_a_(g.n(), 0), in_a_(g.n(), 0) {}

  void run_from(Vertex start, Incumbent& best) {
    set_.clear();
    frontier_.clear();
    std::int64_t e = 0;
    add(start, e);
    consider(e, best);
    while (set_.size() < k_) {
      Vertex pick = 0;
      int pick_d = 0;
      std::uint64_t ties = 0;
      for (Vertex w : frontier_) {
        if (in_a_[w]) continue;
        const int d = d_a_[w];
        if (d > pick_d) {
          pick = w;
          pick_d = d;
          ties = 1;
        } else if (d == pick_d && d > 0 && uniform_below(rng_, ++ties) == 0) {
          pick = w;
        }
      }
      if (pick_d == 0) break;
      add(pick, e);
      improve(e);
      consider(e, best);
    }
    clear();
  }

private:
  void add(Vertex w, std::int64_t& e) {
    e += d_a_[w];
    in_a_[w] = 1;
    set_.push_back(w);
    for (Vertex u : adj_[w]) {
      if (d_a_[u]++ == 0) frontier_.push_back(u);
    }
  }

  void remove(Vertex w, std::int64_t& e) {
    in_a_[w] = 0;
    set_.erase(std::find(set_.begin(), set_.end(), w));
    frontier_.push_back(w);
    for (Vertex u : adj_[w]) --d_a_[u];
    e -= d_a_[w];
  }

  // Swap a member for an outside vertex while that strictly adds edges.
  void improve(std::int64_t& e) {
    for (int round = 0; round < 4 * static_cast<int>(k_); ++round) {
      Vertex out = set_.front();
      for (Vertex x : set_)
        if (d_a_[x] < d_a_[out]) out = x;
      Vertex in = 0;
      int gain = 0;
      for (Vertex w : frontier_) {
        if (in_a_[w]) continue;
        const int d = d_a_[w] - (g_.has_edge(w, out) ? 1 : 0);
        if (d - d_a_[out] > gain) {
          gain = d - d_a_[out];
          in = w;
        }
      }
      if (gain <= 0) return;
      remove(out, e);
      add(in, e);
    }
  }

  void consider(std::int64_t e, Incumbent& best) {
    const auto v = static_cast<std::int64_t>(set_.size());
    if (best.beaten_by(e, v)) {
      best.e = e;
      best.v = v;
      best.set = set_;
    }
  }

  void clear() {
    for (Vertex w : set_) in_a_[w] = 0;
    for (Vertex w : frontier_) d_a_[w] = 0;
    for (Vertex w : set_) d_a_[w] = 0;
    set_.clear();
    frontier_.clear();
  }

  const SimpleGraph& g_;
  const Adjacency& adj_;
  std::uint32_t k_;
  Rng rng_;
  std::vector<int> d_a_;
  std::vector<std::uint8_t> in_a_;
  std::vector<Vertex> set_;
  std::vector<Vertex> frontier_;
};

void heuristic_search(const SimpleGraph& g, const Adjacency& adj, std::uint32_t k, std::uint64_t seed, int rounds,
                      Incumbent& best) {
  std::vector<Vertex> starts(g.n());
  std::iota(starts.begin(), starts.end(), 0);
  std::stable_sort(starts.begin(), starts.end(),
                   [&](Vertex a, Vertex b) { return adj[a].size() > adj[b].size(); });
  GreedySearch search(g, adj, k, seed);
  for (int r = 0; r < rounds; ++r)
    for (Vertex s : starts) search.run_from(s, best);
}

// ---------------------------------------------------------------------------
// Clique number (capped) for the Turan bound.

class CliqueSearch {
public:
  CliqueSearch(const SimpleGraph& g, const std::vector<std::uint32_t>& pos, const Adjacency& adj, std::uint32_t cap)
      : g_(g), pos_(pos), adj_(adj), cap_(cap) {}

  std::uint32_t run() {
    for (Vertex v = 0; v < g_.n() && best_ < cap_; ++v) {
      std::vector<Vertex> later;
      for (Vertex u : adj_[v])
        if (pos_[u] > pos_[v]) later.push_back(u);
      expand(1, later);
    }
    return std::max<std::uint32_t>(best_, 1);
  }

private:
  void expand(std::uint32_t size, const std::vector<Vertex>& cand) {
    best_ = std::max(best_, size);
    if (best_ >= cap_) return;
    for (std::size_t i = 0; i < cand.size(); ++i) {
      if (size + (cand.size() - i) <= best_) return;
      std::vector<Vertex> next;
      for (std::size_t j = i + 1; j < cand.size(); ++j)
        if (g_.has_edge(cand[i], cand[j])) next.push_back(cand[j]);
      expand(size + 1, next);
      if (best_ >= cap_) return;
    }
  }

  const SimpleGraph& g_;
  const std::vector<std::uint32_t>& pos_;
  const Adjacency& adj_;
  std::uint32_t cap_;
  std::uint32_t best_ = 0;
};

// Smallest-last order: repeatedly remove a minimum-degree vertex.
std::vector<Vertex> degeneracy_order(const Adjacency& adj) {
  const auto n = static_cast<std::uint32_t>(adj.size());
  std::uint32_t max_deg = 0;
  std::vector<std::uint32_t> deg(n);
  for (Vertex v = 0; v < n; ++v) max_deg = std::max(max_deg, deg[v] = static_cast<std::uint32_t>(adj[v].size()));
  std::vector<std::vector<Vertex>> buckets(max_deg + 1);
  for (Vertex v = 0; v < n; ++v) buckets[deg[v]].push_back(v);
  std::vector<std::uint8_t> gone(n, 0);
  std::vector<Vertex> order;
  order.reserve(n);
  std::uint32_t d = 0;
  while (order.size() < n) {
    d = d > 0 ? d - 1 : 0;
    while (buckets[d].empty()) ++d;
    const Vertex v = buckets[d].back();
    buckets[d].pop_back();
    if (gone[v] || deg[v] != d) continue;
    gone[v] = 1;
    order.push_back(v);
    for (Vertex u : adj[v])
      if (!gone[u]) buckets[--deg[u]].push_back(u);
  }
  return order;
}

std::int64_t turan_edges(std::int64_t b, std::int64_t r) {
  if (b <= 1) return 0;
  if (r >= b) return b * (b - 1) / 2;
  const std::int64_t q = b / r, s = b % r;
  return (b * b - s * (q + 1) * (q + 1) - (r - s) * q * q) / 2;
}

// ---------------------------------------------------------------------------
// Exact branch and bound over connected vertex sets.
//
// The root of a set is its earliest vertex in degeneracy order, so each set
// is grown from one root using later vertices only. A set that beats the
// incumbent and is optimal has internal minimum degree above the incumbent
// density, so the candidate pool is the matching core of the later vertices,
// maintained incrementally as roots advance. Partial sets are bounded by
// e(A) + (largest attachments of j candidates) + Turan(j), with the clique
// number of the host as the Turan parameter.

class BranchAndBound {
public:
  BranchAndBound(const SimpleGraph& g, const Adjacency& adj, std::uint32_t k, Incumbent& best)
      : g_(g), adj_(adj), k_(k), best_(best), n_(g.n()) {}

  std::uint64_t run() {
    order_ = degeneracy_order(adj_);
    pos_.assign(n_, 0);
    for (std::uint32_t i = 0; i < n_; ++i) pos_[order_[i]] = i;
    omega_ = CliqueSearch(g_, pos_, adj_, k_).run();
    for (std::int64_t b = 0; b <= k_; ++b) turan_.push_back(turan_edges(b, omega_));

    active_.assign(n_, 1);
    core_deg_.resize(n_);
    for (Vertex v = 0; v < n_; ++v) core_deg_[v] = static_cast<std::uint32_t>(adj_[v].size());
    d_a_.assign(n_, 0);
    state_.assign(n_, kFree);
    hist_.assign(k_ + 2, 0);
    refresh_threshold();

    for (std::uint32_t i = 0; i < n_; ++i) {
      const Vertex r = order_[i];
      refresh_threshold();
      if (!any_size_feasible()) break;
      if (active_[r]) search_root(r);
      deactivate(r);
    }
    return nodes_;
  }

private:
  static constexpr std::uint8_t kFree = 0, kInSet = 1, kExcluded = 2;

  // Vertex removal from the active pool with core peeling.
  void deactivate(Vertex v) {
    if (!active_[v]) return;
    std::vector<Vertex> stack{v};
    active_[v] = 0;
    while (!stack.empty()) {
      const Vertex x = stack.back();
      stack.pop_back();
      for (Vertex u : adj_[x]) {
        if (!active_[u]) continue;
        if (--core_deg_[u] < min_degree_) {
          active_[u] = 0;
          stack.push_back(u);
        }
      }
    }
  }

  void refresh_threshold() {
    const auto delta = static_cast<std::uint32_t>(best_.e / best_.v + 1);
    if (delta == min_degree_) return;
    min_degree_ = delta;
    std::vector<Vertex> drop;
    for (Vertex v = 0; v < n_; ++v)
      if (active_[v] && core_deg_[v] < min_degree_) drop.push_back(v);
    for (Vertex v : drop) deactivate(v);
  }

  bool any_size_feasible() const {
    for (std::int64_t b = 2; b <= k_; ++b)
      if (turan_[b] >= best_.needed(b)) return true;
    return false;
  }

  bool candidate(Vertex u) const { return active_[u] && state_[u] == kFree && pos_[u] > root_pos_; }

  void hist_add(Vertex u, int delta) {
    if (d_a_[u] > 0) hist_[std::min<std::uint32_t>(d_a_[u], k_ + 1)] += delta;
  }

  void include(Vertex w, std::vector<Vertex>& fresh) {
    hist_add(w, -1);
    state_[w] = kInSet;
    edges_ += d_a_[w];
    set_.push_back(w);
    for (Vertex u : adj_[w]) {
      const bool cand = candidate(u);
      if (cand) hist_add(u, -1);
      if (d_a_[u]++ == 0 && cand) fresh.push_back(u);
      if (cand) hist_add(u, +1);
    }
  }

  void undo_include(Vertex w) {
    for (Vertex u : adj_[w]) {
      const bool cand = candidate(u);
      if (cand) hist_add(u, -1);
      --d_a_[u];
      if (cand) hist_add(u, +1);
    }
    set_.pop_back();
    edges_ -= d_a_[w];
    state_[w] = kFree;
    hist_add(w, +1);
  }

  void exclude(Vertex w) {
    hist_add(w, -1);
    state_[w] = kExcluded;
  }

  void undo_exclude(Vertex w) {
    state_[w] = kFree;
    hist_add(w, +1);
  }

  std::int64_t top_attachments(std::int64_t j) const {
    std::int64_t sum = 0;
    for (std::int64_t t = static_cast<std::int64_t>(hist_.size()) - 1; t >= 1 && j > 0; --t) {
      const std::int64_t take = std::min<std::int64_t>(hist_[t], j);
      sum += take * t;
      j -= take;
    }
    return sum;
  }

  bool extendable() const {
    const auto s = static_cast<std::int64_t>(set_.size());
    std::int64_t min_deg_in_set = s;
    for (Vertex x : set_) min_deg_in_set = std::min<std::int64_t>(min_deg_in_set, d_a_[x]);
    for (std::int64_t b = s + 1; b <= k_; ++b) {
      const std::int64_t need = best_.needed(b);
      if (turan_[b] < need) continue;
      const std::int64_t j = b - s;
      const std::int64_t need_deg = std::max<std::int64_t>(min_degree_, need - turan_[b - 1]);
      if (min_deg_in_set + j < need_deg) continue;
      if (edges_ + top_attachments(j) + turan_[j] >= need) return true;
    }
    return false;
  }

  void search_root(Vertex r) {
    root_pos_ = pos_[r];
    std::vector<Vertex> fresh;
    include(r, fresh);
    grow(fresh);
    undo_include(r);
  }

  void grow(std::vector<Vertex>& frontier) {
    ++nodes_;
    const auto s = static_cast<std::int64_t>(set_.size());
    if (best_.beaten_by(edges_, s)) {
      best_.e = edges_;
      best_.v = s;
      best_.set = set_;
    }
    if (s >= k_ || !extendable()) return;

    std::sort(frontier.begin(), frontier.end(), [&](Vertex a, Vertex b) {
      if (d_a_[a] != d_a_[b]) return d_a_[a] > d_a_[b];
      return pos_[a] > pos_[b];
    });
    std::size_t excluded = 0;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      const Vertex w = frontier[i];
      if (!candidate(w)) continue;
      std::vector<Vertex> next(frontier.begin() + static_cast<std::ptrdiff_t>(i) + 1, frontier.end());
      next.erase(std::remove_if(next.begin(), next.end(), [&](Vertex u) { return !candidate(u); }), next.end());
      include(w, next);
      grow(next);
      undo_include(w);
      exclude(w);
      frontier[excluded++] = w;
      if (!extendable()) break;
    }
    for (std::size_t i = 0; i < excluded; ++i) undo_exclude(frontier[i]);
  }

  const SimpleGraph& g_;
  const Adjacency& adj_;
  const std::int64_t k_;
  Incumbent& best_;
  const std::uint32_t n_;

  std::vector<Vertex> order_;
  std::vector<std::uint32_t> pos_;
  std::uint32_t omega_ = 1;
  std::vector<std::int64_t> turan_;
  std::vector<std::uint8_t> active_;
  std::vector<std::uint32_t> core_deg_;
  std::uint32_t min_degree_ = 0;

  std::vector<std::uint32_t> d_a_;
  std::vector<std::uint8_t> state_;
  std::vector<std::int64_t> hist_;
  std::vector<Vertex> set_;
  std::int64_t edges_ = 0;
  std::uint32_t root_pos_ = 0;
  std::uint64_t nodes_ = 0;
};

} // namespace

std::string to_string(DensityMethod m) {
  switch (m) {
  case DensityMethod::ExactSubsetScan: return "exact-subset-scan";
  case DensityMethod::BranchAndBound: return "branch-and-bound";
  case DensityMethod::LocalSearchHeuristic: return "local-search-heuristic";
  }
  return "unknown";
}

namespace {

DensityReport search(const SimpleGraph& g, std::uint32_t k, ScanMode mode, std::uint64_t seed) {
  const std::uint32_t cap = std::min(k, g.n());
  DensityReport report;
  report.size_cap = k;
  const Adjacency adj = adjacency_lists(g);
  Incumbent best;
  best.set = {0};
  heuristic_search(g, adj, cap, seed, mode == ScanMode::Heuristic ? 3 : 1, best);

  if (mode == ScanMode::Exact) {
    report.search_nodes = BranchAndBound(g, adj, cap, best).run();
    report.method = DensityMethod::BranchAndBound;
    report.proven_optimal = true;
  } else {
    report.method = DensityMethod::LocalSearchHeuristic;
  }
  std::sort(best.set.begin(), best.set.end());
  if (induced_edges(g, best.set) != best.e) throw Error("bounded_density_scan: witness edge count mismatch");
  report.density = Rational(best.e, best.v);
  report.witness = std::move(best.set);
  return report;
}

void check_cap(std::uint32_t k, ScanMode mode) {
  if (k < 1) throw InvalidArgument("bounded_density_scan: size cap must be at least 1");
  if (mode == ScanMode::Exact && k > kMaxExactScanCap)
    throw InvalidArgument("bounded_density_scan: exact mode needs k <= " + std::to_string(kMaxExactScanCap));
}

} // namespace

DensityReport bounded_density_scan(const SimpleGraph& g, std::uint32_t k, ScanMode mode, std::uint64_t seed) {
  check_cap(k, mode);
  if (mode == ScanMode::Exact && g.n() <= 16) {
    auto exact = max_density(g, std::min(k, g.n()));
    DensityReport report;
    report.size_cap = k;
    report.density = exact.density;
    report.witness = std::move(exact.witness);
    report.method = DensityMethod::ExactSubsetScan;
    report.proven_optimal = true;
    return report;
  }
  return search(g, k, mode, seed);
}

DensityReport branch_and_bound_density(const SimpleGraph& g, std::uint32_t k, std::uint64_t seed) {
  check_cap(k, ScanMode::Exact);
  return search(g, k, ScanMode::Exact, seed);
}

} // namespace hfree::analysis
