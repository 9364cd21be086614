#include "hfree/analysis.hpp"
#include "hfree/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace hfree::analysis {

namespace {

std::uint64_t intersection_size(const std::vector<PairId>& a, const std::vector<PairId>& b) {
  std::uint64_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

} // namespace

std::size_t TrajectoryStats::open_violations() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const CheckpointRecord& r) { return !r.open_within_slack; }));
}

double TrajectoryStats::max_open_ratio() const {
  double best = 0;
  for (const auto& r : records) best = std::max(best, r.open_ratio);
  return best;
}

TrajectoryMonitor::TrajectoryMonitor(TheoryConstants constants, MonitorConfig config)
    : constants_(std::move(constants)), config_(config), rng_(config.seed) {
  stats_.slack = config_.slack;
}

void TrajectoryMonitor::record(const ProcessState& state) {
  const std::uint64_t i = state.step_count();
  if (!stats_.records.empty() && i <= stats_.records.back().step) return;

  CheckpointRecord rec;
  rec.step = i;
  rec.t = constants_.t(i);
  rec.in_theorem_range = static_cast<double>(i) >= constants_.n2p && static_cast<std::int64_t>(i) <= constants_.m_steps;
  rec.edges = state.graph().edge_count();
  rec.open_pairs = state.open_count();
  rec.closed_pairs = state.closed_count();
  rec.partition_consistent = rec.open_pairs == pair_count(state.n()) - i - rec.closed_pairs && rec.edges == i;
  rec.open_reference = constants_.open_pair_reference(i);
  rec.open_ratio = static_cast<double>(rec.open_pairs) / rec.open_reference;
  rec.open_within_slack = rec.open_ratio < config_.slack;
  rec.max_degree = state.graph().max_degree();
  rec.cuv_reference = constants_.closed_set_reference(i);
  rec.intersection_reference = constants_.intersection_reference();

  const auto open = state.open_pairs();
  if (!open.empty() && config_.cuv_samples > 0) {
    std::uint64_t sum = 0;
    rec.cuv_min = std::numeric_limits<std::uint64_t>::max();
    for (std::size_t s = 0; s < config_.cuv_samples; ++s) {
      const PairId uv = open[uniform_below(rng_, open.size())];
      const std::uint64_t size = state.compute_C_uv(uv).size();
      sum += size;
      rec.cuv_min = std::min(rec.cuv_min, size);
      if (static_cast<double>(size) < rec.cuv_reference / config_.slack) ++rec.cuv_below_reference;
    }
    rec.cuv_samples = config_.cuv_samples;
    rec.cuv_mean = static_cast<double>(sum) / static_cast<double>(config_.cuv_samples);
  }
  if (open.size() >= 2 && config_.pair_samples > 0) {
    std::uint64_t sum = 0;
    for (std::size_t s = 0; s < config_.pair_samples; ++s) {
      const std::uint64_t x = uniform_below(rng_, open.size());
      std::uint64_t y = uniform_below(rng_, open.size() - 1);
      if (y >= x) ++y;
      const std::uint64_t size = intersection_size(state.compute_C_uv(open[x]), state.compute_C_uv(open[y]));
      sum += size;
      rec.intersection_max = std::max(rec.intersection_max, size);
      if (static_cast<double>(size) > rec.intersection_reference * config_.slack) ++rec.intersection_above_reference;
    }
    rec.intersection_samples = config_.pair_samples;
    rec.intersection_mean = static_cast<double>(sum) / static_cast<double>(config_.pair_samples);
  }
  stats_.records.push_back(rec);
}

TrajectoryStats monitor_trajectory(ProcessState& state, const StopRule& rule, std::span<const std::uint64_t> checkpoints,
                                   const TheoryConstants& constants, const MonitorConfig& config) {
  std::vector<std::uint64_t> sorted(checkpoints.begin(), checkpoints.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  TrajectoryMonitor monitor(constants, config);
  auto outcome = run_until(state, rule, sorted, [&](const ProcessState& s) { monitor.record(s); });
  auto stats = monitor.take();
  stats.skipped_checkpoints = std::move(outcome.skipped_checkpoints);
  return stats;
}

std::vector<std::uint64_t> theorem_window_checkpoints(const TheoryConstants& constants, std::size_t count) {
  if (count == 0) return {};
  const auto a = static_cast<std::uint64_t>(std::ceil(constants.n2p));
  const auto b = static_cast<std::uint64_t>(std::max<std::int64_t>(constants.m_steps, 0));
  const std::uint64_t lo = std::min(a, b), hi = std::max(a, b);
  std::vector<std::uint64_t> out;
  if (count == 1 || lo == hi) {
    out.push_back(lo);
    if (lo != hi) out.push_back(hi);
    return out;
  }
  for (std::size_t j = 0; j < count; ++j) {
    const long double frac = static_cast<long double>(j) / static_cast<long double>(count - 1);
    out.push_back(lo + static_cast<std::uint64_t>(std::llround(frac * static_cast<long double>(hi - lo))));
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

DensityTheoremReport verify_density_theorem(const SimpleGraph& g, const TheoryConstants& constants,
                                            std::optional<std::pair<double, std::uint32_t>> empirical,
                                            std::uint64_t seed) {
  DensityTheoremReport report;
  report.paper_mode = !empirical.has_value();
  if (empirical) {
    if (empirical->second < 1) throw InvalidArgument("verify_density_theorem: k' must be at least 1");
    report.c = empirical->first;
    report.size_cap = empirical->second;
  } else {
    report.c = constants.c;
    report.size_cap = constants.density_size_cap();
  }
  const auto k = static_cast<std::uint32_t>(std::min<std::uint64_t>(report.size_cap, std::max<std::uint32_t>(g.n(), 1)));
  report.vacuous = k <= 1 || report.c > (static_cast<double>(k) - 1.0) / 2.0;
  const ScanMode mode = k <= kMaxExactScanCap ? ScanMode::Exact : ScanMode::Heuristic;
  report.scan = bounded_density_scan(g, k, mode, seed);
  report.pass = boost::rational_cast<double>(report.scan.density) < report.c;
  report.induced_edge_reference = constants.induced_edge_reference(report.scan.witness.size());
  return report;
}

double CopyCountResult::presence_fraction() const {
  if (counts.empty()) return 0;
  const auto present = std::count_if(counts.begin(), counts.end(), [](std::uint64_t c) { return c > 0; });
  return static_cast<double>(present) / static_cast<double>(counts.size());
}

CopyCountResult count_copies_at_m(const Pattern& h, const Pattern& f, std::uint32_t n, const Rational& mu,
                                  std::size_t trials, std::uint64_t base_seed) {
  CopyCountResult result;
  result.m = compute_m(n, h, mu);
  if (f.vertex_count() >= h.vertex_count() && contains_copy(h, f.to_graph())) {
    result.impossible = true;
    result.reason = "F contains a copy of H";
  }
  const StopRule rule = PaperM{mu};
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t seed = base_seed + t;
    result.seeds.push_back(seed);
    if (result.impossible) {
      result.counts.push_back(0);
      continue;
    }
    auto state = ProcessState::init(n, h, seed);
    run_until(state, rule);
    result.counts.push_back(count_copies(f, state.graph()));
  }
  return result;
}

SimpleGraph baseline_uniform_process(std::uint32_t n, std::uint64_t steps, std::uint64_t seed) {
  auto g = SimpleGraph::new_empty(n);
  const std::uint64_t total = pair_count(n);
  if (steps > total)
    throw InvalidArgument("baseline_uniform_process: " + std::to_string(steps) + " steps exceed " +
                          std::to_string(total) + " pairs");
  std::vector<PairId> pool(total);
  for (PairId id = 0; id < total; ++id) pool[id] = id;
  Rng rng(seed);
  for (std::uint64_t s = 0; s < steps; ++s) {
    const std::uint64_t j = s + uniform_below(rng, total - s);
    std::swap(pool[s], pool[j]);
    const auto [u, v] = pair_from_index(pool[s], n);
    g.add_edge(u, v);
  }
  return g;
}

KeyInequalityRecord check_key_inequality(const ProcessState& state, const EdgeSetF& f, const TheoryConstants& constants) {
  KeyInequalityRecord rec;
  rec.step = state.step_count();
  const auto i = static_cast<std::int64_t>(rec.step);
  rec.in_range = 2 * i >= constants.m_steps && i <= constants.m_steps;
  rec.a = f.a();
  rec.open_pairs = state.open_count();

  std::vector<PairId> pairs(f.pairs.begin(), f.pairs.end());
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  rec.f_size = pairs.size();

  std::vector<std::vector<PairId>> sets;
  for (PairId id : pairs) {
    switch (state.pair_class(id)) {
    case PairClass::Edge: ++rec.f_edges; break;
    case PairClass::Closed: ++rec.f_closed; break;
    case PairClass::Open:
      ++rec.f_open;
      sets.push_back(state.compute_C_uv(id));
      break;
    }
  }
  rec.o_f = state.compute_O_F(pairs).size();
  for (std::size_t x = 0; x < sets.size(); ++x) {
    rec.sum_cuv += sets[x].size();
    for (std::size_t y = x + 1; y < sets.size(); ++y) rec.sum_intersections += intersection_size(sets[x], sets[y]);
  }
  rec.inclusion_exclusion_bound =
      static_cast<std::int64_t>(rec.sum_cuv) - static_cast<std::int64_t>(rec.sum_intersections);
  rec.inclusion_exclusion_holds = static_cast<std::int64_t>(rec.o_f) >= rec.inclusion_exclusion_bound;
  rec.f_avoids_closed = rec.f_closed == 0;
  rec.open_identity_holds = !rec.f_avoids_closed || rec.f_open == rec.f_size - rec.f_edges;
  rec.reference = constants.key_inequality_reference(rec.a, rec.open_pairs);
  rec.meets_reference = static_cast<double>(rec.o_f) >= rec.reference;
  return rec;
}

EdgeSetF random_edge_set(std::uint32_t n, std::uint32_t a, std::uint32_t f_size, Rng& rng) {
  if (a < 2 || a > n) throw InvalidArgument("random_edge_set: need 2 <= a <= n");
  const std::uint64_t inside = static_cast<std::uint64_t>(a) * (a - 1) / 2;
  if (f_size > inside) throw InvalidArgument("random_edge_set: more pairs requested than exist inside A");
  std::vector<Vertex> all(n);
  for (Vertex v = 0; v < n; ++v) all[v] = v;
  for (std::uint32_t s = 0; s < a; ++s) std::swap(all[s], all[s + uniform_below(rng, n - s)]);
  EdgeSetF f;
  f.vertices.assign(all.begin(), all.begin() + a);
  std::sort(f.vertices.begin(), f.vertices.end());
  std::vector<PairId> local(inside);
  for (PairId id = 0; id < inside; ++id) local[id] = id;
  for (std::uint32_t s = 0; s < f_size; ++s) {
    std::swap(local[s], local[s + uniform_below(rng, inside - s)]);
    const auto [x, y] = pair_from_index(local[s], a);
    f.pairs.push_back(pair_index(f.vertices[x], f.vertices[y], n));
  }
  std::sort(f.pairs.begin(), f.pairs.end());
  return f;
}

ExponentFit fit_edge_exponent(std::span<const std::pair<double, double>> n_and_count) {
  std::map<double, std::vector<double>> by_n;
  for (auto [n, c] : n_and_count) {
    if (!(n > 0) || !(c > 0)) throw InvalidArgument("fit_edge_exponent: n and counts must be positive");
    by_n[n].push_back(c);
  }
  if (by_n.size() < 4) throw InvalidArgument("fit_edge_exponent: need at least 4 distinct n values");
  for (const auto& [n, cs] : by_n)
    if (cs.size() < 3) throw InvalidArgument("fit_edge_exponent: need at least 3 trials per n");

  std::vector<double> xs, ys;
  for (const auto& [n, cs] : by_n) {
    double mean = 0;
    for (double c : cs) mean += c;
    mean /= static_cast<double>(cs.size());
    xs.push_back(std::log(n));
    ys.push_back(std::log(mean));
  }
  const auto k = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    mx += xs[j];
    my += ys[j];
  }
  mx /= k;
  my /= k;
  double sxx = 0, sxy = 0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    sxx += (xs[j] - mx) * (xs[j] - mx);
    sxy += (xs[j] - mx) * (ys[j] - my);
  }
  ExponentFit fit;
  fit.distinct_n = xs.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const double r = ys[j] - (fit.intercept + fit.slope * xs[j]);
    rss += r * r;
  }
  fit.slope_stderr = std::sqrt(rss / (k - 2) / sxx);
  fit.lower = fit.slope - 2 * fit.slope_stderr;
  fit.upper = fit.slope + 2 * fit.slope_stderr;
  return fit;
}

} // namespace hfree::analysis
