#pragma once

#include "hfree/graph.hpp"
#include "hfree/patterns.hpp"
#include "hfree/process.hpp"
#include "hfree/theory.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hfree::analysis {

// ---------------------------------------------------------------------------
// Trajectory monitors for the open-pair, C_uv and intersection bounds.

struct MonitorConfig {
  std::size_t cuv_samples = 100;
  std::size_t pair_samples = 100;
  double slack = 3.0;
  /// Seed of the monitor's own sampling stream; the process RNG is untouched.
  std::uint64_t seed = 0;
};

struct CheckpointRecord {
  std::uint64_t step = 0;
  double t = 0;
  bool in_theorem_range = false;  // n^2 p <= i <= m
  std::uint64_t edges = 0;
  std::uint64_t open_pairs = 0;
  std::uint64_t closed_pairs = 0;
  bool partition_consistent = false;
  double open_reference = 0;  // q(t) n^2
  double open_ratio = 0;
  bool open_within_slack = false;

  std::size_t cuv_samples = 0;
  std::uint64_t cuv_min = 0;
  double cuv_mean = 0;
  double cuv_reference = 0;  // beta (2t)^(e_H-2) q(t) / p
  std::size_t cuv_below_reference = 0;  // |C_uv| < reference / slack

  std::size_t intersection_samples = 0;
  std::uint64_t intersection_max = 0;
  double intersection_mean = 0;
  double intersection_reference = 0;  // n^(-1/e_H) / p
  std::size_t intersection_above_reference = 0;  // > reference * slack

  std::uint32_t max_degree = 0;
};

struct TrajectoryStats {
  std::vector<CheckpointRecord> records;
  std::vector<std::uint64_t> skipped_checkpoints;
  double slack = 3.0;

  std::size_t open_violations() const;
  double max_open_ratio() const;
};

/// Checkpoint callback that samples the monitored quantities.
class TrajectoryMonitor {
public:
  TrajectoryMonitor(TheoryConstants constants, MonitorConfig config);

  void record(const ProcessState& state);
  const TrajectoryStats& stats() const { return stats_; }
  TrajectoryStats take() { return std::move(stats_); }

private:
  TheoryConstants constants_;
  MonitorConfig config_;
  Rng rng_;
  TrajectoryStats stats_;
};

/// Runs the process under `rule`, recording at each checkpoint. Checkpoints
/// beyond the process lifetime are reported in skipped_checkpoints.
TrajectoryStats monitor_trajectory(ProcessState& state, const StopRule& rule, std::span<const std::uint64_t> checkpoints,
                                   const TheoryConstants& constants, const MonitorConfig& config);

/// `count` evenly spaced checkpoints covering the closed interval between
/// n^2 p and m (whichever is smaller first).
std::vector<std::uint64_t> theorem_window_checkpoints(const TheoryConstants& constants, std::size_t count);

// ---------------------------------------------------------------------------
// Size-bounded density.

enum class ScanMode { Exact, Heuristic };
enum class DensityMethod { ExactSubsetScan, BranchAndBound, LocalSearchHeuristic };

std::string to_string(DensityMethod m);

struct DensityReport {
  std::uint32_t size_cap = 0;
  Rational density{0};
  std::vector<Vertex> witness;
  DensityMethod method = DensityMethod::LocalSearchHeuristic;
  bool proven_optimal = false;
  std::uint64_t search_nodes = 0;
};

/// Largest e(A)/|A| over 1 <= |A| <= k. Exact mode (k <= 12) is a
/// branch-and-bound over connected sets and proves optimality; heuristic mode
/// returns a lower bound from randomised greedy growth plus local swaps.
DensityReport bounded_density_scan(const SimpleGraph& g, std::uint32_t k, ScanMode mode, std::uint64_t seed = 0);

inline constexpr std::uint32_t kMaxExactScanCap = 12;

/// The exact branch-and-bound path on any host size (bounded_density_scan
/// switches to subset enumeration on hosts of at most 16 vertices).
DensityReport branch_and_bound_density(const SimpleGraph& g, std::uint32_t k, std::uint64_t seed = 0);

struct DensityTheoremReport {
  bool paper_mode = true;
  double c = 0;
  std::uint64_t size_cap = 0;
  /// The check cannot fail: only singletons, or c above (k-1)/2.
  bool vacuous = false;
  bool pass = false;
  /// max{8|A|/eps, p|A|^2 n^(2 eps)} at |A| = witness size.
  double induced_edge_reference = 0;
  DensityReport scan;
};

/// Checks e(A) < c|A| for all 1 <= |A| <= k. Paper mode takes c and
/// k = floor(n^d) from the constants; empirical mode takes (c', k').
DensityTheoremReport verify_density_theorem(const SimpleGraph& g, const TheoryConstants& constants,
                                            std::optional<std::pair<double, std::uint32_t>> empirical = std::nullopt,
                                            std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Copy counting and the unconstrained baseline.

struct CopyCountResult {
  bool impossible = false;
  std::string reason;
  std::int64_t m = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<std::uint64_t> counts;

  double presence_fraction() const;
};

/// Runs `trials` processes to floor(m) and counts copies of F in each.
/// Seeds are base_seed + trial. Flags F as impossible when it contains H.
CopyCountResult count_copies_at_m(const Pattern& h, const Pattern& f, std::uint32_t n, const Rational& mu,
                                  std::size_t trials, std::uint64_t base_seed);

/// Uniform random graph process G(n, steps).
SimpleGraph baseline_uniform_process(std::uint32_t n, std::uint64_t steps, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Closing-pair diagnostics for a fixed F.

struct KeyInequalityRecord {
  std::uint64_t step = 0;
  bool in_range = false;  // m/2 <= i <= m
  std::uint64_t a = 0;
  std::uint64_t f_size = 0;
  std::uint64_t f_edges = 0;
  std::uint64_t f_open = 0;
  std::uint64_t f_closed = 0;
  std::uint64_t open_pairs = 0;
  std::uint64_t o_f = 0;
  std::uint64_t sum_cuv = 0;
  /// Sum over unordered distinct pairs of open F-pairs.
  std::uint64_t sum_intersections = 0;
  std::int64_t inclusion_exclusion_bound = 0;
  bool inclusion_exclusion_holds = false;
  /// F shares no pair with C(i).
  bool f_avoids_closed = false;
  /// |F n O(i)| = |F| - |F n E(i)|, meaningful when f_avoids_closed.
  bool open_identity_holds = false;
  double reference = 0;  // 13 a ln(n) / m * |O(i)|
  bool meets_reference = false;
};

KeyInequalityRecord check_key_inequality(const ProcessState& state, const EdgeSetF& f, const TheoryConstants& constants);

/// Random F: `a` distinct vertices and `f_size` distinct pairs inside them.
EdgeSetF random_edge_set(std::uint32_t n, std::uint32_t a, std::uint32_t f_size, Rng& rng);

// ---------------------------------------------------------------------------

struct ExponentFit {
  double slope = 0;
  double intercept = 0;
  double slope_stderr = 0;
  double lower = 0;  // slope -/+ 2 standard errors
  double upper = 0;
  std::size_t distinct_n = 0;
};

/// Least squares of ln(mean count) on ln n. Needs >= 4 distinct n with >= 3
/// observations each.
ExponentFit fit_edge_exponent(std::span<const std::pair<double, double>> n_and_count);

} // namespace hfree::analysis
