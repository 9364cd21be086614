#pragma once

#include "hfree/analysis.hpp"
#include "hfree/process.hpp"
#include "hfree/theory.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hfree::harness {

inline constexpr std::string_view kArtifactVersion = HFREE_VERSION;

enum class CheckpointKind { None, Window, Every, List };

/// Checkpoint schedule: "none", "window:<count>" (evenly spaced between
/// n^2 p and m), "every:<k>" (0, k, 2k, ... up to the step target) or
/// "list:<i1>,<i2>,...".
struct CheckpointSchedule {
  CheckpointKind kind = CheckpointKind::None;
  std::uint64_t value = 0;
  std::vector<std::uint64_t> steps;

  bool operator==(const CheckpointSchedule&) const = default;
};

CheckpointSchedule parse_checkpoints(std::string_view text);
std::string to_string(const CheckpointSchedule& s);

enum class StopKind { Steps, PaperM, Exhaustion };

struct ExperimentConfig {
  std::string pattern = "C3";
  std::vector<std::uint32_t> n_values{100};
  std::uint32_t trials = 1;
  std::uint64_t seed = 1;
  StopKind stop = StopKind::Exhaustion;
  std::uint64_t stop_steps = 0;
  std::optional<Rational> eps;
  std::optional<Rational> mu;
  CheckpointSchedule checkpoints;
  bool monitor = false;
  std::uint64_t monitor_samples = 100;
  std::uint64_t monitor_pair_samples = 100;
  Rational monitor_slack{3};
  std::uint32_t density_k = 0;  // 0 disables the scan
  analysis::ScanMode density_mode = analysis::ScanMode::Exact;
  std::vector<std::string> copy_patterns;
  EventLogMode event_log = EventLogMode::Checkpoints;
  std::string out = "runs/default";
  std::uint32_t workers = 1;

  bool operator==(const ExperimentConfig&) const = default;

  /// (eps, mu) from the overrides, falling back to default_eps_mu(H).
  EpsMu eps_mu(const Pattern& h) const;
  StopRule stop_rule(const Pattern& h) const;
  /// base seed + n_index * trials + trial_index
  std::uint64_t trial_seed(std::size_t n_index, std::uint32_t trial) const;
};

/// Flat "key = value" text. Blank lines and lines starting with '#' are
/// ignored; unknown keys, duplicates and malformed values throw
/// InvalidArgument naming the line.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Canonical text: every key, fixed order. parse_config(to_text(c)) == c.
std::string to_text(const ExperimentConfig& config);
/// FNV-1a 64 of the canonical text with `out` and `workers` reset to their
/// defaults, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);
/// Rejects configurations that cannot run (bad pattern, n list, etc.).
void validate(const ExperimentConfig& config);

/// Seed of the monitor's sampling stream for a trial; independent of the
/// process stream.
std::uint64_t monitor_seed(std::uint64_t trial_seed);

struct CopyCount {
  std::string pattern;
  std::uint64_t copies = 0;
  bool impossible = false;  // F contains H
};

struct TrialResult {
  std::uint32_t n = 0;
  std::size_t n_index = 0;
  std::uint32_t trial = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  std::uint64_t steps = 0;
  std::uint64_t edges = 0;
  std::uint64_t open_pairs = 0;
  std::uint64_t closed_pairs = 0;
  bool terminated = false;
  std::uint32_t max_degree = 0;
  analysis::TrajectoryStats trajectory;
  std::optional<analysis::DensityReport> density;
  std::vector<CopyCount> copies;
  std::vector<std::string> files;
  double seconds = 0;
};

/// Runs one trial in memory. Per-trial files are written only when
/// trial_dir is given.
TrialResult run_trial(const ExperimentConfig& config, std::size_t n_index, std::uint32_t trial,
                      const std::optional<std::filesystem::path>& trial_dir = std::nullopt);

struct RunOptions {
  bool force = false;
};

struct RunSummary {
  std::filesystem::path out;
  std::vector<TrialResult> trials;
  std::size_t failures = 0;
};

/// Full experiment: manifest, per-trial outputs, CSV tables. Trials run on
/// `config.workers` threads; results do not depend on the worker count.
/// Throws InvalidArgument if the output directory is not writable-once.
RunSummary run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Aggregates an output directory: per-n statistics, exponent fit and
/// monitor violation summary. Throws InvalidArgument for a missing or
/// corrupt manifest.
nlohmann::ordered_json analyze_run(const std::filesystem::path& dir);

} // namespace hfree::harness
