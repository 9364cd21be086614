#pragma once

#include "hfree/graph.hpp"
#include "hfree/patterns.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hfree {

enum class PairClass : std::uint8_t { Open = 0, Edge = 1, Closed = 2 };

std::string_view to_string(PairClass c);

using Rng = std::mt19937_64;
inline constexpr std::string_view kRngId = "mt19937_64";

/// Unbiased draw from [0, bound) by rejection on the raw 64-bit output, so
/// trajectories do not depend on the standard library's distributions.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

/// Anchored matchers for every closure template and anchor role of H.
class ClosureIndex {
public:
  explicit ClosureIndex(const Pattern& h);

  /// Open pairs uv such that g + uv contains an H-copy through both uv and
  /// the host edge {a, b}. Sorted, without duplicates.
  std::vector<PairId> closed_by(const SimpleGraph& g, std::span<const PairClass> classes, Vertex a, Vertex b) const;

private:
  struct Entry {
    EmbeddingPlan plan;
    PatternEdge missing;
  };
  std::vector<Entry> entries_;
};

struct HistoryEntry {
  std::uint64_t step = 0;
  PairId pair = 0;
  std::uint32_t newly_closed = 0;
  bool operator==(const HistoryEntry&) const = default;
};

/// F as a set of pairs inside a vertex set A.
struct EdgeSetF {
  std::vector<Vertex> vertices;
  std::vector<PairId> pairs;
  std::uint64_t a() const { return vertices.size(); }
};

/// Full state of the H-free process after some number of steps.
class ProcessState {
public:
  /// Throws InvalidArgument unless H is connected and strictly 2-balanced and
  /// v_H <= n.
  static ProcessState init(std::uint32_t n, const Pattern& h, std::uint64_t seed);

  const SimpleGraph& graph() const { return graph_; }
  const Pattern& forbidden() const { return *forbidden_; }
  std::uint32_t n() const { return graph_.n(); }
  std::uint64_t step_count() const { return step_; }
  std::uint64_t seed() const { return seed_; }

  PairClass pair_class(PairId id) const { return classes_[id]; }
  std::span<const PairClass> classes() const { return classes_; }
  std::span<const PairId> open_pairs() const { return open_; }
  std::uint64_t open_count() const { return open_.size(); }
  std::uint64_t closed_count() const { return closed_; }
  bool terminated() const { return open_.empty(); }
  const std::vector<HistoryEntry>& history() const { return history_; }

  /// Adds a uniformly random open pair; throws ProcessTerminated when none is left.
  PairId step();

  /// Open pairs that become closed because edge {a, b} (already present) was
  /// added.
  std::vector<PairId> newly_closed_after(Vertex a, Vertex b) const;

  /// C_uv(i) for an open pair; throws InvalidArgument otherwise.
  std::vector<PairId> compute_C_uv(PairId uv) const;

  /// O_F(i) = union of C_uv over the open pairs of F.
  std::vector<PairId> compute_O_F(std::span<const PairId> f) const;

  bool operator==(const ProcessState& other) const;

private:
  ProcessState() = default;

  void mark_not_open(PairId id, PairClass to);

  std::shared_ptr<const Pattern> forbidden_;
  std::shared_ptr<const ClosureIndex> closure_;
  SimpleGraph graph_ = SimpleGraph::new_empty(1);
  std::uint64_t step_ = 0;
  std::uint64_t closed_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<PairClass> classes_;
  std::vector<PairId> open_;
  std::vector<PairId> open_pos_;
  Rng rng_;
  std::vector<HistoryEntry> history_;
};

/// Free-function form of ProcessState::step.
PairId step(ProcessState& state);

struct StepCount {
  std::uint64_t steps = 0;
};
struct PaperM {
  Rational mu;
};
struct Exhaustion {};

using StopRule = std::variant<StepCount, PaperM, Exhaustion>;

/// "steps:<k>", "paper-m" (mu given separately) or "exhaustion".
std::string describe(const StopRule& rule);

/// Step target implied by the rule for this state (UINT64_MAX for exhaustion).
std::uint64_t target_steps(const StopRule& rule, const ProcessState& state);

struct RunOutcome {
  std::uint64_t target = 0;
  bool terminated = false;  // no open pairs remain
  std::vector<std::uint64_t> skipped_checkpoints;
};

using CheckpointFn = std::function<void(const ProcessState&)>;

/// Advances until the stop rule's target or exhaustion. on_checkpoint runs
/// whenever step_count() equals a checkpoint (checkpoints need not be sorted);
/// checkpoints never reached are reported as skipped.
RunOutcome run_until(ProcessState& state, const StopRule& rule, std::span<const std::uint64_t> checkpoints = {},
                     const CheckpointFn& on_checkpoint = {});

enum class EventLogMode { Steps, Checkpoints, Off };

struct EventLogHeader {
  std::uint32_t n = 0;
  std::string pattern;
  std::uint64_t seed = 0;
  std::string stop;
};

/// JSON-lines: a header record, then one record per step (Steps) or per
/// checkpoint step (Checkpoints). Pairs are written 1-based.
void write_event_log(std::ostream& out, const ProcessState& state, const EventLogHeader& header, EventLogMode mode,
                     std::span<const std::uint64_t> checkpoints = {});

} // namespace hfree
