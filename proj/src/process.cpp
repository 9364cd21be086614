#include "hfree/process.hpp"

#include "hfree/errors.hpp"
#include "hfree/theory.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <limits>
#include <ostream>
#include <unordered_set>

namespace hfree {

std::string_view to_string(PairClass c) {
  switch (c) {
  case PairClass::Open: return "open";
  case PairClass::Edge: return "edge";
  case PairClass::Closed: return "closed";
  }
  return "?";
}

std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound == 0) throw InvalidArgument("uniform_below: empty range");
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do x = rng();
  while (x >= limit);
  return x % bound;
}

ClosureIndex::ClosureIndex(const Pattern& h) {
  for (const auto& t : closure_templates(h))
    for (const auto& role : t.anchor_roles) entries_.push_back({EmbeddingPlan(t.base, role), t.missing_pair});
}

std::vector<PairId> ClosureIndex::closed_by(const SimpleGraph& g, std::span<const PairClass> classes, Vertex a,
                                            Vertex b) const {
  std::vector<PairId> out;
  const std::uint32_t n = g.n();
  for (const auto& entry : entries_) {
    entry.plan.for_each(g, std::pair{a, b}, [&](std::span<const Vertex> image) {
      const PairId id = pair_index(image[entry.missing.a], image[entry.missing.b], n);
      if (classes[id] == PairClass::Open) out.push_back(id);
      return true;
    });
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ProcessState ProcessState::init(std::uint32_t n, const Pattern& h, std::uint64_t seed) {
  require_forbidden_pattern(h);
  if (n < static_cast<std::uint32_t>(h.vertex_count()))
    throw InvalidArgument("process needs n >= v_H (n = " + std::to_string(n) + ", v_H = " +
                          std::to_string(h.vertex_count()) + ")");
  ProcessState s;
  s.forbidden_ = std::make_shared<const Pattern>(h);
  s.closure_ = std::make_shared<const ClosureIndex>(h);
  s.graph_ = SimpleGraph::new_empty(n);
  s.seed_ = seed;
  s.rng_.seed(seed);
  const auto pairs = pair_count(n);
  s.classes_.assign(pairs, PairClass::Open);
  s.open_.resize(pairs);
  s.open_pos_.resize(pairs);
  for (PairId id = 0; id < pairs; ++id) s.open_[id] = s.open_pos_[id] = id;
  return s;
}

void ProcessState::mark_not_open(PairId id, PairClass to) {
  const PairId pos = open_pos_[id];
  const PairId last = open_.back();
  open_[pos] = last;
  open_pos_[last] = pos;
  open_.pop_back();
  classes_[id] = to;
}

PairId ProcessState::step() {
  if (open_.empty()) throw ProcessTerminated("no open pairs left after step " + std::to_string(step_));
  const PairId chosen = open_[uniform_below(rng_, open_.size())];
  const auto [u, v] = pair_from_index(chosen, n());
  mark_not_open(chosen, PairClass::Edge);
  graph_.add_edge(u, v);
  const auto closed = newly_closed_after(u, v);
  for (PairId id : closed) mark_not_open(id, PairClass::Closed);
  closed_ += closed.size();
  ++step_;
  history_.push_back({step_, chosen, static_cast<std::uint32_t>(closed.size())});
  return chosen;
}

std::vector<PairId> ProcessState::newly_closed_after(Vertex a, Vertex b) const {
  if (!graph_.has_edge(a, b)) throw InvalidArgument("newly_closed_after: pair is not an edge");
  return closure_->closed_by(graph_, classes_, a, b);
}

std::vector<PairId> ProcessState::compute_C_uv(PairId uv) const {
  if (uv >= classes_.size() || classes_[uv] != PairClass::Open)
    throw InvalidArgument("compute_C_uv: pair is not open");
  const auto [u, v] = pair_from_index(uv, n());
  // Since G(i) + uv is H-free, every copy in G(i) + uv + xy uses xy.
  SimpleGraph scratch = graph_;
  scratch.add_edge(u, v);
  return closure_->closed_by(scratch, classes_, u, v);
}

std::vector<PairId> ProcessState::compute_O_F(std::span<const PairId> f) const {
  std::vector<PairId> out;
  for (PairId uv : f) {
    if (uv >= classes_.size()) throw InvalidArgument("compute_O_F: pair id out of range");
    if (classes_[uv] != PairClass::Open) continue;
    const auto c = compute_C_uv(uv);
    out.insert(out.end(), c.begin(), c.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool ProcessState::operator==(const ProcessState& other) const {
  return forbidden_->name() == other.forbidden_->name() && graph_ == other.graph_ && step_ == other.step_ &&
         closed_ == other.closed_ && seed_ == other.seed_ && classes_ == other.classes_ && open_ == other.open_ &&
         open_pos_ == other.open_pos_ && rng_ == other.rng_ && history_ == other.history_;
}

PairId step(ProcessState& state) { return state.step(); }

std::string describe(const StopRule& rule) {
  if (const auto* s = std::get_if<StepCount>(&rule)) return "steps:" + std::to_string(s->steps);
  if (const auto* m = std::get_if<PaperM>(&rule)) return "paper-m(mu=" + format_rational(m->mu) + ")";
  return "exhaustion";
}

std::uint64_t target_steps(const StopRule& rule, const ProcessState& state) {
  if (const auto* s = std::get_if<StepCount>(&rule)) return s->steps;
  if (const auto* m = std::get_if<PaperM>(&rule)) {
    const auto steps = compute_m(state.n(), state.forbidden(), m->mu);
    return static_cast<std::uint64_t>(std::max<std::int64_t>(steps, 0));
  }
  return std::numeric_limits<std::uint64_t>::max();
}

RunOutcome run_until(ProcessState& state, const StopRule& rule, std::span<const std::uint64_t> checkpoints,
                     const CheckpointFn& on_checkpoint) {
  RunOutcome outcome;
  outcome.target = target_steps(rule, state);
  std::vector<std::uint64_t> pending(checkpoints.begin(), checkpoints.end());
  std::sort(pending.begin(), pending.end());
  pending.erase(std::unique(pending.begin(), pending.end()), pending.end());
  auto next = std::lower_bound(pending.begin(), pending.end(), state.step_count());

  auto fire = [&] {
    while (next != pending.end() && *next == state.step_count()) {
      if (on_checkpoint) on_checkpoint(state);
      ++next;
    }
  };
  fire();
  while (state.step_count() < outcome.target && !state.terminated()) {
    state.step();
    fire();
  }
  outcome.terminated = state.terminated();
  outcome.skipped_checkpoints.assign(next, pending.end());
  return outcome;
}

void write_event_log(std::ostream& out, const ProcessState& state, const EventLogHeader& header, EventLogMode mode,
                     std::span<const std::uint64_t> checkpoints) {
  if (mode == EventLogMode::Off) return;
  nlohmann::ordered_json head;
  head["type"] = "header";
  head["n"] = header.n;
  head["H"] = header.pattern;
  head["seed"] = header.seed;
  head["rng"] = std::string(kRngId);
  head["stop"] = header.stop;
  head["log"] = std::string(kLogConvention);
  out << head.dump() << '\n';
  std::unordered_set<std::uint64_t> wanted(checkpoints.begin(), checkpoints.end());
  for (const auto& h : state.history()) {
    if (mode == EventLogMode::Checkpoints && !wanted.count(h.step)) continue;
    const auto [u, v] = pair_from_index(h.pair, state.n());
    nlohmann::ordered_json rec;
    rec["step"] = h.step;
    rec["chosen_pair"] = {u + 1, v + 1};
    rec["newly_closed_count"] = h.newly_closed;
    out << rec.dump() << '\n';
  }
}

} // namespace hfree
