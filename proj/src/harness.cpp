#include "hfree/harness.hpp"
#include "hfree/errors.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;

namespace hfree::harness {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::uint64_t parse_u64(std::string_view s, std::string_view what) {
  s = trim(s);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw InvalidArgument(std::string(what) + ": expected a non-negative integer, got '" + std::string(s) + "'");
  return v;
}

std::uint32_t parse_u32(std::string_view s, std::string_view what) {
  const auto v = parse_u64(s, what);
  if (v > UINT32_MAX) throw InvalidArgument(std::string(what) + ": value too large");
  return static_cast<std::uint32_t>(v);
}

bool parse_switch(std::string_view s, std::string_view what) {
  if (s == "on") return true;
  if (s == "off") return false;
  throw InvalidArgument(std::string(what) + ": expected on or off");
}

std::string join_u64(const std::vector<std::uint64_t>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + std::to_string(xs[i]);
  return out;
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string csv_safe(std::string s) {
  for (char& ch : s)
    if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
  return s;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string_view to_string(EventLogMode m) {
  switch (m) {
  case EventLogMode::Steps: return "steps";
  case EventLogMode::Checkpoints: return "checkpoints";
  case EventLogMode::Off: return "off";
  }
  return "off";
}

std::vector<std::uint64_t> resolve_checkpoints(const ExperimentConfig& cfg, const TheoryConstants& k,
                                               std::uint64_t target, std::uint64_t pairs) {
  switch (cfg.checkpoints.kind) {
  case CheckpointKind::None: return {};
  case CheckpointKind::Window: return analysis::theorem_window_checkpoints(k, cfg.checkpoints.value);
  case CheckpointKind::List: return cfg.checkpoints.steps;
  case CheckpointKind::Every: {
    std::vector<std::uint64_t> out;
    const std::uint64_t last = std::min(target, pairs);
    for (std::uint64_t i = 0; i <= last; i += cfg.checkpoints.value) out.push_back(i);
    return out;
  }
  }
  return {};
}

} // namespace

// ---------------------------------------------------------------------------
// Configuration.

CheckpointSchedule parse_checkpoints(std::string_view text) {
  text = trim(text);
  CheckpointSchedule s;
  if (text == "none") return s;
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw InvalidArgument("checkpoints: expected none, window:, every: or list:");
  const auto kind = text.substr(0, colon);
  const auto rest = text.substr(colon + 1);
  if (kind == "window" || kind == "every") {
    s.kind = kind == "window" ? CheckpointKind::Window : CheckpointKind::Every;
    s.value = parse_u64(rest, "checkpoints");
    if (s.value == 0) throw InvalidArgument("checkpoints: count must be positive");
    return s;
  }
  if (kind == "list") {
    s.kind = CheckpointKind::List;
    for (auto part : split(rest, ',')) s.steps.push_back(parse_u64(part, "checkpoints"));
    if (!std::is_sorted(s.steps.begin(), s.steps.end()) ||
        std::adjacent_find(s.steps.begin(), s.steps.end()) != s.steps.end())
      throw InvalidArgument("checkpoints: list must be strictly increasing");
    return s;
  }
  throw InvalidArgument("checkpoints: unknown schedule '" + std::string(kind) + "'");
}

std::string to_string(const CheckpointSchedule& s) {
  switch (s.kind) {
  case CheckpointKind::None: return "none";
  case CheckpointKind::Window: return "window:" + std::to_string(s.value);
  case CheckpointKind::Every: return "every:" + std::to_string(s.value);
  case CheckpointKind::List: return "list:" + join_u64(s.steps);
  }
  return "none";
}

EpsMu ExperimentConfig::eps_mu(const Pattern& h) const {
  EpsMu em = (eps && mu) ? EpsMu{*eps, *mu} : default_eps_mu(h);
  if (eps) em.eps = *eps;
  if (mu) em.mu = *mu;
  return em;
}

StopRule ExperimentConfig::stop_rule(const Pattern& h) const {
  switch (stop) {
  case StopKind::Steps: return StepCount{stop_steps};
  case StopKind::PaperM: return PaperM{eps_mu(h).mu};
  case StopKind::Exhaustion: return Exhaustion{};
  }
  return Exhaustion{};
}

std::uint64_t ExperimentConfig::trial_seed(std::size_t n_index, std::uint32_t trial) const {
  return seed + static_cast<std::uint64_t>(n_index) * trials + trial;
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    const std::string where = "config line " + std::to_string(line_no);
    if (eq == std::string_view::npos) throw InvalidArgument(where + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw InvalidArgument(where + ": duplicate key '" + key + "'");
    try {
      if (key == "pattern") {
        if (value.empty()) throw InvalidArgument("pattern: empty");
        c.pattern = std::string(value);
      } else if (key == "n") {
        c.n_values.clear();
        for (auto part : split(value, ',')) c.n_values.push_back(parse_u32(part, "n"));
      } else if (key == "trials") {
        c.trials = parse_u32(value, "trials");
      } else if (key == "seed") {
        c.seed = parse_u64(value, "seed");
      } else if (key == "stop") {
        if (value == "exhaustion") {
          c.stop = StopKind::Exhaustion;
          c.stop_steps = 0;
        } else if (value == "paper-m") {
          c.stop = StopKind::PaperM;
          c.stop_steps = 0;
        } else if (value.substr(0, 6) == "steps:") {
          c.stop = StopKind::Steps;
          c.stop_steps = parse_u64(value.substr(6), "stop");
        } else {
          throw InvalidArgument("stop: expected exhaustion, paper-m or steps:<k>");
        }
      } else if (key == "eps" || key == "mu") {
        std::optional<Rational> r;
        if (value != "default") r = parse_decimal(value);
        (key == "eps" ? c.eps : c.mu) = r;
      } else if (key == "checkpoints") {
        c.checkpoints = parse_checkpoints(value);
      } else if (key == "monitor") {
        c.monitor = parse_switch(value, "monitor");
      } else if (key == "monitor_samples") {
        c.monitor_samples = parse_u64(value, key);
      } else if (key == "monitor_pair_samples") {
        c.monitor_pair_samples = parse_u64(value, key);
      } else if (key == "monitor_slack") {
        c.monitor_slack = parse_decimal(value);
      } else if (key == "density_k") {
        c.density_k = parse_u32(value, key);
      } else if (key == "density_mode") {
        if (value == "exact") c.density_mode = analysis::ScanMode::Exact;
        else if (value == "heuristic") c.density_mode = analysis::ScanMode::Heuristic;
        else throw InvalidArgument("density_mode: expected exact or heuristic");
      } else if (key == "copy_patterns") {
        c.copy_patterns.clear();
        if (value != "none")
          for (auto part : split(value, ';')) {
            if (part.empty()) throw InvalidArgument("copy_patterns: empty entry");
            c.copy_patterns.emplace_back(part);
          }
      } else if (key == "event_log") {
        if (value == "steps") c.event_log = EventLogMode::Steps;
        else if (value == "checkpoints") c.event_log = EventLogMode::Checkpoints;
        else if (value == "off") c.event_log = EventLogMode::Off;
        else throw InvalidArgument("event_log: expected steps, checkpoints or off");
      } else if (key == "out") {
        if (value.empty()) throw InvalidArgument("out: empty");
        c.out = std::string(value);
      } else if (key == "workers") {
        c.workers = parse_u32(value, "workers");
      } else {
        throw InvalidArgument("unknown key '" + key + "'");
      }
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(where + ": " + e.what());
    }
  }
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_text(const ExperimentConfig& c) {
  std::ostringstream o;
  std::string ns;
  for (std::size_t i = 0; i < c.n_values.size(); ++i) ns += (i ? ", " : "") + std::to_string(c.n_values[i]);
  std::string copies;
  for (std::size_t i = 0; i < c.copy_patterns.size(); ++i) copies += (i ? "; " : "") + c.copy_patterns[i];
  std::string stop = c.stop == StopKind::Steps ? "steps:" + std::to_string(c.stop_steps)
                     : c.stop == StopKind::PaperM ? "paper-m"
                                                  : "exhaustion";
  o << "pattern = " << c.pattern << '\n'
    << "n = " << ns << '\n'
    << "trials = " << c.trials << '\n'
    << "seed = " << c.seed << '\n'
    << "stop = " << stop << '\n'
    << "eps = " << (c.eps ? format_rational(*c.eps) : "default") << '\n'
    << "mu = " << (c.mu ? format_rational(*c.mu) : "default") << '\n'
    << "checkpoints = " << to_string(c.checkpoints) << '\n'
    << "monitor = " << (c.monitor ? "on" : "off") << '\n'
    << "monitor_samples = " << c.monitor_samples << '\n'
    << "monitor_pair_samples = " << c.monitor_pair_samples << '\n'
    << "monitor_slack = " << format_rational(c.monitor_slack) << '\n'
    << "density_k = " << c.density_k << '\n'
    << "density_mode = " << (c.density_mode == analysis::ScanMode::Exact ? "exact" : "heuristic") << '\n'
    << "copy_patterns = " << (copies.empty() ? "none" : copies) << '\n'
    << "event_log = " << to_string(c.event_log) << '\n'
    << "out = " << c.out << '\n'
    << "workers = " << c.workers << '\n';
  return o.str();
}

std::string config_hash(const ExperimentConfig& config) {
  ExperimentConfig analytic = config;
  analytic.out = ExperimentConfig{}.out;
  analytic.workers = ExperimentConfig{}.workers;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(to_text(analytic))));
  return buf;
}

void validate(const ExperimentConfig& c) {
  const auto h = parse_pattern(c.pattern);
  require_forbidden_pattern(h);
  if (c.n_values.empty()) throw InvalidArgument("n: at least one value required");
  for (auto n : c.n_values)
    if (n < static_cast<std::uint32_t>(h.vertex_count()) || n > kMaxVertices)
      throw InvalidArgument("n: values must lie in [" + std::to_string(h.vertex_count()) + ", " +
                            std::to_string(kMaxVertices) + "] for " + h.name());
  if (c.trials < 1) throw InvalidArgument("trials: must be at least 1");
  if (c.workers < 1) throw InvalidArgument("workers: must be at least 1");
  if ((c.eps && *c.eps <= 0) || (c.mu && *c.mu <= 0)) throw InvalidArgument("eps and mu must be positive");
  const auto em = c.eps_mu(h);
  const auto check = validate_eps_mu(h, em.eps, em.mu);
  if (!check.ok) throw InvalidArgument("eps/mu: " + check.diagnostics.front());
  if (c.monitor_slack <= 0) throw InvalidArgument("monitor_slack: must be positive");
  if (c.density_k > 0 && c.density_mode == analysis::ScanMode::Exact && c.density_k > analysis::kMaxExactScanCap)
    throw InvalidArgument("density_k: exact mode needs k <= " + std::to_string(analysis::kMaxExactScanCap));
  for (const auto& f : c.copy_patterns) parse_pattern(f);
}

std::uint64_t monitor_seed(std::uint64_t trial_seed) {
  // splitmix64 finaliser
  std::uint64_t z = trial_seed + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// ---------------------------------------------------------------------------
// Trials.

TrialResult run_trial(const ExperimentConfig& cfg, std::size_t n_index, std::uint32_t trial,
                      const std::optional<fs::path>& trial_dir) {
  TrialResult r;
  r.n = cfg.n_values.at(n_index);
  r.n_index = n_index;
  r.trial = trial;
  r.seed = cfg.trial_seed(n_index, trial);
  const auto start = std::chrono::steady_clock::now();
  try {
    const auto h = parse_pattern(cfg.pattern);
    auto state = ProcessState::init(r.n, h, r.seed);
    const auto constants = make_constants(h, r.n, cfg.eps_mu(h));
    const auto rule = cfg.stop_rule(h);
    const auto checkpoints = resolve_checkpoints(cfg, constants, target_steps(rule, state), pair_count(r.n));

    if (cfg.monitor) {
      analysis::MonitorConfig mc;
      mc.cuv_samples = cfg.monitor_samples;
      mc.pair_samples = cfg.monitor_pair_samples;
      mc.slack = boost::rational_cast<double>(cfg.monitor_slack);
      mc.seed = monitor_seed(r.seed);
      r.trajectory = analysis::monitor_trajectory(state, rule, checkpoints, constants, mc);
    } else {
      r.trajectory.skipped_checkpoints = run_until(state, rule, checkpoints).skipped_checkpoints;
    }

    r.steps = state.step_count();
    r.edges = state.graph().edge_count();
    r.open_pairs = state.open_count();
    r.closed_pairs = state.closed_count();
    r.terminated = state.terminated();
    r.max_degree = state.graph().max_degree();

    if (cfg.density_k > 0) r.density = analysis::bounded_density_scan(state.graph(), cfg.density_k, cfg.density_mode, r.seed);
    for (const auto& spec : cfg.copy_patterns) {
      const auto f = parse_pattern(spec);
      CopyCount cc{spec, 0, f.vertex_count() >= h.vertex_count() && contains_copy(h, f.to_graph())};
      if (!cc.impossible) cc.copies = count_copies(f, state.graph());
      r.copies.push_back(cc);
    }

    if (trial_dir) {
      fs::create_directories(*trial_dir);
      if (cfg.event_log != EventLogMode::Off) {
        std::ofstream ev(*trial_dir / "events.jsonl");
        EventLogHeader header{r.n, h.name(), r.seed, describe(rule)};
        write_event_log(ev, state, header, cfg.event_log, checkpoints);
        r.files.push_back((*trial_dir / "events.jsonl").string());
      }
      std::ofstream edges(*trial_dir / "final.edges");
      write_edge_list(edges, state.graph());
      r.files.push_back((*trial_dir / "final.edges").string());
    }
    r.ok = true;
  } catch (const std::exception& e) {
    r.ok = false;
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

// ---------------------------------------------------------------------------
// Experiment driver and tables.

namespace {

void prepare_output(const fs::path& dir, bool force) {
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir)) throw InvalidArgument("output path " + dir.string() + " is not a directory");
    if (!fs::is_empty(dir)) {
      if (!force) throw InvalidArgument("output directory " + dir.string() + " is not empty; pass --force to replace it");
      if (!fs::exists(dir / "manifest.json"))
        throw InvalidArgument("refusing to clear " + dir.string() + ": it holds no manifest.json");
      for (const auto& entry : fs::directory_iterator(dir)) fs::remove_all(entry.path());
    }
  }
  fs::create_directories(dir);
}

std::string metadata_line(const ExperimentConfig& cfg, std::string_view table) {
  nlohmann::ordered_json j;
  j["table"] = table;
  j["config_hash"] = config_hash(cfg);
  j["artifact_version"] = kArtifactVersion;
  j["seed"] = cfg.seed;
  j["rng"] = kRngId;
  j["log"] = kLogConvention;
  j["pattern"] = cfg.pattern;
  return "# " + j.dump() + "\n";
}

std::string iso_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_tables(const fs::path& dir, const ExperimentConfig& cfg, const std::vector<TrialResult>& trials,
                  std::vector<std::string>& tables) {
  {
    std::ofstream o(dir / "final.csv");
    o << metadata_line(cfg, "final");
    o << "n,trial,seed,status,steps,edges,open_pairs,closed_pairs,terminated,max_degree,error\n";
    for (const auto& t : trials)
      o << t.n << ',' << t.trial << ',' << t.seed << ',' << (t.ok ? "ok" : "failed") << ',' << t.steps << ','
        << t.edges << ',' << t.open_pairs << ',' << t.closed_pairs << ',' << (t.terminated ? 1 : 0) << ','
        << t.max_degree << ',' << csv_safe(t.error) << '\n';
    tables.push_back("final.csv");
  }
  if (cfg.monitor) {
    std::ofstream o(dir / "trajectory.csv");
    o << metadata_line(cfg, "trajectory");
    o << "n,trial,seed,step,t,in_theorem_range,edges,open_pairs,closed_pairs,partition_consistent,open_reference,"
         "open_ratio,open_within_slack,cuv_samples,cuv_min,cuv_mean,cuv_reference,cuv_below_reference,"
         "intersection_samples,intersection_max,intersection_mean,intersection_reference,"
         "intersection_above_reference,max_degree\n";
    for (const auto& t : trials)
      for (const auto& r : t.trajectory.records)
        o << t.n << ',' << t.trial << ',' << t.seed << ',' << r.step << ',' << fmt(r.t) << ','
          << (r.in_theorem_range ? 1 : 0) << ',' << r.edges << ',' << r.open_pairs << ',' << r.closed_pairs << ','
          << (r.partition_consistent ? 1 : 0) << ',' << fmt(r.open_reference) << ',' << fmt(r.open_ratio) << ','
          << (r.open_within_slack ? 1 : 0) << ',' << r.cuv_samples << ',' << r.cuv_min << ',' << fmt(r.cuv_mean)
          << ',' << fmt(r.cuv_reference) << ',' << r.cuv_below_reference << ',' << r.intersection_samples << ','
          << r.intersection_max << ',' << fmt(r.intersection_mean) << ',' << fmt(r.intersection_reference) << ','
          << r.intersection_above_reference << ',' << r.max_degree << '\n';
    tables.push_back("trajectory.csv");
  }
  if (cfg.density_k > 0) {
    std::ofstream o(dir / "density.csv");
    o << metadata_line(cfg, "density");
    o << "n,trial,seed,k,method,proven_optimal,density_num,density_den,density,witness_size,witness,c,below_c,"
         "paper_size_cap,paper_vacuous\n";
    const auto h = parse_pattern(cfg.pattern);
    for (const auto& t : trials) {
      if (!t.density) continue;
      const auto& d = *t.density;
      const auto k = make_constants(h, t.n, cfg.eps_mu(h));
      const double value = boost::rational_cast<double>(d.density);
      std::string witness;
      for (std::size_t i = 0; i < d.witness.size(); ++i) witness += (i ? " " : "") + std::to_string(d.witness[i] + 1);
      const auto paper_cap = k.density_size_cap();
      const bool vacuous = paper_cap <= 1 || k.c > (static_cast<double>(paper_cap) - 1.0) / 2.0;
      o << t.n << ',' << t.trial << ',' << t.seed << ',' << d.size_cap << ',' << analysis::to_string(d.method) << ','
        << (d.proven_optimal ? 1 : 0) << ',' << d.density.numerator() << ',' << d.density.denominator() << ','
        << fmt(value) << ',' << d.witness.size() << ',' << witness << ',' << fmt(k.c) << ',' << (value < k.c ? 1 : 0)
        << ',' << paper_cap << ',' << (vacuous ? 1 : 0) << '\n';
    }
    tables.push_back("density.csv");
  }
  if (!cfg.copy_patterns.empty()) {
    std::ofstream o(dir / "copies.csv");
    o << metadata_line(cfg, "copies");
    o << "n,trial,seed,step,pattern,copies,impossible\n";
    for (const auto& t : trials)
      for (const auto& c : t.copies)
        o << t.n << ',' << t.trial << ',' << t.seed << ',' << t.steps << ',' << csv_safe(c.pattern) << ','
          << c.copies << ',' << (c.impossible ? 1 : 0) << '\n';
    tables.push_back("copies.csv");
  }
}

void write_manifest(const fs::path& dir, const nlohmann::ordered_json& manifest) {
  std::ofstream o(dir / "manifest.json");
  o << manifest.dump(2) << '\n';
}

} // namespace

RunSummary run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
  validate(cfg);
  const fs::path dir(cfg.out);
  prepare_output(dir, options.force);

  nlohmann::ordered_json manifest;
  manifest["artifact"] = "hfree";
  manifest["artifact_version"] = kArtifactVersion;
  manifest["config_hash"] = config_hash(cfg);
  manifest["rng"] = kRngId;
  manifest["log"] = kLogConvention;
  manifest["seed_rule"] = "base_seed + n_index * trials + trial_index";
  manifest["status"] = "running";
  manifest["started"] = iso_now();
  manifest["config"] = to_text(cfg);
  write_manifest(dir, manifest);
  {
    std::ofstream o(dir / "config.txt");
    o << to_text(cfg);
  }

  struct Job {
    std::size_t n_index;
    std::uint32_t trial;
  };
  std::vector<Job> jobs;
  for (std::size_t ni = 0; ni < cfg.n_values.size(); ++ni)
    for (std::uint32_t t = 0; t < cfg.trials; ++t) jobs.push_back({ni, t});

  RunSummary summary;
  summary.out = dir;
  summary.trials.resize(jobs.size());
  const auto wall_start = std::chrono::steady_clock::now();
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const auto& job = jobs[j];
      const fs::path trial_dir =
          dir / "trials" / ("n" + std::to_string(cfg.n_values[job.n_index]) + "_t" + std::to_string(job.trial));
      summary.trials[j] = run_trial(cfg, job.n_index, job.trial, trial_dir);
    }
  };
  const std::size_t threads = std::min<std::size_t>(cfg.workers, jobs.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();

  std::vector<std::string> tables;
  write_tables(dir, cfg, summary.trials, tables);

  nlohmann::ordered_json trials = nlohmann::ordered_json::array();
  for (const auto& t : summary.trials) {
    summary.failures += t.ok ? 0 : 1;
    nlohmann::ordered_json jt;
    jt["n"] = t.n;
    jt["trial"] = t.trial;
    jt["seed"] = t.seed;
    jt["status"] = t.ok ? "ok" : "failed";
    if (!t.ok) jt["error"] = t.error;
    jt["seconds"] = t.seconds;
    nlohmann::ordered_json files = nlohmann::ordered_json::array();
    for (const auto& f : t.files) files.push_back(fs::relative(f, dir).generic_string());
    jt["files"] = files;
    trials.push_back(jt);
  }
  manifest["status"] = summary.failures == 0 ? "complete" : "partial";
  manifest["finished"] = iso_now();
  manifest["wall_seconds"] = wall;
  manifest["workers"] = cfg.workers;
  manifest["tables"] = tables;
  manifest["trials"] = trials;

  std::vector<std::string> all;
  for (const auto& entry : fs::recursive_directory_iterator(dir))
    if (entry.is_regular_file()) all.push_back(fs::relative(entry.path(), dir).generic_string());
  std::sort(all.begin(), all.end());
  if (std::find(all.begin(), all.end(), "manifest.json") == all.end()) all.push_back("manifest.json");
  manifest["files"] = all;
  write_manifest(dir, manifest);
  return summary;
}

// ---------------------------------------------------------------------------
// Aggregation.

namespace {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t col(std::string_view name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw InvalidArgument("table is missing column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - header.begin());
  }
};

std::optional<Table> read_table(const fs::path& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  Table t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    for (auto c : split(line, ',')) cells.emplace_back(c);
    if (t.header.empty()) {
      t.header = std::move(cells);
    } else {
      if (cells.size() != t.header.size()) throw InvalidArgument("malformed row in " + path.string());
      t.rows.push_back(std::move(cells));
    }
  }
  if (t.header.empty()) throw InvalidArgument("empty table " + path.string());
  return t;
}

nlohmann::ordered_json describe_values(std::vector<double> xs) {
  nlohmann::ordered_json j;
  j["count"] = xs.size();
  if (xs.empty()) return j;
  std::sort(xs.begin(), xs.end());
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var = xs.size() > 1 ? var / static_cast<double>(xs.size() - 1) : 0.0;
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(xs.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    return xs[lo] + (xs[hi] - xs[lo]) * (pos - static_cast<double>(lo));
  };
  j["mean"] = mean;
  j["variance"] = var;
  j["min"] = xs.front();
  j["q25"] = quantile(0.25);
  j["median"] = quantile(0.5);
  j["q75"] = quantile(0.75);
  j["max"] = xs.back();
  return j;
}

} // namespace

nlohmann::ordered_json analyze_run(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw InvalidArgument("no such directory " + dir.string());
  const auto manifest_path = dir / "manifest.json";
  if (!fs::exists(manifest_path)) throw InvalidArgument("missing manifest.json in " + dir.string());
  nlohmann::ordered_json manifest;
  try {
    std::ifstream in(manifest_path);
    manifest = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("corrupt manifest.json: " + std::string(e.what()));
  }
  if (!manifest.is_object() || !manifest.contains("status") || !manifest.contains("config_hash"))
    throw InvalidArgument("corrupt manifest.json: missing status or config_hash");

  nlohmann::ordered_json out;
  out["config_hash"] = manifest["config_hash"];
  out["status"] = manifest["status"];

  const auto final_table = read_table(dir / "final.csv");
  if (!final_table) throw InvalidArgument("missing final.csv in " + dir.string());
  const auto& ft = *final_table;
  const auto cn = ft.col("n"), cs = ft.col("status"), ce = ft.col("edges"), cst = ft.col("steps"),
             cd = ft.col("max_degree");
  std::map<std::uint64_t, std::vector<double>> edges, steps, degrees;
  std::map<std::uint64_t, std::size_t> failed;
  std::vector<std::pair<double, double>> points;
  for (const auto& row : ft.rows) {
    const std::uint64_t n = std::stoull(row[cn]);
    if (row[cs] != "ok") {
      ++failed[n];
      continue;
    }
    edges[n].push_back(std::stod(row[ce]));
    steps[n].push_back(std::stod(row[cst]));
    degrees[n].push_back(std::stod(row[cd]));
    points.emplace_back(static_cast<double>(n), std::stod(row[ce]));
  }
  nlohmann::ordered_json per_n = nlohmann::ordered_json::array();
  std::set<std::uint64_t> ns;
  for (const auto& row : ft.rows) ns.insert(std::stoull(row[cn]));
  for (std::uint64_t n : ns) {
    nlohmann::ordered_json j;
    j["n"] = n;
    j["failed_trials"] = failed[n];
    j["edges"] = describe_values(edges[n]);
    j["steps"] = describe_values(steps[n]);
    j["max_degree"] = describe_values(degrees[n]);
    per_n.push_back(j);
  }
  out["final"] = per_n;

  try {
    const auto fit = analysis::fit_edge_exponent(points);
    out["exponent_fit"] = {{"slope", fit.slope},      {"intercept", fit.intercept}, {"slope_stderr", fit.slope_stderr},
                           {"lower", fit.lower},      {"upper", fit.upper},         {"distinct_n", fit.distinct_n}};
  } catch (const InvalidArgument& e) {
    out["exponent_fit"] = {{"skipped", e.what()}};
  }

  if (const auto tt = read_table(dir / "trajectory.csv")) {
    const auto tn = tt->col("n"), ttrial = tt->col("trial"), tok = tt->col("open_within_slack"),
               tratio = tt->col("open_ratio"), tcuv = tt->col("cuv_below_reference"),
               tint = tt->col("intersection_above_reference"), tpart = tt->col("partition_consistent"),
               trange = tt->col("in_theorem_range");
    std::map<std::uint64_t, double> max_ratio;
    std::map<std::uint64_t, std::uint64_t> open_viol, cuv_viol, int_viol, part_viol, checkpoints, in_range;
    for (const auto& row : tt->rows) {
      const std::uint64_t n = std::stoull(row[tn]);
      ++checkpoints[n];
      in_range[n] += row[trange] == "1";
      max_ratio[n] = std::max(max_ratio[n], std::stod(row[tratio]));
      if (row[tok] != "1") ++open_viol[n];
      cuv_viol[n] += std::stoull(row[tcuv]);
      int_viol[n] += std::stoull(row[tint]);
      if (row[tpart] != "1") ++part_viol[n];
    }
    std::map<std::uint64_t, std::set<std::string>> violating_trials, all_trials;
    for (const auto& row : tt->rows) {
      const std::uint64_t n = std::stoull(row[tn]);
      all_trials[n].insert(row[ttrial]);
      if (row[tok] != "1") violating_trials[n].insert(row[ttrial]);
    }
    nlohmann::ordered_json monitors = nlohmann::ordered_json::array();
    for (const auto& [n, trials] : all_trials) {
      nlohmann::ordered_json j;
      j["n"] = n;
      j["checkpoints"] = checkpoints[n];
      j["checkpoints_in_theorem_range"] = in_range[n];
      j["trials"] = trials.size();
      j["trials_within_open_slack"] = trials.size() - violating_trials[n].size();
      j["open_violations"] = open_viol[n];
      j["max_open_ratio"] = max_ratio[n];
      j["cuv_below_reference"] = cuv_viol[n];
      j["intersection_above_reference"] = int_viol[n];
      j["partition_inconsistencies"] = part_viol[n];
      monitors.push_back(j);
    }
    out["monitors"] = monitors;
  }

  if (const auto dt = read_table(dir / "density.csv")) {
    const auto dn = dt->col("n"), dv = dt->col("density"), dc = dt->col("below_c"), dvac = dt->col("paper_vacuous");
    std::map<std::uint64_t, std::vector<double>> values;
    std::map<std::uint64_t, std::size_t> above_c, vacuous;
    for (const auto& row : dt->rows) {
      const std::uint64_t n = std::stoull(row[dn]);
      values[n].push_back(std::stod(row[dv]));
      if (row[dc] != "1") ++above_c[n];
      if (row[dvac] == "1") ++vacuous[n];
    }
    nlohmann::ordered_json dens = nlohmann::ordered_json::array();
    for (const auto& [n, xs] : values) {
      nlohmann::ordered_json j;
      j["n"] = n;
      j["density"] = describe_values(xs);
      j["trials_not_below_c"] = above_c[n];
      j["paper_mode_vacuous_trials"] = vacuous[n];
      dens.push_back(j);
    }
    out["density"] = dens;
  }

  if (const auto ct = read_table(dir / "copies.csv")) {
    const auto kn = ct->col("n"), kp = ct->col("pattern"), kc = ct->col("copies"), ki = ct->col("impossible");
    std::map<std::pair<std::uint64_t, std::string>, std::vector<double>> counts;
    std::map<std::pair<std::uint64_t, std::string>, std::size_t> impossible;
    for (const auto& row : ct->rows) {
      const auto key = std::make_pair(std::stoull(row[kn]), row[kp]);
      counts[key].push_back(std::stod(row[kc]));
      if (row[ki] == "1") ++impossible[key];
    }
    nlohmann::ordered_json copies = nlohmann::ordered_json::array();
    for (const auto& [key, xs] : counts) {
      nlohmann::ordered_json j;
      j["n"] = key.first;
      j["pattern"] = key.second;
      j["copies"] = describe_values(xs);
      j["presence_fraction"] =
          static_cast<double>(std::count_if(xs.begin(), xs.end(), [](double x) { return x > 0; })) /
          static_cast<double>(xs.size());
      j["impossible_trials"] = impossible[key];
      copies.push_back(j);
    }
    out["copies"] = copies;
  }
  return out;
}

} // namespace hfree::harness
