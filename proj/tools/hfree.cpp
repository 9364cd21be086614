// hfree: command-line front end for simulation, constants, oracle checks,
// aggregation and density scans.

#include "hfree/analysis.hpp"
#include "hfree/errors.hpp"
#include "hfree/harness.hpp"
#include "hfree/theory.hpp"
#include "hfree/verify.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerifyFailed = 2;
constexpr int kExitPartial = 3;

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint32_t> workers;
  std::string out;
  bool force = false;
};

int cmd_simulate(const Globals& g) {
  if (g.config.empty()) {
    std::cerr << "simulate: --config is required\n";
    return kExitUsage;
  }
  auto cfg = hfree::harness::load_config(g.config);
  if (g.seed) cfg.seed = *g.seed;
  if (g.workers) cfg.workers = *g.workers;
  if (!g.out.empty()) cfg.out = g.out;
  const auto summary = hfree::harness::run_experiment(cfg, {g.force});
  std::cout << "wrote " << summary.trials.size() << " trials to " << summary.out.string() << " (config "
            << hfree::harness::config_hash(cfg) << ")\n";
  for (const auto& t : summary.trials)
    if (!t.ok) std::cerr << "trial n=" << t.n << " trial=" << t.trial << " seed=" << t.seed << " failed: " << t.error << "\n";
  return summary.failures == 0 ? kExitOk : kExitPartial;
}

int cmd_params(const std::string& pattern, std::uint64_t n, const std::string& eps, const std::string& mu, bool json) {
  const auto h = hfree::parse_pattern(pattern);
  auto em = hfree::default_eps_mu(h);
  if (!eps.empty()) em.eps = hfree::parse_decimal(eps);
  if (!mu.empty()) em.mu = hfree::parse_decimal(mu);
  const auto k = hfree::make_constants(h, n, em);
  const auto j = hfree::to_json(k);
  if (json) {
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& [key, value] : j.items())
      std::cout << std::left << std::setw(18) << key << (value.is_string() ? value.get<std::string>() : value.dump())
                << "\n";
    const auto check = hfree::validate_eps_mu(h, em.eps, em.mu);
    for (const auto& d : check.diagnostics) std::cout << "warning           " << d << "\n";
  }
  return kExitOk;
}

int report_verify(const std::vector<hfree::verify::Report>& reports) {
  bool ok = true;
  for (const auto& r : reports) {
    std::cout << r.scope << ": " << (r.pass() ? "pass" : "FAIL") << " (" << r.checks << " checks, "
              << r.mismatches.size() << " mismatches)\n";
    for (const auto& m : r.mismatches) std::cout << "  mismatch: " << m << "\n";
    ok = ok && r.pass();
  }
  return ok ? kExitOk : kExitVerifyFailed;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ';') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

int cmd_density(const std::string& graph_path, std::uint32_t k, const std::string& mode,
                std::optional<double> c, const std::string& paper_pattern, std::uint64_t seed) {
  std::ifstream in(graph_path);
  if (!in) throw hfree::InvalidArgument("cannot read graph " + graph_path);
  const auto g = hfree::read_edge_list(in);
  nlohmann::ordered_json j;
  j["graph"] = graph_path;
  j["n"] = g.n();
  j["edges"] = g.edge_count();
  auto scan_json = [](const hfree::analysis::DensityReport& r) {
    nlohmann::ordered_json s;
    s["size_cap"] = r.size_cap;
    s["density"] = hfree::format_rational(r.density);
    s["density_value"] = boost::rational_cast<double>(r.density);
    s["method"] = hfree::analysis::to_string(r.method);
    s["proven_optimal"] = r.proven_optimal;
    std::vector<hfree::Vertex> w;
    for (auto v : r.witness) w.push_back(v + 1);
    s["witness"] = w;
    s["search_nodes"] = r.search_nodes;
    return s;
  };
  int code = kExitOk;
  if (!paper_pattern.empty()) {
    const auto h = hfree::parse_pattern(paper_pattern);
    const auto constants = hfree::make_constants(h, g.n());
    const auto paper = hfree::analysis::verify_density_theorem(g, constants, std::nullopt, seed);
    j["paper_mode"] = {{"c", paper.c},
                       {"size_cap", paper.size_cap},
                       {"vacuous", paper.vacuous},
                       {"pass", paper.pass},
                       {"scan", scan_json(paper.scan)}};
    if (!paper.pass) code = kExitVerifyFailed;
  }
  if (c) {
    const auto h = hfree::parse_pattern(paper_pattern.empty() ? "C3" : paper_pattern);
    const auto constants = hfree::make_constants(h, std::max<std::uint32_t>(g.n(), 3));
    const auto rep = hfree::analysis::verify_density_theorem(g, constants, std::make_pair(*c, k), seed);
    j["empirical"] = {{"c", rep.c},
                      {"size_cap", rep.size_cap},
                      {"pass", rep.pass},
                      {"induced_edge_reference", rep.induced_edge_reference},
                      {"scan", scan_json(rep.scan)}};
    if (!rep.pass) code = kExitVerifyFailed;
  } else {
    const auto m = mode == "heuristic" ? hfree::analysis::ScanMode::Heuristic : hfree::analysis::ScanMode::Exact;
    j["scan"] = scan_json(hfree::analysis::bounded_density_scan(g, k, m, seed));
  }
  std::cout << j.dump(2) << "\n";
  return code;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"H-free random graph process simulator and verification toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(hfree::harness::kArtifactVersion));

  Globals g;
  app.add_option("--config", g.config, "Experiment config file");
  app.add_option("--seed", g.seed, "Base seed override");
  app.add_option("--workers", g.workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output directory override");
  app.add_flag("--force", g.force, "Replace an existing output directory");

  auto* simulate = app.add_subcommand("simulate", "Run an experiment config");
  simulate->fallthrough();

  std::string pattern;
  std::uint64_t n = 0;
  std::string eps, mu;
  bool json = false;
  auto* params = app.add_subcommand("params", "Print the theory constants for (H, n)");
  params->fallthrough();
  params->add_option("pattern", pattern, "Forbidden graph H")->required();
  params->add_option("n", n, "Number of vertices")->required()->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 40));
  params->add_option("--eps", eps, "eps as decimal or fraction");
  params->add_option("--mu", mu, "mu as decimal or fraction");
  params->add_flag("--json", json, "JSON output");

  std::string scope = "all";
  std::string patterns = "C3;C4;C5;K4";
  std::uint32_t verify_n = 15;
  std::uint32_t seeds = 20;
  std::uint32_t graphs = 50;
  std::uint32_t graph_n = 10;
  bool inject = false;
  auto* verify = app.add_subcommand("verify", "Check fast paths against brute-force oracles");
  verify->fallthrough();
  verify->add_option("scope", scope, "closure | density | counts | all")
      ->check(CLI::IsMember({"closure", "density", "counts", "all"}));
  verify->add_option("--patterns", patterns, "Forbidden graphs for the closure scope, ';'-separated");
  verify->add_option("--n", verify_n, "Host size for the closure scope");
  verify->add_option("--seeds", seeds, "Seeded runs per pattern");
  verify->add_option("--graphs", graphs, "Random graphs for density and counts");
  verify->add_option("--graph-n", graph_n, "Vertices per random graph");
  verify->add_flag("--inject-fault", inject, "Corrupt one classification (negative self-test)");

  std::string input;
  std::string output;
  auto* analyze = app.add_subcommand("analyze", "Aggregate a simulate output directory");
  analyze->fallthrough();
  analyze->add_option("dir", input, "Output directory of simulate")->required();
  analyze->add_option("--output", output, "Also write the JSON here");

  std::string graph_path;
  std::uint32_t k = 10;
  std::string mode = "exact";
  std::optional<double> c;
  std::string paper_pattern;
  auto* density = app.add_subcommand("density", "Size-bounded density scan of an edge-list graph");
  density->fallthrough();
  density->add_option("graph", graph_path, "Edge-list file")->required();
  density->add_option("--k", k, "Size cap")->check(CLI::PositiveNumber);
  density->add_option("--mode", mode, "exact | heuristic")->check(CLI::IsMember({"exact", "heuristic"}));
  density->add_option("--c", c, "Empirical c': check e(A) < c'|A| for |A| <= k");
  density->add_option("--paper", paper_pattern, "Also run paper mode with the constants of this H");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(g);
    if (params->parsed()) return cmd_params(pattern, n, eps, mu, json);
    if (verify->parsed()) {
      std::vector<hfree::verify::Report> reports;
      const std::uint64_t base = g.seed.value_or(1);
      if (scope == "closure" || scope == "all") {
        hfree::verify::ClosureOptions opt;
        opt.patterns = split_list(patterns);
        opt.n_values = {verify_n};
        opt.seeds = seeds;
        opt.base_seed = base;
        opt.inject_fault = inject;
        reports.push_back(hfree::verify::closure(opt));
      }
      hfree::verify::RandomGraphOptions ro{graphs, graph_n, base};
      if (scope == "density" || scope == "all") reports.push_back(hfree::verify::density(ro));
      if (scope == "counts" || scope == "all") reports.push_back(hfree::verify::counts(ro));
      return report_verify(reports);
    }
    if (analyze->parsed()) {
      const auto j = hfree::harness::analyze_run(input);
      std::cout << j.dump(2) << "\n";
      if (!output.empty()) std::ofstream(output) << j.dump(2) << "\n";
      return kExitOk;
    }
    if (density->parsed()) return cmd_density(graph_path, k, mode, c, paper_pattern, g.seed.value_or(0));
  } catch (const hfree::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
