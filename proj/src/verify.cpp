#include "hfree/verify.hpp"

#include "hfree/analysis.hpp"
#include "hfree/oracle.hpp"
#include "hfree/patterns.hpp"
#include "hfree/process.hpp"

#include <sstream>

namespace hfree::verify {

namespace {

SimpleGraph random_graph(std::uint32_t n, std::uint32_t permille, Rng& rng) {
  auto g = SimpleGraph::new_empty(n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (uniform_below(rng, 1000) < permille) g.add_edge(u, v);
  return g;
}

std::string edge_string(const SimpleGraph& g) {
  std::ostringstream o;
  write_edge_list(o, g);
  std::string s = o.str();
  for (char& ch : s)
    if (ch == '\n') ch = ';';
  return s;
}

} // namespace

Report closure(const ClosureOptions& opt) {
  Report report;
  report.scope = "closure";
  for (const auto& spec : opt.patterns) {
    const auto h = parse_pattern(spec);
    for (auto n : opt.n_values) {
      for (std::uint32_t s = 0; s < opt.seeds; ++s) {
        const std::uint64_t seed = opt.base_seed + s;
        auto state = ProcessState::init(n, h, seed);
        bool faulted = false;
        auto compare = [&] {
          std::vector<PairClass> got(state.classes().begin(), state.classes().end());
          if (opt.inject_fault && !faulted && state.step_count() >= 1) {
            got[state.history().back().pair] = PairClass::Open;
            faulted = true;
          }
          const auto want = oracle::naive_classes(state.graph(), h);
          ++report.checks;
          for (PairId id = 0; id < want.size(); ++id) {
            if (got[id] == want[id]) continue;
            const auto [u, v] = pair_from_index(id, n);
            std::ostringstream msg;
            msg << "H=" << spec << " n=" << n << " seed=" << seed << " step=" << state.step_count() << " pair=("
                << u + 1 << "," << v + 1 << ") incremental=" << to_string(got[id])
                << " oracle=" << to_string(want[id]);
            report.mismatches.push_back(msg.str());
            return false;
          }
          return true;
        };
        bool ok = compare();
        while (ok && !state.terminated()) {
          state.step();
          ok = compare();
        }
        if (!ok) continue;
        ++report.checks;
        if (!oracle::naive_is_maximal_h_free(state.graph(), h))
          report.mismatches.push_back("H=" + spec + " n=" + std::to_string(n) + " seed=" + std::to_string(seed) +
                                      ": final graph is not maximal H-free; edges " + edge_string(state.graph()));
      }
    }
  }
  return report;
}

Report density(const RandomGraphOptions& opt) {
  Report report;
  report.scope = "density";
  for (std::uint32_t i = 0; i < opt.graphs; ++i) {
    const std::uint64_t seed = opt.base_seed + i;
    Rng rng(seed);
    const auto permille = static_cast<std::uint32_t>(100 + uniform_below(rng, 800));
    const auto g = random_graph(opt.vertices, permille, rng);
    const auto k = static_cast<std::uint32_t>(1 + uniform_below(rng, std::min(opt.vertices, analysis::kMaxExactScanCap)));
    const auto want = oracle::naive_max_density(g, k);
    const auto scan = analysis::bounded_density_scan(g, k, analysis::ScanMode::Exact, seed);
    const auto bnb = analysis::branch_and_bound_density(g, k, seed);
    const auto heur = analysis::bounded_density_scan(g, k, analysis::ScanMode::Heuristic, seed);
    report.checks += 3;
    auto fail = [&](const std::string& what, const Rational& got) {
      std::ostringstream msg;
      msg << what << ": seed=" << seed << " k=" << k << " got " << format_rational(got) << " oracle "
          << format_rational(want.density) << "; edges " << edge_string(g);
      report.mismatches.push_back(msg.str());
    };
    if (scan.density != want.density) fail("subset scan", scan.density);
    if (bnb.density != want.density) fail("branch and bound", bnb.density);
    if (heur.density > want.density) fail("heuristic above optimum", heur.density);
  }
  return report;
}

Report counts(const RandomGraphOptions& opt) {
  Report report;
  report.scope = "counts";
  const std::vector<std::string> specs{"C3", "C4", "C5", "K4", "K1,3", "K2,3", "edges: 1-2,2-3,3-4"};
  std::vector<Pattern> patterns;
  for (const auto& s : specs) patterns.push_back(parse_pattern(s));
  for (const auto& p : patterns) {
    ++report.checks;
    const auto want = oracle::naive_automorphisms(p);
    if (p.aut() != want)
      report.mismatches.push_back("aut(" + p.name() + ") = " + std::to_string(p.aut()) + ", oracle " +
                                  std::to_string(want));
  }
  for (std::uint32_t i = 0; i < opt.graphs; ++i) {
    const std::uint64_t seed = opt.base_seed + i;
    Rng rng(seed);
    const auto permille = static_cast<std::uint32_t>(150 + uniform_below(rng, 600));
    const auto g = random_graph(opt.vertices, permille, rng);
    for (const auto& p : patterns) {
      report.checks += 2;
      const auto got = count_copies(p, g);
      const auto want = oracle::naive_count_copies(p, g);
      if (got != want)
        report.mismatches.push_back("copies of " + p.name() + ": seed=" + std::to_string(seed) + " got " +
                                    std::to_string(got) + " oracle " + std::to_string(want) + "; edges " +
                                    edge_string(g));
      if (contains_copy(p, g) != oracle::naive_contains_copy(p, g))
        report.mismatches.push_back("presence of " + p.name() + ": seed=" + std::to_string(seed) + "; edges " +
                                    edge_string(g));
    }
  }
  return report;
}

} // namespace hfree::verify
