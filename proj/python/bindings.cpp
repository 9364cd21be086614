#include "hfree/analysis.hpp"
#include "hfree/errors.hpp"
#include "hfree/graph.hpp"
#include "hfree/harness.hpp"
#include "hfree/oracle.hpp"
#include "hfree/patterns.hpp"
#include "hfree/process.hpp"
#include "hfree/theory.hpp"
#include "hfree/verify.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace hfree;

namespace {

using Edge = std::pair<Vertex, Vertex>;

SimpleGraph make_graph(std::uint32_t n, const std::vector<Edge>& edges) {
  auto g = SimpleGraph::new_empty(n);
  for (auto [u, v] : edges) g.add_edge(u, v);
  return g;
}

std::vector<Edge> pairs_of(std::span<const PairId> ids, std::uint32_t n) {
  std::vector<Edge> out;
  out.reserve(ids.size());
  for (PairId id : ids) out.push_back(pair_from_index(id, n));
  return out;
}

std::vector<PairId> ids_of(const std::vector<Edge>& pairs, std::uint32_t n) {
  std::vector<PairId> out;
  out.reserve(pairs.size());
  for (auto [u, v] : pairs) out.push_back(pair_index(u, v, n));
  return out;
}

py::dict density_dict(const analysis::DensityReport& r) {
  py::dict d;
  d["size_cap"] = r.size_cap;
  d["density"] = format_rational(r.density);
  d["density_value"] = boost::rational_cast<double>(r.density);
  d["witness"] = r.witness;
  d["method"] = analysis::to_string(r.method);
  d["proven_optimal"] = r.proven_optimal;
  d["search_nodes"] = r.search_nodes;
  return d;
}

StopRule parse_stop(const std::string& stop, const std::optional<std::string>& mu) {
  if (stop == "exhaustion") return Exhaustion{};
  if (stop == "paper-m") return PaperM{mu ? parse_decimal(*mu) : Rational(1, 100)};
  if (stop.rfind("steps:", 0) == 0) return StepCount{std::stoull(stop.substr(6))};
  throw InvalidArgument("stop must be 'exhaustion', 'paper-m' or 'steps:<k>'");
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "H-free random graph process simulator (native core)";
  m.attr("__version__") = std::string(harness::kArtifactVersion);

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<SizeLimitExceeded>(m, "SizeLimitExceeded", PyExc_ValueError);
  py::register_exception<ProcessTerminated>(m, "ProcessTerminated", PyExc_RuntimeError);

  py::class_<Pattern>(m, "Pattern")
      .def_property_readonly("name", &Pattern::name)
      .def_property_readonly("vertex_count", &Pattern::vertex_count)
      .def_property_readonly("edge_count", &Pattern::edge_count)
      .def_property_readonly("aut", &Pattern::aut)
      .def_property_readonly("density_2", [](const Pattern& p) { return format_rational(density_2(p)); })
      .def_property_readonly("strictly_2_balanced", [](const Pattern& p) { return is_strictly_2_balanced(p); })
      .def_property_readonly("edges",
                             [](const Pattern& p) {
                               std::vector<std::pair<int, int>> out;
                               for (const auto& e : p.edges()) out.emplace_back(e.a, e.b);
                               return out;
                             })
      .def("__repr__", [](const Pattern& p) { return "Pattern('" + p.name() + "')"; });

  m.def("parse_pattern", &parse_pattern, py::arg("text"),
        "Parse 'C<k>', 'K<k>', 'K<a>,<b>', 'Q3' or 'edges: 1-2,2-3,...'.");

  m.def(
      "constants_json",
      [](const std::string& pattern, std::uint64_t n, const std::optional<std::string>& eps,
         const std::optional<std::string>& mu) {
        const auto h = parse_pattern(pattern);
        auto em = default_eps_mu(h);
        if (eps) em.eps = parse_decimal(*eps);
        if (mu) em.mu = parse_decimal(*mu);
        return to_json(make_constants(h, n, em)).dump();
      },
      py::arg("pattern"), py::arg("n"), py::arg("eps") = py::none(), py::arg("mu") = py::none());

  m.def("compute_m", [](const std::string& pattern, std::uint64_t n, const std::string& mu) {
    return compute_m(n, parse_pattern(pattern), parse_decimal(mu));
  });
  m.def("compute_q", [](double t, const std::string& pattern) { return compute_q(t, parse_pattern(pattern)); });

  py::class_<ProcessState>(m, "Process")
      .def(py::init([](std::uint32_t n, const std::string& pattern, std::uint64_t seed) {
             return ProcessState::init(n, parse_pattern(pattern), seed);
           }),
           py::arg("n"), py::arg("pattern"), py::arg("seed"))
      .def_property_readonly("n", &ProcessState::n)
      .def_property_readonly("pattern", [](const ProcessState& s) { return s.forbidden().name(); })
      .def_property_readonly("seed", &ProcessState::seed)
      .def_property_readonly("step_count", &ProcessState::step_count)
      .def_property_readonly("open_count", &ProcessState::open_count)
      .def_property_readonly("closed_count", &ProcessState::closed_count)
      .def_property_readonly("edge_count", [](const ProcessState& s) { return s.graph().edge_count(); })
      .def_property_readonly("terminated", &ProcessState::terminated)
      .def_property_readonly("edges", [](const ProcessState& s) { return s.graph().edges(); })
      .def_property_readonly("open_pairs", [](const ProcessState& s) { return pairs_of(s.open_pairs(), s.n()); })
      .def("pair_class",
           [](const ProcessState& s, Vertex u, Vertex v) {
             return std::string(to_string(s.pair_class(pair_index(u, v, s.n()))));
           })
      .def("step", [](ProcessState& s) { return pair_from_index(s.step(), s.n()); })
      .def(
          "run",
          [](ProcessState& s, const std::string& stop, const std::optional<std::string>& mu) {
            const auto out = run_until(s, parse_stop(stop, mu));
            return out.terminated;
          },
          py::arg("stop") = "exhaustion", py::arg("mu") = py::none(),
          "Advance until the stop rule ('exhaustion', 'paper-m', 'steps:<k>'); returns whether no open pair is left.")
      .def("C_uv",
           [](const ProcessState& s, Vertex u, Vertex v) {
             return pairs_of(s.compute_C_uv(pair_index(u, v, s.n())), s.n());
           })
      .def("O_F",
           [](const ProcessState& s, const std::vector<Edge>& f) {
             const auto ids = ids_of(f, s.n());
             return pairs_of(s.compute_O_F(ids), s.n());
           })
      .def("__eq__", [](const ProcessState& a, const ProcessState& b) { return a == b; });

  m.def(
      "density_scan",
      [](std::uint32_t n, const std::vector<Edge>& edges, std::uint32_t k, const std::string& mode,
         std::uint64_t seed) {
        const auto scan_mode = mode == "heuristic" ? analysis::ScanMode::Heuristic : analysis::ScanMode::Exact;
        if (mode != "exact" && mode != "heuristic") throw InvalidArgument("mode must be 'exact' or 'heuristic'");
        return density_dict(analysis::bounded_density_scan(make_graph(n, edges), k, scan_mode, seed));
      },
      py::arg("n"), py::arg("edges"), py::arg("k"), py::arg("mode") = "exact", py::arg("seed") = 0);

  m.def(
      "count_copies",
      [](const std::string& pattern, std::uint32_t n, const std::vector<Edge>& edges) {
        return count_copies(parse_pattern(pattern), make_graph(n, edges));
      },
      py::arg("pattern"), py::arg("n"), py::arg("edges"));

  m.def(
      "naive_closed_set",
      [](std::uint32_t n, const std::vector<Edge>& edges, const std::string& pattern) {
        return pairs_of(oracle::naive_closed_set(make_graph(n, edges), parse_pattern(pattern)), n);
      },
      py::arg("n"), py::arg("edges"), py::arg("pattern"));

  m.def(
      "naive_max_density",
      [](std::uint32_t n, const std::vector<Edge>& edges, std::optional<std::uint32_t> cap) {
        const auto r = oracle::naive_max_density(make_graph(n, edges), cap);
        return py::make_tuple(format_rational(r.density), r.witness);
      },
      py::arg("n"), py::arg("edges"), py::arg("size_cap") = py::none());

  m.def(
      "verify",
      [](const std::string& scope, std::uint32_t seeds, std::uint64_t base_seed) {
        py::list out;
        auto add = [&](const verify::Report& r) {
          py::dict d;
          d["scope"] = r.scope;
          d["checks"] = r.checks;
          d["mismatches"] = r.mismatches;
          d["pass"] = r.pass();
          out.append(d);
        };
        if (scope != "closure" && scope != "density" && scope != "counts" && scope != "all")
          throw InvalidArgument("scope must be closure, density, counts or all");
        if (scope == "closure" || scope == "all") {
          verify::ClosureOptions opt;
          opt.seeds = seeds;
          opt.base_seed = base_seed;
          add(verify::closure(opt));
        }
        verify::RandomGraphOptions ro;
        ro.base_seed = base_seed;
        if (scope == "density" || scope == "all") add(verify::density(ro));
        if (scope == "counts" || scope == "all") add(verify::counts(ro));
        return out;
      },
      py::arg("scope") = "all", py::arg("seeds") = 20, py::arg("base_seed") = 1);

  m.def(
      "simulate",
      [](const std::string& config_text, const std::optional<std::string>& out, std::optional<std::uint32_t> workers,
         bool force) {
        auto cfg = harness::parse_config(config_text);
        if (out) cfg.out = *out;
        if (workers) cfg.workers = *workers;
        const auto summary = [&] {
          py::gil_scoped_release release;
          return harness::run_experiment(cfg, {force});
        }();
        py::dict d;
        d["out"] = summary.out.string();
        d["trials"] = summary.trials.size();
        d["failures"] = summary.failures;
        d["config_hash"] = harness::config_hash(cfg);
        return d;
      },
      py::arg("config_text"), py::arg("out") = py::none(), py::arg("workers") = py::none(), py::arg("force") = false);

  m.def("analyze_json", [](const std::filesystem::path& dir) { return harness::analyze_run(dir).dump(); },
        py::arg("dir"));
  m.def("config_hash", [](const std::string& text) { return harness::config_hash(harness::parse_config(text)); });
  m.def("canonical_config", [](const std::string& text) { return harness::to_text(harness::parse_config(text)); });
}
