#include "helpers.hpp"

#include "hfree/analysis.hpp"
#include "hfree/errors.hpp"
#include "hfree/oracle.hpp"
#include "hfree/theory.hpp"

#include <doctest.h>

#include <cmath>

using namespace hfree;
using namespace hfree::analysis;

TEST_CASE("monitor records") {
  const auto c4 = parse_pattern("C4");
  const auto k = make_constants(c4, 64);
  CHECK(k.n2p == doctest::Approx(256.0));
  CHECK(k.t(256) == doctest::Approx(1.0));
  CHECK(k.open_pair_reference(256) == doctest::Approx(compute_q(1.0, c4) * 64 * 64));

  auto s = ProcessState::init(60, parse_pattern("C3"), 8);
  const auto kc3 = make_constants(parse_pattern("C3"), 60);
  const std::vector<std::uint64_t> cps{0, 10, 40, 70, 1000000};
  const auto stats = monitor_trajectory(s, Exhaustion{}, cps, kc3, {20, 20, 3.0, 5});
  REQUIRE(stats.records.size() == 4);
  CHECK(stats.skipped_checkpoints == std::vector<std::uint64_t>{1000000});
  for (const auto& r : stats.records) {
    CHECK(r.partition_consistent);
    CHECK(r.edges == r.step);
    CHECK(r.open_pairs == pair_count(60) - r.step - r.closed_pairs);
    CHECK(r.open_reference == doctest::Approx(kc3.open_pair_reference(r.step)));
    CHECK(r.open_ratio == doctest::Approx(r.open_pairs / r.open_reference));
    CHECK(r.cuv_samples == 20);
  }
  CHECK(stats.records[0].open_pairs == pair_count(60));

  auto u = ProcessState::init(60, parse_pattern("C3"), 8);
  const auto none = monitor_trajectory(u, Exhaustion{}, cps, kc3, {0, 0, 3.0, 5});
  REQUIRE(none.records.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(none.records[i].cuv_samples == 0);
    CHECK(none.records[i].intersection_samples == 0);
    CHECK(none.records[i].open_pairs == stats.records[i].open_pairs);
  }
  CHECK(u == s);
}

TEST_CASE("theorem window checkpoints") {
  const auto k = make_constants(parse_pattern("C3"), 2000);
  const auto cps = theorem_window_checkpoints(k, 20);
  REQUIRE(cps.size() == 20);
  const auto lo = std::min<std::uint64_t>(static_cast<std::uint64_t>(std::ceil(k.n2p)), k.m_steps);
  const auto hi = std::max<std::uint64_t>(static_cast<std::uint64_t>(std::ceil(k.n2p)), k.m_steps);
  CHECK(cps.front() == lo);
  CHECK(cps.back() == hi);
  CHECK(std::is_sorted(cps.begin(), cps.end()));
}

TEST_CASE("bounded density scan") {
  const auto k4 = bounded_density_scan(testutil::complete(4), 4, ScanMode::Exact);
  CHECK(k4.density == Rational(3, 2));
  CHECK(k4.witness == std::vector<Vertex>{0, 1, 2, 3});
  CHECK(k4.proven_optimal);
  CHECK(bounded_density_scan(testutil::cycle(5), 5, ScanMode::Exact).density == Rational(1));
  CHECK(bounded_density_scan(testutil::petersen(), 10, ScanMode::Exact).density == Rational(3, 2));
  CHECK(bounded_density_scan(testutil::petersen(), 3, ScanMode::Exact).density == Rational(2, 3));
  CHECK_THROWS_AS(bounded_density_scan(testutil::cycle(5), 0, ScanMode::Exact), InvalidArgument);
  CHECK_THROWS_AS(bounded_density_scan(testutil::cycle(5), 13, ScanMode::Exact), InvalidArgument);
  const auto h = bounded_density_scan(testutil::petersen(), 40, ScanMode::Heuristic);
  CHECK_FALSE(h.proven_optimal);
  CHECK(h.method == DensityMethod::LocalSearchHeuristic);
  CHECK(h.density <= Rational(3, 2));
}

TEST_CASE("branch and bound agrees with the oracle") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::uint32_t n = 16 + seed % 25;
    const auto g = testutil::random_graph(n, 60 + 7 * (seed % 25), seed);
    const auto k = static_cast<std::uint32_t>(2 + seed % 6);
    const auto want = oracle::naive_max_density(g, k);
    const auto got = branch_and_bound_density(g, k, seed);
    const auto exact = bounded_density_scan(g, k, ScanMode::Exact, seed);
    const auto heur = bounded_density_scan(g, k, ScanMode::Heuristic, seed);
    CAPTURE(seed);
    CHECK(got.density == want.density);
    CHECK(exact.density == want.density);
    CHECK(heur.density <= want.density);
    CHECK(got.witness.size() <= k);
    CHECK(Rational(static_cast<std::int64_t>(g.induced_edge_count(got.witness)),
                   static_cast<std::int64_t>(got.witness.size())) == got.density);
  }
}

TEST_CASE("density theorem check") {
  const auto c3 = parse_pattern("C3");
  const auto k12 = testutil::complete(12);
  const auto rep = verify_density_theorem(k12, make_constants(c3, 12), std::make_pair(2.0, 12u));
  CHECK_FALSE(rep.pass);
  CHECK(rep.scan.density == Rational(11, 2));
  CHECK(rep.scan.witness.size() == 12);

  auto s = ProcessState::init(800, c3, 1);
  run_until(s, Exhaustion{});
  const auto paper = verify_density_theorem(s.graph(), make_constants(c3, 800, {Rational(1, 10), Rational(1, 100)}));
  CHECK(paper.paper_mode);
  CHECK(paper.size_cap == 1);
  CHECK(paper.vacuous);
  CHECK(paper.pass);
  CHECK(paper.scan.density == Rational(0));

  CHECK_THROWS_AS(verify_density_theorem(k12, make_constants(c3, 12), std::make_pair(2.0, 0u)), InvalidArgument);
}

TEST_CASE("empirical density at n = 200 is recorded") {
  // The final triangle-free graph contains dense bipartite pieces; the value
  // is recorded, with the strict bound c' = 5/2 at or just below the maximum.
  const auto c3 = parse_pattern("C3");
  auto s = ProcessState::init(200, c3, 1);
  run_until(s, Exhaustion{});
  const auto rep = verify_density_theorem(s.graph(), make_constants(c3, 200), std::make_pair(2.5, 10u));
  MESSAGE("max e(A)/|A| over |A| <= 10 at n = 200: " << format_rational(rep.scan.density));
  CHECK(rep.scan.density <= Rational(5, 2));
  CHECK(rep.pass == (rep.scan.density < Rational(5, 2)));
}

TEST_CASE("copy counts at m") {
  const auto c3 = parse_pattern("C3");
  const auto same = count_copies_at_m(c3, c3, 50, Rational(1, 100), 3, 1);
  CHECK(same.impossible);
  CHECK_FALSE(same.reason.empty());
  for (auto c : same.counts) CHECK(c == 0);
  CHECK(same.presence_fraction() == 0.0);

  const auto k4_in_c3 = count_copies_at_m(c3, parse_pattern("K4"), 50, Rational(1, 100), 2, 1);
  CHECK(k4_in_c3.impossible);

  const auto edge = count_copies_at_m(c3, parse_pattern("edges: 1-2"), 100, Rational(1, 100), 3, 7);
  CHECK_FALSE(edge.impossible);
  CHECK(edge.m == 21);
  REQUIRE(edge.counts.size() == 3);
  for (auto c : edge.counts) CHECK(c == 21);
  CHECK(edge.presence_fraction() == 1.0);
  CHECK(edge.seeds == std::vector<std::uint64_t>{7, 8, 9});
}

TEST_CASE("baseline uniform process") {
  CHECK(baseline_uniform_process(7, 0, 1).edge_count() == 0);
  CHECK(baseline_uniform_process(7, 21, 1) == testutil::complete(7));
  CHECK(baseline_uniform_process(30, 100, 4).edge_count() == 100);
  CHECK(baseline_uniform_process(30, 100, 4) == baseline_uniform_process(30, 100, 4));
  CHECK_THROWS_AS(baseline_uniform_process(7, 22, 1), InvalidArgument);
}

TEST_CASE("key inequality records") {
  const auto c3 = parse_pattern("C3");
  const auto k = make_constants(c3, 400, derive_eps_mu(c3));
  auto s = ProcessState::init(400, c3, 3);
  run_until(s, StepCount{static_cast<std::uint64_t>(k.m_steps / 2)});

  SUBCASE("F inside E(i)") {
    const auto [u, v] = pair_from_index(s.history()[0].pair, 400);
    EdgeSetF f{{u, v}, {s.history()[0].pair}};
    const auto r = check_key_inequality(s, f, k);
    CHECK(r.f_open == 0);
    CHECK(r.o_f == 0);
    CHECK(r.inclusion_exclusion_bound <= 0);
    CHECK(r.inclusion_exclusion_holds);
  }
  SUBCASE("one open pair") {
    const PairId uv = s.open_pairs()[0];
    const auto [u, v] = pair_from_index(uv, 400);
    EdgeSetF f{{u, v}, {uv}};
    const auto r = check_key_inequality(s, f, k);
    CHECK(r.f_open == 1);
    CHECK(r.o_f == s.compute_C_uv(uv).size());
    CHECK(r.o_f == r.sum_cuv);
    CHECK(r.inclusion_exclusion_bound == static_cast<std::int64_t>(r.o_f));
    CHECK(r.sum_intersections == 0);
  }
  SUBCASE("random F at m/2") {
    Rng rng(11);
    for (int rep = 0; rep < 20; ++rep) {
      const auto f = random_edge_set(400, 20, 20, rng);
      CHECK(f.a() == 20);
      CHECK(f.pairs.size() == 20);
      const auto r = check_key_inequality(s, f, k);
      CHECK(r.in_range);
      CHECK(r.inclusion_exclusion_holds);
      CHECK(r.inclusion_exclusion_bound <= static_cast<std::int64_t>(r.o_f));
      CHECK(r.o_f <= r.sum_cuv);
      CHECK(r.f_open + r.f_edges + r.f_closed == r.f_size);
      CHECK(r.reference == doctest::Approx(k.key_inequality_reference(20, s.open_count())));
    }
  }
  CHECK_THROWS_AS([] {
    Rng rng(1);
    return random_edge_set(10, 3, 4, rng);
  }(), InvalidArgument);
}

TEST_CASE("edge exponent fit") {
  std::vector<std::pair<double, double>> pts;
  for (double n : {100.0, 200.0, 400.0, 800.0, 1600.0})
    for (int t = 0; t < 3; ++t) pts.emplace_back(n, std::pow(n, 1.5));
  const auto fit = fit_edge_exponent(pts);
  CHECK(std::abs(fit.slope - 1.5) <= 1e-9);
  CHECK(fit.distinct_n == 5);
  CHECK(fit.slope_stderr == doctest::Approx(0.0));

  pts.clear();
  for (double n : {10.0, 20.0, 30.0, 40.0})
    for (int t = 0; t < 3; ++t) pts.emplace_back(n, 7.0 * n);
  CHECK(fit_edge_exponent(pts).slope == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit_edge_exponent(pts).intercept == doctest::Approx(std::log(7.0)).epsilon(1e-12));

  pts.pop_back();
  CHECK_THROWS_AS(fit_edge_exponent(pts), InvalidArgument);
  pts = {{1, 1}, {1, 1}, {1, 1}, {2, 2}, {2, 2}, {2, 2}, {3, 3}, {3, 3}, {3, 3}};
  CHECK_THROWS_AS(fit_edge_exponent(pts), InvalidArgument);
}
