#include "hfree/errors.hpp"
#include "hfree/patterns.hpp"
#include "hfree/theory.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <doctest.h>

#include <cmath>

using namespace hfree;
using Dec = boost::multiprecision::cpp_dec_float_50;

namespace {

Dec dec(const Rational& r) { return Dec(r.numerator()) / Dec(r.denominator()); }

// mu n^2 n^(-1/d2) (ln n)^(1/(e-1)) in 50 significant digits.
Dec reference_m(std::uint64_t n, const Pattern& h, const Rational& mu) {
  const Dec dn(n);
  const Dec p = boost::multiprecision::pow(dn, -Dec(1) / dec(density_2(h)));
  return dec(mu) * dn * dn * p * boost::multiprecision::pow(boost::multiprecision::log(dn), Dec(1) / Dec(h.edge_count() - 1));
}

} // namespace

TEST_CASE("decimal parsing is exact") {
  CHECK(parse_decimal("0.1") == Rational(1, 10));
  CHECK(parse_decimal("1/100") == Rational(1, 100));
  CHECK(parse_decimal("3") == Rational(3));
  CHECK(parse_decimal("0.125") == Rational(1, 8));
  CHECK_THROWS_AS(parse_decimal("1e-3"), InvalidArgument);
  CHECK_THROWS_AS(parse_decimal("abc"), InvalidArgument);
  CHECK(format_rational(Rational(3, 6)) == "1/2");
}

TEST_CASE("eps and mu validation") {
  const auto c3 = parse_pattern("C3");
  CHECK(validate_eps_mu(c3, Rational(1, 10), Rational(1, 100)).ok);
  const auto bad = validate_eps_mu(c3, Rational(3, 10), Rational(1, 100));
  CHECK_FALSE(bad.ok);
  CHECK(bad.diagnostics.size() == 1);
  CHECK(validate_eps_mu(parse_pattern("K4"), Rational(15, 100), Rational(5, 100)).ok);
  // 6 (2 mu)^2 <= 1/10 needs mu^2 <= 1/240.
  CHECK_FALSE(validate_eps_mu(c3, Rational(1, 10), Rational(1, 15)).ok);
  CHECK_THROWS_AS(validate_eps_mu(c3, Rational(0), Rational(1, 100)), InvalidArgument);

  CHECK(default_eps_mu(c3) == EpsMu{Rational(1, 10), Rational(1, 100)});
  const auto derived = derive_eps_mu(c3);
  CHECK(derived.eps == Rational(24, 100));
  CHECK(derived.mu == Rational(100, 1000));
  CHECK(validate_eps_mu(c3, derived.eps, derived.mu).ok);
  CHECK_FALSE(validate_eps_mu(c3, derived.eps, derived.mu + Rational(1, 1000)).ok);
  for (const char* spec : {"C4", "C5", "K4", "K5", "Q3", "K3,3"}) {
    const auto h = parse_pattern(spec);
    CAPTURE(spec);
    const auto em = default_eps_mu(h);
    CHECK(validate_eps_mu(h, em.eps, em.mu).ok);
  }
}

TEST_CASE("p m t and q") {
  const auto c3 = parse_pattern("C3");
  const auto c4 = parse_pattern("C4");
  CHECK(compute_p(10000, c3) == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(compute_p(64, c4) == doctest::Approx(1.0 / 16).epsilon(1e-14));
  CHECK(compute_p(64, parse_pattern("K4")) == doctest::Approx(std::pow(64.0, -0.4)).epsilon(1e-14));
  CHECK_THROWS_AS(compute_p(1, c3), InvalidArgument);

  CHECK(compute_m(10000, c3, Rational(1, 100)) == 30348);
  CHECK(compute_m(100, c3, Rational(1, 100)) == 21);
  CHECK_THROWS_AS(compute_m(100, c3, Rational(0)), InvalidArgument);

  for (std::uint64_t n : {50ull, 100ull, 300ull, 2000ull, 10000ull, 123457ull}) {
    for (const char* spec : {"C3", "C4", "C5", "K4"}) {
      const auto h = parse_pattern(spec);
      for (const Rational& mu : {Rational(1, 100), Rational(1, 1000), Rational(1, 10)}) {
        const Dec ref = reference_m(n, h, mu);
        CAPTURE(n);
        CAPTURE(spec);
        CHECK(compute_m(n, h, mu) == static_cast<std::int64_t>(boost::multiprecision::floor(ref)));
      }
    }
  }

  CHECK(compute_t(1000000, 10000, 0.01) == doctest::Approx(1.0));
  for (const char* spec : {"C3", "C5", "K4"}) CHECK(compute_q(0.0, parse_pattern(spec)) == 1.0);
  for (double t : {0.1, 0.5, 1.0, 2.0}) CHECK(compute_q(t, c3) == doctest::Approx(std::exp(-4 * t * t)).epsilon(1e-12));
}

TEST_CASE("beta c and d") {
  CHECK(compute_beta(parse_pattern("C3")) == Rational(1));
  CHECK(compute_beta(parse_pattern("K4")) == Rational(5, 4));
  CHECK(compute_beta(parse_pattern("C4")) == Rational(3, 2));

  const auto c3 = parse_pattern("C3");
  const auto cd = compute_c_d(c3, Rational(1, 10), Rational(1, 100));
  const Dec c_ref = std::max(Dec(16) / Dec("0.1"), Dec(416) / (Dec(1) * boost::multiprecision::pow(Dec("0.01"), 2)));
  CHECK(cd.c == doctest::Approx(static_cast<double>(c_ref)).epsilon(1e-12));
  CHECK(cd.c == doctest::Approx(4.16e6).epsilon(1e-12));
  CHECK(cd.d == doctest::Approx(1.0 / 4.16e6).epsilon(1e-12));
  CHECK_THROWS_AS(compute_c_d(c3, Rational(3, 10), Rational(1, 100)), InvalidArgument);

  for (const char* spec : {"C3", "C4", "C5", "K4", "Q3"}) {
    const auto h = parse_pattern(spec);
    const auto em = default_eps_mu(h);
    const auto r = compute_c_d(h, em.eps, em.mu);
    CAPTURE(spec);
    CHECK(r.d <= 1.0);
    CHECK(r.c >= 16.0 / boost::rational_cast<double>(em.eps));
  }
}

TEST_CASE("theory constants bundle") {
  const auto k = make_constants(parse_pattern("C3"), 10000);
  CHECK(k.m_steps == 30348);
  CHECK(k.t(1000000) == doctest::Approx(1.0));
  CHECK(k.open_pair_reference(1000000) == doctest::Approx(std::exp(-4.0) * 1e8));
  CHECK(k.closed_set_reference(0) == 0.0);
  CHECK(k.closed_set_reference(1000000) == doctest::Approx(200.0 * std::exp(-4.0)));
  CHECK(k.density_size_cap() == 1);
  CHECK(k.eps_mu_valid);

  const auto small = make_constants(parse_pattern("C3"), 800);
  CHECK(small.density_size_cap() == 1);
  CHECK(to_json(k)["log"] == "natural");
  CHECK(to_json(k)["m"] == 30348);
}
