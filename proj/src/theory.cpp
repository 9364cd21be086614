#include "hfree/theory.hpp"

#include "hfree/errors.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace hfree {

namespace {

using BigRational = boost::multiprecision::cpp_rational;

BigRational big(const Rational& r) { return BigRational(r.numerator()) / BigRational(r.denominator()); }

long double as_real(const Rational& r) {
  return static_cast<long double>(r.numerator()) / static_cast<long double>(r.denominator());
}

BigRational power(BigRational base, int exponent) {
  BigRational out = 1;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

} // namespace

Rational parse_decimal(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t'; }), s.end());
  if (s.empty()) throw InvalidArgument("expected a number, got empty text");
  const auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      std::size_t used_num = 0, used_den = 0;
      const auto num = std::stoll(s.substr(0, slash), &used_num);
      const auto den = std::stoll(s.substr(slash + 1), &used_den);
      if (used_num != slash || used_den != s.size() - slash - 1 || den == 0) throw InvalidArgument("");
      return Rational(num, den);
    }
    const auto dot = s.find('.');
    const std::string whole = s.substr(0, dot);
    const std::string frac = dot == std::string::npos ? "" : s.substr(dot + 1);
    if (frac.size() > 15) throw InvalidArgument("");
    const auto digits = [](const std::string& part) {
      return std::all_of(part.begin(), part.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    if ((whole.empty() && frac.empty()) || !digits(whole) || !digits(frac)) throw InvalidArgument("");
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const std::int64_t num = (whole.empty() ? 0 : std::stoll(whole)) * den + (frac.empty() ? 0 : std::stoll(frac));
    return Rational(num, den);
  } catch (const std::exception&) {
    throw InvalidArgument("expected a decimal or fraction, got '" + std::string(text) + "'");
  }
}

std::string format_rational(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

EpsMuCheck validate_eps_mu(const Pattern& h, const Rational& eps, const Rational& mu) {
  if (eps <= 0 || mu <= 0) throw InvalidArgument("eps and mu must be positive");
  const auto d2 = density_2(h);
  const int e = h.edge_count();
  EpsMuCheck check{true, {}};

  const Rational bound = std::min(Rational(1, e), Rational(1) / (Rational(2) * d2));
  if (!(eps < bound)) {
    check.ok = false;
    check.diagnostics.push_back("eps = " + format_rational(eps) + " is not below min{1/e_H, 1/(2 d2)} = " +
                                format_rational(bound));
  }
  const BigRational lhs = BigRational(2 * e) * power(BigRational(2) * big(mu), e - 1);
  if (lhs > big(eps)) {
    check.ok = false;
    check.diagnostics.push_back("2 e_H (2 mu)^(e_H-1) = " + lhs.str() + " exceeds eps = " + format_rational(eps));
  }
  return check;
}

EpsMu derive_eps_mu(const Pattern& h) {
  const auto d2 = density_2(h);
  const Rational bound = std::min(Rational(1, h.edge_count()), Rational(1) / (Rational(2) * d2));
  Rational eps(0);
  for (int k = 99; k >= 1; --k)
    if (Rational(k, 100) < bound) {
      eps = Rational(k, 100);
      break;
    }
  if (eps.numerator() == 0) throw InvalidArgument("no eps of the form k/100 satisfies the constraints for " + h.name());
  for (int k = 999; k >= 1; --k) {
    const Rational mu(k, 1000);
    if (validate_eps_mu(h, eps, mu).ok) return {eps, mu};
  }
  throw InvalidArgument("no mu of the form k/1000 satisfies the constraints for " + h.name());
}

EpsMu default_eps_mu(const Pattern& h) {
  const EpsMu standard{Rational(1, 10), Rational(1, 100)};
  if (validate_eps_mu(h, standard.eps, standard.mu).ok) return standard;
  return derive_eps_mu(h);
}

double compute_p(std::uint64_t n, const Pattern& h) {
  if (n < 2) throw InvalidArgument("compute_p: n must be at least 2");
  const auto d2 = density_2(h);
  const long double exponent = -as_real(Rational(d2.denominator(), d2.numerator()));
  return static_cast<double>(std::exp(exponent * std::log(static_cast<long double>(n))));
}

long double compute_m_real(std::uint64_t n, const Pattern& h, const Rational& mu) {
  if (mu <= 0) throw InvalidArgument("compute_m: mu must be positive");
  const long double p = compute_p(n, h);
  const long double nn = static_cast<long double>(n);
  const long double log_factor = std::pow(std::log(nn), 1.0L / (h.edge_count() - 1));
  return as_real(mu) * nn * nn * p * log_factor;
}

std::int64_t compute_m(std::uint64_t n, const Pattern& h, const Rational& mu) {
  return static_cast<std::int64_t>(std::floor(compute_m_real(n, h, mu)));
}

double compute_t(std::uint64_t i, std::uint64_t n, double p) {
  return static_cast<double>(i) / (static_cast<double>(n) * static_cast<double>(n) * p);
}

double compute_q(double t, const Pattern& h) {
  const int e = h.edge_count();
  return std::exp(-2.0 * e / static_cast<double>(h.aut()) * std::pow(2.0 * t, e - 1));
}

Rational compute_beta(const Pattern& h) {
  const std::int64_t e = h.edge_count();
  return Rational(e * (e - 1), static_cast<std::int64_t>(h.aut()));
}

DensityConstants compute_c_d(const Pattern& h, const Rational& eps, const Rational& mu) {
  const auto check = validate_eps_mu(h, eps, mu);
  if (!check.ok) throw InvalidArgument("compute_c_d: " + check.diagnostics.front());
  const int e = h.edge_count();
  const long double beta = as_real(compute_beta(h));
  const long double c = std::max(16.0L / as_real(eps), 416.0L / (beta * std::pow(as_real(mu), e - 1)));
  const long double d = std::min({1.0L / c, 1.0L / e - as_real(eps), 1.0L / as_real(density_2(h)) - 2 * as_real(eps),
                                  1.0L});
  return {static_cast<double>(c), static_cast<double>(d)};
}

double TheoryConstants::t(std::uint64_t i) const { return compute_t(i, n, p); }

double TheoryConstants::q(double t_value) const {
  return std::exp(-2.0 * e_h / static_cast<double>(aut) * std::pow(2.0 * t_value, e_h - 1));
}

double TheoryConstants::open_pair_reference(std::uint64_t i) const {
  return q(t(i)) * static_cast<double>(n) * static_cast<double>(n);
}

double TheoryConstants::closed_set_reference(std::uint64_t i) const {
  const double tv = t(i);
  return boost::rational_cast<double>(beta) * std::pow(2.0 * tv, e_h - 2) * q(tv) / p;
}

double TheoryConstants::intersection_reference() const {
  return std::pow(static_cast<double>(n), -1.0 / e_h) / p;
}

double TheoryConstants::induced_edge_reference(std::uint64_t a) const {
  const double eps_real = boost::rational_cast<double>(eps);
  const double av = static_cast<double>(a);
  return std::max(8.0 * av / eps_real, p * av * av * std::pow(static_cast<double>(n), 2 * eps_real));
}

double TheoryConstants::key_inequality_reference(std::uint64_t a, std::uint64_t open_pairs) const {
  return 13.0 * static_cast<double>(a) * std::log(static_cast<double>(n)) / static_cast<double>(m_real) *
         static_cast<double>(open_pairs);
}

std::uint64_t TheoryConstants::density_size_cap() const {
  const double cap = std::floor(std::pow(static_cast<double>(n), d));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(cap));
}

TheoryConstants make_constants(const Pattern& h, std::uint64_t n, const EpsMu& eps_mu) {
  require_forbidden_pattern(h);
  TheoryConstants k;
  k.pattern = h.name();
  k.n = n;
  k.e_h = h.edge_count();
  k.v_h = h.vertex_count();
  k.aut = h.aut();
  k.d2 = density_2(h);
  k.eps = eps_mu.eps;
  k.mu = eps_mu.mu;
  k.eps_mu_valid = validate_eps_mu(h, k.eps, k.mu).ok;
  k.p = compute_p(n, h);
  k.n2p = static_cast<double>(n) * static_cast<double>(n) * k.p;
  k.m_real = compute_m_real(n, h, k.mu);
  k.m_steps = static_cast<std::int64_t>(std::floor(k.m_real));
  k.m_degenerate = k.m_steps < 1;
  k.beta = compute_beta(h);
  if (k.eps_mu_valid) {
    const auto cd = compute_c_d(h, k.eps, k.mu);
    k.c = cd.c;
    k.d = cd.d;
  }
  return k;
}

TheoryConstants make_constants(const Pattern& h, std::uint64_t n) { return make_constants(h, n, default_eps_mu(h)); }

nlohmann::ordered_json to_json(const TheoryConstants& k) {
  nlohmann::ordered_json j;
  j["pattern"] = k.pattern;
  j["n"] = k.n;
  j["e_H"] = k.e_h;
  j["v_H"] = k.v_h;
  j["aut_H"] = k.aut;
  j["d2_H"] = format_rational(k.d2);
  j["eps"] = format_rational(k.eps);
  j["mu"] = format_rational(k.mu);
  j["eps_mu_valid"] = k.eps_mu_valid;
  j["p"] = k.p;
  j["n2p"] = k.n2p;
  j["m_real"] = static_cast<double>(k.m_real);
  j["m"] = k.m_steps;
  j["m_degenerate"] = k.m_degenerate;
  j["beta_H"] = format_rational(k.beta);
  j["c"] = k.c;
  j["d"] = k.d;
  j["density_size_cap"] = k.density_size_cap();
  j["log"] = std::string(kLogConvention);
  j["eps_mu_note"] = "explicit constraints only; implicit constraints of the underlying differential-equation "
                     "analysis are not checked";
  return j;
}

} // namespace hfree
