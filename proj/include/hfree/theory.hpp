#pragma once

#include "hfree/patterns.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hfree {

/// Parses a non-negative decimal ("0.1", "3", "1e-3" is not accepted) or a
/// fraction ("1/10") exactly.
Rational parse_decimal(std::string_view text);
std::string format_rational(const Rational& r);

struct EpsMu {
  Rational eps;
  Rational mu;
  bool operator==(const EpsMu&) const = default;
};

struct EpsMuCheck {
  bool ok = false;
  std::vector<std::string> diagnostics;
};

/// Exact check of eps < min{1/e_H, 1/(2 d2(H))} and 2 e_H (2 mu)^(e_H-1) <= eps.
/// Throws InvalidArgument for non-positive inputs.
EpsMuCheck validate_eps_mu(const Pattern& h, const Rational& eps, const Rational& mu);

/// Largest eps = k/100 meeting the first constraint, then the largest
/// mu = k/1000 meeting the second.
EpsMu derive_eps_mu(const Pattern& h);

/// (1/10, 1/100) when valid for H, otherwise derive_eps_mu(H).
EpsMu default_eps_mu(const Pattern& h);

/// n^(-1/d2(H)); requires n >= 2.
double compute_p(std::uint64_t n, const Pattern& h);

/// mu n^2 p (ln n)^(1/(e_H-1)) before flooring.
long double compute_m_real(std::uint64_t n, const Pattern& h, const Rational& mu);

/// floor of compute_m_real; throws InvalidArgument for mu <= 0. A result
/// below 1 is returned as-is; TheoryConstants::m_degenerate flags it.
std::int64_t compute_m(std::uint64_t n, const Pattern& h, const Rational& mu);

/// t(i) = i / (n^2 p).
double compute_t(std::uint64_t i, std::uint64_t n, double p);

/// q(t) = exp(-2 e_H / aut(H) * (2t)^(e_H-1)).
double compute_q(double t, const Pattern& h);

/// beta_H = e_H (e_H - 1) / aut(H).
Rational compute_beta(const Pattern& h);

struct DensityConstants {
  double c = 0;
  double d = 0;
};

/// c = max{16/eps, 416/(beta mu^(e_H-1))}, d = min{1/c, 1/e_H - eps, 1/d2 - 2 eps, 1}.
/// Throws InvalidArgument when (eps, mu) is invalid for H.
DensityConstants compute_c_d(const Pattern& h, const Rational& eps, const Rational& mu);

/// Every constant of the process analysis for one (H, n, eps, mu).
struct TheoryConstants {
  std::string pattern;
  std::uint64_t n = 0;
  int e_h = 0;
  int v_h = 0;
  std::uint64_t aut = 1;
  Rational d2;
  Rational eps;
  Rational mu;
  bool eps_mu_valid = false;
  double p = 0;
  double n2p = 0;
  long double m_real = 0;
  std::int64_t m_steps = 0;
  bool m_degenerate = false;
  Rational beta;
  double c = 0;
  double d = 0;

  double t(std::uint64_t i) const;
  double q(double t) const;
  /// q(t(i)) n^2
  double open_pair_reference(std::uint64_t i) const;
  /// beta (2t)^(e_H-2) q(t) / p
  double closed_set_reference(std::uint64_t i) const;
  /// n^(-1/e_H) / p
  double intersection_reference() const;
  /// max{8|A|/eps, p |A|^2 n^(2 eps)}
  double induced_edge_reference(std::uint64_t a) const;
  /// 13 a ln(n) / m * |O(i)|
  double key_inequality_reference(std::uint64_t a, std::uint64_t open_pairs) const;
  /// floor(n^d), at least 1.
  std::uint64_t density_size_cap() const;
};

TheoryConstants make_constants(const Pattern& h, std::uint64_t n, const EpsMu& eps_mu);
TheoryConstants make_constants(const Pattern& h, std::uint64_t n);

nlohmann::ordered_json to_json(const TheoryConstants& k);

inline constexpr std::string_view kLogConvention = "natural";

} // namespace hfree
