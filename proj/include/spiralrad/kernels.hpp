#pragma once

// Coefficient rules for the special-function series used by the families.
// Every builder returns a_n for the series variable x (so the caller decides
// whether x stands for z or z^2); `arg_sign` = -1 evaluates the function at -x.

#include <cmath>
#include <cstddef>
#include <vector>

#include "spiralrad/error.hpp"
#include "spiralrad/series.hpp"

namespace spiralrad::kernels {

namespace detail {

inline int alternating(double arg_sign, std::size_t n) {
  return (arg_sign < 0 && (n % 2 == 1)) ? -1 : 1;
}

/// Incremental accumulation of prod (b + j), j < n, in sign/log form.
struct PochhammerTrack {
  double b;
  int sign = 1;
  long double log_abs = 0.0L;
  bool zero = false;

  void advance(std::size_t j) {
    const long double f = static_cast<long double>(b) + static_cast<long double>(j);
    if (f == 0.0L) {
      zero = true;
      return;
    }
    if (f < 0) sign = -sign;
    log_abs += std::log(std::fabs(f));
  }
};

inline long double lgam(long double x) { return std::lgamma(x); }

}  // namespace detail

/// Wright's generalized Bessel function Phi(kappa, delta, arg_sign*x),
/// optionally scaled by Gamma(delta) so that the leading coefficient is 1.
inline EvenSeries wright_phi(double kappa, double delta, double arg_sign, Variable variable,
                             bool gamma_normalized = true) {
  if (!(kappa > -1.0)) throw ParameterError("Wright series requires kappa > -1");
  if (!(delta > 0.0)) throw ParameterError("Wright series requires delta > 0");
  const long double lead = gamma_normalized ? detail::lgam(delta) : 0.0L;
  return EvenSeries::from_rule(
      [=](std::size_t n) {
        const long double dn = static_cast<long double>(n);
        const long double arg = dn * kappa + delta;
        if (!(arg > 0.0L)) throw ParameterError("Wright series needs n*kappa + delta > 0 for every n");
        return Coefficient{detail::alternating(arg_sign, n), lead - detail::lgam(dn + 1.0L) - detail::lgam(arg)};
      },
      variable);
}

/// Prabhakar's three-parameter Mittag-Leffler function M(mu, nu, a, arg_sign*x),
/// optionally scaled by Gamma(nu).
inline EvenSeries mittag_leffler(double mu, double nu, double a, double arg_sign, Variable variable,
                                 bool gamma_normalized = true) {
  if (!(mu > 0.0) || !(nu > 0.0) || !(a > 0.0)) {
    throw ParameterError("Mittag-Leffler series requires mu, nu, a > 0");
  }
  const long double lead = (gamma_normalized ? detail::lgam(nu) : 0.0L) - detail::lgam(a);
  return EvenSeries::from_rule(
      [=](std::size_t n) {
        const long double dn = static_cast<long double>(n);
        return Coefficient{detail::alternating(arg_sign, n),
                           lead + detail::lgam(a + dn) - detail::lgam(dn + 1.0L) - detail::lgam(mu * dn + nu)};
      },
      variable);
}

/// 1F2(a1; b1, b2; scale*x). Coefficients follow the term ratio
/// (a1+n) scale / ((b1+n)(b2+n)(n+1)); a vanishing numerator terminates the series.
inline EvenSeries hypergeometric_1f2(double a1, double b1, double b2, double scale, Variable variable) {
  std::vector<Coefficient> coeffs;
  detail::PochhammerTrack num{a1}, den1{b1}, den2{b2};
  const int scale_sign = scale < 0 ? -1 : 1;
  const long double log_scale = std::log(std::fabs(static_cast<long double>(scale)));
  long double log_fact = 0.0L;
  bool terminated = false;
  for (std::size_t n = 0; n < kTruncationCap; ++n) {
    if (n > 0) {
      num.advance(n - 1);
      den1.advance(n - 1);
      den2.advance(n - 1);
      log_fact += std::log(static_cast<long double>(n));
    }
    if (den1.zero || den2.zero) throw ParameterError("1F2 lower parameter is a nonpositive integer");
    if (num.zero) {
      terminated = true;
      break;
    }
    int sign = num.sign * den1.sign * den2.sign;
    if (scale_sign < 0 && n % 2 == 1) sign = -sign;
    const long double lm = num.log_abs - den1.log_abs - den2.log_abs - log_fact + static_cast<long double>(n) * log_scale;
    coeffs.push_back({sign, lm});
    if (lm < kNegligibleLog) break;
  }
  return EvenSeries::from_coefficients(std::move(coeffs), variable, terminated);
}

/// Ramanujan-type q-series A_p^{(beta)}(c, arg_sign*x) = sum (c;p)_n p^{beta n^2} / (p;p)_n (arg_sign*x)^n.
inline EvenSeries ramanujan_a(double beta, double p, double c, double arg_sign, Variable variable) {
  if (!(beta > 0.0)) throw ParameterError("Ramanujan series requires beta > 0");
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("Ramanujan series requires 0 < p < 1");
  std::vector<Coefficient> coeffs;
  const long double log_p = std::log(static_cast<long double>(p));
  int sign = 1;
  long double log_abs = 0.0L;
  long double pj = 1.0L;  // p^j
  bool terminated = false;
  for (std::size_t n = 0; n < kTruncationCap; ++n) {
    if (n > 0) {
      const long double j = static_cast<long double>(n - 1);
      const long double cfac = 1.0L - c * pj;  // (c;p) factor, j = n-1
      if (cfac == 0.0L) {
        terminated = true;
        break;
      }
      if (cfac < 0) sign = -sign;
      log_abs += std::log(std::fabs(cfac));
      pj *= p;                                 // p^{n}
      log_abs -= std::log1p(-pj);              // (p;p) factor 1 - p^{n}
      log_abs += beta * (2.0L * j + 1.0L) * log_p;  // p^{beta (n^2 - (n-1)^2)}
    }
    const int s = (arg_sign < 0 && n % 2 == 1) ? -sign : sign;
    coeffs.push_back({s, log_abs});
    if (log_abs < kNegligibleLog) break;
  }
  return EvenSeries::from_coefficients(std::move(coeffs), variable, terminated);
}

}  // namespace spiralrad::kernels
