#pragma once

// Positive real zeros of an entire series by forward sign scanning and bisection.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "spiralrad/error.hpp"
#include "spiralrad/series.hpp"

namespace spiralrad {

inline constexpr double kZeroTol = 1e-12;
/// Truncation target for scanning; far below the default so that kernels
/// whose values have decayed to ~1e-13 still resolve their sign.
inline constexpr double kScanEvalEps = 1e-20;

struct ZeroSequence {
  std::vector<double> zeros;
  /// Final bisection interval around each zero; the target changes sign across
  /// it, or its derivative does for a touching (even-order) zero.
  std::vector<std::pair<double, double>> brackets;
  std::vector<bool> simple;
  std::string target;
  double tol = kZeroTol;
  bool certified_simple = true;
};

struct ScanPolicy {
  double initial_step = 0.0;  // 0: derived from the two-term truncation
  double max_x = 0.0;         // 0: Cauchy bound for polynomials, unbounded otherwise
  std::size_t max_steps = 200000;
  double tol = kZeroTol;
  double eps = kScanEvalEps;
};

namespace detail {

inline int sign_of(double v) { return (v > 0) - (v < 0); }

/// 0.1 times the positive root of a_0 + a_1 x (in the series' own argument), clamped to [1e-3, 1].
inline double default_step(const EvenSeries& s) {
  double root = 1.0;
  if (s.size() >= 2) {
    const double a0 = s.coefficient(0).value();
    const double a1 = s.coefficient(1).value();
    if (a1 != 0.0 && -a0 / a1 > 0.0) {
      root = -a0 / a1;
      if (s.variable() == Variable::z_squared) root = std::sqrt(root);
    }
  }
  return std::clamp(0.1 * root, 1e-3, 1.0);
}

/// 1 + max |a_k / a_lead| in the series variable, mapped back to the scan variable.
inline double cauchy_bound(const EvenSeries& s) {
  const auto c = s.coefficients();
  const double lead = std::fabs(c.back().value());
  double m = 0.0;
  for (std::size_t k = 0; k + 1 < c.size(); ++k) m = std::max(m, std::fabs(c[k].value()) / lead);
  const double b = 1.0 + m;
  return s.variable() == Variable::z_squared ? std::sqrt(b) : b;
}

/// Rounding plus truncation uncertainty of a real evaluation.
inline double noise_level(const EvalResult<double>& e) {
  return 64.0 * kAccumulationEpsilon * e.magnitude + e.tail_bound +
         std::numeric_limits<double>::epsilon() * std::fabs(e.value);
}

inline ScanError precision_exhausted(std::size_t found, std::size_t count, double x, double uncertainty) {
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "precision exhausted after %zu of %zu zeros: near x = %.6g rounding in the series sum "
                "moves a zero by ~%.3g",
                found, count, x, uncertainty);
  return ScanError(buf);
}

template <class F>
std::pair<double, double> bisect_sign(F&& f, double lo, double hi, int sign_lo, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double v = f(mid);
    if (v == 0.0) return {mid, mid};
    if (sign_of(v) == sign_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, hi};
}

}  // namespace detail

/// The first `count` positive zeros of a real series, located by a forward scan
/// and refined by bisection. A cell whose endpoints share a sign but where |f|
/// dips (f f' < 0 on the left, > 0 on the right) is split at the zero of f';
/// this catches close pairs and reports touching zeros as non-simple.
/// Throws ScanError once cancellation in the series sum makes the next zero
/// unresolvable, rather than reporting noise crossings.
inline ZeroSequence positive_zeros(const EvenSeries& target, std::size_t count, ScanPolicy policy = {},
                                   std::string description = {}) {
  if (count < 1) throw ParameterError("zero count must be >= 1");
  ZeroSequence out;
  out.target = std::move(description);
  out.tol = policy.tol;

  double step = policy.initial_step > 0.0 ? policy.initial_step : detail::default_step(target);
  double max_x = policy.max_x;
  if (max_x <= 0.0) max_x = target.finite() ? detail::cauchy_bound(target) : std::numeric_limits<double>::infinity();
  const double min_step = std::max(step / 1024.0, 1e-6);

  const auto eval = [&](double x) { return evaluate(target, x, policy.eps); };
  const auto value = [&](double x) { return eval(x).value; };
  const auto slope = [&](double x) { return eval(x).d1; };

  // max |f| over the current arch and the one before it; noise is judged
  // against the larger so that cells next to a zero are not misread.
  double arch = 0.0;
  double last_arch = 0.0;
  const auto envelope = [&] { return std::max(arch, last_arch); };
  const auto push = [&](double lo, double hi, bool simple) {
    last_arch = arch;
    arch = 0.0;
    out.zeros.push_back(0.5 * (lo + hi));
    out.brackets.emplace_back(lo, hi);
    out.simple.push_back(simple);
    if (!simple) out.certified_simple = false;
  };

  double x0 = 0.0;
  EvalResult<double> e0 = eval(x0);
  if (e0.value == 0.0) throw ScanError("target vanishes at the origin");

  for (std::size_t steps = 0; out.zeros.size() < count; ++steps) {
    if (steps >= policy.max_steps || x0 >= max_x) {
      throw ScanError("scan budget exhausted after " + std::to_string(out.zeros.size()) + " of " +
                      std::to_string(count) + " zeros (reached x = " + std::to_string(x0) + ")");
    }
    const double x1 = std::min(x0 + step, max_x);
    EvalResult<double> e1 = eval(x1);
    arch = std::max({arch, std::fabs(e0.value), std::fabs(e1.value)});
    if (detail::noise_level(e1) > 1e-3 * envelope()) {
      throw detail::precision_exhausted(out.zeros.size(), count, x1, x1 - x0);
    }
    const int s0 = detail::sign_of(e0.value);
    const int s1 = detail::sign_of(e1.value);

    if (s1 == 0) {
      push(x1, x1, true);
      // Restart just past the exact zero so its sign is not reused.
      x0 = x1 + policy.tol;
      e0 = eval(x0);
      continue;
    }
    if (s1 != s0) {
      auto [lo, hi] = detail::bisect_sign(value, x0, x1, s0, policy.tol);
      const double xr = 0.5 * (lo + hi);
      const EvalResult<double> er = eval(xr);
      // Position uncertainty of the crossing; large values mean a sign change
      // produced by rounding near a touching zero.
      const double spread = detail::noise_level(er) / std::max(std::fabs(er.d1), std::numeric_limits<double>::min());
      if (spread <= 1e3 * policy.tol) {
        push(lo, hi, true);
      } else {
        const double a = std::max(0.0, xr - 4.0 * spread);
        const double b = xr + 4.0 * spread;
        const double da = slope(a);
        const double db = slope(b);
        if (detail::sign_of(da) == detail::sign_of(db)) {
          throw detail::precision_exhausted(out.zeros.size(), count, xr, spread);
        } else {
          auto [dlo, dhi] = detail::bisect_sign(slope, a, b, detail::sign_of(da), policy.tol);
          push(dlo, dhi, false);
          // Step past the noise band before resuming the scan.
          double restart = std::max(b, x1);
          EvalResult<double> er2 = eval(restart);
          for (int k = 0; k < 64 && std::fabs(er2.value) <= detail::noise_level(er2); ++k) {
            restart += 4.0 * spread;
            er2 = eval(restart);
          }
          x0 = restart;
          e0 = er2;
          continue;
        }
      }
    } else if (e0.value * e0.d1 < 0.0 && e1.value * e1.d1 > 0.0) {
      // |f| has an interior minimum: locate it via f' and inspect.
      auto [dlo, dhi] = detail::bisect_sign(slope, x0, x1, detail::sign_of(e0.d1), policy.tol);
      const double xm = 0.5 * (dlo + dhi);
      const double fm = value(xm);
      const double scale = std::max(std::fabs(e0.value), std::fabs(e1.value));
      const EvalResult<double> em = eval(xm);
      if (std::fabs(fm) <= detail::noise_level(em)) {
        if (detail::noise_level(em) > 1e-6 * envelope()) {
          throw detail::precision_exhausted(out.zeros.size(), count, xm, x1 - x0);
        }
        push(dlo, dhi, false);
      } else if (detail::sign_of(fm) != s0) {
        auto [lo1, hi1] = detail::bisect_sign(value, x0, xm, s0, policy.tol);
        push(lo1, hi1, true);
        if (out.zeros.size() < count) {
          auto [lo2, hi2] = detail::bisect_sign(value, xm, x1, detail::sign_of(fm), policy.tol);
          push(lo2, hi2, true);
        }
      } else if (std::fabs(fm) <= 1e-9 * scale) {
        push(dlo, dhi, false);
      }
      step = std::max(0.5 * step, min_step);
    }
    x0 = x1;
    e0 = e1;
  }
  if (out.zeros.size() > count) {
    out.zeros.resize(count);
    out.brackets.resize(count);
    out.simple.resize(count);
  }
  return out;
}

enum class Interlacing { interlaced, not_interlaced, insufficient_data };

inline const char* to_string(Interlacing i) {
  switch (i) {
    case Interlacing::interlaced: return "interlaced";
    case Interlacing::not_interlaced: return "not_interlaced";
    case Interlacing::insufficient_data: return "insufficient_data";
  }
  return "?";
}

/// b_1 < a_1 < b_2 < a_2 < ... over the common prefix (b leads).
inline Interlacing check_interlacing(const ZeroSequence& a, const ZeroSequence& b) {
  const std::size_t n = std::min(a.zeros.size(), b.zeros.size());
  if (n == 0) return Interlacing::insufficient_data;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(b.zeros[i] < a.zeros[i])) return Interlacing::not_interlaced;
    if (i + 1 < b.zeros.size() && !(a.zeros[i] < b.zeros[i + 1])) return Interlacing::not_interlaced;
  }
  return Interlacing::interlaced;
}

}  // namespace spiralrad
