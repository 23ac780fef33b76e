#pragma once

// Radius of gamma-spirallikeness of order alpha (and the convex analogue) as the
// root of Theta(r) = Q(r) - 1 + c, c = (1 - alpha) cos(gamma), on (0, B) where B
// is the first positive zero of the governing function.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "spiralrad/error.hpp"
#include "spiralrad/families.hpp"
#include "spiralrad/series.hpp"
#include "spiralrad/zeros.hpp"

namespace spiralrad {

inline constexpr double kRadiusTol = 1e-10;
inline constexpr double kResidualTol = 1e-10;
inline constexpr double kBracketFloor = 1e-14;

struct SpiralOrder {
  double gamma = 0.0;  // radians, |gamma| < pi/2
  double alpha = 0.0;  // 0 <= alpha < 1

  static SpiralOrder make(double gamma, double alpha) {
    if (!std::isfinite(gamma) || !(std::fabs(gamma) < 0.5 * std::numbers::pi)) {
      throw ParameterError("gamma must satisfy |gamma| < pi/2");
    }
    if (!(alpha >= 0.0 && alpha < 1.0)) throw ParameterError("alpha must satisfy 0 <= alpha < 1");
    return {gamma, alpha};
  }

  double c() const { return (1.0 - alpha) * std::cos(gamma); }
};

/// Which reading of the Legendre root equations to use.
/// `corrected`: r P'' + c P' = 0 and r P' + (c - 1) P = 0.
/// `as_displayed`: r P'' + (1 - alpha) P' = 0 and r P' + (1 - alpha) P = 0.
enum class LegendreEquation { corrected, as_displayed };

enum class Certification { uncertified, disk_valid, sharp_at_gamma0 };

inline const char* to_string(Certification c) {
  switch (c) {
    case Certification::uncertified: return "uncertified";
    case Certification::disk_valid: return "disk_valid";
    case Certification::sharp_at_gamma0: return "sharp_at_gamma0";
  }
  return "?";
}

struct RadiusResult {
  double radius = 0.0;
  double lo = 0.0;  // solver bracket
  double hi = 0.0;
  double singularity = 0.0;  // first zero of the governing function
  double residual = 0.0;
  int iterations = 0;
  Kind kind = Kind::spirallike;
  Certification certification = Certification::uncertified;
};

/// Theta(r) = Q(r) - 1 + shift on the bracket (lower(), upper()).
class Theta {
 public:
  Theta(NormalizedForm form, Kind kind, double shift) : form_(std::move(form)), kind_(kind), shift_(shift) {
    const char* what = kind == Kind::spirallike ? "kernel" : "derivative function";
    ZeroSequence z;
    try {
      z = positive_zeros(form_.governing(kind), 1, {}, what);
    } catch (const ScanError& e) {
      throw SolverError(std::string("no positive zero of the ") + what + " (radius unbounded or out of range): " +
                        e.what());
    }
    singularity_ = z.zeros.front();
    upper_ = z.brackets.front().first;
    lower_ = kBracketFloor * singularity_;
    // Next to the zero the computed Theta can carry the wrong sign from
    // cancellation; back off until the pole's negative branch is resolved.
    double gap = std::max(singularity_ - upper_, kBracketFloor * singularity_);
    for (int k = 0; k < 30 && !((*this)(upper_) < 0.0); ++k) {
      gap *= 4.0;
      if (gap >= 0.5 * singularity_) break;
      upper_ = singularity_ - gap;
    }
  }

  double operator()(double r) const { return form_.q_at(kind_, r) - 1.0 + shift_; }

  double lower() const noexcept { return lower_; }
  /// Point just below the governing zero where Theta is resolved as negative.
  double upper() const noexcept { return upper_; }
  double singularity() const noexcept { return singularity_; }
  double shift() const noexcept { return shift_; }
  Kind kind() const noexcept { return kind_; }
  const NormalizedForm& form() const noexcept { return form_; }

 private:
  NormalizedForm form_;
  Kind kind_;
  double shift_;
  double singularity_ = 0.0;
  double upper_ = 0.0;
  double lower_ = 0.0;
};

inline double equation_shift(const NormalizedForm& form, Kind kind, const SpiralOrder& order,
                             LegendreEquation reading = LegendreEquation::corrected) {
  if (reading == LegendreEquation::as_displayed && std::holds_alternative<Legendre>(form.spec())) {
    // r P'' + (1-alpha) P' = 0  <=>  Q_C - 1 + (1 - alpha) = 0
    // r P' + (1-alpha) P = 0     <=>  Q_S - 1 + (2 - alpha) = 0
    return kind == Kind::convex ? 1.0 - order.alpha : 2.0 - order.alpha;
  }
  return order.c();
}

inline Theta theta(const NormalizedForm& form, Kind kind, const SpiralOrder& order,
                   LegendreEquation reading = LegendreEquation::corrected) {
  return Theta(form, kind, equation_shift(form, kind, order, reading));
}

/// Bisection for the unique root of a strictly decreasing Theta.
inline RadiusResult solve(const Theta& th, double tol = kRadiusTol) {
  if (!(tol > 0.0)) throw ParameterError("solver tolerance must be positive");
  double lo = th.lower();
  double hi = th.upper();
  const double f_lo = th(lo);
  const double f_hi = th(hi);
  if (!(f_lo > 0.0)) {
    throw SolverError("Theta(lower bracket) <= 0: radius below resolution");
  }
  if (!(f_hi < 0.0)) {
    throw SolverError("Theta does not change sign before the first zero of the governing function");
  }
  RadiusResult out;
  out.kind = th.kind();
  out.singularity = th.singularity();
  int it = 0;
  double mid = 0.5 * (lo + hi);
  double f_mid = th(mid);
  for (; it < 200; ++it) {
    const bool converged = (hi - lo) <= tol * mid;
    if (converged && std::fabs(f_mid) < kResidualTol) break;
    if (f_mid == 0.0) break;
    if (f_mid > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    const double next = 0.5 * (lo + hi);
    if (next <= lo || next >= hi) break;
    mid = next;
    f_mid = th(mid);
  }
  out.radius = mid;
  out.lo = lo;
  out.hi = hi;
  out.residual = std::fabs(f_mid);
  out.iterations = it;
  return out;
}

inline RadiusResult solve_radius(const NormalizedForm& form, Kind kind, const SpiralOrder& order,
                                 double tol = kRadiusTol,
                                 LegendreEquation reading = LegendreEquation::corrected) {
  return solve(theta(form, kind, order, reading), tol);
}

/// Root of Q(r) - 1 + shift = 0 for an arbitrary positive shift (not tied to a SpiralOrder).
inline RadiusResult solve_shift(const NormalizedForm& form, Kind kind, double shift, double tol = kRadiusTol) {
  if (!(shift > 0.0)) throw ParameterError("equation shift must be positive");
  return solve(Theta(form, kind, shift), tol);
}

}  // namespace spiralrad
