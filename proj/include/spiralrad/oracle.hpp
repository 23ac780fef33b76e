#pragma once

// Direct check of Re(e^{-i gamma} Q(z)) > alpha cos(gamma) on circles |z| = r,
// and a bisection for the largest radius where it holds.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "spiralrad/error.hpp"
#include "spiralrad/families.hpp"
#include "spiralrad/radius.hpp"
#include "spiralrad/series.hpp"
#include "spiralrad/zeros.hpp"

namespace spiralrad {

inline constexpr int kDefaultSamples = 2048;
inline constexpr double kCertTol = 1e-8;
inline constexpr double kCertShrink = 1e-3;
inline constexpr double kSharpFactor = 1.01;

struct BoundaryProfile {
  double r = 0.0;
  Kind kind = Kind::spirallike;
  double gamma = 0.0;
  int samples = 0;
  double min_value = 0.0;
  double argmin_angle = 0.0;  // in (-pi, pi]
};

/// First positive zero of the function governing the singularities of Q, or +inf
/// when the scan finds none (e.g. a constant kernel).
inline double singularity_bound(const NormalizedForm& form, Kind kind) {
  try {
    return positive_zeros(form.governing(kind), 1).brackets.front().first;
  } catch (const ScanError&) {
    if (form.governing(kind).finite()) return std::numeric_limits<double>::infinity();
    throw;
  }
}

namespace detail {

/// Re(e^{-i gamma} Q) at angle theta; negative angles use Q(conj z) = conj Q(z).
struct BoundaryFunction {
  const NormalizedForm& form;
  Kind kind;
  RingEvaluator ring;
  std::complex<double> rot_upper;  // e^{-i gamma}
  std::complex<double> rot_lower;  // e^{+i gamma}

  BoundaryFunction(const NormalizedForm& f, Kind k, double gamma, double r)
      : form(f), kind(k), ring(f.kernel(), r), rot_upper(std::polar(1.0, -gamma)), rot_lower(std::polar(1.0, gamma)) {}

  /// Values at theta and -theta (theta in [0, pi]).
  std::pair<double, double> pair(double theta) const {
    const std::complex<double> z = std::polar(ring.radius(), theta);
    const std::complex<double> q = form.q(kind, ring.at(z), z);
    return {std::real(rot_upper * q), std::real(rot_lower * q)};
  }

  double operator()(double signed_theta) const {
    const auto [up, down] = pair(std::fabs(signed_theta));
    return signed_theta >= 0.0 ? up : down;
  }
};

template <class F>
std::pair<double, double> golden_min(F&& f, double a, double b, double fa_hint, double xa_hint) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 80 && (b - a) > 1e-13; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  double best_x = f1 < f2 ? x1 : x2;
  double best_f = std::min(f1, f2);
  if (fa_hint < best_f) {
    best_f = fa_hint;
    best_x = xa_hint;
  }
  return {best_x, best_f};
}

}  // namespace detail

/// Minimum of Re(e^{-i gamma} Q(r e^{i theta})) over a uniform grid of `samples`
/// angles, then refined by golden-section search between the neighbours of the
/// grid minimizer.
inline BoundaryProfile boundary_min(const NormalizedForm& form, Kind kind, double gamma, double r,
                                    int samples = kDefaultSamples, std::optional<double> singularity = {}) {
  if (samples < 3) throw OracleError("boundary sampling needs at least 3 samples");
  if (!(r > 0.0) || !std::isfinite(r)) throw OracleError("boundary radius must be positive and finite");
  const double bound = singularity ? *singularity : singularity_bound(form, kind);
  if (!(r < bound)) {
    throw OracleError("boundary radius " + std::to_string(r) + " is at or beyond the first singularity " +
                      std::to_string(bound));
  }

  const detail::BoundaryFunction fn(form, kind, gamma, r);
  const double h = 2.0 * std::numbers::pi / samples;
  const int half = samples / 2;

  double best = std::numeric_limits<double>::infinity();
  double best_theta = 0.0;
  for (int j = 0; j <= half; ++j) {
    const double theta = j * h;
    const auto [up, down] = fn.pair(theta);
    if (up < best) {
      best = up;
      best_theta = theta;
    }
    if (j > 0 && down < best) {
      best = down;
      best_theta = -theta;
    }
  }
  if (!std::isfinite(best)) throw OracleError("boundary evaluation produced a non-finite value");

  const auto [theta, value] = detail::golden_min(fn, best_theta - h, best_theta + h, best, best_theta);
  BoundaryProfile out{r, kind, gamma, samples, value, theta};
  if (out.argmin_angle <= -std::numbers::pi) out.argmin_angle += 2.0 * std::numbers::pi;
  if (out.argmin_angle > std::numbers::pi) out.argmin_angle -= 2.0 * std::numbers::pi;
  return out;
}

struct DiskCertificate {
  bool valid = false;
  double checked_radius = 0.0;
  double min_value = 0.0;
  double threshold = 0.0;  // alpha cos(gamma)
  double at_angle = 0.0;
};

/// Checks the circle |z| = (1 - 1e-3) R; harmonicity carries the bound to the disk.
inline DiskCertificate certify_disk(const NormalizedForm& form, Kind kind, const SpiralOrder& order, double R,
                                    int samples = kDefaultSamples, std::optional<double> singularity = {}) {
  const double r = (1.0 - kCertShrink) * R;
  const BoundaryProfile p = boundary_min(form, kind, order.gamma, r, samples, singularity);
  DiskCertificate c;
  c.checked_radius = r;
  c.min_value = p.min_value;
  c.threshold = order.alpha * std::cos(order.gamma);
  c.at_angle = p.argmin_angle;
  c.valid = p.min_value >= c.threshold - kCertTol;
  return c;
}

/// Solves and attaches the oracle's verdict: disk_valid when certify_disk passes,
/// sharp_at_gamma0 when additionally gamma = 0 and the circle at 1.01 R fails.
inline RadiusResult certify(const NormalizedForm& form, const SpiralOrder& order, RadiusResult result,
                            int samples = kDefaultSamples) {
  const double bound = singularity_bound(form, result.kind);
  result.certification = Certification::uncertified;
  if (!certify_disk(form, result.kind, order, result.radius, samples, bound).valid) return result;
  result.certification = Certification::disk_valid;
  const double outer = kSharpFactor * result.radius;
  if (order.gamma == 0.0 && outer < bound) {
    const BoundaryProfile p = boundary_min(form, result.kind, 0.0, outer, samples, bound);
    if (p.min_value < order.alpha - kCertTol) result.certification = Certification::sharp_at_gamma0;
  }
  return result;
}

struct EmpiricalRadius {
  double radius = 0.0;
  bool crossing_found = false;
  double solver_radius = 0.0;
  int evaluations = 0;
};

/// Largest r for which the boundary minimum stays above alpha cos(gamma), found
/// by growing an upper bracket from `start` (the solver radius) and bisecting.
/// A fine scan of the final bracket guards against a non-monotone margin.
inline EmpiricalRadius empirical_radius(const NormalizedForm& form, Kind kind, const SpiralOrder& order,
                                        double start, double tol = 1e-10, int samples = kDefaultSamples) {
  if (!(tol > 0.0)) throw ParameterError("empirical radius tolerance must be positive");
  if (!(start > 0.0)) throw ParameterError("empirical radius needs a positive starting radius");
  const double bound = singularity_bound(form, kind);
  const double threshold = order.alpha * std::cos(order.gamma);
  EmpiricalRadius out;
  out.solver_radius = start;

  const auto margin = [&](double r) {
    ++out.evaluations;
    return boundary_min(form, kind, order.gamma, r, samples, bound).min_value - threshold;
  };

  double lo = start < bound ? start : 0.5 * bound;
  for (int i = 0; i < 60 && margin(lo) < -kCertTol; ++i) lo *= 0.5;
  if (margin(lo) < -kCertTol) throw OracleError("could not find a radius where the inequality holds");

  double step = 1e-3 * start;
  double hi = lo;
  bool crossed = false;
  for (int i = 0; i < 200; ++i) {
    const double next = std::isfinite(bound) ? std::min(lo + step, bound) : lo + step;
    if (next >= bound) {
      if (margin(bound * (1.0 - 1e-12)) < 0.0) {
        hi = bound * (1.0 - 1e-12);
        crossed = true;
      }
      break;
    }
    if (margin(next) < 0.0) {
      hi = next;
      crossed = true;
      break;
    }
    lo = next;
    step *= 2.0;
  }
  if (!crossed) {
    out.radius = std::isfinite(bound) ? bound : lo;
    out.crossing_found = false;
    return out;
  }

  // Smallest sign change on a fine grid, in case the margin is not monotone.
  constexpr int kFine = 16;
  const double width = hi - lo;
  for (int k = 1; k < kFine; ++k) {
    const double x = lo + width * k / kFine;
    if (margin(x) < 0.0) {
      hi = x;
      break;
    }
    lo = x;
  }
  while (hi - lo > tol * std::max(1.0, lo)) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (margin(mid) < 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  out.radius = lo;
  out.crossing_found = true;
  return out;
}

}  // namespace spiralrad
