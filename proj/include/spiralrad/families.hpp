#pragma once

// The six special-function families, their validated parameters, and the
// normalized forms f, g, h exposing zf'/f and 1 + zf''/f'.
//
// Every form is written through an even kernel K with K(0) = 1 and an exponent
// sigma, the unnormalized function being z^sigma K(z):
//   f = (z^sigma K)^{1/sigma},  g = z K(z),  h = z K(sqrt z).
// For h the kernel coefficients are attached to z directly, so the square root
// never has to be taken.

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "spiralrad/error.hpp"
#include "spiralrad/kernels.hpp"
#include "spiralrad/series.hpp"

namespace spiralrad {

struct Wright {
  double kappa = 1.0;
  double delta = 1.0;
};

struct MittagLeffler {
  double mu = 2.0;
  double nu = 1.0;
  double a = 1.0;
  /// Accept parameters whose membership in the real-zero set could not be certified.
  bool override_membership = false;
};

/// Odd-degree Legendre polynomial P_{2n-1}.
struct Legendre {
  int n = 1;
};

/// Lommel function of the first kind with v = 1/2 and u shifted by -1/2.
struct Lommel {
  double u = 0.5;
};

struct Struve {
  double beta = 0.0;
};

struct Ramanujan {
  double beta = 1.0;
  double p = 0.5;
  double c = 0.0;
};

using FamilySpec = std::variant<Wright, MittagLeffler, Legendre, Lommel, Struve, Ramanujan>;

enum class Norm { f, g, h };
enum class Kind { spirallike, convex };

inline constexpr int kWiDefaultDepth = 10;
inline constexpr int kLegendreMaxN = 64;

inline const char* to_string(Norm n) {
  switch (n) {
    case Norm::f: return "f";
    case Norm::g: return "g";
    case Norm::h: return "h";
  }
  return "?";
}

inline const char* to_string(Kind k) { return k == Kind::spirallike ? "spirallike" : "convex"; }

inline const char* family_name(const FamilySpec& spec) {
  static constexpr const char* kNames[] = {"wright", "mittag-leffler", "legendre", "lommel", "struve", "ramanujan"};
  return kNames[spec.index()];
}

// ---------------------------------------------------------------------------
// W_i membership for the Mittag-Leffler parameters.

/// One application of the maps acting on (1/mu, nu):
/// A: mu -> 2mu;  B: (mu, nu) -> (2mu, mu + nu);  C: nu -> nu - 1 when nu > 1.
enum class WiStep : char { A = 'A', B = 'B', C = 'C' };

struct WiPoint {
  double mu = 0.0;
  double nu = 0.0;
};

inline WiPoint apply(WiStep step, WiPoint p) {
  switch (step) {
    case WiStep::A: return {2.0 * p.mu, p.nu};
    case WiStep::B: return {2.0 * p.mu, p.mu + p.nu};
    case WiStep::C: return {p.mu, p.nu > 1.0 ? p.nu - 1.0 : p.nu};
  }
  return p;
}

/// Membership certificate: a base point in W_c followed by the maps that carry
/// it to the queried point (the first map is A or B, landing in W_b).
struct WiCertificate {
  WiPoint base;
  std::vector<WiStep> steps;
};

struct WiVerdict {
  bool member = false;  // false means "unknown", never "non-member"
  std::optional<WiCertificate> certificate;
};

namespace detail {

inline constexpr double kWiSlack = 1e-12;

inline bool in_wc(double mu, double nu) {
  if (!(mu > 1.0 && mu < 2.0)) return false;
  const auto within = [](double x, double lo, double hi) { return x >= lo - kWiSlack && x <= hi + kWiSlack; };
  return within(nu, mu - 1.0, 1.0) || within(nu, mu, 2.0);
}

inline std::optional<WiCertificate> wi_search(double mu, double nu, int depth) {
  const double half = 0.5 * mu;
  if (in_wc(half, nu)) return WiCertificate{{half, nu}, {WiStep::A}};
  if (in_wc(half, nu - half)) return WiCertificate{{half, nu - half}, {WiStep::B}};
  if (depth <= 0) return std::nullopt;

  const auto extend = [](std::optional<WiCertificate> c, WiStep s) {
    if (c) c->steps.push_back(s);
    return c;
  };
  if (half > 1.0) {
    if (auto c = extend(wi_search(half, nu, depth - 1), WiStep::A)) return c;
    if (nu - half > 0.0) {
      if (auto c = extend(wi_search(half, nu - half, depth - 1), WiStep::B)) return c;
    }
  }
  return extend(wi_search(mu, nu + 1.0, depth - 1), WiStep::C);
}

}  // namespace detail

/// Decides whether (1/mu, nu) is reachable from W_b by at most `depth`
/// applications of A, B, C. The search runs the maps backwards from the query
/// point, so it is exact for the bounded depth; failure is reported as unknown.
inline WiVerdict wi_membership(double mu, double nu, int depth = kWiDefaultDepth) {
  if (!(mu > 1.0) || !(nu > 0.0)) throw ParameterError("W_i membership needs mu > 1 and nu > 0");
  if (depth < 0) throw ParameterError("W_i search depth must be >= 0");
  WiVerdict v;
  v.certificate = detail::wi_search(mu, nu, depth);
  v.member = v.certificate.has_value();
  return v;
}

// ---------------------------------------------------------------------------
// Legendre polynomials.

/// Coefficients (index = power of z) of P_{2n-1}(z) / P'_{2n-1}(0), computed
/// exactly from (k+1)P_{k+1} = (2k+1) z P_k - k P_{k-1}.
inline std::vector<double> legendre_poly(int n) {
  using Rational = boost::multiprecision::cpp_rational;
  if (n < 1) throw ParameterError("Legendre index n must be >= 1");
  if (n > kLegendreMaxN) throw ParameterError("Legendre index n exceeds " + std::to_string(kLegendreMaxN));
  const int degree = 2 * n - 1;

  std::vector<Rational> prev{Rational(1)};               // P_0
  std::vector<Rational> cur{Rational(0), Rational(1)};   // P_1
  for (int k = 1; k < degree; ++k) {
    std::vector<Rational> next(static_cast<std::size_t>(k) + 2, Rational(0));
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += Rational(2 * k + 1) * cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= Rational(k) * prev[i];
    for (auto& c : next) c /= Rational(k + 1);
    prev = std::move(cur);
    cur = std::move(next);
  }
  const Rational slope = cur[1];
  std::vector<double> out(cur.size());
  for (std::size_t i = 0; i < cur.size(); ++i) out[i] = static_cast<double>(cur[i] / slope);
  return out;
}

// ---------------------------------------------------------------------------
// Validation.

struct FamilyTraits {
  EvenSeries kernel;   // in z^2, leading coefficient 1
  double exponent;     // sigma
  bool has_f = true;
  bool has_h = true;
};

inline void require_finite(std::initializer_list<double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw ParameterError("parameters must be finite numbers");
  }
}

inline void validate(const FamilySpec& spec, int wi_depth = kWiDefaultDepth) {
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Wright>) {
          require_finite({s.kappa, s.delta});
          if (!(s.kappa > 0.0) || !(s.delta > 0.0)) throw ParameterError("wright: kappa and delta must be > 0");
        } else if constexpr (std::is_same_v<S, MittagLeffler>) {
          require_finite({s.mu, s.nu, s.a});
          if (!(s.a > 0.0)) throw ParameterError("mittag-leffler: a must be > 0");
          if (!(s.mu > 0.0) || !(s.nu > 0.0)) throw ParameterError("mittag-leffler: mu and nu must be > 0");
          if (!s.override_membership) {
            if (!(s.mu > 1.0)) throw ParameterError("mittag-leffler: mu must be > 1 for (1/mu, nu) in W_i");
            if (!wi_membership(s.mu, s.nu, wi_depth).member) {
              throw ParameterError("mittag-leffler: (1/mu, nu) not certified in W_i (use the membership override)");
            }
          }
        } else if constexpr (std::is_same_v<S, Legendre>) {
          if (s.n < 1) throw ParameterError("legendre: n must be >= 1");
          if (s.n > kLegendreMaxN) throw ParameterError("legendre: n exceeds the degree cap");
        } else if constexpr (std::is_same_v<S, Lommel>) {
          require_finite({s.u});
          if (!(s.u > -1.0 && s.u < 1.0) || s.u == 0.0) throw ParameterError("lommel: u must lie in (-1, 1) with u != 0");
        } else if constexpr (std::is_same_v<S, Struve>) {
          require_finite({s.beta});
          if (!(std::fabs(s.beta) <= 0.5)) throw ParameterError("struve: |beta| must be <= 1/2");
        } else if constexpr (std::is_same_v<S, Ramanujan>) {
          require_finite({s.beta, s.p, s.c});
          if (!(s.beta > 0.0)) throw ParameterError("ramanujan: beta must be > 0");
          if (!(s.p > 0.0 && s.p < 1.0)) throw ParameterError("ramanujan: p must lie in (0, 1)");
          if (!(s.c >= 0.0)) throw ParameterError("ramanujan: c must be >= 0");
        }
      },
      spec);
}

/// Kernel 1F2(1; (u-v+3)/2, (u+v+3)/2; -z^2/4) of the general Lommel function,
/// whose unnormalized form is z^{u+1} times this kernel.
inline EvenSeries lommel_kernel(double u, double v) {
  return kernels::hypergeometric_1f2(1.0, 0.5 * (u - v + 3.0), 0.5 * (u + v + 3.0), -0.25, Variable::z_squared);
}

inline FamilyTraits family_traits(const FamilySpec& spec) {
  return std::visit(
      [](const auto& s) -> FamilyTraits {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Wright>) {
          return {kernels::wright_phi(s.kappa, s.delta, -1.0, Variable::z_squared), s.delta};
        } else if constexpr (std::is_same_v<S, MittagLeffler>) {
          return {kernels::mittag_leffler(s.mu, s.nu, s.a, -1.0, Variable::z_squared), s.nu};
        } else if constexpr (std::is_same_v<S, Legendre>) {
          const std::vector<double> poly = legendre_poly(s.n);
          std::vector<double> even;
          for (std::size_t k = 1; k < poly.size(); k += 2) even.push_back(poly[k]);
          return {EvenSeries::polynomial(even, Variable::z_squared), 1.0, false, false};
        } else if constexpr (std::is_same_v<S, Lommel>) {
          return {lommel_kernel(s.u - 0.5, 0.5), s.u + 0.5};
        } else if constexpr (std::is_same_v<S, Struve>) {
          return {kernels::hypergeometric_1f2(1.0, 1.5, s.beta + 1.5, -0.25, Variable::z_squared), s.beta + 1.0};
        } else {
          return {kernels::ramanujan_a(s.beta, s.p, -s.c, -1.0, Variable::z_squared), s.beta};
        }
      },
      spec);
}

// ---------------------------------------------------------------------------
// Normalized forms.

class NormalizedForm {
 public:
  NormalizedForm(FamilySpec spec, Norm norm, EvenSeries kernel, double exponent)
      : spec_(std::move(spec)),
        norm_(norm),
        kernel_(std::move(kernel)),
        exponent_(exponent),
        derivative_(kernel_.shifted_derivative(exponent_)) {}

  const FamilySpec& spec() const noexcept { return spec_; }
  Norm norm() const noexcept { return norm_; }
  /// K in the form's own variable: even in z for f and g, in z itself for h.
  const EvenSeries& kernel() const noexcept { return kernel_; }
  /// Outer power 1/exponent of the f form; 1 for g and h.
  double exponent() const noexcept { return exponent_; }

  /// exponent*K + zK': the function whose zeros bound the convex radius
  /// (Psi' up to a power of z for f, g' for g, h' for h).
  const EvenSeries& derivative_function() const noexcept { return derivative_; }

  /// Function whose first positive zero is the singularity of the requested log-derivative.
  const EvenSeries& governing(Kind kind) const noexcept {
    return kind == Kind::spirallike ? kernel_ : derivative_;
  }

  /// zf'/f from a kernel evaluation at z.
  template <class T>
  T q_star(const EvalResult<T>& k, T z) const {
    if (z == T(0.0)) return T(1.0);
    return T(1.0) + z * k.d1 / (exponent_ * k.value);
  }

  /// 1 + zf''/f' from a kernel evaluation at z.
  template <class T>
  T q_convex(const EvalResult<T>& k, T z) const {
    if (z == T(0.0)) return T(1.0);
    const T d = exponent_ * k.value + z * k.d1;
    const T dd = (exponent_ + 1.0) * k.d1 + z * k.d2;
    return T(1.0) + z * dd / d + (1.0 / exponent_ - 1.0) * z * k.d1 / k.value;
  }

  template <class T>
  T q(Kind kind, const EvalResult<T>& k, T z) const {
    return kind == Kind::spirallike ? q_star(k, z) : q_convex(k, z);
  }

  template <class T>
  T q_at(Kind kind, T z, double eps = kDefaultEvalEps) const {
    return q(kind, evaluate(kernel_, z, eps), z);
  }

 private:
  FamilySpec spec_;
  Norm norm_;
  EvenSeries kernel_;
  double exponent_;
  EvenSeries derivative_;
};

inline NormalizedForm make_form(const FamilySpec& spec, Norm norm, int wi_depth = kWiDefaultDepth) {
  validate(spec, wi_depth);
  FamilyTraits traits = family_traits(spec);
  if (norm == Norm::f && !traits.has_f) {
    throw ParameterError(std::string(family_name(spec)) + ": only the g normalization exists");
  }
  if (norm == Norm::h && !traits.has_h) {
    throw ParameterError(std::string(family_name(spec)) + ": only the g normalization exists");
  }
  if (norm == Norm::f && !(traits.exponent > 0.0)) {
    throw ParameterError(std::string(family_name(spec)) + ": f normalization needs a positive exponent (lommel: u > -1/2)");
  }
  switch (norm) {
    case Norm::f: return NormalizedForm(spec, norm, traits.kernel, traits.exponent);
    case Norm::g: return NormalizedForm(spec, norm, traits.kernel, 1.0);
    case Norm::h: return NormalizedForm(spec, norm, traits.kernel.with_variable(Variable::z), 1.0);
  }
  throw ParameterError("unknown normalization");
}

/// Normalizations defined for a family.
inline std::vector<Norm> applicable_norms(const FamilySpec& spec) {
  if (std::holds_alternative<Legendre>(spec)) return {Norm::g};
  if (const auto* l = std::get_if<Lommel>(&spec); l && !(l->u > -0.5)) return {Norm::g, Norm::h};
  return {Norm::f, Norm::g, Norm::h};
}

}  // namespace spiralrad
