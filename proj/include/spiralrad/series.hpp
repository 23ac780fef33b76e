#pragma once

// Entire power series stored as (sign, log|a_n|) pairs, with truncation bounds
// and value/first/second derivative evaluation at real or complex points.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "spiralrad/error.hpp"

namespace spiralrad {

inline constexpr std::size_t kTruncationCap = 10000;
inline constexpr double kDefaultEvalEps = 1e-14;
/// Generation of rule-based coefficients stops once log|a_n| falls below this.
inline constexpr long double kNegligibleLog = -20000.0L;

/// Which variable the stored coefficients multiply: a_n z^n or a_n z^{2n}.
enum class Variable { z, z_squared };

struct Coefficient {
  int sign = 0;  // -1, 0 or +1
  long double log_magnitude = -std::numeric_limits<long double>::infinity();

  static Coefficient from_value(double v) {
    if (v == 0.0) return {};
    return {v > 0 ? 1 : -1, std::log(std::fabs(static_cast<long double>(v)))};
  }
  double value() const { return sign == 0 ? 0.0 : static_cast<double>(sign * std::exp(log_magnitude)); }
};

class EvenSeries {
 public:
  using Rule = std::function<Coefficient(std::size_t)>;

  EvenSeries() : coefficients_(std::make_shared<std::vector<Coefficient>>()) {}

  /// Entire series from a coefficient rule. A zero coefficient terminates the
  /// series (terminating q-series); otherwise generation runs until the
  /// coefficients are negligible or the hard cap is reached.
  static EvenSeries from_rule(const Rule& rule, Variable variable,
                              std::size_t cap = kTruncationCap) {
    auto coeffs = std::make_shared<std::vector<Coefficient>>();
    bool finite = false;
    for (std::size_t n = 0; n < cap; ++n) {
      Coefficient c = rule(n);
      if (c.sign == 0) {
        finite = true;
        break;
      }
      if (!std::isfinite(c.log_magnitude)) {
        throw ParameterError("series coefficient " + std::to_string(n) + " is not representable");
      }
      coeffs->push_back(c);
      if (c.log_magnitude < kNegligibleLog) break;
    }
    if (coeffs->empty()) throw ParameterError("series has no nonzero leading coefficient");
    return EvenSeries(std::move(coeffs), variable, finite);
  }

  /// Precomputed coefficients; `terminates` marks an exact polynomial.
  static EvenSeries from_coefficients(std::vector<Coefficient> coefficients, Variable variable,
                                      bool terminates) {
    if (coefficients.empty() || coefficients.front().sign == 0) {
      throw ParameterError("series has no nonzero leading coefficient");
    }
    return EvenSeries(std::make_shared<std::vector<Coefficient>>(std::move(coefficients)), variable,
                      terminates);
  }

  static EvenSeries polynomial(std::span<const double> coefficients, Variable variable) {
    auto coeffs = std::make_shared<std::vector<Coefficient>>();
    coeffs->reserve(coefficients.size());
    for (double v : coefficients) {
      if (!std::isfinite(v)) throw ParameterError("polynomial coefficient is not finite");
      coeffs->push_back(Coefficient::from_value(v));
    }
    while (!coeffs->empty() && coeffs->back().sign == 0) coeffs->pop_back();
    return EvenSeries(std::move(coeffs), variable, true);
  }

  Variable variable() const noexcept { return variable_; }
  bool finite() const noexcept { return finite_; }
  std::size_t size() const noexcept { return coefficients_->size(); }
  std::span<const Coefficient> coefficients() const { return *coefficients_; }

  /// a_n; zero past the end of a polynomial.
  Coefficient coefficient(std::size_t n) const {
    if (n < coefficients_->size()) return (*coefficients_)[n];
    if (finite_) return {};
    throw TruncationError("coefficient index " + std::to_string(n) +
                          " exceeds the generated range (" +
                          std::to_string(coefficients_->size()) + " terms)");
  }

  /// Same coefficients attached to the other variable (K(z^2) <-> K(z)).
  EvenSeries with_variable(Variable v) const { return EvenSeries(coefficients_, v, finite_); }

  /// sigma*K(z) + z*K'(z), derivative taken with respect to z.
  EvenSeries shifted_derivative(double sigma) const {
    const double step = variable_ == Variable::z_squared ? 2.0 : 1.0;
    auto coeffs = std::make_shared<std::vector<Coefficient>>();
    coeffs->reserve(coefficients_->size());
    for (std::size_t n = 0; n < coefficients_->size(); ++n) {
      const Coefficient& a = (*coefficients_)[n];
      const double factor = sigma + step * static_cast<double>(n);
      if (factor == 0.0 || a.sign == 0) {
        coeffs->push_back({});
      } else {
        coeffs->push_back({factor > 0 ? a.sign : -a.sign, a.log_magnitude + std::log(std::fabs(static_cast<long double>(factor)))});
      }
    }
    if (finite_) {
      while (!coeffs->empty() && coeffs->back().sign == 0) coeffs->pop_back();
    }
    return EvenSeries(std::move(coeffs), variable_, finite_);
  }

 private:
  EvenSeries(std::shared_ptr<const std::vector<Coefficient>> coeffs, Variable v, bool finite)
      : coefficients_(std::move(coeffs)), variable_(v), finite_(finite) {}

  std::shared_ptr<const std::vector<Coefficient>> coefficients_;
  Variable variable_ = Variable::z;
  bool finite_ = true;
};

/// Geometric domination record: sum_{n >= first_omitted} t_n <= first_term / (1 - ratio),
/// where t_n are the (derivative-weighted) term magnitudes and ratio bounds t_{n+1}/t_n.
/// For polynomials `bound` is the exact remainder and `ratio` is zero.
struct TailBound {
  std::size_t first_omitted = 0;
  double first_term = 0.0;
  double ratio = 0.0;
  double bound = 0.0;
};

struct Truncation {
  std::size_t terms = 1;  // terms 0 .. terms-1 are summed
  TailBound tail;
};

namespace detail {

inline constexpr std::size_t kRatioWindow = 16;

inline double log_falling(std::size_t n, int k) {
  double s = 0.0;
  for (int j = 0; j < k; ++j) s += std::log(static_cast<double>(n - static_cast<std::size_t>(j)));
  return s;
}

/// log of |a_n| * n!/(n-k)! * rho^(n-k); -inf for vanishing terms.
inline double log_term(const Coefficient& a, std::size_t n, int k, double log_rho) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (a.sign == 0 || n < static_cast<std::size_t>(k)) return kNegInf;
  const double power = static_cast<double>(n - static_cast<std::size_t>(k));
  const double lp = power == 0.0 ? 0.0 : power * log_rho;
  return static_cast<double>(a.log_magnitude) + log_falling(n, k) + lp;
}

}  // namespace detail

/// Smallest N such that the tail of the k-th derivative series (in the native
/// variable, at modulus rho) is bounded below eps.
inline Truncation truncation_index(const EvenSeries& s, double rho, double eps, int derivative = 0) {
  if (!(eps > 0.0)) throw ParameterError("truncation eps must be positive");
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw ParameterError("truncation modulus must be finite and >= 0");
  if (derivative < 0 || derivative > 2) throw ParameterError("derivative order must be 0, 1 or 2");

  const double log_rho = rho == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(rho);

  if (s.finite()) {
    const std::size_t size = s.size();
    std::vector<double> suffix(size + 1, 0.0);
    for (std::size_t n = size; n-- > 0;) {
      suffix[n] = suffix[n + 1] + std::exp(detail::log_term(s.coefficient(n), n, derivative, log_rho));
    }
    for (std::size_t n = 1; n <= size; ++n) {
      if (suffix[n] < eps) {
        const double first = n < size ? suffix[n] - suffix[n + 1] : 0.0;
        return {n, {n, first, 0.0, suffix[n]}};
      }
    }
    return {std::max<std::size_t>(size, 1), {size, 0.0, 0.0, 0.0}};
  }

  if (rho == 0.0) {
    const auto n = static_cast<std::size_t>(derivative) + 1;
    return {n, {n, 0.0, 0.0, 0.0}};
  }

  const double log_eps = std::log(eps);
  for (std::size_t n = 1; n < kTruncationCap; ++n) {
    if (n + detail::kRatioWindow >= s.size()) {
      throw TruncationError("series truncation exceeds the " + std::to_string(s.size()) +
                            "-term limit at modulus " + std::to_string(rho));
    }
    const double lt = detail::log_term(s.coefficient(n), n, derivative, log_rho);
    if (!(lt < log_eps)) continue;
    double q_log = -std::numeric_limits<double>::infinity();
    double cur = lt;
    for (std::size_t j = n; j < n + detail::kRatioWindow; ++j) {
      const double next = detail::log_term(s.coefficient(j + 1), j + 1, derivative, log_rho);
      q_log = std::max(q_log, next - cur);
      cur = next;
    }
    if (!(q_log < 0.0)) continue;
    const double q = std::exp(q_log);
    const double first = std::exp(lt);
    const double bound = first / (1.0 - q);
    if (bound < eps) return {n, {n, first, q, bound}};
  }
  throw TruncationError("series truncation exceeds the hard cap");
}

/// Horner sums are accumulated in long double; this is its unit roundoff.
inline constexpr double kAccumulationEpsilon = static_cast<double>(std::numeric_limits<long double>::epsilon());

template <class T>
struct EvalResult {
  T value{};
  T d1{};  // d/dz
  T d2{};  // d^2/dz^2
  double tail_bound = 0.0;
  std::size_t terms_used = 1;
  double magnitude = 0.0;  // sum of |terms|, the scale of rounding noise in value
};

namespace detail {

template <class T>
struct Wide {
  using type = long double;
};
template <class T>
struct Wide<std::complex<T>> {
  using type = std::complex<long double>;
};

template <class T>
T narrow(long double v) {
  return static_cast<T>(v);
}
template <class T>
T narrow(const std::complex<long double>& v) {
  return T(static_cast<double>(v.real()), static_cast<double>(v.imag()));
}

}  // namespace detail

/// Evaluates a series at any point of modulus `radius`. Coefficients are scaled
/// once by rho^n (rho the modulus in the native variable), so the per-point
/// work is a Horner pass on a unit-modulus argument.
class RingEvaluator {
 public:
  RingEvaluator(const EvenSeries& s, double radius, double eps = kDefaultEvalEps)
      : variable_(s.variable()), radius_(radius) {
    if (!(radius >= 0.0) || !std::isfinite(radius)) throw ParameterError("evaluation radius must be finite");
    rho_ = variable_ == Variable::z_squared ? radius * radius : radius;

    double eps1 = eps;
    double eps2 = eps;
    if (variable_ == Variable::z_squared) {
      eps1 = eps / (4.0 * (1.0 + radius));
      eps2 = eps / (2.0 * (1.0 + 4.0 * radius * radius));
    }
    const Truncation t0 = truncation_index(s, rho_, eps, 0);
    const Truncation t1 = truncation_index(s, rho_, eps1, 1);
    const Truncation t2 = truncation_index(s, rho_, eps2, 2);
    const std::size_t n = std::max({t0.terms, t1.terms, t2.terms});
    if (variable_ == Variable::z_squared) {
      tail_ = std::max({t0.tail.bound, 2.0 * radius * t1.tail.bound,
                        2.0 * t1.tail.bound + 4.0 * radius * radius * t2.tail.bound});
    } else {
      tail_ = std::max({t0.tail.bound, t1.tail.bound, t2.tail.bound});
    }

    scaled_.resize(n);
    if (rho_ == 0.0) {
      for (std::size_t k = 0; k < n; ++k) scaled_[k] = s.coefficient(k).value();
    } else {
      const long double log_rho = std::log(static_cast<long double>(rho_));
      for (std::size_t k = 0; k < n; ++k) {
        const Coefficient a = s.coefficient(k);
        scaled_[k] = a.sign == 0 ? 0.0L : a.sign * std::exp(a.log_magnitude + static_cast<long double>(k) * log_rho);
        magnitude_ += static_cast<double>(std::fabs(scaled_[k]));
      }
    }
  }

  double radius() const noexcept { return radius_; }
  std::size_t terms() const noexcept { return scaled_.size(); }
  double tail_bound() const noexcept { return tail_; }

  /// Point with |z| equal to the ring radius (up to rounding).
  template <class T>
  EvalResult<T> at(T z) const {
    EvalResult<T> out;
    out.tail_bound = tail_;
    out.terms_used = scaled_.size();
    if (rho_ == 0.0) {
      const double a0 = scaled_.size() > 0 ? static_cast<double>(scaled_[0]) : 0.0;
      const double a1 = scaled_.size() > 1 ? static_cast<double>(scaled_[1]) : 0.0;
      const double a2 = scaled_.size() > 2 ? static_cast<double>(scaled_[2]) : 0.0;
      out.value = T(a0);
      out.magnitude = std::fabs(a0);
      if (variable_ == Variable::z) {
        out.d1 = T(a1);
        out.d2 = T(2.0 * a2);
      } else {
        out.d1 = T(0.0);
        out.d2 = T(2.0 * a1);
      }
      return out;
    }

    using W = typename detail::Wide<T>::type;
    const W unit = W(z) / static_cast<long double>(radius_);
    const W w = variable_ == Variable::z_squared ? unit * unit : unit;
    W p{0.0L}, p1{0.0L}, p2{0.0L};
    for (std::size_t k = scaled_.size(); k-- > 0;) {
      p2 = p2 * w + p1;
      p1 = p1 * w + p;
      p = p * w + scaled_[k];
    }
    const T kt = detail::narrow<T>(p1 / static_cast<long double>(rho_));
    const T ktt = detail::narrow<T>(2.0L * p2 / (static_cast<long double>(rho_) * rho_));
    out.value = detail::narrow<T>(p);
    out.magnitude = magnitude_;
    if (variable_ == Variable::z) {
      out.d1 = kt;
      out.d2 = ktt;
    } else {
      out.d1 = 2.0 * z * kt;
      out.d2 = 2.0 * kt + 4.0 * z * z * ktt;
    }
    return out;
  }

  EvalResult<std::complex<double>> at_angle(double theta) const {
    return at(std::polar(radius_, theta));
  }

 private:
  Variable variable_;
  double radius_;
  double rho_ = 0.0;
  double tail_ = 0.0;
  double magnitude_ = 0.0;
  std::vector<long double> scaled_;
};

/// Value and first two z-derivatives with all three tails below eps.
template <class T>
EvalResult<T> evaluate(const EvenSeries& s, T z, double eps = kDefaultEvalEps) {
  if (!(eps > 0.0)) throw ParameterError("evaluation eps must be positive");
  return RingEvaluator(s, std::abs(z), eps).at(z);
}

}  // namespace spiralrad
