#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "spiralrad/kernels.hpp"
#include "spiralrad/series.hpp"
#include "support/oracles.hpp"

using namespace spiralrad;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

EvenSeries exponential_series() {
  return EvenSeries::from_rule([](std::size_t n) { return Coefficient{1, -std::lgamma(n + 1.0)}; }, Variable::z);
}

// Kernels exercised by the property tests, each with a point inside its working region.
struct Sample {
  const char* name;
  EvenSeries series;
  double reach;
};

std::vector<Sample> property_series() {
  return {
      {"wright(1,2)", kernels::wright_phi(1.0, 2.0, -1.0, Variable::z_squared), 1.8},
      {"wright(0.5,1.5)", kernels::wright_phi(0.5, 1.5, -1.0, Variable::z_squared), 1.5},
      {"mittag-leffler(3,1,1)", kernels::mittag_leffler(3.0, 1.0, 1.0, -1.0, Variable::z_squared), 1.5},
      {"1F2 struve", kernels::hypergeometric_1f2(1.0, 1.5, 1.8, -0.25, Variable::z_squared), 4.0},
      {"ramanujan", kernels::ramanujan_a(1.0, 0.5, -1.0, -1.0, Variable::z_squared), 1.2},
      {"wright h", kernels::wright_phi(1.0, 2.0, -1.0, Variable::z), 3.0},
  };
}

}  // namespace

TEST_CASE("truncation at the origin keeps the leading term", "[series]") {
  const EvenSeries w = kernels::wright_phi(1.0, 1.0, -1.0, Variable::z_squared);
  const Truncation t = truncation_index(w, 0.0, 1e-14);
  CHECK(t.terms == 1);
  CHECK(t.tail.bound == 0.0);
}

TEST_CASE("exponential coefficients truncate by twenty terms at r = 1", "[series]") {
  const EvenSeries e = exponential_series();
  const Truncation t = truncation_index(e, 1.0, 1e-15);
  CHECK(t.terms <= 20);
  // The recorded bound is a genuine upper bound for the omitted sum.
  double tail = 0.0;
  for (std::size_t n = t.tail.first_omitted; n < 60; ++n) tail += std::exp(-std::lgamma(n + 1.0));
  CHECK(tail <= t.tail.bound);
  CHECK(t.tail.bound < 1e-15);
  CHECK(t.tail.ratio < 1.0);
  CHECK_THAT(t.tail.bound, WithinRel(t.tail.first_term / (1.0 - t.tail.ratio), 1e-12));
}

TEST_CASE("super-geometric q-series truncates by twelve terms at r = 10", "[series]") {
  const EvenSeries r = kernels::ramanujan_a(1.0, 0.5, 0.0, 1.0, Variable::z);
  const Truncation t = truncation_index(r, 10.0, 1e-15);
  CHECK(t.terms <= 12);
}

TEST_CASE("polynomials use the exact remainder", "[series]") {
  const std::vector<double> c{1.0, -2.0, 0.5};
  const EvenSeries p = EvenSeries::polynomial(c, Variable::z);
  CHECK(p.finite());
  const Truncation full = truncation_index(p, 3.0, 1e-300);
  CHECK(full.terms == 3);
  CHECK(full.tail.bound == 0.0);
  const Truncation partial = truncation_index(p, 1.0, 0.75);
  CHECK(partial.terms == 2);
  CHECK(partial.tail.bound == 0.5);
  CHECK(p.coefficient(7).value() == 0.0);
}

TEST_CASE("evaluation at zero returns the leading coefficient", "[series]") {
  for (const auto& s : property_series()) {
    const EvalResult<double> e = evaluate(s.series, 0.0);
    CHECK(e.value == 1.0);
    CHECK(e.tail_bound == 0.0);
    CHECK(e.terms_used >= 1);
    CHECK(e.d1 == (s.series.variable() == Variable::z ? s.series.coefficient(1).value() : 0.0));
  }
}

TEST_CASE("three-parameter Mittag-Leffler at (1,1,1,1) is e", "[series]") {
  const EvenSeries m = kernels::mittag_leffler(1.0, 1.0, 1.0, 1.0, Variable::z, false);
  CHECK_THAT(evaluate(m, 1.0).value, WithinAbs(std::numbers::e, 1e-12));
  const auto c = evaluate(m, std::complex<double>(0.0, 1.0));
  CHECK_THAT(c.value.real(), WithinAbs(std::cos(1.0), 1e-13));
  CHECK_THAT(c.value.imag(), WithinAbs(std::sin(1.0), 1e-13));
}

TEST_CASE("Wright kernel at z = 1 reduces to J1(2)", "[series]") {
  const EvenSeries w = kernels::wright_phi(1.0, 2.0, -1.0, Variable::z_squared);
  CHECK_THAT(evaluate(w, 1.0).value, WithinAbs(oracle::bessel_j(1.0, 2.0), 1e-13));
  CHECK_THAT(evaluate(w, 1.0).value, WithinAbs(0.5767248077568736, 1e-13));
}

TEST_CASE("derivatives agree with central differences", "[series][property]") {
  std::mt19937_64 rng(20240601);
  for (const auto& s : property_series()) {
    std::uniform_real_distribution<double> pick(0.05, s.reach);
    for (int i = 0; i < 25; ++i) {
      const double x = pick(rng);
      const double h = 1e-5 * std::max(1.0, std::fabs(x));
      const auto e = evaluate(s.series, x);
      const auto ep = evaluate(s.series, x + h);
      const auto em = evaluate(s.series, x - h);
      const double fd1 = (ep.value - em.value) / (2 * h);
      const double fd2 = (ep.d1 - em.d1) / (2 * h);
      INFO(s.name << " x=" << x);
      CHECK(std::fabs(e.d1 - fd1) <= 1e-6 * std::max(1.0, std::fabs(e.d1)));
      CHECK(std::fabs(e.d2 - fd2) <= 1e-6 * std::max(1.0, std::fabs(e.d2)));
    }
  }
}

TEST_CASE("reported tails are honest", "[series][property]") {
  std::mt19937_64 rng(7);
  for (const auto& s : property_series()) {
    std::uniform_real_distribution<double> pick(0.1, s.reach);
    for (int i = 0; i < 20; ++i) {
      const double x = pick(rng);
      const auto coarse = evaluate(s.series, x, 1e-8);
      const auto fine = evaluate(s.series, x, 1e-10);
      INFO(s.name << " x=" << x);
      CHECK(coarse.tail_bound <= 1e-8);
      CHECK(std::fabs(coarse.value - fine.value) <= coarse.tail_bound + 1e-15 * coarse.magnitude);
    }
  }
}

TEST_CASE("conjugate arguments give conjugate results", "[series][property]") {
  std::mt19937_64 rng(11);
  for (const auto& s : property_series()) {
    std::uniform_real_distribution<double> radius(0.1, s.reach);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    for (int i = 0; i < 20; ++i) {
      const std::complex<double> z = std::polar(radius(rng), angle(rng));
      const auto a = evaluate(s.series, z);
      const auto b = evaluate(s.series, std::conj(z));
      CHECK(std::abs(std::conj(a.value) - b.value) <= 1e-14 * std::max(1.0, a.magnitude));
      CHECK(std::abs(std::conj(a.d1) - b.d1) <= 1e-13 * std::max(1.0, a.magnitude));
      CHECK(std::abs(std::conj(a.d2) - b.d2) <= 1e-12 * std::max(1.0, a.magnitude));
    }
  }
}

TEST_CASE("ring evaluation matches pointwise evaluation", "[series]") {
  const EvenSeries w = kernels::wright_phi(0.5, 1.5, -1.0, Variable::z_squared);
  const RingEvaluator ring(w, 1.1);
  for (double t : {0.0, 0.4, 1.9, 3.0}) {
    const auto a = ring.at_angle(t);
    const auto b = evaluate(w, std::polar(1.1, t));
    CHECK(std::abs(a.value - b.value) < 1e-14);
    CHECK(std::abs(a.d2 - b.d2) < 1e-12);
  }
}

TEST_CASE("large-index coefficients stay finite in log form", "[series]") {
  const EvenSeries m = kernels::mittag_leffler(3.0, 1.0, 1.0, -1.0, Variable::z_squared);
  REQUIRE(m.size() > 200);
  CHECK(std::isfinite(m.coefficient(200).log_magnitude));
  CHECK(m.coefficient(200).sign == 1);
  CHECK(m.coefficient(201).sign == -1);
}

TEST_CASE("truncation failures are reported", "[series]") {
  const EvenSeries e = exponential_series();
  CHECK_THROWS_AS(evaluate(e, 1e5), TruncationError);
  CHECK_THROWS_AS(truncation_index(e, 1.0, 0.0), ParameterError);
  CHECK_THROWS_AS(truncation_index(e, -1.0, 1e-10), ParameterError);
  CHECK_THROWS_AS(evaluate(e, 1.0, -1.0), ParameterError);
}

TEST_CASE("shifted derivative multiplies coefficients by sigma + m n", "[series]") {
  const EvenSeries w = kernels::wright_phi(1.0, 2.0, -1.0, Variable::z_squared);
  const EvenSeries d = w.shifted_derivative(2.0);
  for (std::size_t n = 0; n < 6; ++n) {
    CHECK_THAT(d.coefficient(n).value(), WithinRel((2.0 + 2.0 * n) * w.coefficient(n).value(), 1e-13));
  }
  const double x = 0.7;
  const auto k = evaluate(w, x);
  CHECK_THAT(evaluate(d, x).value, WithinAbs(2.0 * k.value + x * k.d1, 1e-14));
}
