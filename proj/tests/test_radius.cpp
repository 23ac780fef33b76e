#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "spiralrad/radius.hpp"
#include "support/oracles.hpp"

using namespace spiralrad;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<FamilySpec> grid_specs() {
  return {Wright{0.5, 1.5}, MittagLeffler{3.0, 1.0, 1.0}, Legendre{2},
          Lommel{0.3},      Struve{0.3},                  Ramanujan{1.0, 0.5, 1.0}};
}

/// Values of a normalized g or h form and its first two derivatives at r, from kernel data.
struct FormValues {
  double F, F1, F2;
};

FormValues g_like(const NormalizedForm& form, double r) {
  const auto k = evaluate(form.kernel(), r);
  return {r * k.value, k.value + r * k.d1, 2.0 * k.d1 + r * k.d2};
}

}  // namespace

TEST_CASE("spiral order validation", "[radius]") {
  CHECK_THAT(SpiralOrder::make(kPi / 3, 0.5).c(), WithinAbs(0.25, 1e-15));
  CHECK(SpiralOrder::make(0.0, 0.0).c() == 1.0);
  CHECK_THROWS_AS(SpiralOrder::make(kPi / 2, 0.0), ParameterError);
  CHECK_THROWS_AS(SpiralOrder::make(-2.0, 0.0), ParameterError);
  CHECK_THROWS_AS(SpiralOrder::make(0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(SpiralOrder::make(0.0, -0.1), ParameterError);
  CHECK_THROWS_AS(SpiralOrder::make(std::nan(""), 0.0), ParameterError);
}

TEST_CASE("Bessel reductions of the Wright g form", "[radius]") {
  const NormalizedForm g = make_form(Wright{1.0, 2.0}, Norm::g);
  const SpiralOrder o = SpiralOrder::make(0.0, 0.0);

  // tJ0(t) - J1(t) = t J1'(t); its first zero is j'_{1,1}.
  const double jp = oracle::bisect([](double t) { return t * oracle::bessel_j(0.0, t) - oracle::bessel_j(1.0, t); },
                                   1.0, 2.5);
  const RadiusResult s = solve_radius(g, Kind::spirallike, o);
  CHECK_THAT(s.radius, WithinAbs(0.5 * jp, 1e-10));
  CHECK_THAT(s.radius, WithinAbs(0.9205918907, 1e-8));
  CHECK(s.lo < s.radius);
  CHECK(s.radius < s.hi);
  CHECK(s.residual < kResidualTol);
  CHECK(s.kind == Kind::spirallike);

  // (t J1'(t))' = J1(t) (1 - t^2) / t vanishes at t = 1.
  CHECK_THAT(solve_radius(g, Kind::convex, o).radius, WithinAbs(0.5, 1e-10));
}

TEST_CASE("Wright g form at gamma = pi/3, alpha = 1/2", "[radius]") {
  const NormalizedForm g = make_form(Wright{1.0, 2.0}, Norm::g);
  const RadiusResult r = solve_radius(g, Kind::spirallike, SpiralOrder::make(kPi / 3, 0.5));
  // 2r J1'(2r) = 0.75 J1(2r).
  const double t = oracle::bisect(
      [](double x) { return x * oracle::bessel_jp(1.0, x) - 0.75 * oracle::bessel_j(1.0, x); }, 0.5, 1.8);
  CHECK_THAT(r.radius, WithinAbs(0.5 * t, 1e-10));
  CHECK_THAT(r.radius, WithinAbs(0.48969578884107035, 1e-10));
  CHECK(r.radius > 0.45);
  CHECK(r.radius < 0.52);
}

TEST_CASE("Legendre cubic radii", "[radius]") {
  const NormalizedForm g = make_form(Legendre{2}, Norm::g);
  CHECK_THAT(solve_radius(g, Kind::spirallike, SpiralOrder::make(0.0, 0.0)).radius,
             WithinAbs(1.0 / std::sqrt(5.0), 1e-10));
  // r P'' + c P' = 0: -10 r^2 + c (1 - 5 r^2) = 0.
  for (auto [gamma, alpha] : {std::pair{0.0, 0.0}, {0.4, 0.3}, {-1.0, 0.6}}) {
    const SpiralOrder o = SpiralOrder::make(gamma, alpha);
    const double c = o.c();
    CHECK_THAT(solve_radius(g, Kind::convex, o).radius, WithinAbs(std::sqrt(c / (10.0 + 5.0 * c)), 1e-10));
    // r P' + (c - 1) P = 0: 1 - 5r^2 + (c - 1)(1 - 5r^2/3) = 0.
    CHECK_THAT(solve_radius(g, Kind::spirallike, o).radius,
               WithinAbs(std::sqrt(c / (5.0 + 5.0 * (c - 1.0) / 3.0)), 1e-10));
  }
}

TEST_CASE("Legendre equations as displayed remain available", "[radius]") {
  const NormalizedForm g = make_form(Legendre{2}, Norm::g);
  for (auto [gamma, alpha] : {std::pair{0.0, 0.0}, {0.7, 0.2}}) {
    const SpiralOrder o = SpiralOrder::make(gamma, alpha);
    const double a = 1.0 - alpha;
    // r P' + (1 - alpha) P = 0: 1 - 5r^2 + a (1 - 5r^2/3) = 0.
    CHECK_THAT(solve_radius(g, Kind::spirallike, o, kRadiusTol, LegendreEquation::as_displayed).radius,
               WithinAbs(std::sqrt((1.0 + a) / (5.0 + 5.0 * a / 3.0)), 1e-10));
    // r P'' + (1 - alpha) P' = 0.
    CHECK_THAT(solve_radius(g, Kind::convex, o, kRadiusTol, LegendreEquation::as_displayed).radius,
               WithinAbs(std::sqrt(a / (10.0 + 5.0 * a)), 1e-10));
  }
  // The reading only affects Legendre.
  const NormalizedForm w = make_form(Wright{1.0, 2.0}, Norm::g);
  const SpiralOrder o = SpiralOrder::make(0.5, 0.2);
  CHECK(solve_radius(w, Kind::spirallike, o).radius ==
        solve_radius(w, Kind::spirallike, o, kRadiusTol, LegendreEquation::as_displayed).radius);
}

TEST_CASE("Theta starts at c and falls without bound", "[radius]") {
  for (const auto& spec : grid_specs()) {
    for (Norm n : applicable_norms(spec)) {
      const NormalizedForm form = make_form(spec, n);
      for (Kind k : {Kind::spirallike, Kind::convex}) {
        const SpiralOrder o = SpiralOrder::make(0.6, 0.25);
        const Theta th = theta(form, k, o);
        INFO(family_name(spec) << " " << to_string(n) << " " << to_string(k));
        CHECK_THAT(th(th.lower()), WithinAbs(o.c(), 1e-9));
        CHECK(th.upper() < th.singularity());
        CHECK(th(th.singularity() * (1.0 - 1e-7)) < -100.0);
      }
    }
  }
}

TEST_CASE("cleared-denominator equations hold at the solved radius", "[radius]") {
  const SpiralOrder o = SpiralOrder::make(-0.4, 0.35);
  const double c = o.c();

  SECTION("Wright f: r W' + delta c W = 0, convex r Psi''/Psi' + (1/delta - 1) r Psi'/Psi + c = 0") {
    const double delta = 1.5;
    const NormalizedForm f = make_form(Wright{0.5, delta}, Norm::f);
    const double r = solve_radius(f, Kind::spirallike, o).radius;
    const auto w = evaluate(f.kernel(), r);
    CHECK(std::fabs(r * w.d1 + delta * c * w.value) < 1e-9);

    const double rc = solve_radius(f, Kind::convex, o).radius;
    const auto v = evaluate(f.kernel(), rc);
    const double psi = std::pow(rc, delta) * v.value;
    const double psi1 = delta * std::pow(rc, delta - 1) * v.value + std::pow(rc, delta) * v.d1;
    const double psi2 = delta * (delta - 1) * std::pow(rc, delta - 2) * v.value +
                        2 * delta * std::pow(rc, delta - 1) * v.d1 + std::pow(rc, delta) * v.d2;
    CHECK(std::fabs(rc * psi2 / psi1 + (1 / delta - 1) * rc * psi1 / psi + c) < 1e-8);
  }

  SECTION("Wright g and h: r W' + c W = 0 and sqrt(r) W'(sqrt r) + 2c W(sqrt r) = 0") {
    const NormalizedForm g = make_form(Wright{0.5, 1.5}, Norm::g);
    const NormalizedForm h = make_form(Wright{0.5, 1.5}, Norm::h);
    const double rg = solve_radius(g, Kind::spirallike, o).radius;
    const auto w = evaluate(g.kernel(), rg);
    CHECK(std::fabs(rg * w.d1 + c * w.value) < 1e-9);
    const double rh = solve_radius(h, Kind::spirallike, o).radius;
    const double s = std::sqrt(rh);
    const auto ws = evaluate(g.kernel(), s);
    CHECK(std::fabs(s * ws.d1 + 2 * c * ws.value) < 1e-9);
  }

  SECTION("g and h forms: r F' + (c - 1) F = 0 and r F'' + c F' = 0") {
    for (const auto& spec : grid_specs()) {
      for (Norm n : applicable_norms(spec)) {
        if (n == Norm::f) continue;
        const NormalizedForm form = make_form(spec, n);
        const double rs = solve_radius(form, Kind::spirallike, o).radius;
        const FormValues a = g_like(form, rs);
        const double rc = solve_radius(form, Kind::convex, o).radius;
        const FormValues b = g_like(form, rc);
        INFO(family_name(spec) << " " << to_string(n));
        CHECK(std::fabs(rs * a.F1 + (c - 1) * a.F) < 1e-9 * std::max(1.0, std::fabs(a.F)));
        CHECK(std::fabs(rc * b.F2 + c * b.F1) < 1e-9 * std::max(1.0, std::fabs(b.F1)));
      }
    }
  }
}

TEST_CASE("residual changes sign across the solved radius", "[radius][property]") {
  for (const auto& spec : grid_specs()) {
    for (Norm n : applicable_norms(spec)) {
      const NormalizedForm form = make_form(spec, n);
      for (Kind k : {Kind::spirallike, Kind::convex}) {
        const Theta th = theta(form, k, SpiralOrder::make(0.3, 0.1));
        const RadiusResult r = solve(th);
        INFO(family_name(spec) << " " << to_string(n) << " " << to_string(k));
        CHECK(r.residual < kResidualTol);
        CHECK(th(r.radius * (1 - kRadiusTol)) > 0.0);
        CHECK(th(r.radius * (1 + kRadiusTol)) < 0.0);
        CHECK(r.hi - r.lo <= kRadiusTol * r.radius);
      }
    }
  }
}

TEST_CASE("radius is symmetric in gamma", "[radius][property]") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> gamma(0.0, 1.5);
  std::uniform_real_distribution<double> alpha(0.0, 0.95);
  for (const auto& spec : grid_specs()) {
    const NormalizedForm form = make_form(spec, Norm::g);
    for (int i = 0; i < 3; ++i) {
      const double gm = gamma(rng);
      const double al = alpha(rng);
      for (Kind k : {Kind::spirallike, Kind::convex}) {
        const double a = solve_radius(form, k, SpiralOrder::make(gm, al)).radius;
        const double b = solve_radius(form, k, SpiralOrder::make(-gm, al)).radius;
        CHECK(std::fabs(a - b) <= 1e-10);
      }
    }
  }
}

TEST_CASE("radius is nonincreasing in alpha and |gamma|", "[radius][property]") {
  const double alphas[] = {0.0, 0.2, 0.4, 0.6, 0.8};
  const double gammas[] = {0.0, 0.3, 0.6, 0.9, 1.2};
  for (const auto& spec : grid_specs()) {
    for (Norm n : applicable_norms(spec)) {
      const NormalizedForm form = make_form(spec, n);
      for (Kind k : {Kind::spirallike, Kind::convex}) {
        double table[5][5];
        for (int i = 0; i < 5; ++i) {
          for (int j = 0; j < 5; ++j) table[i][j] = solve_radius(form, k, SpiralOrder::make(gammas[i], alphas[j])).radius;
        }
        for (int i = 0; i < 5; ++i) {
          for (int j = 0; j + 1 < 5; ++j) {
            CHECK(table[i][j + 1] <= table[i][j] + 1e-10);
            CHECK(table[j + 1][i] <= table[j][i] + 1e-10);
          }
        }
      }
    }
  }
}

TEST_CASE("sampled Theta is strictly decreasing on its bracket", "[radius][property]") {
  for (const auto& spec : grid_specs()) {
    for (Norm n : applicable_norms(spec)) {
      const NormalizedForm form = make_form(spec, n);
      for (Kind k : {Kind::spirallike, Kind::convex}) {
        const Theta th = theta(form, k, SpiralOrder::make(-0.8, 0.5));
        double prev = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 64; ++i) {
          const double x = th.lower() + (th.upper() - th.lower()) * i / 63.0;
          const double v = th(x);
          CHECK(v < prev);
          prev = v;
        }
      }
    }
  }
}

TEST_CASE("h-form radius is the square of the g-form root with coefficient 2c", "[radius][property]") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> gamma(-1.3, 1.3);
  std::uniform_real_distribution<double> alpha(0.0, 0.9);
  const std::vector<FamilySpec> specs{Wright{1.0, 2.0}, Wright{0.4, 0.7}, MittagLeffler{3.0, 2.5, 0.6},
                                      MittagLeffler{6.0, 1.0, 2.0}};
  for (const auto& spec : specs) {
    const NormalizedForm g = make_form(spec, Norm::g);
    const NormalizedForm h = make_form(spec, Norm::h);
    for (int i = 0; i < 3; ++i) {
      const SpiralOrder o = SpiralOrder::make(gamma(rng), alpha(rng));
      // Large h radii need a tighter relative tolerance to resolve 1e-9 absolutely.
      const double rh = solve_radius(h, Kind::spirallike, o, 1e-13).radius;
      const double s = solve_shift(g, Kind::spirallike, 2.0 * o.c(), 1e-13).radius;
      CHECK_THAT(rh, WithinAbs(s * s, 1e-9));
    }
  }
}

TEST_CASE("solver failures", "[radius]") {
  const NormalizedForm linear = make_form(Legendre{1}, Norm::g);
  CHECK_THROWS_AS(solve_radius(linear, Kind::spirallike, SpiralOrder::make(0, 0)), SolverError);
  const NormalizedForm g = make_form(Wright{1.0, 2.0}, Norm::g);
  CHECK_THROWS_AS(solve_radius(g, Kind::spirallike, SpiralOrder::make(0, 0), 0.0), ParameterError);
  CHECK_THROWS_AS(solve_shift(g, Kind::spirallike, 0.0), ParameterError);
}

TEST_CASE("concurrent solves agree with sequential ones", "[radius]") {
  const NormalizedForm form = make_form(Ramanujan{1.0, 0.5, 1.0}, Norm::f);
  const SpiralOrder o = SpiralOrder::make(0.2, 0.4);
  const double expected = solve_radius(form, Kind::convex, o).radius;
  std::vector<double> got(8);
  std::vector<std::thread> pool;
  for (int t = 0; t < 8; ++t) {
    pool.emplace_back([&, t] { got[t] = solve_radius(form, Kind::convex, o).radius; });
  }
  for (auto& t : pool) t.join();
  for (double v : got) CHECK(v == expected);
}
