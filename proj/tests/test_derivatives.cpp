#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "heatcontent/derivatives.hpp"
#include "heatcontent/engines.hpp"
#include "heatcontent/errors.hpp"
#include "heatcontent/inequalities.hpp"

using namespace heatcontent;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

HeatFunction closed_interval(double length) {
  return [length](double t) { return hc_closed_interval(length, t); };
}

HeatFunction closed_box(std::vector<double> lengths) {
  return [lengths](double t) { return hc_closed_box(lengths, t); };
}

// d/dt of L erf(L/2 sqrt t) + 2 sqrt(t/pi) (e^{-L^2/4t} - 1).
double interval_first_derivative(double length, double t) {
  return std::expm1(-length * length / (4.0 * t)) / std::sqrt(std::numbers::pi * t);
}

double interval_second_derivative(double length, double t) {
  const double a = length * length / (4.0 * t);
  const double root = std::sqrt(std::numbers::pi * t);
  return std::exp(-a) * a / (t * root) - 0.5 * std::expm1(-a) / (t * root);
}

Estimate synthetic(double value) {
  Estimate e;
  e.value = value;
  return e;
}

}  // namespace

TEST_CASE("analytic oracles are consistent") {
  // Check the hand-derived derivatives against each other by quadrature.
  const double a = 0.7;
  const double b = 1.9;
  const int n = 20000;
  double integral = 0.0;
  for (int i = 0; i < n; ++i) integral += interval_second_derivative(1.0, a + (i + 0.5) * (b - a) / n);
  integral *= (b - a) / n;
  CHECK(integral == doctest::Approx(interval_first_derivative(1.0, b) - interval_first_derivative(1.0, a)).epsilon(1e-8));
}

TEST_CASE("first derivative of the closed form") {
  const auto d = fd_derivative(closed_interval(1.0), 1.0, 1);
  CHECK(d.order == 1);
  CHECK(d.richardson_levels == 2);
  CHECK(d.step == doctest::Approx(0.0025));
  CHECK(rel(d.value, interval_first_derivative(1.0, 1.0)) <= 1e-8);
  CHECK(d.error_estimate >= 0.0);
  for (double t : {0.01, 0.3, 3.0, 30.0}) {
    CAPTURE(t);
    CHECK(rel(fd_derivative(closed_interval(2.0), t, 1).value, interval_first_derivative(2.0, t)) <= 1e-7);
  }
}

TEST_CASE("second and third derivatives of the closed form") {
  for (double t : {0.05, 1.0, 10.0}) {
    CAPTURE(t);
    const auto d2 = fd_derivative(closed_interval(1.0), t, 2);
    CHECK(rel(d2.value, interval_second_derivative(1.0, t)) <= 1e-6);
    CHECK(std::abs(d2.value - interval_second_derivative(1.0, t)) <= d2.error_estimate);

    // third derivative from the analytic second derivative
    const double h = 1e-4 * t;
    const double d3_ref = (interval_second_derivative(1.0, t + h) - interval_second_derivative(1.0, t - h)) / (2.0 * h);
    const auto d3 = fd_derivative(closed_interval(1.0), t, 3);
    CHECK(d3.richardson_levels == 1);
    CHECK(rel(d3.value, d3_ref) <= 1e-4);
  }
}

TEST_CASE("constant and polynomial probes") {
  const HeatFunction constant = [](double) { return synthetic(2.5); };
  for (int order = 1; order <= 3; ++order) CHECK(fd_derivative(constant, 1.0, order).value == 0.0);

  const HeatFunction cubic = [](double t) { return synthetic(t * t * t - 2.0 * t); };
  CHECK(fd_derivative(cubic, 2.0, 1).value == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(fd_derivative(cubic, 2.0, 2).value == doctest::Approx(12.0).epsilon(1e-10));
  CHECK(fd_derivative(cubic, 2.0, 3).value == doctest::Approx(6.0).epsilon(1e-7));
}

TEST_CASE("Richardson error estimate decreases with levels") {
  double previous = INFINITY;
  for (int levels = 1; levels <= 3; ++levels) {
    const auto d = fd_derivative(closed_interval(1.0), 1.0, 1, levels);
    CAPTURE(levels);
    CHECK(d.error_estimate < previous);
    previous = d.error_estimate;
  }

  // Second order: the amplified engine error grows like 4^levels, so the
  // total only falls until it dominates. The extrapolation part keeps falling.
  const auto f = closed_interval(1.0);
  const HeatFunction exact = [](double t) {
    Estimate e = hc_closed_interval(1.0, t);
    e.error_bound = 0.0;
    return e;
  };
  CHECK(fd_derivative(f, 1.0, 2, 2).error_estimate < fd_derivative(f, 1.0, 2, 1).error_estimate);
  previous = INFINITY;
  for (int levels = 1; levels <= 3; ++levels) {
    const auto d = fd_derivative(exact, 1.0, 2, levels);
    CHECK(d.error_estimate < previous);
    previous = d.error_estimate;
  }
  const auto level3 = fd_derivative(f, 1.0, 2, 3);
  CHECK(std::abs(level3.value - interval_second_derivative(1.0, 1.0)) <= level3.error_estimate);
}

TEST_CASE("fd_derivative argument checks") {
  const auto f = closed_interval(1.0);
  CHECK_THROWS_AS(fd_derivative(f, 1.0, 0), InvalidArgument);
  CHECK_THROWS_AS(fd_derivative(f, 1.0, 4), InvalidArgument);
  CHECK_THROWS_AS(fd_derivative(f, 0.0, 1), InvalidArgument);
  CHECK_THROWS_AS(fd_derivative(f, 1.0, 1, -1), InvalidArgument);
  CHECK_THROWS_AS(fd_derivative(f, 1.0, 1, 2000), InvalidArgument);

  MCConfig mc;
  mc.n_samples = 2000;
  const HeatFunction noisy = [mc](double t) { return hc_mc(Domain::interval(1.0), t, mc); };
  CHECK_NOTHROW(fd_derivative(noisy, 1.0, 1));
  CHECK_THROWS_WITH_AS(fd_derivative(noisy, 1.0, 2), "engine too noisy for requested order", NoisyEngineError);
  CHECK_THROWS_AS(fd_derivative(noisy, 1.0, 3), NoisyEngineError);
}

TEST_CASE("second derivative agrees with the semigroup form") {
  for (const auto& d : {Domain::interval(1.0), Domain::box({1.0, 1.0}), Domain::box({1.0, 2.0}),
                        Domain::box_union({{{0.0, 0.0}, {1.0, 1.0}}, {{2.0, 2.0}, {1.0, 1.0}}})}) {
    const HeatFunction f = [d](double t) { return hc_closed(d, t); };
    for (double t : {0.25, 0.5, 1.0}) {
      CAPTURE(describe(d));
      CAPTURE(t);
      CHECK(rel(fd_derivative(f, 2.0 * t, 2).value, hc_d2_semigroup(d, t)) <= 1e-3);
    }
  }
}

TEST_CASE("chain rule on the scaling law") {
  for (double s : {0.5, 2.0}) {
    for (const std::vector<double>& lengths : {std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}}) {
      std::vector<double> scaled = lengths;
      for (double& l : scaled) l *= s;
      const double m = static_cast<double>(lengths.size());
      const double t = 0.4;
      const auto big = fd_derivative(closed_box(scaled), s * s * t, 1);
      const auto base = fd_derivative(closed_box(lengths), t, 1);
      CHECK(rel(big.value, std::pow(s, m - 2.0) * base.value) <= 1e-7);
    }
  }
}

TEST_CASE("sign_pattern") {
  const auto grid = geometric_grid(1e-2, 1e2, 25);
  const auto interval = sign_pattern(closed_interval(1.0), grid);
  CHECK(interval.rows.size() == 25);
  CHECK(interval.ok());
  for (const auto& row : interval.rows) {
    CHECK(row.h.value > 0.0);
    CHECK(row.d1.value < 0.0);
    CHECK(row.d2.value > 0.0);
    CHECK(row.d3.value < 0.0);
  }
  CHECK(sign_pattern(closed_box({1.0, 2.0}), grid).ok());

  const HeatFunction wave = [](double t) { return synthetic(std::sin(t)); };
  const auto report = sign_pattern(wave, geometric_grid(0.5, 6.0, 12));
  CHECK_FALSE(report.ok());
  bool saw_order[4] = {false, false, false, false};
  for (const auto& v : report.violations) saw_order[v.order] = true;
  CHECK(saw_order[0]);  // sin < 0 beyond pi
  CHECK(saw_order[1]);  // cos > 0 before pi/2
  CHECK(saw_order[2]);  // -sin < 0 before pi
  CHECK(saw_order[3]);  // -cos > 0 between pi/2 and 3pi/2

  CHECK_THROWS_AS(sign_pattern(wave, {1.0, 0.5}), InvalidArgument);
  CHECK_THROWS_AS(sign_pattern(wave, {0.0, 0.5}), InvalidArgument);
}
