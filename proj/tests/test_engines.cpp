#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "heatcontent/engines.hpp"
#include "heatcontent/errors.hpp"
#include "heatcontent/kernel.hpp"

using namespace heatcontent;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// H for an interval reduced to one dimension: int_{-L}^{L} (L - |z|) g(z) dz
// with g the N(0, 2t) density, by composite Simpson on [0, L].
double interval_simpson(double length, double t, int panels = 20000) {
  const double h = length / panels;
  auto f = [&](double z) { return (length - z) * heat_kernel({1, t, z * z}); };
  double s = f(0.0) + f(length);
  for (int i = 1; i < panels; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f(i * h);
  return 2.0 * s * h / 3.0;
}

Domain unit_interval_raster(double h) { return rasterize(Domain::interval(1.0), h); }

}  // namespace

TEST_CASE("hc_closed_interval") {
  CHECK(hc_closed_interval(1.0, 0.0).value == 1.0);
  // mpmath at 30 digits: 0.647117823215830...
  const auto e = hc_closed_interval(1.0, 0.1);
  CHECK(e.kind == EstimateKind::certified);
  CHECK(e.method == Method::closed);
  CHECK(std::abs(e.value - 0.6471178232158304) <= 1e-15);
  CHECK(e.error_bound > 0.0);
  CHECK(e.error_bound <= 1e-12);

  for (double t : {1e-4, 0.01, 0.1, 1.0, 10.0, 1e3}) {
    CAPTURE(t);
    CHECK(rel(hc_closed_interval(1.0, t).value, interval_simpson(1.0, t)) <= 1e-10);
    CHECK(rel(hc_closed_interval(2.5, t).value, interval_simpson(2.5, t)) <= 1e-10);
  }

  // large time: H (4 pi t)^{1/2} / L^2 -> 1
  double previous = 0.0;
  for (double t : {1e2, 1e4, 1e6, 1e8}) {
    const double ratio = hc_closed_interval(2.0, t).value * std::sqrt(4.0 * kPi * t) / 4.0;
    CHECK(ratio < 1.0);
    CHECK(ratio > previous);
    previous = ratio;
  }
  CHECK(previous == doctest::Approx(1.0).epsilon(1e-7));

  CHECK_THROWS_AS(hc_closed_interval(0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(hc_closed_interval(1.0, -1.0), InvalidArgument);
}

TEST_CASE("hc_closed_box") {
  CHECK(hc_closed_box({1.0}, 0.1).value == hc_closed_interval(1.0, 0.1).value);
  CHECK(hc_closed_box({1.0, 2.0}, 0.0).value == 2.0);
  const double h1 = hc_closed_interval(1.0, 0.1).value;
  CHECK(std::abs(hc_closed_box({1.0, 1.0}, 0.1).value - h1 * h1) <= 1e-15);
  CHECK(std::abs(hc_closed_box({1.0, 1.0}, 0.1).value - 0.4187614771235949) <= 1e-15);
  CHECK_THROWS_AS(hc_closed_box({}, 0.1), InvalidArgument);
  CHECK_THROWS_AS(hc_closed_box({1.0, -1.0}, 0.1), InvalidArgument);
}

TEST_CASE("hc_closed_box_union") {
  // A single box reproduces the box formula.
  for (double t : {0.01, 0.3, 5.0}) {
    const auto single = hc_closed_box_union({{{0.5, -1.0}, {1.0, 2.0}}}, t);
    CHECK(rel(single.value, hc_closed_box({1.0, 2.0}, t).value) <= 1e-13);
  }
  // Two boxes sharing a face are one box of double length.
  for (double t : {0.01, 0.3, 5.0}) {
    const auto split = hc_closed_box_union({{{0.0, 0.0}, {1.0, 1.0}}, {{1.0, 0.0}, {1.0, 1.0}}}, t);
    CHECK(rel(split.value, hc_closed_box({2.0, 1.0}, t).value) <= 1e-13);
    const auto thirds =
        hc_closed_box_union({{{0.0}, {0.25}}, {{0.25}, {0.5}}, {{0.75}, {0.25}}}, t);
    CHECK(rel(thirds.value, hc_closed_interval(1.0, t).value) <= 1e-13);
  }
  // Far apart boxes decouple at small t.
  const auto far = hc_closed_box_union({{{0.0, 0.0}, {1.0, 1.0}}, {{50.0, 50.0}, {1.0, 1.0}}}, 0.1);
  CHECK(rel(far.value, 2.0 * hc_closed_box({1.0, 1.0}, 0.1).value) <= 1e-14);
  CHECK(hc_closed_box_union({{{0.0}, {1.0}}, {{2.0}, {1.0}}}, 0.0).value == 2.0);
}

TEST_CASE("closed form dispatch") {
  CHECK(has_closed_form(Domain::interval(1.0)));
  CHECK(has_closed_form(Domain::box({1.0, 2.0})));
  CHECK_FALSE(has_closed_form(Domain::ball({0.0, 0.0}, 1.0)));
  CHECK_THROWS_AS(hc_closed(Domain::ball({0.0, 0.0}, 1.0), 0.1), InvalidArgument);
  CHECK_FALSE(has_closed_form(unit_interval_raster(0.1)));
}

TEST_CASE("scaling law on the closed form") {
  const std::vector<std::vector<double>> boxes{{1.0}, {1.0, 2.0}, {1.0, 1.5, 0.5}};
  for (const auto& lengths : boxes) {
    for (double s : {0.5, 2.0}) {
      std::vector<double> scaled = lengths;
      for (double& l : scaled) l *= s;
      for (double t : {0.05, 0.5, 5.0}) {
        const double lhs = hc_closed_box(scaled, s * s * t).value;
        const double rhs = std::pow(s, static_cast<double>(lengths.size())) * hc_closed_box(lengths, t).value;
        CHECK(rel(lhs, rhs) <= 1e-12);
      }
    }
  }
}

TEST_CASE("hc_bruteforce_pairs small rasters") {
  const double h = 0.1;
  const auto one = Domain::raster({0.0, 0.0}, h, {{3, 4}});
  for (double t : {0.01, 1.0}) {
    const auto e = hc_bruteforce_pairs(one, t);
    CHECK(rel(e.value, std::pow(h, 4) / (4.0 * kPi * t)) <= 1e-14);
  }
  // Two cells at offset (3, 4): distance 5h.
  const auto two = Domain::raster({0.0, 0.0}, h, {{0, 0}, {3, 4}});
  const double t = 0.2;
  const double expected = std::pow(h, 4) * (2.0 * heat_kernel({2, t, 0.0}) + 2.0 * heat_kernel({2, t, 0.25}));
  CHECK(rel(hc_bruteforce_pairs(two, t).value, expected) <= 1e-14);

  CHECK_THROWS_AS(hc_bruteforce_pairs(Domain::interval(1.0), 0.1), InvalidArgument);
  CHECK_THROWS_AS(hc_bruteforce_pairs(one, 0.0), InvalidArgument);
  CHECK_THROWS_WITH_AS(hc_bruteforce_pairs(rasterize(Domain::ball({0.0, 0.0}, 1.0), 0.005), 0.5),
                       "oracle scale exceeded", EngineError);
}

TEST_CASE("hc_bruteforce_pairs agrees with the closed form") {
  const auto r = unit_interval_raster(1e-3);
  for (double t : {0.01, 0.1, 1.0}) {
    const auto brute = hc_bruteforce_pairs(r, t);
    const auto closed = hc_closed_interval(1.0, t);
    CAPTURE(t);
    CHECK(brute.kind == EstimateKind::certified);
    CHECK(std::abs(brute.value - closed.value) <= brute.error_bound + closed.error_bound);
    CHECK(rel(brute.value, closed.value) <= 1e-5);
  }
  // Deterministic across calls.
  CHECK(hc_bruteforce_pairs(r, 0.1).value == hc_bruteforce_pairs(r, 0.1).value);
}

TEST_CASE("hc_grid against closed forms") {
  GridConfig cfg;
  cfg.h = 2e-3;
  const auto e = hc_grid(Domain::interval(1.0), 0.1, cfg);
  CHECK(e.kind == EstimateKind::heuristic);
  CHECK(e.method == Method::grid);
  CHECK(rel(e.value, hc_closed_interval(1.0, 0.1).value) <= 1e-4);

  const auto box = hc_grid(Domain::box({1.0, 2.0}), 0.2);
  CHECK(rel(box.value, hc_closed_box({1.0, 2.0}, 0.2).value) <= 1e-4);

  // boundary loss is about perimeter * sqrt(t / pi), so 1% needs t well below 1e-3
  const auto ball = hc_grid(Domain::ball({0.0, 0.0}, 1.0), 1e-5);
  CHECK(rel(ball.value, kPi) <= 1e-2);
  CHECK(rel(hc_grid(Domain::ball({0.0, 0.0}, 1.0), 1e-3).value, kPi) > 1e-2);

  // Exact raster: the only errors are window and quadrature.
  const auto un = Domain::box_union({{{0.0, 0.0}, {1.0, 1.0}}, {{2.0, 2.0}, {1.0, 1.0}}});
  for (double t : {0.05, 1.0, 20.0}) {
    const auto g = hc_grid(un, t);
    const auto c = hc_closed(un, t);
    CAPTURE(t);
    CHECK(std::abs(g.value - c.value) <= g.error_bound + c.error_bound);
  }
}

TEST_CASE("hc_grid configuration") {
  GridConfig bad;
  bad.padding_sigmas = 5.0;
  CHECK_THROWS_AS(hc_grid(Domain::interval(1.0), 0.1, bad), InvalidArgument);
  CHECK_THROWS_AS(hc_grid(Domain::interval(1.0), 0.0), InvalidArgument);
  GridConfig tiny;
  tiny.max_points = 100;
  CHECK_THROWS_WITH_AS(hc_grid(Domain::box({1.0, 1.0}), 0.1, tiny), "grid too large", EngineError);
  GridConfig coarse;
  coarse.h = 2.0;
  CHECK_THROWS_WITH_AS(hc_grid(Domain::interval(1.0), 0.1, coarse), "resolution too coarse", EngineError);

  GridConfig rich;
  rich.richardson = true;
  const auto e = hc_grid(Domain::ball({0.0, 0.0}, 1.0), 0.5, rich);
  CHECK(e.meta.at("richardson") == 1.0);
  CHECK(e.error_bound > hc_grid(Domain::ball({0.0, 0.0}, 1.0), 0.5).error_bound);
}

TEST_CASE("hc_mc") {
  MCConfig cfg;
  const auto e = hc_mc(Domain::interval(1.0), 0.1, cfg);
  CHECK(e.kind == EstimateKind::statistical_99);
  CHECK(e.meta.at("seed") == static_cast<double>(Rng::kDefaultSeed));
  CHECK(std::abs(e.value - hc_closed_interval(1.0, 0.1).value) <= e.error_bound);

  // Fixed seed is reproducible; another seed is not the same stream.
  CHECK(hc_mc(Domain::interval(1.0), 0.1, cfg).value == e.value);
  MCConfig other = cfg;
  other.seed = 1;
  CHECK(hc_mc(Domain::interval(1.0), 0.1, other).value != e.value);

  MCConfig small;
  small.n_samples = 10000;
  for (const auto& d : {Domain::interval(1.0), Domain::ball({0.0, 0.0, 0.0}, 1.0), Domain::box({1.0, 2.0})}) {
    const auto tiny = hc_mc(d, 1e-8, small);
    CHECK(tiny.meta.at("hit_fraction") >= 0.999);
    CHECK(tiny.value == doctest::Approx(volume(d)).epsilon(1e-3));
  }

  small.n_samples = 999;
  CHECK_THROWS_AS(hc_mc(Domain::interval(1.0), 0.1, small), InvalidArgument);
  CHECK_THROWS_AS(hc_mc(Domain::interval(1.0), 0.0), InvalidArgument);
}

TEST_CASE("hc_mc and hc_grid agree on the unit ball in three dimensions") {
  const auto ball = Domain::ball({0.0, 0.0, 0.0}, 1.0);
  const auto mc = hc_mc(ball, 0.5);
  GridConfig cfg;
  cfg.richardson = true;
  const auto grid = hc_grid(ball, 0.5, cfg);
  CHECK(std::abs(mc.value - grid.value) <= mc.error_bound + grid.error_bound);
}

TEST_CASE("engine outputs respect the elementary bounds and decrease") {
  const std::vector<Domain> domains{Domain::interval(1.0), Domain::box({1.0, 2.0}), Domain::ball({0.0, 0.0}, 1.0),
                                    Domain::box_union({{{0.0, 0.0}, {1.0, 1.0}}, {{2.0, 2.0}, {1.0, 1.0}}})};
  EngineConfig cfg;
  cfg.mc.n_samples = 20000;
  for (const auto& d : domains) {
    const double vol = volume(d);
    const int m = d.dimension();
    std::vector<Method> methods{Method::grid, Method::mc};
    if (has_closed_form(d)) methods.push_back(Method::closed);
    if (m == 1) methods.push_back(Method::brute);
    for (Method method : methods) {
      double previous = vol;
      for (double t : {0.01, 0.1, 1.0, 10.0}) {
        const auto e = heat_content(d, t, method, cfg);
        const double ref_vol = e.meta.contains("raster_volume") ? e.meta.at("raster_volume") : vol;
        const double upper = std::min(ref_vol, ref_vol * ref_vol * std::pow(4.0 * kPi * t, -0.5 * m));
        CAPTURE(describe(d));
        CAPTURE(to_string(method));
        CAPTURE(t);
        CHECK(e.value >= 0.0);
        CHECK(e.error_bound >= 0.0);
        CHECK(e.value <= upper + e.error_bound + 1e-12);
        CHECK(e.value <= previous + e.error_bound + 1e-12);
        previous = e.value;
      }
    }
  }
}

TEST_CASE("engine cross-agreement on a 10-point grid") {
  const auto d = Domain::interval(1.0);
  EngineConfig cfg;
  cfg.grid.h = 1e-3;
  double t = 0.01;
  for (int i = 0; i < 10; ++i, t *= 2.0) {
    const auto closed = heat_content(d, t, Method::closed, cfg);
    const auto grid = heat_content(d, t, Method::grid, cfg);
    const auto brute = heat_content(d, t, Method::brute, cfg);
    CAPTURE(t);
    CHECK(std::abs(closed.value - grid.value) <= closed.error_bound + grid.error_bound);
    CHECK(std::abs(closed.value - brute.value) <= closed.error_bound + brute.error_bound);
  }
}

TEST_CASE("heat_field conserves mass and laplacian_field integrates to zero") {
  for (const auto& d : {Domain::interval(1.0), Domain::box({1.0, 2.0})}) {
    for (double s : {0.05, 1.0}) {
      const auto u = heat_field(d, s);
      CHECK(u.integral() == doctest::Approx(volume(d)).epsilon(1e-10));
      CHECK(std::abs(laplacian_field(d, s).integral()) <= 1e-8);
    }
  }
}

TEST_CASE("laplacian_field is negative on the domain at large time") {
  const auto d = Domain::interval(1.0);
  const auto f = laplacian_field(d, 10.0);
  std::size_t inside = 0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (!contains(d, f.sample_point(i))) continue;
    ++inside;
    CHECK(f.values[i] < 0.0);
  }
  CHECK(inside > 0);
}

TEST_CASE("laplacian_field matches a discrete Laplacian of heat_field") {
  const auto d = Domain::interval(1.0);
  GridConfig cfg;
  cfg.samples_per_sigma = 32.0;
  const double t = 0.1;
  const auto u = heat_field(d, t, cfg);
  const auto lap = laplacian_field(d, t, cfg);
  REQUIRE(u.values.size() == lap.values.size());
  const double h = u.spacing;
  double diff = 0.0;
  double norm = 0.0;
  for (std::size_t i = 1; i + 1 < u.values.size(); ++i) {
    const double discrete = (u.values[i - 1] - 2.0 * u.values[i] + u.values[i + 1]) / (h * h);
    diff += (discrete - lap.values[i]) * (discrete - lap.values[i]);
    norm += lap.values[i] * lap.values[i];
  }
  CHECK(std::sqrt(diff / norm) <= 1e-3);
}

TEST_CASE("hc_d2_semigroup is positive and scales correctly") {
  for (const auto& d : {Domain::interval(1.0), Domain::box({1.0, 1.0}), Domain::ball({0.0, 0.0}, 1.0)}) {
    for (double t : {0.1, 1.0}) CHECK(hc_d2_semigroup(d, t) > 0.0);
  }
  // Large time: H'' at s = 2t tends to (m/2)(m/2+1) |Omega|^2 (4 pi s)^{-m/2} / s^2.
  const double s = 2.0 * 400.0;
  const double expected = 0.5 * 1.5 * std::pow(4.0 * kPi * s, -0.5) / (s * s);
  CHECK(rel(hc_d2_semigroup(Domain::interval(1.0), 400.0), expected) <= 1e-2);
}
