#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <numbers>
#include <thread>

#include "heatcontent/engines.hpp"
#include "heatcontent/errors.hpp"
#include "heatcontent/kernel.hpp"

namespace heatcontent {

std::string to_string(EstimateKind k) {
  switch (k) {
    case EstimateKind::certified: return "certified";
    case EstimateKind::statistical_99: return "statistical_99";
    case EstimateKind::heuristic: return "heuristic";
  }
  return "unknown";
}

std::string to_string(Method m) {
  switch (m) {
    case Method::closed: return "closed";
    case Method::grid: return "grid";
    case Method::mc: return "mc";
    case Method::brute: return "brute";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "closed") return Method::closed;
  if (name == "grid") return Method::grid;
  if (name == "mc") return Method::mc;
  if (name == "brute") return Method::brute;
  throw InvalidArgument("unknown engine \"" + name + "\"");
}

Estimate hc_mc(const Domain& d, double t, const MCConfig& cfg) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("time must be finite and > 0");
  if (cfg.n_samples < 1000) throw InvalidArgument("n_samples must be >= 1000");
  Rng rng = Rng(cfg.seed).split(std::bit_cast<std::uint64_t>(t));
  const double scale = std::sqrt(2.0 * t);
  const auto m = static_cast<std::size_t>(d.dimension());
  std::size_t hits = 0;
  Point y(m);
  for (std::size_t n = 0; n < cfg.n_samples; ++n) {
    const Point x = sample_uniform(d, rng);
    for (std::size_t k = 0; k < m; ++k) y[k] = x[k] + scale * rng.normal();
    if (contains(d, y)) ++hits;
  }
  const double n = static_cast<double>(cfg.n_samples);
  const double p = static_cast<double>(hits) / n;
  const double vol = volume(d);
  Estimate e;
  e.method = Method::mc;
  e.kind = EstimateKind::statistical_99;
  e.value = vol * p;
  e.error_bound = vol * 2.58 * std::sqrt(p * (1.0 - p) / n);
  e.meta = {{"t", t},
            {"n_samples", n},
            {"seed", static_cast<double>(cfg.seed)},
            {"hit_fraction", p}};
  return e;
}

namespace {

struct PairSums {
  double value = 0.0;  // sum of p_t over ordered pairs
  double dt = 0.0;     // sum of d/dt p_t over ordered pairs
};

}  // namespace

Estimate hc_bruteforce_pairs(const Domain& d, double t) {
  const auto& r = d.as_raster();
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("time must be finite and > 0");
  const std::size_t n = r.occupied.size();
  if (n > kBruteForceMaxCells) throw EngineError("oracle scale exceeded");
  const std::size_t m = r.extents.size();
  const double h = r.spacing;

  // Separable per-axis factors exp(-(delta h)^2 / 4t) for lattice offsets.
  std::vector<std::vector<double>> factor(m);
  for (std::size_t k = 0; k < m; ++k) {
    factor[k].resize(r.extents[k]);
    for (std::size_t delta = 0; delta < r.extents[k]; ++delta) {
      const double x = static_cast<double>(delta) * h;
      const double exponent = -x * x / (4.0 * t);
      factor[k][delta] = exponent < kUnderflowExponent ? 0.0 : std::exp(exponent);
    }
  }
  std::vector<std::vector<long>> index(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto idx = r.unflatten(r.occupied[i]);
    index[i].assign(idx.begin(), idx.end());
  }
  const double pref = heat_kernel({static_cast<int>(m), t, 0.0});
  const double half_m = 0.5 * static_cast<double>(m);

  // Fixed chunking keeps the summation order independent of thread count.
  constexpr std::size_t kChunks = 256;
  std::vector<PairSums> partial(kChunks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < kChunks; c = next++) {
      PairSums acc;
      for (std::size_t i = c; i < n; i += kChunks) {
        PairSums row;
        for (std::size_t j = i + 1; j < n; ++j) {
          double w = 1.0;
          long r2_units = 0;
          for (std::size_t k = 0; k < m; ++k) {
            const long delta = std::abs(index[i][k] - index[j][k]);
            w *= factor[k][static_cast<std::size_t>(delta)];
            r2_units += delta * delta;
          }
          row.value += w;
          row.dt += w * (-half_m + static_cast<double>(r2_units) * h * h / (4.0 * t));
        }
        acc.value += 2.0 * row.value + 1.0;
        acc.dt += 2.0 * row.dt - half_m;
      }
      partial[c] = acc;
    }
  };
  const unsigned threads = std::clamp(std::thread::hardware_concurrency(), 1U, 16U);
  {
    std::vector<std::jthread> pool;
    for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
  }
  PairSums total;
  for (const auto& p : partial) {
    total.value += p.value;
    total.dt += p.dt;
  }
  const double cell = std::pow(h, static_cast<double>(m));
  const double scale = cell * cell * pref;

  Estimate e;
  e.method = Method::brute;
  e.value = scale * total.value;
  const double derivative = scale * total.dt / t;
  // Midpoint rule on each cell pair: the leading error is (h^2/12) H'(t);
  // the next Euler-Maclaurin term scales like (h^2/t)^2 H.
  const double leading = h * h / 12.0 * std::abs(derivative);
  const double subleading = 7.0 * std::pow(h, 4) / 5760.0 * 3.0 / (4.0 * t * t) * 2.0 * static_cast<double>(m) * e.value;
  const double rounding = 1e-15 * std::sqrt(static_cast<double>(n)) * e.value;
  e.error_bound = 2.0 * (leading + subleading) + rounding;
  e.kind = t >= h * h ? EstimateKind::certified : EstimateKind::heuristic;
  e.meta = {{"t", t}, {"h", h}, {"cells", static_cast<double>(n)}, {"dH_dt", derivative}};
  return e;
}

Estimate heat_content(const Domain& d, double t, Method method, const EngineConfig& cfg) {
  switch (method) {
    case Method::closed: return hc_closed(d, t);
    case Method::grid: return hc_grid(d, t, cfg.grid);
    case Method::mc: return hc_mc(d, t, cfg.mc);
    case Method::brute: {
      if (d.is_raster()) return hc_bruteforce_pairs(d, t);
      return hc_bruteforce_pairs(rasterize(d, cfg.grid.h > 0.0 ? cfg.grid.h : default_spacing(d)), t);
    }
  }
  throw InvalidArgument("unknown engine");
}

}  // namespace heatcontent
