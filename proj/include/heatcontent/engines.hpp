#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "heatcontent/geometry.hpp"
#include "heatcontent/rng.hpp"

namespace heatcontent {

enum class EstimateKind { certified, statistical_99, heuristic };
enum class Method { closed, grid, mc, brute };

std::string to_string(EstimateKind k);
std::string to_string(Method m);
Method parse_method(const std::string& name);

/// A heat-content value with its error bound and the parameters used.
struct Estimate {
  double value = 0.0;
  double error_bound = 0.0;
  EstimateKind kind = EstimateKind::certified;
  Method method = Method::closed;
  std::map<std::string, double> meta;
};

struct GridConfig {
  /// Input raster spacing; 0 selects default_spacing(d) (50 cells across the
  /// smallest feature). Ignored for Raster domains, which keep their own.
  double h = 0.0;
  /// Half-width of the output window beyond the domain, in kernel standard
  /// deviations sqrt(2s) for convolution time s. Must be >= 6.
  double padding_sigmas = 8.0;
  /// Output sample density per kernel standard deviation.
  double samples_per_sigma = 4.0;
  /// Also rasterize at 2h and add |H_h - H_2h| to the error bound.
  bool richardson = false;
  /// Cost guard on the number of output samples.
  std::size_t max_points = 50'000'000;
};

struct MCConfig {
  std::size_t n_samples = 1'000'000;
  std::uint64_t seed = Rng::kDefaultSeed;
};

struct EngineConfig {
  GridConfig grid;
  MCConfig mc;
};

/// Samples of a function on a uniform lattice: value i sits at
/// origin + (i + 1/2) * spacing, row-major with the last axis fastest.
struct Field {
  Point origin;
  double spacing = 0.0;
  std::vector<std::size_t> extents;
  std::vector<double> values;

  [[nodiscard]] double cell_volume() const;
  [[nodiscard]] Point sample_point(std::size_t flat) const;
  /// h^m * sum of values.
  [[nodiscard]] double integral() const;
  /// h^m * sum of squared values.
  [[nodiscard]] double squared_norm() const;
};

// -- closed form (intervals, boxes, box unions) -----------------------------

/// L erf(L / 2 sqrt t) + 2 sqrt(t/pi) (exp(-L^2/4t) - 1); t = 0 gives L.
Estimate hc_closed_interval(double length, double t);
/// Product of interval values: the kernel factorizes over coordinates.
Estimate hc_closed_box(const std::vector<double>& lengths, double t);
/// Sum over box pairs of products of 1-D cross terms.
Estimate hc_closed_box_union(const std::vector<AxisBox>& boxes, double t);
bool has_closed_form(const Domain& d);
Estimate hc_closed(const Domain& d, double t);

// -- grid engine -------------------------------------------------------------
//
// The indicator of the rasterized set is convolved axis by axis with the
// Gaussian integrated over each input cell, so the sampled field is the exact
// heat flow of the raster at the output points; the only approximations are
// the finite output window and the output quadrature.

/// e^{s Delta} chi on the output lattice.
Field heat_field(const Domain& d, double s, const GridConfig& cfg = {});
/// Delta e^{t Delta} chi, i.e. chi convolved with d/dt p_t.
Field laplacian_field(const Domain& d, double t, const GridConfig& cfg = {});
/// H(t) = || e^{(t/2) Delta} chi ||^2.
Estimate hc_grid(const Domain& d, double t, const GridConfig& cfg = {});
/// Second derivative of H at time 2t: || Delta e^{t Delta} chi ||^2.
double hc_d2_semigroup(const Domain& d, double t, const GridConfig& cfg = {});

// -- Monte Carlo -------------------------------------------------------------

/// |Omega| * P(X + sqrt(2t) Z in Omega), X uniform on Omega, Z standard normal.
/// The generator is split from cfg.seed by the bit pattern of t.
Estimate hc_mc(const Domain& d, double t, const MCConfig& cfg = {});

// -- brute-force oracle --------------------------------------------------------

inline constexpr std::size_t kBruteForceMaxCells = 100'000;

/// h^{2m} sum_{i,j} p_t(c_i, c_j) over occupied cell centers of a raster.
/// Throws EngineError("oracle scale exceeded") above kBruteForceMaxCells.
Estimate hc_bruteforce_pairs(const Domain& raster, double t);

/// Dispatch by method. Non-raster domains are rasterized for `brute` at
/// cfg.grid.h (or the default spacing).
Estimate heat_content(const Domain& d, double t, Method method, const EngineConfig& cfg = {});

}  // namespace heatcontent
