#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "heatcontent/engines.hpp"
#include "heatcontent/errors.hpp"

namespace heatcontent {

namespace {

// Banded linear map from one axis of the input raster to the output lattice.
struct AxisOperator {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> weights;  // rows x cols
  std::vector<std::size_t> first;
  std::vector<std::size_t> last;  // one past the last non-zero column
};

struct OutputAxis {
  double origin;
  std::size_t count;
};

// P(a < Z < b) for standard normal Z, without cancellation in either tail.
double normal_mass(double a, double b) {
  constexpr double r = std::numbers::sqrt2;
  if (a >= 0.0) return 0.5 * (std::erfc(a / r) - std::erfc(b / r));
  if (b <= 0.0) return 0.5 * (std::erfc(-b / r) - std::erfc(-a / r));
  return 0.5 * (std::erf(b / r) - std::erf(a / r));
}

// Derivative of the N(0, sigma^2) density.
double density_slope(double z, double sigma) {
  const double u = z / sigma;
  return -u / (sigma * sigma) * std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
}

enum class AxisKind { value, second_derivative };

AxisOperator make_operator(const Raster& r, std::size_t axis, const OutputAxis& out, double spacing_out,
                           double sigma, AxisKind kind) {
  AxisOperator op;
  op.rows = out.count;
  op.cols = r.extents[axis];
  op.weights.assign(op.rows * op.cols, 0.0);
  op.first.assign(op.rows, 0);
  op.last.assign(op.rows, 0);
  for (std::size_t a = 0; a < op.rows; ++a) {
    const double x = out.origin + (static_cast<double>(a) + 0.5) * spacing_out;
    std::size_t lo = op.cols;
    std::size_t hi = 0;
    for (std::size_t j = 0; j < op.cols; ++j) {
      const double left = r.origin[axis] + static_cast<double>(j) * r.spacing;
      const double right = left + r.spacing;
      const double w = kind == AxisKind::value
                           ? normal_mass((x - right) / sigma, (x - left) / sigma)
                           : density_slope(x - left, sigma) - density_slope(x - right, sigma);
      if (w != 0.0) {
        op.weights[a * op.cols + j] = w;
        lo = std::min(lo, j);
        hi = j + 1;
      }
    }
    op.first[a] = lo < hi ? lo : 0;
    op.last[a] = hi;
  }
  return op;
}

// Applies `op` along `axis` of a row-major tensor with shape `dims`.
std::vector<double> apply_axis(const std::vector<double>& in, std::vector<std::size_t>& dims, std::size_t axis,
                               const AxisOperator& op) {
  std::size_t outer = 1;
  std::size_t inner = 1;
  for (std::size_t k = 0; k < axis; ++k) outer *= dims[k];
  for (std::size_t k = axis + 1; k < dims.size(); ++k) inner *= dims[k];
  std::vector<double> out(outer * op.rows * inner, 0.0);
  for (std::size_t o = 0; o < outer; ++o) {
    const double* src = in.data() + o * op.cols * inner;
    double* dst = out.data() + o * op.rows * inner;
    for (std::size_t a = 0; a < op.rows; ++a) {
      double* row = dst + a * inner;
      for (std::size_t j = op.first[a]; j < op.last[a]; ++j) {
        const double w = op.weights[a * op.cols + j];
        const double* s = src + j * inner;
        for (std::size_t i = 0; i < inner; ++i) row[i] += w * s[i];
      }
    }
  }
  dims[axis] = op.rows;
  return out;
}

struct Layout {
  std::vector<OutputAxis> axes;
  double spacing;
};

Layout output_layout(const Raster& r, double sigma, const GridConfig& cfg) {
  const double spacing = sigma / cfg.samples_per_sigma;
  const double pad = cfg.padding_sigmas * sigma;
  Layout layout{{}, spacing};
  std::size_t total = 1;
  for (std::size_t k = 0; k < r.extents.size(); ++k) {
    const double lo = r.origin[k] - pad;
    const double hi = r.origin[k] + static_cast<double>(r.extents[k]) * r.spacing + pad;
    const double count = std::ceil((hi - lo) / spacing);
    if (count > static_cast<double>(cfg.max_points)) throw EngineError("grid too large");
    const auto n = static_cast<std::size_t>(count);
    const double slack = static_cast<double>(n) * spacing - (hi - lo);
    layout.axes.push_back({lo - 0.5 * slack, n});
    total *= n;
    if (total > cfg.max_points) throw EngineError("grid too large");
  }
  return layout;
}

void validate(const GridConfig& cfg) {
  if (!(cfg.padding_sigmas >= 6.0)) throw InvalidArgument("padding_sigmas must be >= 6");
  if (!(cfg.samples_per_sigma > 0.0)) throw InvalidArgument("samples_per_sigma must be > 0");
  if (cfg.h < 0.0) throw InvalidArgument("grid spacing must be >= 0");
}

Domain raster_for(const Domain& d, const GridConfig& cfg) {
  if (d.is_raster()) return d;
  return rasterize(d, cfg.h > 0.0 ? cfg.h : default_spacing(d));
}

std::vector<double> indicator(const Raster& r) {
  return {r.occupancy.begin(), r.occupancy.end()};
}

// Convolves the raster indicator along every axis; `derivative_axis`, when
// set, receives the second-derivative operator instead of the value operator.
Field convolve(const Raster& r, double sigma, const GridConfig& cfg, std::optional<std::size_t> derivative_axis) {
  const auto layout = output_layout(r, sigma, cfg);
  std::vector<std::size_t> dims = r.extents;
  std::vector<double> data = indicator(r);
  for (std::size_t k = 0; k < dims.size(); ++k) {
    const auto kind = derivative_axis == k ? AxisKind::second_derivative : AxisKind::value;
    data = apply_axis(data, dims, k, make_operator(r, k, layout.axes[k], layout.spacing, sigma, kind));
  }
  Field f;
  f.spacing = layout.spacing;
  for (const auto& ax : layout.axes) {
    f.origin.push_back(ax.origin);
    f.extents.push_back(ax.count);
  }
  f.values = std::move(data);
  return f;
}

double require_positive_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("time must be finite and > 0");
  return t;
}

}  // namespace

double Field::cell_volume() const { return std::pow(spacing, static_cast<double>(extents.size())); }

Point Field::sample_point(std::size_t flat) const {
  Point p(extents.size());
  for (std::size_t k = extents.size(); k-- > 0;) {
    p[k] = origin[k] + (static_cast<double>(flat % extents[k]) + 0.5) * spacing;
    flat /= extents[k];
  }
  return p;
}

double Field::integral() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * cell_volume();
}

double Field::squared_norm() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return s * cell_volume();
}

Field heat_field(const Domain& d, double s, const GridConfig& cfg) {
  validate(cfg);
  require_positive_time(s);
  const Domain r = raster_for(d, cfg);
  return convolve(r.as_raster(), std::sqrt(2.0 * s), cfg, std::nullopt);
}

Field laplacian_field(const Domain& d, double t, const GridConfig& cfg) {
  validate(cfg);
  require_positive_time(t);
  const Domain rd = raster_for(d, cfg);
  const auto& r = rd.as_raster();
  const double sigma = std::sqrt(2.0 * t);
  Field total = convolve(r, sigma, cfg, std::size_t{0});
  for (std::size_t k = 1; k < r.extents.size(); ++k) {
    const Field part = convolve(r, sigma, cfg, k);
    for (std::size_t i = 0; i < total.values.size(); ++i) total.values[i] += part.values[i];
  }
  return total;
}

Estimate hc_grid(const Domain& d, double t, const GridConfig& cfg) {
  validate(cfg);
  require_positive_time(t);
  const Domain rd = raster_for(d, cfg);
  const auto& r = rd.as_raster();
  const double sigma = std::sqrt(t);  // convolution time t/2
  const int m = rd.dimension();

  Estimate e;
  e.method = Method::grid;
  e.kind = EstimateKind::heuristic;
  e.value = convolve(r, sigma, cfg, std::nullopt).squared_norm();

  // u^2 mass beyond the window: each axis contributes at most two Gaussian tails.
  const double tail = std::erfc(cfg.padding_sigmas / std::numbers::sqrt2);
  const double truncation = 2.0 * m * tail * volume(rd);

  // Output quadrature check at half the sample density.
  double quadrature = 0.0;
  if (cfg.samples_per_sigma >= 2.0) {
    GridConfig coarse = cfg;
    coarse.samples_per_sigma = cfg.samples_per_sigma / 2.0;
    quadrature = std::abs(convolve(r, sigma, coarse, std::nullopt).squared_norm() - e.value);
  }

  double discretization = 0.0;
  if (cfg.richardson && !d.is_raster()) {
    try {
      GridConfig twice = cfg;
      twice.h = 2.0 * r.spacing;
      twice.richardson = false;
      discretization = std::abs(hc_grid(d, t, twice).value - e.value);
      e.meta["richardson"] = 1.0;
    } catch (const EngineError&) {
      e.meta["richardson"] = 0.0;
    }
  }

  e.error_bound = truncation + quadrature + discretization + 64.0 * 2.2e-16 * e.value;
  e.meta["t"] = t;
  e.meta["h"] = r.spacing;
  e.meta["padding_sigmas"] = cfg.padding_sigmas;
  e.meta["samples_per_sigma"] = cfg.samples_per_sigma;
  e.meta["raster_cells"] = static_cast<double>(r.occupied.size());
  e.meta["raster_volume"] = volume(rd);
  return e;
}

double hc_d2_semigroup(const Domain& d, double t, const GridConfig& cfg) {
  return laplacian_field(d, t, cfg).squared_norm();
}

}  // namespace heatcontent
