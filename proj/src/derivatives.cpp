#include "heatcontent/derivatives.hpp"

#include <array>
#include <cmath>
#include <map>
#include <span>

#include "heatcontent/errors.hpp"

namespace heatcontent {

namespace {

struct Stencil {
  std::span<const int> offsets;
  std::span<const double> weights;
};

constexpr std::array<int, 2> kOffsets1{-1, 1};
constexpr std::array<double, 2> kWeights1{-0.5, 0.5};
constexpr std::array<int, 3> kOffsets2{-1, 0, 1};
constexpr std::array<double, 3> kWeights2{1.0, -2.0, 1.0};
constexpr std::array<int, 4> kOffsets3{-2, -1, 1, 2};
constexpr std::array<double, 4> kWeights3{-0.5, 1.0, -1.0, 0.5};

Stencil stencil(int order) {
  switch (order) {
    case 1: return {kOffsets1, kWeights1};
    case 2: return {kOffsets2, kWeights2};
    case 3: return {kOffsets3, kWeights3};
    default: throw InvalidArgument("derivative order must be 1, 2 or 3");
  }
}

// Memoizes engine calls; stencils at successive levels share points.
class Evaluator {
 public:
  explicit Evaluator(const HeatFunction& f) : f_(f) {}

  const Estimate& operator()(double t) {
    auto it = cache_.find(t);
    if (it == cache_.end()) it = cache_.emplace(t, f_(t)).first;
    return it->second;
  }

 private:
  const HeatFunction& f_;
  std::map<double, Estimate> cache_;
};

}  // namespace

int default_levels(int order) { return order == 3 ? 1 : 2; }

DerivativeEstimate fd_derivative(const HeatFunction& f, double t, int order, int levels, double step_fraction) {
  const Stencil st = stencil(order);
  if (levels == 0) levels = default_levels(order);
  if (levels < 1) throw InvalidArgument("richardson levels must be >= 1");
  if (!(step_fraction > 0.0 && step_fraction <= 0.25)) throw InvalidArgument("step fraction must be in (0, 0.25]");
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("derivative time must be finite and > 0");

  Evaluator eval(f);
  if (order >= 2 && eval(t).kind == EstimateKind::statistical_99) throw NoisyEngineError();

  const double base = step_fraction * t;
  const double smallest = std::ldexp(base, -levels);
  if (!(smallest > 0.0) || t + smallest == t) throw InvalidArgument("requested step underflows t");

  // tableau[i][k]: level-i difference after k extrapolations
  std::vector<std::vector<double>> tableau(levels + 1);
  double engine_error = 0.0;
  double weight_sum = 0.0;
  for (int i = 0; i <= levels; ++i) {
    const double h = std::ldexp(base, -i);
    double acc = 0.0;
    for (std::size_t s = 0; s < st.offsets.size(); ++s) {
      const Estimate& e = eval(t + st.offsets[s] * h);
      acc += st.weights[s] * e.value;
      engine_error = std::max(engine_error, e.error_bound);
      if (i == levels) weight_sum += std::abs(st.weights[s]);
    }
    tableau[i].push_back(acc / std::pow(h, order));
    for (int k = 1; k <= i; ++k) {
      const double factor = std::ldexp(1.0, 2 * k) - 1.0;
      tableau[i].push_back(tableau[i][k - 1] + (tableau[i][k - 1] - tableau[i - 1][k - 1]) / factor);
    }
  }

  // Extrapolation amplifies independent point errors by at most this much.
  double gain = 1.0;
  for (int k = 1; k <= levels; ++k) {
    const double factor = std::ldexp(1.0, 2 * k);
    gain *= (factor + 1.0) / (factor - 1.0);
  }

  DerivativeEstimate out;
  out.order = order;
  out.richardson_levels = levels;
  out.step = smallest;
  out.value = tableau[levels][levels];
  out.error_estimate = std::abs(tableau[levels][levels] - tableau[levels][levels - 1]) +
                       gain * weight_sum * engine_error / std::pow(smallest, order);
  return out;
}

SignRow derivative_row(const HeatFunction& f, double t) {
  SignRow row;
  row.t = t;
  row.h = f(t);
  row.d1 = fd_derivative(f, t, 1);
  row.d2 = fd_derivative(f, t, 2);
  row.d3 = fd_derivative(f, t, 3);
  return row;
}

SignReport sign_pattern(const HeatFunction& f, const std::vector<double>& t_grid) {
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0)) throw InvalidArgument("t grid must be strictly positive");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw InvalidArgument("t grid must be ascending");
  }
  SignReport report;
  for (double t : t_grid) {
    SignRow row = derivative_row(f, t);
    if (row.h.value < -row.h.error_bound) report.violations.push_back({t, 0, row.h.value, row.h.error_bound});
    if (row.d1.value > row.d1.error_estimate) {
      report.violations.push_back({t, 1, row.d1.value, row.d1.error_estimate});
    }
    if (row.d2.value < -row.d2.error_estimate) {
      report.violations.push_back({t, 2, row.d2.value, row.d2.error_estimate});
    }
    const double tol3 = kThirdOrderToleranceFactor * row.d3.error_estimate;
    if (row.d3.value > tol3) report.violations.push_back({t, 3, row.d3.value, tol3});
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace heatcontent
