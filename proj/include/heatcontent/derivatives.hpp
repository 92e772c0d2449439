#pragma once

#include <functional>
#include <string>
#include <vector>

#include "heatcontent/engines.hpp"

namespace heatcontent {

/// t -> H(t) through some engine.
using HeatFunction = std::function<Estimate(double)>;

struct DerivativeEstimate {
  int order = 1;
  double value = 0.0;
  double step = 0.0;  // smallest step used
  double error_estimate = 0.0;
  int richardson_levels = 1;
};

/// Base step is eta * t.
inline constexpr double kDefaultStepFraction = 1e-2;

/// Richardson levels used when the caller does not choose: 2 for orders 1
/// and 2, 1 for the five-point third-derivative stencil.
int default_levels(int order);

/// Central finite difference of order 1, 2 or 3 with `levels` Richardson
/// steps (step halved per level). error_estimate is the difference between
/// the last two extrapolation levels plus the engine error amplified by the
/// stencil. Throws NoisyEngineError for statistical engines at order >= 2.
DerivativeEstimate fd_derivative(const HeatFunction& f, double t, int order, int levels = 0,
                                 double step_fraction = kDefaultStepFraction);

/// Signs of H and its first three derivatives at one time.
struct SignRow {
  double t = 0.0;
  Estimate h;
  DerivativeEstimate d1;
  DerivativeEstimate d2;
  DerivativeEstimate d3;
};

struct SignViolation {
  double t;
  int order;  // 0..3
  double value;
  double tolerance;
};

struct SignReport {
  std::vector<SignRow> rows;
  std::vector<SignViolation> violations;
  [[nodiscard]] bool ok() const { return violations.empty(); }
};

/// Third-derivative tolerances are widened by this factor.
inline constexpr double kThirdOrderToleranceFactor = 10.0;

/// Checks H >= 0, H' <= tol, H'' >= -tol, H''' <= tol on an ascending grid.
SignReport sign_pattern(const HeatFunction& f, const std::vector<double>& t_grid);

/// The first three rows of a derivative tableau, exposed for sweeps.
SignRow derivative_row(const HeatFunction& f, double t);

}  // namespace heatcontent
