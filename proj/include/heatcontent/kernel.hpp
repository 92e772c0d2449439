#pragma once

#include <cstddef>

namespace heatcontent {

/// Argument of the Euclidean heat kernel: dimension, time and squared
/// separation |x - y|^2. Kernel functions never see x and y themselves, so
/// symmetry and radial dependence hold by construction.
struct KernelPoint {
  int m;
  double t;
  double r2;
};

/// Exponents below this evaluate to exactly zero.
inline constexpr double kUnderflowExponent = -700.0;

/// (4 pi t)^{-m/2} exp(-r2 / 4t). Throws InvalidArgument unless t > 0, r2 >= 0, m >= 1.
double heat_kernel(const KernelPoint& k);

/// Time derivative (1/t) (-m/2 + r2/4t) p_t.
double heat_kernel_dt(const KernelPoint& k);

/// e^{-1/8} (4 pi t)^{-m/2}; a lower bound for p_t whenever r2 <= t/2.
double kernel_lower_bound(int m, double t);

/// Worst point of the pointwise monotonicity bound
///   d/dt p_t <= -((2m-1)/4) p_t / t     for r2 <= diam^2 <= t.
struct KernelBoundMargin {
  double margin;    // min over the r2 grid of rhs - lhs
  double worst_r2;  // where the minimum is attained
  double lhs;
  double rhs;
  std::size_t grid_points;
};

inline constexpr std::size_t kBoundGridIntervals = 2048;

/// Evaluates the bound on r2 = diam^2 * i / 2048, i = 0..2048.
/// Throws InvalidArgument("outside validity region") when t < diam^2.
KernelBoundMargin kernel_dt_bound_check(int m, double t, double diam);

}  // namespace heatcontent
