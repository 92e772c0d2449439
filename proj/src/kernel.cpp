#include "heatcontent/kernel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "heatcontent/errors.hpp"

namespace heatcontent {

namespace {

void validate(const KernelPoint& k) {
  if (k.m < 1) throw InvalidArgument("kernel dimension must be >= 1");
  if (!(k.t > 0.0)) throw InvalidArgument("kernel time must be > 0");
  if (!(k.r2 >= 0.0)) throw InvalidArgument("squared distance must be >= 0");
}

double prefactor(int m, double t) { return std::pow(4.0 * std::numbers::pi * t, -0.5 * m); }

}  // namespace

double heat_kernel(const KernelPoint& k) {
  validate(k);
  const double exponent = -k.r2 / (4.0 * k.t);
  if (exponent < kUnderflowExponent) return 0.0;
  return prefactor(k.m, k.t) * std::exp(exponent);
}

double heat_kernel_dt(const KernelPoint& k) {
  const double p = heat_kernel(k);
  // -m/2 + r2/4t, written so that it vanishes exactly at r2 = 2mt
  return (k.r2 - 2.0 * k.m * k.t) / (4.0 * k.t * k.t) * p;
}

double kernel_lower_bound(int m, double t) {
  if (m < 1) throw InvalidArgument("kernel dimension must be >= 1");
  if (!(t > 0.0)) throw InvalidArgument("kernel time must be > 0");
  return std::exp(-0.125) * prefactor(m, t);
}

KernelBoundMargin kernel_dt_bound_check(int m, double t, double diam) {
  if (!(diam > 0.0)) throw InvalidArgument("diameter must be > 0");
  const double d2 = diam * diam;
  if (!(t >= d2 * (1.0 - 1e-12))) throw InvalidArgument("outside validity region");
  const double coeff = (2.0 * m - 1.0) / 4.0;
  KernelBoundMargin out{std::numeric_limits<double>::infinity(), 0.0, 0.0, 0.0, kBoundGridIntervals + 1};
  for (std::size_t i = 0; i <= kBoundGridIntervals; ++i) {
    const double r2 = i == kBoundGridIntervals ? d2 : d2 * static_cast<double>(i) / kBoundGridIntervals;
    const KernelPoint kp{m, t, r2};
    const double lhs = heat_kernel_dt(kp);
    const double rhs = -coeff * heat_kernel(kp) / t;
    // rhs - lhs simplifies to p (t - r2) / 4t^2; evaluate it without cancellation.
    const double margin = heat_kernel(kp) * (t - r2) / (4.0 * t * t);
    if (margin < out.margin) out = {margin, r2, lhs, rhs, out.grid_points};
  }
  return out;
}

}  // namespace heatcontent
