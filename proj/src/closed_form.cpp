#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <variant>

#include "heatcontent/engines.hpp"
#include "heatcontent/errors.hpp"

namespace heatcontent {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("time must be finite and >= 0");
}

// J(-|z|) where J'' is the N(0, s^2) density and J(z) - J(-z) = z.
double tail_antiderivative(double z, double s) {
  const double a = std::abs(z) / s;
  return s * std::exp(-0.5 * a * a) / std::sqrt(2.0 * std::numbers::pi) -
         std::abs(z) * 0.5 * std::erfc(a / std::numbers::sqrt2);
}

// int_a^b int_c^d g(x - y) dy dx for the 1-D kernel of variance 2t.
// Split as overlap length plus rapidly decaying tail terms.
double cross_term(double a, double b, double c, double d, double t) {
  const double overlap = std::max(0.0, std::min(b, d) - std::max(a, c));
  if (t == 0.0) return overlap;
  const double s = std::sqrt(2.0 * t);
  return overlap + tail_antiderivative(b - c, s) - tail_antiderivative(a - c, s) -
         tail_antiderivative(b - d, s) + tail_antiderivative(a - d, s);
}

}  // namespace

Estimate hc_closed_interval(double length, double t) {
  if (!(length > 0.0)) throw InvalidArgument("interval length must be > 0");
  require_time(t);
  Estimate e;
  e.method = Method::closed;
  e.kind = EstimateKind::certified;
  e.meta = {{"length", length}, {"t", t}};
  if (t == 0.0) {
    e.value = length;
    return e;
  }
  const double x = length / (2.0 * std::sqrt(t));
  const double first = length * std::erf(x);
  const double second = 2.0 * std::sqrt(t / std::numbers::pi) * std::expm1(-x * x);
  e.value = first + second;
  // erf/expm1/sqrt are accurate to a few ulp; bound the rounding of the two
  // terms and their sum.
  e.error_bound = 16.0 * kEps * (std::abs(first) + std::abs(second));
  return e;
}

Estimate hc_closed_box(const std::vector<double>& lengths, double t) {
  if (lengths.empty()) throw InvalidArgument("box needs at least one length");
  Estimate e;
  e.method = Method::closed;
  e.kind = EstimateKind::certified;
  e.value = 1.0;
  double rel = 0.0;
  for (double l : lengths) {
    const auto f = hc_closed_interval(l, t);
    e.value *= f.value;
    rel += f.error_bound / f.value + kEps;
  }
  e.error_bound = rel * e.value;
  e.meta = {{"t", t}, {"dimension", static_cast<double>(lengths.size())}};
  return e;
}

Estimate hc_closed_box_union(const std::vector<AxisBox>& boxes, double t) {
  require_time(t);
  if (boxes.empty()) throw InvalidArgument("box union needs at least one box");
  const std::size_t m = boxes.front().corner.size();
  Estimate e;
  e.method = Method::closed;
  e.kind = EstimateKind::certified;
  double magnitude = 0.0;
  for (const auto& bi : boxes) {
    for (const auto& bj : boxes) {
      double term = 1.0;
      for (std::size_t k = 0; k < m; ++k) {
        term *= cross_term(bi.corner[k], bi.corner[k] + bi.lengths[k], bj.corner[k],
                           bj.corner[k] + bj.lengths[k], t);
      }
      e.value += term;
      magnitude += std::abs(term);
    }
  }
  e.error_bound = 32.0 * kEps * (magnitude + static_cast<double>(boxes.size() * boxes.size()) * e.value);
  e.meta = {{"t", t}, {"boxes", static_cast<double>(boxes.size())}};
  return e;
}

bool has_closed_form(const Domain& d) {
  return std::holds_alternative<Interval>(d.shape()) || std::holds_alternative<Box>(d.shape()) ||
         std::holds_alternative<BoxUnion>(d.shape());
}

Estimate hc_closed(const Domain& d, double t) {
  if (const auto* s = std::get_if<Interval>(&d.shape())) return hc_closed_interval(s->length, t);
  if (const auto* s = std::get_if<Box>(&d.shape())) return hc_closed_box(s->lengths, t);
  if (const auto* s = std::get_if<BoxUnion>(&d.shape())) return hc_closed_box_union(s->boxes, t);
  throw InvalidArgument("no closed form for domain kind " + d.kind());
}

}  // namespace heatcontent
