#include "heatcontent/inequalities.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "heatcontent/errors.hpp"
#include "heatcontent/format.hpp"
#include "heatcontent/kernel.hpp"

namespace heatcontent {

namespace {

constexpr double kPi = std::numbers::pi;

double e_minus_eighth() { return std::exp(-0.125); }

double half_m(int m) { return 0.5 * m; }

// ((2m-1)/2)^2
double convexity_constant(int m) { return improved_constants(m).conv; }

// e^{-1/8} (4 pi)^{-m/2} |Omega|^2
double lower_bound_scale(int m, double volume) {
  return e_minus_eighth() * std::pow(4.0 * kPi, -half_m(m)) * volume * volume;
}

RhsTerms rhs_i05(int m, double t, double, double) { return {-improved_constants(m).mono / t, 0.0}; }

RhsTerms rhs_i06(int m, double t, double, double) { return {convexity_constant(m) / (t * t), 0.0}; }

RhsTerms rhs_i07(int m, double t, double volume, double) {
  return {0.0, e_minus_eighth() * volume * volume * std::pow(4.0 * kPi * t, -half_m(m))};
}

RhsTerms rhs_i08(int m, double t, double volume, double) {
  return {0.0, convexity_constant(m) * lower_bound_scale(m, volume) * std::pow(t, -half_m(m) - 2.0)};
}

double integrated_coefficient(int m) { return convexity_constant(m) / (half_m(m) + 1.0); }

RhsTerms rhs_i09(int m, double t, double volume, double) {
  return {0.0, -integrated_coefficient(m) * lower_bound_scale(m, volume) * std::pow(t, -half_m(m) - 1.0)};
}

RhsTerms rhs_i010(int m, double, double volume, double diam) {
  const double threshold = 2.0 * diam * diam;
  return {0.0, -integrated_coefficient(m) * lower_bound_scale(m, volume) * std::pow(threshold, -half_m(m) - 1.0)};
}

RhsTerms rhs_i011(int m, double, double volume, double diam) {
  const double threshold = 2.0 * diam * diam;
  return {0.0, convexity_constant(m) * lower_bound_scale(m, volume) * std::pow(threshold, -half_m(m) - 2.0)};
}

RhsTerms rhs_bg24_mono(int m, double t, double, double) { return {-bg24_constants(m).mono / t, 0.0}; }

RhsTerms rhs_bg24_conv(int m, double t, double, double) { return {bg24_constants(m).conv / (t * t), 0.0}; }

RhsTerms rhs_unused(int, double, double, double) { return {}; }

constexpr double kInf = std::numeric_limits<double>::infinity();

int derivative_order(Quantity q) {
  switch (q) {
    case Quantity::first_derivative: return 1;
    case Quantity::second_derivative: return 2;
    default: return 0;
  }
}

}  // namespace

std::string to_string(CaseId id) {
  switch (id) {
    case CaseId::I04: return "I04";
    case CaseId::I05: return "I05";
    case CaseId::I06: return "I06";
    case CaseId::I07: return "I07";
    case CaseId::I08: return "I08";
    case CaseId::I09: return "I09";
    case CaseId::I010: return "I010";
    case CaseId::I011: return "I011";
    case CaseId::BG24_MONO: return "BG24_MONO";
    case CaseId::BG24_CONV: return "BG24_CONV";
  }
  return "unknown";
}

CaseId parse_case_id(const std::string& name) {
  for (CaseId id : all_cases()) {
    if (to_string(id) == name) return id;
  }
  throw InvalidArgument("unknown inequality case \"" + name + "\"");
}

const std::vector<CaseId>& all_cases() {
  static const std::vector<CaseId> ids{CaseId::I04, CaseId::I05,  CaseId::I06,  CaseId::I07,       CaseId::I08,
                                       CaseId::I09, CaseId::I010, CaseId::I011, CaseId::BG24_MONO, CaseId::BG24_CONV};
  return ids;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::clipped: return "clipped";
  }
  return "unknown";
}

bool ValidityWindow::contains(double t, double diam) const {
  const double d2 = diam * diam;
  constexpr double slack = 1e-12;
  if (lower_multiplier == 0.0) {
    if (!(t > 0.0)) return false;
  } else if (t < lower_multiplier * d2 * (1.0 - slack)) {
    return false;
  }
  return t <= upper_multiplier * d2 * (1.0 + slack);
}

InequalityCase build_case(CaseId id) {
  using enum Quantity;
  using enum Direction;
  switch (id) {
    case CaseId::I04:
      return {id, {1.0, kInf}, kernel_dt_pointwise, less_equal, rhs_unused,
              "d/dt p_t <= -((2m-1)/4) p_t / t for |x-y| <= diam, t >= diam^2"};
    case CaseId::I05:
      return {id, {1.0, kInf}, first_derivative, less_equal, rhs_i05, "H' <= -((2m-1)/4) H / t, t >= diam^2"};
    case CaseId::I06:
      return {id, {2.0, kInf}, second_derivative, greater_equal, rhs_i06,
              "H'' >= ((2m-1)/2)^2 H / t^2, t >= 2 diam^2"};
    case CaseId::I07:
      return {id, {2.0, kInf}, value, greater_equal, rhs_i07,
              "H >= e^{-1/8} |Omega|^2 (4 pi t)^{-m/2}, t >= 2 diam^2"};
    case CaseId::I08:
      return {id, {2.0, kInf}, second_derivative, greater_equal, rhs_i08,
              "H'' >= ((2m-1)/2)^2 e^{-1/8} (4 pi)^{-m/2} |Omega|^2 t^{-m/2-2}, t >= 2 diam^2"};
    case CaseId::I09:
      return {id, {2.0, kInf}, first_derivative, less_equal, rhs_i09,
              "H' <= -((2m-1)/2)^2 / (m/2+1) e^{-1/8} (4 pi)^{-m/2} |Omega|^2 t^{-m/2-1}, t >= 2 diam^2"};
    case CaseId::I010:
      return {id, {0.0, 2.0}, first_derivative, less_equal, rhs_i010,
              "H' <= -((2m-1)/2)^2 / (m/2+1) e^{-1/8} (4 pi)^{-m/2} |Omega|^2 (2 diam^2)^{-m/2-1}, t <= 2 diam^2"};
    case CaseId::I011:
      return {id, {0.0, 2.0}, second_derivative, greater_equal, rhs_i011,
              "H'' >= ((2m-1)/2)^2 e^{-1/8} (4 pi)^{-m/2} |Omega|^2 (2 diam^2)^{-m/2-2}, t <= 2 diam^2"};
    case CaseId::BG24_MONO:
      return {id, {1.0, kInf}, first_derivative, less_equal, rhs_bg24_mono,
              "H' <= -((4m^2+4m-7) / (8(m+2) e^{1/4})) H / t, t >= diam^2"};
    case CaseId::BG24_CONV:
      return {id, {1.0, kInf}, second_derivative, greater_equal, rhs_bg24_conv,
              "H'' >= ((4m^2+4m-7)/16) H / t^2, t >= diam^2"};
  }
  throw InvalidArgument("unknown inequality case");
}

Method default_method(const Domain& d) { return has_closed_form(d) ? Method::closed : Method::grid; }

Domain verification_domain(const Domain& d, const EngineChoice& engine) {
  if (d.is_raster()) return d;
  if (engine.method == Method::grid || engine.method == Method::brute) {
    return rasterize(d, engine.config.grid.h > 0.0 ? engine.config.grid.h : default_spacing(d));
  }
  return d;
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t n) {
  if (n == 0) throw InvalidArgument("grid must have at least one point");
  if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi)) {
    throw InvalidArgument("geometric grid needs 0 < lo <= hi");
  }
  if (n == 1) return {lo};
  std::vector<double> grid(n);
  const double ratio = std::log(hi / lo);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = lo * std::exp(ratio * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

std::vector<double> default_t_grid(CaseId id, double diam, std::size_t n) {
  const auto c = build_case(id);
  const double d2 = diam * diam;
  if (c.validity.lower_multiplier == 0.0) {
    return geometric_grid(0.05 * d2, c.validity.upper_multiplier * d2, n);
  }
  const double lo = c.validity.lower_multiplier * d2;
  return geometric_grid(lo, 100.0 * lo, n);
}

VerificationReport verify(const InequalityCase& c, const Domain& d, const std::vector<double>& t_grid,
                          const EngineChoice& engine, const TolerancePolicy& policy, const std::string& domain_id) {
  if (engine.method == Method::closed && !has_closed_form(d)) {
    throw InvalidArgument("no closed form for domain kind " + d.kind());
  }
  const Domain vd = verification_domain(d, engine);
  VerificationReport report;
  report.case_id = c.id;
  report.domain_id = domain_id.empty() ? describe(vd) : domain_id;
  report.m = vd.dimension();
  report.volume = volume(vd);
  report.diameter = diameter(vd);

  const HeatFunction f = [&](double t) { return heat_content(vd, t, engine.method, engine.config); };

  for (double t : t_grid) {
    VerificationRow row;
    row.t = t;
    if (!c.validity.contains(t, report.diameter)) {
      row.lhs = row.rhs = row.margin = std::numeric_limits<double>::quiet_NaN();
      row.tolerance = 0.0;
      row.verdict = Verdict::clipped;
      report.rows.push_back(row);
      continue;
    }
    double lhs_error = 0.0;
    if (c.lhs == Quantity::kernel_dt_pointwise) {
      const auto check = kernel_dt_bound_check(report.m, t, report.diameter);
      row.lhs = check.lhs;
      row.rhs = check.rhs;
      row.margin = check.margin;
    } else {
      const Estimate h = f(t);
      const int order = derivative_order(c.lhs);
      if (order == 0) {
        row.lhs = h.value;
        lhs_error = h.error_bound;
      } else {
        const auto dh = fd_derivative(f, t, order);
        row.lhs = dh.value;
        lhs_error = dh.error_estimate;
      }
      const RhsTerms terms = c.rhs(report.m, t, report.volume, report.diameter);
      row.rhs = terms.h_coefficient * h.value + terms.constant;
      lhs_error += std::abs(terms.h_coefficient) * h.error_bound;
      row.margin = c.direction == Direction::less_equal ? row.rhs - row.lhs : row.lhs - row.rhs;
    }
    row.tolerance = policy.scale * lhs_error + policy.absolute_floor;
    row.verdict = row.margin >= -row.tolerance ? Verdict::pass : Verdict::fail;
    if (row.verdict == Verdict::fail) report.overall_pass = false;
    report.rows.push_back(row);
  }
  return report;
}

void write_report_csv(std::ostream& os, const std::vector<VerificationReport>& reports,
                      const std::vector<std::string>& metadata) {
  for (const auto& line : metadata) os << "# " << line << '\n';
  os << "case_id,domain_id,m,t,lhs,rhs,margin,tolerance,verdict\n";
  for (const auto& r : reports) {
    for (const auto& row : r.rows) {
      os << to_string(r.case_id) << ',' << r.domain_id << ',' << r.m << ',' << shortest(row.t) << ','
         << shortest(row.lhs) << ',' << shortest(row.rhs) << ',' << shortest(row.margin) << ','
         << shortest(row.tolerance) << ',' << to_string(row.verdict) << '\n';
    }
  }
}

ConstantPair improved_constants(int m) {
  if (m < 1) throw InvalidArgument("dimension must be >= 1");
  const double a = 2.0 * m - 1.0;
  return {a / 4.0, (a / 2.0) * (a / 2.0)};
}

ConstantPair bg24_constants(int m) {
  if (m < 1) throw InvalidArgument("dimension must be >= 1");
  const double q = 4.0 * m * m + 4.0 * m - 7.0;
  return {q / (8.0 * (m + 2.0) * std::exp(0.25)), q / 16.0};
}

SharpnessVerdict sharpness_compare(int m) {
  if (m < 1) throw InvalidArgument("dimension must be >= 1");
  const double a = 2.0 * m - 1.0;
  SharpnessVerdict v{a / 4.0, a * a / (2.0 * (m + 2.0)), false};
  v.integrated_sharper = v.c_integrated > v.c_direct;
  return v;
}

std::vector<ConstantsRow> compare_constants(int m_lo, int m_hi) {
  if (m_lo < 1 || m_hi < m_lo) throw InvalidArgument("dimension range must satisfy 1 <= lo <= hi");
  std::vector<ConstantsRow> rows;
  for (int m = m_lo; m <= m_hi; ++m) {
    const auto imp = improved_constants(m);
    const auto bg = bg24_constants(m);
    rows.push_back({m, imp.mono, bg.mono, imp.mono / bg.mono, imp.conv, bg.conv, imp.conv / bg.conv,
                    sharpness_compare(m).integrated_sharper});
  }
  return rows;
}

void write_constants_csv(std::ostream& os, const std::vector<ConstantsRow>& rows) {
  os << "m,improved_mono,bg24_mono,ratio_mono,improved_conv,bg24_conv,ratio_conv,integrated_sharper\n";
  for (const auto& r : rows) {
    os << r.m << ',' << shortest(r.improved_mono) << ',' << shortest(r.bg24_mono) << ',' << shortest(r.ratio_mono)
       << ',' << shortest(r.improved_conv) << ',' << shortest(r.bg24_conv) << ',' << shortest(r.ratio_conv) << ','
       << (r.integrated_sharper ? "true" : "false") << '\n';
  }
}

double first_derivative_envelope(int m, double volume, double t) {
  return half_m(m) * volume * volume * std::pow(4.0 * kPi * t, -half_m(m)) / t;
}

}  // namespace heatcontent
