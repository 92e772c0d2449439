#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "heatcontent/derivatives.hpp"
#include "heatcontent/engines.hpp"
#include "heatcontent/geometry.hpp"

namespace heatcontent {

enum class CaseId { I04, I05, I06, I07, I08, I09, I010, I011, BG24_MONO, BG24_CONV };

std::string to_string(CaseId id);
CaseId parse_case_id(const std::string& name);
const std::vector<CaseId>& all_cases();

enum class Direction { less_equal, greater_equal };

/// What the left-hand side measures.
enum class Quantity {
  kernel_dt_pointwise,  // d/dt p_t on the r^2 grid (I04)
  value,                // H(t)
  first_derivative,     // H'(t)
  second_derivative,    // H''(t)
};

/// Times t with lower * diam^2 <= t <= upper * diam^2. A zero lower
/// multiplier means the open bound t > 0.
struct ValidityWindow {
  double lower_multiplier = 1.0;
  double upper_multiplier = std::numeric_limits<double>::infinity();

  [[nodiscard]] bool contains(double t, double diam) const;
};

/// The right-hand side is affine in H: rhs = h_coefficient * H + constant.
struct RhsTerms {
  double h_coefficient = 0.0;
  double constant = 0.0;
};

using RhsFormula = RhsTerms (*)(int m, double t, double volume, double diam);

struct InequalityCase {
  CaseId id;
  ValidityWindow validity;
  Quantity lhs;
  Direction direction;
  RhsFormula rhs;
  std::string formula;  // human-readable statement
};

InequalityCase build_case(CaseId id);

struct TolerancePolicy {
  double absolute_floor = 1e-9;
  /// Multiplies the propagated engine and derivative errors.
  double scale = 1.0;
};

enum class Verdict { pass, fail, clipped };
std::string to_string(Verdict v);

struct VerificationRow {
  double t = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // >= 0 means the inequality holds
  double tolerance = 0.0;
  Verdict verdict = Verdict::pass;
};

struct VerificationReport {
  CaseId case_id;
  std::string domain_id;
  int m = 0;
  double volume = 0.0;
  double diameter = 0.0;
  std::vector<VerificationRow> rows;
  bool overall_pass = true;
};

struct EngineChoice {
  Method method = Method::closed;
  EngineConfig config;
};

/// Engine used when the caller does not pick one: closed form if the domain
/// has one, the grid engine otherwise.
Method default_method(const Domain& d);

/// The set the verification is about. Grid and brute-force engines work on
/// a raster, so volume, diameter and H all refer to the rasterized set.
Domain verification_domain(const Domain& d, const EngineChoice& engine);

/// n points lo * (hi/lo)^{i/(n-1)}, with both endpoints exact.
std::vector<double> geometric_grid(double lo, double hi, std::size_t n);

/// n-point geometric grid inside the case's window: [k, 100 k] diam^2 for
/// large-time cases and [0.05, 2] diam^2 for the small-time ones.
std::vector<double> default_t_grid(CaseId id, double diam, std::size_t n = 20);

/// Checks one inequality on one domain. Times outside the validity window
/// produce `clipped` rows and are not evaluated.
VerificationReport verify(const InequalityCase& c, const Domain& d, const std::vector<double>& t_grid,
                          const EngineChoice& engine = {}, const TolerancePolicy& policy = {},
                          const std::string& domain_id = "");

/// Writes the normative report CSV; `metadata` lines are emitted as
/// "# <line>" before the header.
void write_report_csv(std::ostream& os, const std::vector<VerificationReport>& reports,
                      const std::vector<std::string>& metadata = {});

// -- constants ---------------------------------------------------------------

struct ConstantPair {
  double mono;
  double conv;
};

/// ((2m-1)/4, ((2m-1)/2)^2).
ConstantPair improved_constants(int m);
/// ((4m^2+4m-7) / (8(m+2) e^{1/4}), (4m^2+4m-7)/16).
ConstantPair bg24_constants(int m);

struct ConstantsRow {
  int m;
  double improved_mono;
  double bg24_mono;
  double ratio_mono;
  double improved_conv;
  double bg24_conv;
  double ratio_conv;
  bool integrated_sharper;
};

std::vector<ConstantsRow> compare_constants(int m_lo, int m_hi);
void write_constants_csv(std::ostream& os, const std::vector<ConstantsRow>& rows);

/// Coefficient of |Omega|^2 e^{-1/8} (4 pi)^{-m/2} t^{-m/2-1} in the
/// integrated first-derivative bound versus the product of the direct
/// monotonicity bound with the kernel lower bound.
struct SharpnessVerdict {
  double c_direct;      // (2m-1)/4
  double c_integrated;  // (2m-1)^2 / (2(m+2))
  bool integrated_sharper;
};

SharpnessVerdict sharpness_compare(int m);

/// (m/2) |Omega|^2 (4 pi t)^{-m/2} / t, an upper bound for |H'(t)| whenever
/// t >= diam^2 / 4m (the kernel bracket then stays within [-m/2, m/2]).
double first_derivative_envelope(int m, double volume, double t);

}  // namespace heatcontent
