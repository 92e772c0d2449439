#include "heatcontent/cli.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "heatcontent/derivatives.hpp"
#include "heatcontent/engines.hpp"
#include "heatcontent/errors.hpp"
#include "heatcontent/format.hpp"
#include "heatcontent/geometry.hpp"
#include "heatcontent/inequalities.hpp"

namespace heatcontent::cli {

namespace {

struct Options {
  std::vector<std::string> domains;
  std::string engine = "auto";
  double t = -1.0;
  std::string t_grid;
  std::string cases = "all";
  std::string output;
  std::string m_range = "1:20";
  double h = 0.0;
  double padding_sigmas = 8.0;
  double samples_per_sigma = 4.0;
  bool richardson = false;
  std::size_t n_samples = 1'000'000;
  std::uint64_t seed = Rng::kDefaultSeed;
  double tolerance_floor = 1e-9;
  double tolerance_scale = 1.0;
};

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("not a number: \"" + s + "\"");
  }
  if (used != s.size()) throw InvalidArgument("not a number: \"" + s + "\"");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

EngineConfig engine_config(const Options& o) {
  EngineConfig cfg;
  cfg.grid.h = o.h;
  cfg.grid.padding_sigmas = o.padding_sigmas;
  cfg.grid.samples_per_sigma = o.samples_per_sigma;
  cfg.grid.richardson = o.richardson;
  cfg.mc.n_samples = o.n_samples;
  cfg.mc.seed = o.seed;
  return cfg;
}

Method resolve_method(const Options& o, const Domain& d) {
  return o.engine == "auto" ? default_method(d) : parse_method(o.engine);
}

std::string domain_id(const std::string& path) { return std::filesystem::path(path).stem().string(); }

// Human-facing numbers keep 12 significant digits and always show a decimal point.
std::string human(double v) {
  std::string s = significant12(v);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::vector<std::string> common_metadata(const std::string& command, const Options& o) {
  return {"heatcontent " + command, "engine: " + o.engine, "seed: " + std::to_string(o.seed),
          "n_samples: " + std::to_string(o.n_samples), "h: " + shortest(o.h),
          "padding_sigmas: " + shortest(o.padding_sigmas), "samples_per_sigma: " + shortest(o.samples_per_sigma)};
}

// Output goes to the file named by --output, else to `fallback`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw InvalidArgument("cannot open output file " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& stream() { return *stream_; }
  [[nodiscard]] bool to_file() const { return file_ != nullptr; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

int run_compute(const Options& o, std::ostream& out) {
  if (o.domains.size() != 1) throw InvalidArgument("compute needs exactly one --domain");
  if (!(o.t >= 0.0)) throw InvalidArgument("compute needs --t >= 0");
  const Domain d = load_domain(o.domains.front());
  const Method method = resolve_method(o, d);
  if (o.t == 0.0 && method != Method::closed) throw InvalidArgument("t = 0 is only available in closed form");
  const Estimate e = heat_content(d, o.t, method, engine_config(o));
  out << "domain: " << describe(d) << '\n'
      << "t: " << human(o.t) << '\n'
      << "value: " << human(e.value) << '\n'
      << "error_bound: " << human(e.error_bound) << '\n'
      << "kind: " << to_string(e.kind) << '\n'
      << "method: " << to_string(method) << '\n';
  if (method == Method::mc) out << "seed: " << o.seed << '\n';
  return kSuccess;
}

int run_verify(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.domains.empty()) throw InvalidArgument("verify needs at least one --domain");
  std::vector<CaseId> cases;
  if (o.cases == "all") {
    cases = all_cases();
  } else {
    for (const auto& name : split(o.cases, ',')) cases.push_back(parse_case_id(name));
  }
  std::optional<std::vector<double>> grid;
  if (!o.t_grid.empty()) grid = parse_t_grid(o.t_grid);

  // Load everything before producing output so config errors leave no CSV.
  std::vector<std::pair<std::string, Domain>> domains;
  for (const auto& path : o.domains) domains.emplace_back(domain_id(path), load_domain(path));

  TolerancePolicy policy{o.tolerance_floor, o.tolerance_scale};
  auto metadata = common_metadata("verify", o);
  metadata.push_back("t_grid: " + (o.t_grid.empty() ? std::string("default") : o.t_grid));
  metadata.push_back("tolerance_floor: " + shortest(policy.absolute_floor));
  metadata.push_back("tolerance_scale: " + shortest(policy.scale));

  std::vector<VerificationReport> reports;
  for (const auto& [id, d] : domains) {
    EngineChoice engine{resolve_method(o, d), engine_config(o)};
    const Domain vd = verification_domain(d, engine);
    metadata.push_back("domain " + id + ": " + describe(vd) + " engine=" + to_string(engine.method) +
                       " m=" + std::to_string(vd.dimension()) + " volume=" + shortest(volume(vd)) +
                       " diameter=" + shortest(diameter(vd)));
    for (CaseId c : cases) {
      const auto t_grid = grid ? *grid : default_t_grid(c, diameter(vd));
      reports.push_back(verify(build_case(c), vd, t_grid, engine, policy, id));
    }
  }

  Sink sink(o.output, out);
  write_report_csv(sink.stream(), reports, metadata);
  std::ostream& summary = sink.to_file() ? out : err;
  bool all_pass = true;
  for (const auto& r : reports) {
    std::size_t evaluated = 0;
    std::size_t failed = 0;
    for (const auto& row : r.rows) {
      if (row.verdict != Verdict::clipped) ++evaluated;
      if (row.verdict == Verdict::fail) ++failed;
    }
    all_pass = all_pass && r.overall_pass;
    summary << to_string(r.case_id) << ' ' << r.domain_id << ": " << (r.overall_pass ? "pass" : "FAIL") << " ("
            << evaluated << " evaluated, " << failed << " failed, " << r.rows.size() - evaluated << " clipped)\n";
  }
  return all_pass ? kSuccess : kInequalityViolated;
}

int run_sweep(const Options& o, std::ostream& out) {
  if (o.domains.size() != 1) throw InvalidArgument("sweep needs exactly one --domain");
  const auto grid = parse_t_grid(o.t_grid);
  const Domain d = load_domain(o.domains.front());
  const Method method = resolve_method(o, d);
  if (method == Method::mc) throw NoisyEngineError();
  const EngineConfig cfg = engine_config(o);
  const Domain vd = verification_domain(d, EngineChoice{method, cfg});
  const HeatFunction f = [&](double t) { return heat_content(vd, t, method, cfg); };

  std::vector<SignRow> rows;
  for (double t : grid) rows.push_back(derivative_row(f, t));

  Sink sink(o.output, out);
  auto metadata = common_metadata("sweep", o);
  metadata.push_back("domain " + domain_id(o.domains.front()) + ": " + describe(vd) +
                     " engine=" + to_string(method));
  metadata.push_back("t_grid: " + o.t_grid);
  for (const auto& line : metadata) sink.stream() << "# " << line << '\n';
  sink.stream() << "t,H,H_err,dH1,dH1_err,dH2,dH2_err,dH3,dH3_err\n";
  for (const auto& r : rows) {
    sink.stream() << shortest(r.t) << ',' << shortest(r.h.value) << ',' << shortest(r.h.error_bound) << ','
                  << shortest(r.d1.value) << ',' << shortest(r.d1.error_estimate) << ',' << shortest(r.d2.value)
                  << ',' << shortest(r.d2.error_estimate) << ',' << shortest(r.d3.value) << ','
                  << shortest(r.d3.error_estimate) << '\n';
  }
  return kSuccess;
}

int run_compare(const Options& o, std::ostream& out) {
  const auto bounds = split(o.m_range, ':');
  if (bounds.size() != 2) throw InvalidArgument("--m-range must look like <lo>:<hi>");
  const double lo = parse_number(bounds[0]);
  const double hi = parse_number(bounds[1]);
  if (lo != std::floor(lo) || hi != std::floor(hi)) throw InvalidArgument("--m-range bounds must be integers");
  const auto rows = compare_constants(static_cast<int>(lo), static_cast<int>(hi));
  Sink sink(o.output, out);
  write_constants_csv(sink.stream(), rows);
  return kSuccess;
}

void add_engine_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--engine", o.engine, "closed | grid | mc | brute (default: closed when available, else grid)")
      ->check(CLI::IsMember({"auto", "closed", "grid", "mc", "brute"}));
  cmd->add_option("--h", o.h, "raster spacing for grid/brute engines (0 = 50 cells per smallest feature)");
  cmd->add_option("--padding-sigmas", o.padding_sigmas, "grid window half-width in kernel standard deviations");
  cmd->add_option("--samples-per-sigma", o.samples_per_sigma, "grid output density");
  cmd->add_flag("--richardson", o.richardson, "add an h vs 2h rasterization estimate to grid error bounds");
  cmd->add_option("--n-samples", o.n_samples, "Monte Carlo sample count");
  cmd->add_option("--seed", o.seed, "Monte Carlo seed");
}

}  // namespace

std::vector<double> parse_t_grid(const std::string& spec) {
  std::vector<double> grid;
  if (spec.rfind("geom:", 0) == 0) {
    const auto parts = split(spec.substr(5), ':');
    if (parts.size() != 3) throw InvalidArgument("geom grid must look like geom:<lo>:<hi>:<n>");
    const double n = parse_number(parts[2]);
    if (n < 1 || n != std::floor(n)) throw InvalidArgument("geom grid point count must be a positive integer");
    grid = geometric_grid(parse_number(parts[0]), parse_number(parts[1]), static_cast<std::size_t>(n));
  } else if (spec.rfind("list:", 0) == 0) {
    for (const auto& v : split(spec.substr(5), ',')) {
      if (!v.empty()) grid.push_back(parse_number(v));
    }
  } else {
    throw InvalidArgument("t grid must start with geom: or list:");
  }
  if (grid.empty()) throw InvalidArgument("t grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) throw InvalidArgument("t grid values must be positive");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw InvalidArgument("t grid must be strictly ascending");
  }
  return grid;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Euclidean heat content: engines, derivatives and inequality checks", "heatcontent"};
  app.require_subcommand(1);
  // "-h" would clash with the grid spacing option "--h".
  app.set_help_flag("--help", "print this help message and exit");
  Options o;

  auto* compute = app.add_subcommand("compute", "compute H(t) for one domain");
  compute->add_option("--domain", o.domains, "domain JSON file")->required()->expected(1);
  compute->add_option("--t", o.t, "time t >= 0")->required();
  add_engine_options(compute, o);

  auto* verify_cmd = app.add_subcommand("verify", "check inequality cases and write a report CSV");
  verify_cmd->add_option("--domain", o.domains, "domain JSON file (repeatable)")->required();
  verify_cmd->add_option("--cases", o.cases, "comma-separated case ids or 'all'");
  verify_cmd->add_option("--t-grid", o.t_grid, "geom:<lo>:<hi>:<n> or list:v1,v2,... (default: per-case window)");
  verify_cmd->add_option("--output", o.output, "CSV path (default: stdout)");
  verify_cmd->add_option("--tolerance-floor", o.tolerance_floor, "absolute tolerance floor");
  verify_cmd->add_option("--tolerance-scale", o.tolerance_scale, "multiplier on propagated errors");
  add_engine_options(verify_cmd, o);

  auto* sweep = app.add_subcommand("sweep", "tabulate H and its first three derivatives");
  sweep->add_option("--domain", o.domains, "domain JSON file")->required()->expected(1);
  sweep->add_option("--t-grid", o.t_grid, "geom:<lo>:<hi>:<n> or list:v1,v2,...")->required();
  sweep->add_option("--output", o.output, "CSV path (default: stdout)");
  add_engine_options(sweep, o);

  auto* compare = app.add_subcommand("compare-constants", "improved vs baseline constants table");
  compare->add_option("--m-range", o.m_range, "<lo>:<hi> (default 1:20)");
  compare->add_option("--output", o.output, "CSV path (default: stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (*compute) return run_compute(o, out);
    if (*verify_cmd) return run_verify(o, out, err);
    if (*sweep) return run_sweep(o, out);
    if (*compare) return run_compare(o, out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const EngineError& e) {
    err << "engine failure: " << e.what() << '\n';
    return kEngineFailure;
  } catch (const std::exception& e) {
    err << "engine failure: " << e.what() << '\n';
    return kEngineFailure;
  }
  return kUsageError;
}

}  // namespace heatcontent::cli
