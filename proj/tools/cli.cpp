#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sphsieve/concentration.hpp"
#include "sphsieve/errors.hpp"
#include "sphsieve/io.hpp"
#include "sphsieve/recovery.hpp"
#include "sphsieve/sieve.hpp"
#include "sphsieve/specfun.hpp"
#include "sphsieve/zonal.hpp"

namespace sphsieve::cli {

namespace {

struct RunConfig {
  std::string subcommand;
  std::string L = "";  // integer, or "a:b" for the tables
  double theta = std::numbers::pi / 4;
  double p = 2.0;
  std::string caps;
  std::uint64_t seed = 1;
  int samples = 0;  // 0 keeps the module default
  std::string out;
  std::string format = "json";
  int threads = 1;
  int iters = 50;
  std::string points;
  std::string coeffs;
  std::string strategy = "greedy";
  std::string scan;
};

struct Range {
  int lo, hi;
};

Range parse_range(const std::string& s, Range fallback) {
  if (s.empty()) return fallback;
  const auto colon = s.find(':');
  try {
    std::size_t used = 0;
    if (colon == std::string::npos) {
      const int v = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return {v, v};
    }
    const std::string a = s.substr(0, colon), b = s.substr(colon + 1);
    const int lo = std::stoi(a, &used);
    if (used != a.size()) throw std::invalid_argument(s);
    const int hi = std::stoi(b, &used);
    if (used != b.size()) throw std::invalid_argument(s);
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw InputError("--L: expected an integer or a range a:b, got '" + s + "'");
  }
}

int parse_degree(const std::string& s, int fallback) {
  const Range r = parse_range(s, {fallback, fallback});
  if (r.lo != r.hi) throw InputError("--L: this subcommand takes a single degree");
  if (r.lo < 1) throw InputError("--L: degree must be >= 1");
  return r.lo;
}

Json config_json(const RunConfig& c) {
  return Json{{"subcommand", c.subcommand}, {"L", c.L},           {"theta", c.theta},
              {"p", c.p},                   {"caps", c.caps},     {"seed", c.seed},
              {"samples", c.samples},       {"threads", c.threads}, {"iters", c.iters},
              {"points", c.points},         {"coeffs", c.coeffs}, {"strategy", c.strategy},
              {"scan", c.scan},             {"format", c.format}, {"out", c.out}};
}

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void flatten(const Json& j, const std::string& prefix, std::ostream& os) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, os);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), os);
  } else {
    os << prefix << ',' << scalar_text(j) << '\n';
  }
}

// Tables: the config as comment lines, then a header and one line per row.
void write_csv(const Json& report, std::ostream& os) {
  if (report.contains("rows")) {
    std::ostringstream meta;
    for (const auto& [k, v] : report.items())
      if (k != "rows") flatten(v, k, meta);
    std::istringstream lines(meta.str());
    for (std::string line; std::getline(lines, line);) os << "# " << line << '\n';
    const auto& rows = report["rows"];
    if (rows.empty()) return;
    bool first = true;
    for (const auto& [k, v] : rows.front().items()) {
      os << (first ? "" : ",") << k;
      first = false;
    }
    os << '\n';
    for (const auto& row : rows) {
      first = true;
      for (const auto& [k, v] : row.items()) {
        os << (first ? "" : ",") << scalar_text(v);
        first = false;
      }
      os << '\n';
    }
    return;
  }
  os << "key,value\n";
  flatten(report, "", os);
}

void emit(const Json& report, const RunConfig& c, std::ostream& out) {
  std::ostringstream text;
  if (c.format == "csv")
    write_csv(report, text);
  else
    text << report.dump(2) << '\n';
  if (c.out.empty() || c.out == "-") {
    out << text.str();
    return;
  }
  std::ofstream file(c.out, std::ios::binary);
  if (!file) throw InputError("--out: cannot open " + c.out);
  file << text.str();
}

Json load_json_arg(const std::string& arg, const char* flag) {
  std::error_code ec;
  try {
    if (std::filesystem::is_regular_file(arg, ec)) {
      std::ifstream in(arg);
      return Json::parse(in);
    }
    return Json::parse(arg);
  } catch (const nlohmann::json::exception& ex) {
    throw InputError(std::string(flag) + ": " + ex.what());
  }
}

// ---------------------------------------------------------------------------

Json cmd_constants(RunConfig& c) {
  const Range r = parse_range(c.L, {1, 20});
  if (r.lo < 1 || r.hi < r.lo || r.hi > 5000) throw InputError("--L: need 1 <= a <= b <= 5000");
  c.L = std::to_string(r.lo) + ":" + std::to_string(r.hi);
  const auto& bc = bessel_constants();
  Json rows = Json::array();
  for (int L = r.lo; L <= r.hi; ++L) {
    const double t = largest_zero(L);
    const double b = b_constant(L);
    rows.push_back(Json{{"L", L},
                        {"t_LL", t},
                        {"B_L", b},
                        {"C2", c2_constant(L, t)},
                        {"gap_to_limit", bc.b_limit - b}});
  }
  return Json{{"config", config_json(c)},
              {"j01", bc.j01},
              {"J1_at_j01", bc.j1_at_j01},
              {"B_limit", bc.b_limit},
              {"rows", std::move(rows)}};
}

Json cmd_mehler(RunConfig& c) {
  const Range r = parse_range(c.L, {1, 50});
  if (r.lo < 1 || r.hi < r.lo || r.hi > 5000) throw InputError("--L: need 1 <= a <= b <= 5000");
  c.L = std::to_string(r.lo) + ":" + std::to_string(r.hi);
  const double j01 = bessel_constants().j01;
  Json rows = Json::array();
  for (int n = r.lo; n <= r.hi; ++n) {
    const double t = largest_zero(n);
    const double approx = 1.0 - j01 * j01 / (2.0 * n * n);
    const double rem = std::abs(t - approx);
    rows.push_back(Json{{"n", n},
                        {"t_nn", t},
                        {"asymptotic", approx},
                        {"remainder", rem},
                        {"remainder_n3", rem * std::pow(static_cast<double>(n), 3)},
                        {"mehler_heine_gap_at_j01", mehler_heine_gap(n, j01)},
                        {"mehler_heine_gap_at_1", mehler_heine_gap(n, 1.0)}});
  }
  return Json{{"config", config_json(c)}, {"j01", j01}, {"rows", std::move(rows)}};
}

DensityOptions density_options(const RunConfig& c) {
  DensityOptions o;
  o.mc.seed = c.seed;
  if (c.samples > 0) o.mc.samples = c.samples;
  return o;
}

Json cmd_density(RunConfig& c) {
  const int L = parse_degree(c.L, 5);
  c.L = std::to_string(L);
  const CapUnionDomain omega = load_domain(c.caps);
  const DensityResult d = nyquist_density(omega, L, density_options(c));
  return Json{{"config", config_json(c)}, {"L", L}, {"domain", to_json(omega)}, {"density", to_json(d)}};
}

Json cmd_concentrate(RunConfig& c) {
  const int L = parse_degree(c.L, 5);
  c.L = std::to_string(L);
  if (!(c.p >= 1.0)) throw InputError("--p: need p >= 1");
  const CapUnionDomain omega = load_domain(c.caps);
  ConcentrationOptions o;
  o.threads = c.threads;
  o.density = density_options(c);
  o.measure.mc.seed = c.seed;
  if (c.samples > 0) o.measure.mc.samples = c.samples;
  const ConcentrationReport report = verify_bound(omega, L, o);
  Json j{{"config", config_json(c)}, {"report", to_json(report)}};
  if (c.p != 2.0) {
    LpSampleOptions lp;
    lp.seed = c.seed;
    lp.candidate = report.eigenvector;
    lp.mc = o.measure.mc;
    const double bound = lp_bound(report.bound, c.p);
    const double sampled = omega.empty() ? 0.0 : sample_lp_ratio(omega, L, c.p, lp);
    j["lp"] = Json{{"p", c.p}, {"bound", bound}, {"sampled_lower_bound", sampled}};
    if (sampled > bound + 1e-8)
      throw InvariantViolation("sampled L^p concentration exceeds (B_L rho)^min(p-1,1)");
  }
  return j;
}

std::mt19937_64 rng_for(const RunConfig& c, std::uint64_t stream) {
  std::seed_seq seq{c.seed, stream};
  return std::mt19937_64(seq);
}

std::optional<HarmonicExpansion> coeffs_arg(const RunConfig& c, std::optional<int> L) {
  if (c.coeffs.empty()) return std::nullopt;
  HarmonicExpansion e = expansion_from_json(load_json_arg(c.coeffs, "--coeffs"));
  if (L && e.degree_max() != *L) throw InputError("--coeffs: degree does not match --L");
  return e;
}

Json cmd_sieve(RunConfig& c) {
  if (!(c.theta > 0.0 && c.theta <= std::numbers::pi)) throw InputError("--theta: need 0 < theta <= pi");
  if (!c.scan.empty()) {
    Json rows = Json::array();
    if (c.scan == "theta") {
      const int L = parse_degree(c.L, 3);
      c.L = std::to_string(L);
      std::vector<double> thetas;
      for (int k = 1; k <= 16; ++k) thetas.push_back(std::numbers::pi * k / 16);
      for (const auto& r : tightness_ratio_theta(L, thetas, c.seed))
        rows.push_back(Json{{"theta", r.theta},
                            {"D", r.D},
                            {"point_count", r.point_count},
                            {"rmax_bound", r.rmax_bound},
                            {"empirical", r.empirical},
                            {"D_times_1_minus_cos", r.normalized},
                            {"sharpness", r.sharpness}});
    } else if (c.scan == "degree") {
      const Range r = parse_range(c.L, {10, 100});
      if (r.lo < 1 || r.hi < r.lo || r.hi > 5000) throw InputError("--L: need 1 <= a <= b <= 5000");
      c.L = std::to_string(r.lo) + ":" + std::to_string(r.hi);
      std::vector<int> degrees;
      for (int L = r.lo; L <= r.hi; ++L) degrees.push_back(L);
      for (const auto& row : tightness_ratio_degree(c.theta, degrees))
        rows.push_back(Json{{"L", row.L},
                            {"D", row.D},
                            {"D_over_L2", row.normalized},
                            {"empirical", row.empirical},
                            {"sharpness", row.sharpness}});
    } else {
      throw InputError("--scan: expected theta or degree");
    }
    return Json{{"config", config_json(c)}, {"rows", std::move(rows)}};
  }

  std::optional<HarmonicExpansion> e = coeffs_arg(c, c.L.empty() ? std::nullopt : std::optional<int>(parse_degree(c.L, 5)));
  const int L = e ? e->degree_max() : parse_degree(c.L, 5);
  c.L = std::to_string(L);
  if (!e) {
    auto rng = rng_for(c, 2);
    e = HarmonicExpansion::random(L, rng);
  }

  std::optional<SeparatedPointSet> set;
  if (!c.points.empty()) {
    std::ifstream in(c.points);
    if (!in) throw InputError("--points: cannot read " + c.points);
    set.emplace(read_points_csv(in), c.theta);
  } else {
    SeparationStrategy s;
    if (c.strategy == "greedy")
      s = SeparationStrategy::greedy_maximin;
    else if (c.strategy == "rejection")
      s = SeparationStrategy::rejection;
    else
      throw InputError("--strategy: expected greedy or rejection");
    set.emplace(generate_separated(c.theta, c.seed, s));
  }
  const SieveReport r = sieve_check(*set, *e);
  Json j{{"config", config_json(c)},
         {"report", to_json(r)},
         {"verified_min_angle", set->verified_min_angle()},
         {"coefficients", to_json(*e)}};
  if (!r.holds) throw InvariantViolation("sieve inequality failed: " + j.dump());
  return j;
}

Json cmd_recover(RunConfig& c) {
  if (c.iters < 1 || c.iters > 100000) throw InputError("--iters: need 1 <= iters <= 100000");
  std::optional<HarmonicExpansion> truth = coeffs_arg(c, c.L.empty() ? std::nullopt : std::optional<int>(parse_degree(c.L, 8)));
  if (!truth) {
    auto rng = rng_for(c, 3);
    truth = HarmonicExpansion::random(parse_degree(c.L, 8), rng);
  }
  c.L = std::to_string(truth->degree_max());
  const CapUnionDomain omega = load_domain(c.caps);
  RecoveryOptions o;
  o.concentration.threads = c.threads;
  o.concentration.density = density_options(c);
  o.concentration.measure.mc.seed = c.seed;
  if (c.samples > 0) o.concentration.measure.mc.samples = c.samples;
  const RecoveryRun run = recover(*truth, omega, c.iters, o);
  Json j{{"config", config_json(c)}, {"run", to_json(run)}};
  // e_{k+1} = G e_k with ||G|| = grid lambda, so no step may expand beyond it.
  for (double ratio : run.contraction_ratios)
    if (ratio > run.grid_lambda + 1e-6) throw InvariantViolation("contraction ratio exceeds the grid eigenvalue");
  return j;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Large-sieve and concentration checks for band-limited functions on the sphere", "sphsieve"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--out", c.out, "Write the report here instead of stdout");
    sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", c.seed, "Seed for every random choice");
  };
  const auto domain = [&](CLI::App* sub) {
    sub->add_option("--caps", c.caps, "Domain: JSON file or inline 'height@x,y,z' tokens");
    sub->add_option("--samples", c.samples, "Monte Carlo samples (overlapping caps)")->check(CLI::NonNegativeNumber);
  };

  auto* constants = app.add_subcommand("constants", "t_{L,L}, B_L and C_2 per degree");
  constants->add_option("--L", c.L, "Degree or range a:b (default 1:20)");
  common(constants);

  auto* mehler = app.add_subcommand("mehler", "Largest-zero asymptotics and Mehler-Heine gaps");
  mehler->add_option("--L", c.L, "Degree or range a:b (default 1:50)");
  common(mehler);

  auto* density = app.add_subcommand("density", "Maximum Nyquist density of a cap union");
  density->add_option("--L", c.L, "Band limit (default 5)");
  domain(density);
  common(density);

  auto* concentrate = app.add_subcommand("concentrate", "Concentration eigenvalue against B_L rho");
  concentrate->add_option("--L", c.L, "Band limit (default 5)");
  concentrate->add_option("--p", c.p, "Also sample the L^p ratio for this p (default 2: off)");
  concentrate->add_option("--threads", c.threads, "Worker cap for matrix assembly")->check(CLI::Range(1, 256));
  domain(concentrate);
  common(concentrate);

  auto* sieve = app.add_subcommand("sieve", "Large sieve inequality on a separated point set");
  sieve->add_option("--L", c.L, "Band limit (default 5), or a range with --scan degree");
  sieve->add_option("--theta", c.theta, "Separation angle (default pi/4)");
  sieve->add_option("--points", c.points, "CSV of x,y,z points; generated when omitted");
  sieve->add_option("--coeffs", c.coeffs, "Expansion JSON (file or inline); random when omitted");
  sieve->add_option("--strategy", c.strategy, "greedy or rejection");
  sieve->add_option("--scan", c.scan, "Tightness table: theta or degree");
  common(sieve);

  auto* recov = app.add_subcommand("recover", "Alternating-projections recovery on S^2 \\ Omega");
  recov->add_option("--L", c.L, "Band limit (default 8)");
  recov->add_option("--iters", c.iters, "Iterations (default 50)");
  recov->add_option("--coeffs", c.coeffs, "Truth expansion JSON (file or inline); random when omitted");
  recov->add_option("--threads", c.threads, "Worker cap for matrix assembly")->check(CLI::Range(1, 256));
  domain(recov);
  common(recov);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return usage;
  }

  try {
    Json report;
    if (*constants) {
      c.subcommand = "constants";
      report = cmd_constants(c);
    } else if (*mehler) {
      c.subcommand = "mehler";
      report = cmd_mehler(c);
    } else if (*density) {
      c.subcommand = "density";
      report = cmd_density(c);
    } else if (*concentrate) {
      c.subcommand = "concentrate";
      report = cmd_concentrate(c);
    } else if (*sieve) {
      c.subcommand = "sieve";
      report = cmd_sieve(c);
    } else {
      c.subcommand = "recover";
      report = cmd_recover(c);
    }
    emit(report, c, out);
    return ok;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  } catch (const ResolutionError& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  } catch (const ConvergenceError& e) {
    err << "non-convergence: " << e.what() << '\n';
    return non_convergence;
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << '\n';
    return violation;
  }
}

}  // namespace sphsieve::cli
