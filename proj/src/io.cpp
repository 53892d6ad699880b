#include "sphsieve/io.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "sphsieve/errors.hpp"

namespace sphsieve {

namespace {

Json vec3(const Eigen::Vector3d& v) { return Json::array({v.x(), v.y(), v.z()}); }

UnitVector parse_apex(const std::vector<double>& xyz, const std::string& context) {
  if (xyz.size() != 3) throw InputError(context + ": apex needs exactly three coordinates");
  try {
    return UnitVector::normalize(Eigen::Vector3d(xyz[0], xyz[1], xyz[2]));
  } catch (const DomainError&) {
    throw InputError(context + ": apex must be a nonzero finite vector");
  }
}

SphericalCap make_cap(const UnitVector& apex, double height, const std::string& context) {
  if (!(height >= -1.0 && height <= 1.0)) throw InputError(context + ": height must lie in [-1, 1]");
  return SphericalCap(apex, height);
}

double parse_double(const std::string& s, const std::string& context) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InputError(context + ": '" + s + "' is not a number");
  }
  if (used != s.size()) throw InputError(context + ": '" + s + "' is not a number");
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

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

Json to_json(const HarmonicExpansion& e) {
  Json coeffs = Json::array();
  for (const auto& c : e.coeffs()) coeffs.push_back(Json::array({c.real(), c.imag()}));
  return Json{{"L", e.degree_max()}, {"coeffs", std::move(coeffs)}};
}

HarmonicExpansion expansion_from_json(const Json& j) {
  try {
    const int L = j.at("L").get<int>();
    const auto& arr = j.at("coeffs");
    if (L < 0 || !arr.is_array() || static_cast<int>(arr.size()) != harmonic_count(L))
      throw InputError("expansion JSON: expected (L+1)^2 coefficient pairs");
    Eigen::VectorXcd c(harmonic_count(L));
    for (int i = 0; i < c.size(); ++i) {
      const auto& pair = arr.at(static_cast<std::size_t>(i));
      if (!pair.is_array() || pair.size() != 2) throw InputError("expansion JSON: coefficients must be [re, im]");
      c[i] = Complex(pair[0].get<double>(), pair[1].get<double>());
    }
    return HarmonicExpansion(L, std::move(c));
  } catch (const nlohmann::json::exception& ex) {
    throw InputError(std::string("expansion JSON: ") + ex.what());
  }
}

Json to_json(const SphericalCap& cap) {
  return Json{{"apex", vec3(cap.apex.vec())}, {"height", cap.height}};
}

Json to_json(const CapUnionDomain& domain) {
  Json caps = Json::array();
  for (const auto& c : domain.caps()) caps.push_back(to_json(c));
  return Json{{"caps", std::move(caps)}, {"pairwise_disjoint", domain.pairwise_disjoint()}};
}

Json to_json(const DensityResult& d) {
  return Json{{"rho", d.rho},
              {"best_apex", vec3(d.best_apex.vec())},
              {"test_cap_height", d.test_cap_height},
              {"scan_best", d.scan_best},
              {"gap_estimate", d.gap_estimate},
              {"monte_carlo", d.monte_carlo},
              {"standard_error", d.standard_error},
              {"scan_points", d.scan_points},
              {"mc_samples", d.mc_samples},
              {"seed", d.seed}};
}

Json to_json(const ConcentrationReport& r) {
  Json domain = to_json(r.domain);
  domain["area"] = r.domain_area;
  domain["area_standard_error"] = r.domain_area_error;
  return Json{{"L", r.L},
              {"domain", std::move(domain)},
              {"rho", r.rho},
              {"b_constant", r.b_constant},
              {"bound", r.bound},
              {"lambda", r.lambda},
              {"slack", r.slack},
              {"nonuniform_constant", r.nonuniform_constant},
              {"vacuous", r.vacuous},
              {"gap_warning", r.gap_warning},
              {"density", to_json(r.density)},
              {"eigenvector", to_json(r.eigenvector)},
              {"method",
               {{"monte_carlo", r.monte_carlo},
                {"quadrature_n_t", r.quadrature_n_t},
                {"quadrature_n_phi", r.quadrature_n_phi},
                {"mc_samples", r.measure.mc.samples},
                {"mc_seed", r.measure.mc.seed},
                {"density_scan_points", r.density_options.scan_points},
                {"density_refine_candidates", r.density_options.refine_candidates},
                {"density_refine_rounds", r.density_options.refine_rounds},
                {"eigen_rq_tolerance", r.eigen.rq_tolerance},
                {"eigen_stable_steps", r.eigen.stable_steps},
                {"eigen_max_iterations", r.eigen.max_iterations},
                {"eigen_seed", r.eigen.seed},
                {"eigen_iterations", r.eigen_iterations},
                {"eigen_residual", r.eigen_residual},
                {"bound_tolerance", r.tolerance}}}};
}

Json to_json(const SieveReport& r) {
  return Json{{"theta", r.theta}, {"L", r.L},         {"D", r.D},
              {"lhs", r.lhs},     {"rhs", r.rhs},     {"ratio", r.ratio},
              {"cap_count_bound", r.cap_count_bound}, {"point_count", r.point_count},
              {"holds", r.holds}};
}

Json to_json(const RecoveryRun& run) {
  return Json{{"L", run.L},
              {"domain", to_json(run.omega)},
              {"iterations", run.iterations},
              {"errors", run.errors},
              {"contraction_ratios", run.contraction_ratios},
              {"asymptotic_ratio", run.asymptotic_ratio},
              {"lambda", run.lambda_bound},
              {"certificate_b_rho", run.certificate},
              {"grid_lambda", run.grid_lambda},
              {"masked_fraction", run.masked_fraction},
              {"burn_in", run.burn_in},
              {"grid", {{"n_theta", run.n_theta}, {"n_phi", run.n_phi}}},
              {"truth", to_json(run.truth)},
              {"estimate", to_json(run.estimate)}};
}

CapUnionDomain parse_domain_inline(const std::string& spec) {
  std::string normalized = spec;
  for (char& ch : normalized)
    if (ch == ';' || ch == '\n' || ch == '\t') ch = ' ';
  const std::string body = trim(normalized);
  if (body.empty() || body == "none") return CapUnionDomain();
  std::vector<SphericalCap> caps;
  std::istringstream in(body);
  std::string token;
  while (in >> token) {
    const auto at = token.find('@');
    if (at == std::string::npos) throw InputError("domain token '" + token + "': expected height@x,y,z");
    const double height = parse_double(token.substr(0, at), "domain token '" + token + "'");
    std::vector<double> xyz;
    for (const auto& part : split(token.substr(at + 1), ','))
      xyz.push_back(parse_double(trim(part), "domain token '" + token + "'"));
    caps.push_back(make_cap(parse_apex(xyz, "domain token '" + token + "'"), height, "domain token '" + token + "'"));
  }
  return CapUnionDomain(std::move(caps));
}

CapUnionDomain domain_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("domain JSON: expected an array of caps");
  std::vector<SphericalCap> caps;
  try {
    for (const auto& item : j) {
      const auto xyz = item.at("apex").get<std::vector<double>>();
      caps.push_back(make_cap(parse_apex(xyz, "domain JSON"), item.at("height").get<double>(), "domain JSON"));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw InputError(std::string("domain JSON: ") + ex.what());
  }
  return CapUnionDomain(std::move(caps));
}

CapUnionDomain load_domain(const std::string& spec) {
  std::error_code ec;
  if (!spec.empty() && std::filesystem::is_regular_file(spec, ec)) {
    std::ifstream in(spec);
    Json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& ex) {
      throw InputError("domain file " + spec + ": " + ex.what());
    }
    return domain_from_json(j);
  }
  return parse_domain_inline(spec);
}

std::vector<UnitVector> read_points_csv(std::istream& in) {
  std::vector<UnitVector> points;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto parts = split(line, ',');
    const std::string context = "points CSV line " + std::to_string(line_no);
    if (parts.size() != 3) throw InputError(context + ": expected x,y,z");
    std::vector<double> xyz;
    for (const auto& p : parts) xyz.push_back(parse_double(trim(p), context));
    points.push_back(parse_apex(xyz, context));
  }
  return points;
}

void write_points_csv(std::ostream& out, const std::vector<UnitVector>& points) {
  const auto old = out.precision(17);
  for (const auto& p : points) out << p.x() << ',' << p.y() << ',' << p.z() << '\n';
  out.precision(old);
}

}  // namespace sphsieve
