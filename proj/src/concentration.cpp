#include "sphsieve/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>

#include "sphsieve/errors.hpp"
#include "sphsieve/quadrature.hpp"
#include "sphsieve/specfun.hpp"
#include "sphsieve/zonal.hpp"

namespace sphsieve {

namespace {

constexpr double kPi = std::numbers::pi;

bool caps_disjoint(const SphericalCap& a, const SphericalCap& b) {
  const double reach = a.angular_radius() + b.angular_radius();
  if (reach >= kPi) return false;
  return a.apex.dot(b.apex) < std::cos(reach);
}

struct MonteCarloCloud {
  PointCloud cloud;
  double area_standard_error = 0.0;
};

// Uniform samples in each cap, kept only if no earlier cap contains them, so
// that every point of the union is counted once.
MonteCarloCloud monte_carlo_cloud(const std::vector<SphericalCap>& caps, const MonteCarloOptions& mc) {
  MonteCarloCloud out;
  double total_area = 0.0;
  for (const auto& c : caps) total_area += c.area();
  std::mt19937_64 rng(mc.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double variance = 0.0;
  std::vector<Eigen::Vector3d> pts;
  std::vector<double> wts;
  for (std::size_t i = 0; i < caps.size(); ++i) {
    const auto& cap = caps[i];
    const int n = std::max(1, static_cast<int>(std::lround(mc.samples * cap.area() / total_area)));
    const Eigen::Matrix3d frame = frame_with_pole(cap.apex);
    const double w = cap.area() / n;
    int kept = 0;
    for (int s = 0; s < n; ++s) {
      const double t = cap.height + (1.0 - cap.height) * unit(rng);
      const double phi = 2.0 * kPi * unit(rng);
      const double r = std::sqrt(std::max(0.0, (1.0 - t) * (1.0 + t)));
      const Eigen::Vector3d p = frame * Eigen::Vector3d(r * std::cos(phi), r * std::sin(phi), t);
      bool earlier = false;
      for (std::size_t j = 0; j < i && !earlier; ++j) earlier = caps[j].contains(p);
      if (earlier) continue;
      pts.push_back(p);
      wts.push_back(w);
      ++kept;
    }
    const double q = static_cast<double>(kept) / n;
    variance += cap.area() * cap.area() * q * (1.0 - q) / n;
  }
  out.cloud.points.resize(3, static_cast<Eigen::Index>(pts.size()));
  out.cloud.weights.resize(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t k = 0; k < pts.size(); ++k) {
    out.cloud.points.col(static_cast<Eigen::Index>(k)) = pts[k];
    out.cloud.weights[static_cast<Eigen::Index>(k)] = wts[k];
  }
  out.area_standard_error = std::sqrt(variance);
  return out;
}

// Golden-section maximization of a 1-D slice on [a, b].
template <typename F>
std::pair<double, double> golden_max(F&& f, double a, double b, int iterations) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iterations; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

}  // namespace

// ---------------------------------------------------------------------------
// Caps and domains

SphericalCap::SphericalCap(UnitVector apex_, double height_) : apex(apex_), height(height_) {
  if (!(height >= -1.0 && height <= 1.0)) throw DomainError("SphericalCap: height outside [-1,1]");
}

double SphericalCap::area() const { return 2.0 * kPi * (1.0 - height); }

double SphericalCap::angular_radius() const { return std::acos(std::clamp(height, -1.0, 1.0)); }

double cap_intersection_area(const SphericalCap& a, const SphericalCap& b) {
  if (a.height >= 1.0 || b.height >= 1.0) return 0.0;
  if (a.height <= -1.0) return b.area();
  if (b.height <= -1.0) return a.area();
  const double r1 = a.angular_radius(), r2 = b.angular_radius();
  const double d = angle_between(a.apex, b.apex);
  if (d >= r1 + r2) return 0.0;
  if (d + std::min(r1, r2) <= std::max(r1, r2)) return std::min(a.area(), b.area());
  // Complements are disjoint: the caps jointly cover the sphere.
  if (r1 + r2 + d >= 2.0 * kPi) return a.area() + b.area() - 4.0 * kPi;
  const auto safe_acos = [](double x) { return std::acos(std::clamp(x, -1.0, 1.0)); };
  const double c1 = std::cos(r1), c2 = std::cos(r2), cd = std::cos(d);
  const double s1 = std::sin(r1), s2 = std::sin(r2), sd = std::sin(d);
  const double area = 2.0 * (kPi - safe_acos((cd - c1 * c2) / (s1 * s2)) -
                             c1 * safe_acos((c2 - cd * c1) / (sd * s1)) -
                             c2 * safe_acos((c1 - cd * c2) / (sd * s2)));
  return std::clamp(area, 0.0, std::min(a.area(), b.area()));
}

CapUnionDomain::CapUnionDomain(std::vector<SphericalCap> caps) : caps_(std::move(caps)) {
  for (std::size_t i = 0; i < caps_.size() && disjoint_; ++i)
    for (std::size_t j = i + 1; j < caps_.size() && disjoint_; ++j) disjoint_ = caps_disjoint(caps_[i], caps_[j]);
}

bool CapUnionDomain::contains(const Eigen::Vector3d& p) const {
  return std::any_of(caps_.begin(), caps_.end(), [&](const SphericalCap& c) { return c.contains(p); });
}

CapUnionDomain::Area CapUnionDomain::area(const MonteCarloOptions& mc) const {
  if (disjoint_) {
    double sum = 0.0;
    for (const auto& c : caps_) sum += c.area();
    return {sum, 0.0};
  }
  const auto cloud = monte_carlo_cloud(caps_, mc);
  return {cloud.cloud.weights.sum(), cloud.area_standard_error};
}

CapUnionDomain CapUnionDomain::rotated(const Eigen::Matrix3d& rotation) const {
  std::vector<SphericalCap> caps;
  caps.reserve(caps_.size());
  for (const auto& c : caps_) caps.emplace_back(rotate(rotation, c.apex), c.height);
  return CapUnionDomain(std::move(caps));
}

DomainMeasure domain_measure(const CapUnionDomain& omega, int L, const MeasureOptions& options) {
  if (L < 0) throw DomainError("domain_measure: negative band limit");
  DomainMeasure m;
  m.n_t = options.n_t > 0 ? options.n_t : 2 * L + 2;
  m.n_phi = options.n_phi > 0 ? options.n_phi : 2 * L + 2;
  m.cloud.points.resize(3, 0);
  m.cloud.weights.resize(0);
  if (omega.empty()) return m;
  if (omega.pairwise_disjoint()) {
    for (const auto& cap : omega.caps()) m.cloud.append(cap_quadrature(cap.apex, cap.height, m.n_t, m.n_phi));
    return m;
  }
  if (!options.allow_monte_carlo)
    throw OverlapError("domain_measure: caps overlap and the deterministic path was requested");
  auto mc = monte_carlo_cloud(omega.caps(), options.mc);
  m.cloud = std::move(mc.cloud);
  m.monte_carlo = true;
  m.area_standard_error = mc.area_standard_error;
  return m;
}

PointCloud complement_quadrature(const CapUnionDomain& omega, int n_t, int n_phi) {
  if (n_t < 1 || n_phi < 1) throw DomainError("complement_quadrature: orders must be positive");
  if (omega.empty()) return SphereGrid(n_t, n_phi).cloud();
  if (!omega.pairwise_disjoint()) throw OverlapError("complement_quadrature: caps overlap");

  const SphericalCap& first = omega.caps().front();
  const Eigen::Matrix3d frame = frame_with_pole(first.apex);
  struct Local {
    double z, r, phi, height;
  };
  std::vector<Local> others;
  std::vector<double> breaks{-1.0, first.height};
  for (std::size_t j = 1; j < omega.caps().size(); ++j) {
    const auto& c = omega.caps()[j];
    const Eigen::Vector3d a = frame.transpose() * c.apex.vec();
    others.push_back({a.z(), std::hypot(a.x(), a.y()), std::atan2(a.y(), a.x()), c.height});
    const double polar = std::acos(std::clamp(a.z(), -1.0, 1.0));
    for (double edge : {polar - c.angular_radius(), polar + c.angular_radius()}) {
      const double t = std::cos(std::clamp(edge, 0.0, kPi));
      if (t > -1.0 && t < first.height) breaks.push_back(t);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  const auto t_rule = cached_gauss_rule(n_t);
  const auto arc_rule = cached_gauss_rule(n_phi);
  std::vector<Eigen::Vector3d> points;
  std::vector<double> weights;
  const auto add = [&](double t, double s, double phi, double w) {
    points.push_back(frame * Eigen::Vector3d(s * std::cos(phi), s * std::sin(phi), t));
    weights.push_back(w);
  };

  for (std::size_t piece = 0; piece + 1 < breaks.size(); ++piece) {
    const double a = breaks[piece], b = breaks[piece + 1];
    for (int i = 0; i < n_t; ++i) {
      const double u = kPi / 2 * (1.0 + t_rule->nodes[i]);
      const double t = a + (b - a) * (1.0 - std::cos(u)) / 2;
      const double wt = t_rule->weights[i] * kPi / 2 * (b - a) / 2 * std::sin(u);
      const double s = std::sqrt(std::max(0.0, (1.0 - t) * (1.0 + t)));

      // Azimuth arcs [phi_j - beta, phi_j + beta] inside other caps.
      std::vector<std::pair<double, double>> cut;
      bool whole_ring = false;
      for (const auto& o : others) {
        const double denom = s * o.r;
        if (denom <= 0.0) {
          if (t * o.z >= o.height) whole_ring = true;
          continue;
        }
        const double c = (o.height - t * o.z) / denom;
        if (c <= -1.0) whole_ring = true;
        if (c <= -1.0 || c >= 1.0) continue;
        const double beta = std::acos(c);
        cut.emplace_back(o.phi - beta, o.phi + beta);
      }
      if (whole_ring) continue;
      if (cut.empty()) {
        for (int k = 0; k < n_phi; ++k) add(t, s, 2.0 * kPi * k / n_phi, wt * 2.0 * kPi / n_phi);
        continue;
      }
      // Free arcs between consecutive cuts, going once around from the first cut.
      for (auto& [lo, hi] : cut) {
        const double shift = 2.0 * kPi * std::floor((lo - cut.front().first) / (2.0 * kPi));
        lo -= shift;
        hi -= shift;
      }
      std::sort(cut.begin(), cut.end());
      for (std::size_t j = 0; j < cut.size(); ++j) {
        const double from = cut[j].second;
        const double to = (j + 1 < cut.size()) ? cut[j + 1].first : cut.front().first + 2.0 * kPi;
        if (to <= from) continue;
        const double half = (to - from) / 2, mid = (to + from) / 2;
        for (int k = 0; k < n_phi; ++k) add(t, s, mid + half * arc_rule->nodes[k], wt * half * arc_rule->weights[k]);
      }
    }
  }

  PointCloud cloud;
  cloud.points.resize(3, static_cast<Eigen::Index>(points.size()));
  cloud.weights = Eigen::Map<const Eigen::VectorXd>(weights.data(), static_cast<Eigen::Index>(weights.size()));
  for (std::size_t j = 0; j < points.size(); ++j) cloud.points.col(static_cast<Eigen::Index>(j)) = points[j];
  return cloud;
}

// ---------------------------------------------------------------------------
// Nyquist density

DensityResult nyquist_density(const CapUnionDomain& omega, int L, const DensityOptions& options) {
  if (L < 1) throw DomainError("nyquist_density: L must be >= 1");
  if (options.scan_points < 1) throw DomainError("nyquist_density: scan_points must be positive");
  DensityResult result;
  result.test_cap_height = largest_zero(L);
  result.scan_points = options.scan_points;
  result.seed = options.mc.seed;
  if (omega.empty()) return result;

  const double t = result.test_cap_height;
  const double test_area = 2.0 * kPi * (1.0 - t);

  std::optional<MonteCarloCloud> mc;
  if (!omega.pairwise_disjoint()) {
    mc = monte_carlo_cloud(omega.caps(), options.mc);
    result.monte_carlo = true;
    result.mc_samples = options.mc.samples;
  }
  const auto density_at = [&](const Eigen::Vector3d& y) {
    if (mc) {
      const Eigen::VectorXd dots = mc->cloud.points.transpose() * y;
      double inside = 0.0;
      for (Eigen::Index k = 0; k < dots.size(); ++k)
        if (dots[k] >= t) inside += mc->cloud.weights[k];
      return inside / test_area;
    }
    const SphericalCap test(UnitVector::normalize(y), t);
    double inside = 0.0;
    for (const auto& cap : omega.caps()) inside += cap_intersection_area(cap, test);
    return std::min(1.0, inside / test_area);
  };

  Eigen::Matrix3Xd candidates = fibonacci_lattice(options.scan_points);
  const Eigen::Index n_lattice = candidates.cols();
  candidates.conservativeResize(3, n_lattice + static_cast<Eigen::Index>(omega.caps().size()));
  for (std::size_t i = 0; i < omega.caps().size(); ++i)
    candidates.col(n_lattice + static_cast<Eigen::Index>(i)) = omega.caps()[i].apex.vec();

  std::vector<std::pair<double, Eigen::Index>> scored(static_cast<std::size_t>(candidates.cols()));
  for (Eigen::Index i = 0; i < candidates.cols(); ++i) scored[i] = {density_at(candidates.col(i)), i};
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  result.scan_best = scored.front().first;
  result.rho = scored.front().first;
  result.best_apex = UnitVector::normalize(candidates.col(scored.front().second));

  const double spacing = std::sqrt(4.0 * kPi / options.scan_points);
  const int k_best = std::min<int>(options.refine_candidates, static_cast<int>(scored.size()));
  for (int c = 0; c < k_best; ++c) {
    Eigen::Vector3d centre = candidates.col(scored[c].second);
    double best = scored[c].first;
    double step = 1.5 * spacing;
    for (int round = 0; round < options.refine_rounds; ++round) {
      const Eigen::Matrix3d frame = frame_with_pole(UnitVector::normalize(centre));
      const Eigen::Vector3d e1 = frame.col(0), e2 = frame.col(1);
      double u = 0.0, v = 0.0;
      const auto at = [&](double uu, double vv) { return (centre + uu * e1 + vv * e2).normalized().eval(); };
      const auto [u_best, f_u] = golden_max([&](double uu) { return density_at(at(uu, 0.0)); }, -step, step, 24);
      if (f_u > best) {
        best = f_u;
        u = u_best;
      }
      const auto [v_best, f_v] = golden_max([&](double vv) { return density_at(at(u, vv)); }, -step, step, 24);
      if (f_v > best) {
        best = f_v;
        v = v_best;
      }
      centre = at(u, v);
      step *= 0.5;
    }
    result.gap_estimate = std::max(result.gap_estimate, best - scored[c].first);
    if (best > result.rho) {
      result.rho = best;
      result.best_apex = UnitVector::normalize(centre);
    }
  }
  if (mc) result.standard_error = mc->area_standard_error / test_area;
  return result;
}

// ---------------------------------------------------------------------------
// Constants and the concentration operator

double b_constant(int L) {
  if (L < 1) throw DomainError("b_constant: L must be >= 1");
  const double t = largest_zero(L);
  return (1.0 - t) / pl_squared_tail(L, t);
}

double nonuniform_constant(int L, double delta, double sup_cap_measure) {
  return c2_constant(L, delta) * sup_cap_measure;
}

Eigen::MatrixXcd gram_matrix(int L, const PointCloud& measure, int threads) {
  const int n = harmonic_count(L);
  if (measure.size() == 0) return Eigen::MatrixXcd::Zero(n, n);
  const Eigen::MatrixXcd Y = harmonic_matrix(L, measure.points);
  const Eigen::MatrixXcd WY = measure.weights.asDiagonal() * Y;
  // Fixed column blocks, so the result does not depend on the worker count.
  constexpr int kBlock = 16;
  const int blocks = (n + kBlock - 1) / kBlock;
  Eigen::MatrixXcd G(n, n);
  const auto assemble = [&](int b) {
    const int begin = b * kBlock, count = std::min(kBlock, n - begin);
    G.middleCols(begin, count).noalias() = Y.adjoint() * WY.middleCols(begin, count);
  };
  const int workers = std::clamp(threads, 1, blocks);
  if (workers == 1) {
    for (int b = 0; b < blocks; ++b) assemble(b);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int b = w; b < blocks; b += workers) assemble(b);
      });
    for (auto& th : pool) th.join();
  }
  return (G + G.adjoint()) / 2.0;
}

Eigen::MatrixXcd concentration_matrix(const CapUnionDomain& omega, int L, const MeasureOptions& options, int threads) {
  if (L > 64) throw DomainError("concentration_matrix: L must be <= 64");
  return gram_matrix(L, domain_measure(omega, L, options).cloud, threads);
}

EigenPair top_eigenvalue(const Eigen::MatrixXcd& G, const EigenOptions& options) {
  if (G.rows() != G.cols()) throw DomainError("top_eigenvalue: matrix is not square");
  const Eigen::Index n = G.rows();
  EigenPair out;
  if (n == 0) return out;
  const double scale = std::max(1.0, G.norm());
  if ((G - G.adjoint()).norm() > 1e-10 * scale) throw DomainError("top_eigenvalue: matrix is not Hermitian");
  out.vector = Eigen::VectorXcd::Zero(n);
  out.vector[0] = 1.0;
  if (G.norm() == 0.0) return out;

  // With l <= lambda_min (Gershgorin) and d <= lambda_max (largest diagonal
  // entry), a shift s > -(l + d)/2 makes lambda_max + s the dominant eigenvalue
  // in magnitude, as the power method needs.
  double lower = std::numeric_limits<double>::infinity();
  double diag_max = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    lower = std::min(lower, G(i, i).real() - (G.row(i).cwiseAbs().sum() - std::abs(G(i, i))));
    diag_max = std::max(diag_max, G(i, i).real());
  }
  const double shift = std::max(0.0, -(lower + diag_max) / 2.0 + 1e-3 * scale);

  const auto finish = [&](const Eigen::VectorXcd& v, int iterations) {
    EigenPair e;
    e.vector = v.normalized();
    e.value = (e.vector.adjoint() * G * e.vector)(0).real();
    e.residual = (G * e.vector - e.value * e.vector).norm();
    e.iterations = iterations;
    e.shift = shift;
    return e;
  };

  const auto run = [&](Eigen::VectorXcd start) {
    const Eigen::Index cap = std::min<Eigen::Index>(n, options.max_iterations);
    Eigen::MatrixXcd V(n, std::min<Eigen::Index>(cap, 64));
    std::vector<double> alpha, beta;
    V.col(0) = start.normalized();
    double ritz = -std::numeric_limits<double>::infinity();
    int stable = 0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    for (Eigen::Index k = 0;; ++k) {
      Eigen::VectorXcd w = G * V.col(k) + shift * V.col(k);
      alpha.push_back(V.col(k).dot(w).real());
      // Two passes of full Gram-Schmidt keep the basis orthonormal to rounding.
      for (int pass = 0; pass < 2; ++pass) w -= V.leftCols(k + 1) * (V.leftCols(k + 1).adjoint() * w);
      const double b = w.norm();

      const Eigen::Index m = k + 1;
      Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
      Eigen::VectorXd sub = m > 1 ? Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(beta.data(), m - 1))
                                  : Eigen::VectorXd(0);
      tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      const double next = tri.eigenvalues()[m - 1];
      stable = std::abs(next - ritz) < options.rq_tolerance ? stable + 1 : 0;
      ritz = next;

      const bool invariant = b <= 1e-13 * scale || m == n;
      if (invariant || stable >= options.stable_steps) {
        const Eigen::VectorXcd y = tri.eigenvectors().col(m - 1).cast<Complex>();
        return finish(V.leftCols(m) * y, static_cast<int>(m));
      }
      if (m >= cap)
        throw ConvergenceError("top_eigenvalue: no convergence within " + std::to_string(options.max_iterations) +
                               " iterations");
      if (V.cols() == m) V.conservativeResize(Eigen::NoChange, std::min<Eigen::Index>(cap, 2 * m));
      beta.push_back(b);
      V.col(m) = w / b;
    }
  };

  const EigenPair from_ones = run(Eigen::VectorXcd::Ones(n));
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXcd start(n);
  for (auto& z : start) z = Complex(normal(rng), normal(rng));
  const EigenPair from_random = run(start);
  EigenPair best = from_random.value > from_ones.value ? from_random : from_ones;
  best.iterations = from_ones.iterations + from_random.iterations;
  return best;
}

ConcentrationReport verify_bound(const CapUnionDomain& omega, int L, const ConcentrationOptions& options) {
  if (L < 1) throw DomainError("verify_bound: L must be >= 1");
  ConcentrationReport r;
  r.L = L;
  r.domain = omega;
  r.eigen = options.eigen;
  r.measure = options.measure;
  r.density_options = options.density;

  const DomainMeasure measure = domain_measure(omega, L, options.measure);
  r.monte_carlo = measure.monte_carlo;
  r.quadrature_n_t = measure.n_t;
  r.quadrature_n_phi = measure.n_phi;
  const auto area = omega.area(options.measure.mc);
  r.domain_area = area.value;
  r.domain_area_error = area.standard_error;

  const Eigen::MatrixXcd G = gram_matrix(L, measure.cloud, options.threads);
  const EigenPair eig = top_eigenvalue(G, options.eigen);
  r.lambda = eig.value;
  r.eigenvector = HarmonicExpansion(L, eig.vector);
  r.eigen_iterations = eig.iterations;
  r.eigen_residual = eig.residual;

  r.density = nyquist_density(omega, L, options.density);
  r.rho = r.density.rho;
  r.b_constant = b_constant(L);
  r.bound = r.b_constant * r.rho;
  const double t = r.density.test_cap_height;
  r.nonuniform_constant = nonuniform_constant(L, t, r.rho * 2.0 * kPi * (1.0 - t));
  r.slack = r.bound - r.lambda;
  r.vacuous = r.bound >= 1.0;
  r.gap_warning = r.slack < 10.0 * r.density.gap_estimate;

  r.tolerance = options.tolerance;
  if (r.monte_carlo && r.domain_area > 0.0)
    r.tolerance += 4.0 * (r.domain_area_error / r.domain_area * std::max(r.lambda, r.bound) +
                          r.b_constant * r.density.standard_error);
  if (r.lambda > r.bound + r.tolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "verify_bound: lambda = " << r.lambda << " exceeds B_L rho = " << r.bound << " (L = " << L << ")";
    throw InvariantViolation(msg.str());
  }
  return r;
}

double lp_bound(double b_rho, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("lp_bound: requires 1 < p < infinity");
  return std::min(1.0, std::pow(b_rho, std::min(p - 1.0, 1.0)));
}

double lp_bound(const CapUnionDomain& omega, int L, double p, const DensityOptions& options) {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("lp_bound: requires 1 < p < infinity");
  return lp_bound(b_constant(L) * nyquist_density(omega, L, options).rho, p);
}

double sample_lp_ratio(const CapUnionDomain& omega, int L, double p, const LpSampleOptions& options) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("sample_lp_ratio: requires finite p >= 1");
  if (options.trials < 1) throw DomainError("sample_lp_ratio: trials must be >= 1");
  if (omega.empty()) return 0.0;
  for (const auto& cap : omega.caps())
    if (cap.height <= -1.0) return 1.0;

  // |f|^p is a polynomial of degree pL for even integer p; pad for the rest.
  const int degree = static_cast<int>(std::ceil(p * L)) + 16;
  MeasureOptions mo;
  mo.n_t = degree / 2 + 1;
  mo.n_phi = degree + 1;
  mo.mc = options.mc;
  const DomainMeasure inside = domain_measure(omega, L, mo);
  // For even integer p the full-sphere grid is exact. Otherwise the integrand
  // has kinks and a ratio of two independent quadratures can exceed 1 when f
  // is concentrated; integrating the complement separately keeps it <= 1 and
  // makes the error proportional to the (small) outside mass.
  const bool even = std::abs(p / 2 - std::round(p / 2)) < 1e-15;
  const bool split = !even && !inside.monte_carlo;
  const PointCloud outside =
      split ? complement_quadrature(omega, mo.n_t + 32, mo.n_phi) : SphereGrid(degree / 2 + 1, degree + 1).cloud();

  const int n = harmonic_count(L);
  const int columns = options.trials + (options.candidate ? 1 : 0);
  Eigen::MatrixXcd C(n, columns);
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  for (int j = 0; j < options.trials; ++j)
    for (int i = 0; i < n; ++i) C(i, j) = Complex(normal(rng), normal(rng));
  if (options.candidate) {
    if (options.candidate->degree_max() != L) throw InputError("sample_lp_ratio: candidate band limit mismatch");
    C.col(columns - 1) = options.candidate->coeffs();
  }

  const auto lp_integrals = [&](const PointCloud& cloud) {
    const Eigen::MatrixXd mag = (harmonic_matrix(L, cloud.points) * C).cwiseAbs();
    return (cloud.weights.transpose() * mag.array().pow(p).matrix()).transpose().eval();
  };
  const Eigen::VectorXd num = lp_integrals(inside.cloud);
  const Eigen::VectorXd den = split ? (num + lp_integrals(outside)).eval() : lp_integrals(outside);
  double best = 0.0;
  for (int j = 0; j < columns; ++j)
    if (den[j] > 0.0) best = std::max(best, num[j] / den[j]);
  return best;
}

}  // namespace sphsieve
