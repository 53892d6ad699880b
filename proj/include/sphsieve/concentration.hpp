#pragma once

// Concentration of band-limited functions on finite unions of spherical caps:
// the maximum Nyquist density rho(Omega, L), the concentration matrix whose top
// eigenvalue is lambda^2_{S_L}(Omega), and the bounds
//
//   lambda^2_{S_L}(Omega) <= B_L rho(Omega, L),
//   lambda^p_{S_L}(Omega) <= (B_L rho(Omega, L))^{min(p-1, 1)}.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sphsieve/sphere.hpp"
#include "sphsieve/sphharm.hpp"

namespace sphsieve {

/// {x : <apex, x> >= height}.
struct SphericalCap {
  UnitVector apex;
  double height = 1.0;

  SphericalCap() = default;
  SphericalCap(UnitVector apex, double height);

  double area() const;            // 2 pi (1 - height)
  double angular_radius() const;  // arccos(height)
  bool contains(const Eigen::Vector3d& p) const { return apex.vec().dot(p) >= height; }
  bool contains(const UnitVector& p) const { return contains(p.vec()); }
};

/// Area of the intersection of two caps.
double cap_intersection_area(const SphericalCap& a, const SphericalCap& b);

struct MonteCarloOptions {
  int samples = 200000;  // total over all caps, split in proportion to area
  std::uint64_t seed = 1;
};

/// Omega as a finite union of caps; the empty list is the empty set.
class CapUnionDomain {
 public:
  CapUnionDomain() = default;
  explicit CapUnionDomain(std::vector<SphericalCap> caps);

  const std::vector<SphericalCap>& caps() const { return caps_; }
  bool empty() const { return caps_.empty(); }
  bool pairwise_disjoint() const { return disjoint_; }
  bool contains(const Eigen::Vector3d& p) const;

  /// Exact for disjoint caps; Monte Carlo with standard error otherwise.
  struct Area {
    double value;
    double standard_error;
  };
  Area area(const MonteCarloOptions& mc = {}) const;

  /// The same domain with every apex rotated.
  CapUnionDomain rotated(const Eigen::Matrix3d& rotation) const;

 private:
  std::vector<SphericalCap> caps_;
  bool disjoint_ = true;
};

/// Weighted nodes for the restriction of dsigma to Omega.
///
/// Disjoint caps: union of per-cap product rules (n_t x n_phi each), exact for
/// polynomials of degree <= min(2 n_t - 1, n_phi - 1). Overlapping caps: a
/// stratified Monte Carlo cloud (each sample kept only in the first cap that
/// contains it), or OverlapError when allow_monte_carlo is false.
struct MeasureOptions {
  int n_t = 0;    // 0 selects 2L + 2
  int n_phi = 0;  // 0 selects 2L + 2
  bool allow_monte_carlo = true;
  MonteCarloOptions mc;
};

struct DomainMeasure {
  PointCloud cloud;
  bool monte_carlo = false;
  double area_standard_error = 0.0;
  int n_t = 0;
  int n_phi = 0;
};

DomainMeasure domain_measure(const CapUnionDomain& omega, int L, const MeasureOptions& options = {});

/// Positive-weight rule on S^2 \ Omega for disjoint caps (OverlapError
/// otherwise). Rings around the first apex below its cap; on each ring the
/// arcs cut out by the other caps are skipped and the free arcs get Gauss
/// nodes. The polar direction is split where rings touch another cap, and
/// t = a + (b - a)(1 - cos u)/2 absorbs the square-root behavior of the arc
/// length there. Not exact, but every weight is positive, so
/// int_Omega / (int_Omega + int_complement) never exceeds 1.
PointCloud complement_quadrature(const CapUnionDomain& omega, int n_t, int n_phi);

// ---------------------------------------------------------------------------
// Nyquist density

struct DensityOptions {
  int scan_points = 4000;
  int refine_candidates = 5;
  int refine_rounds = 6;
  MonteCarloOptions mc{20000, 1};
};

struct DensityResult {
  double rho = 0.0;
  UnitVector best_apex;
  double test_cap_height = 0.0;  // t_{L,L}
  double scan_best = 0.0;        // best value on the lattice before refinement
  double gap_estimate = 0.0;     // largest improvement found by refinement
  bool monte_carlo = false;
  double standard_error = 0.0;   // of rho, Monte Carlo path only
  int scan_points = 0;
  int mc_samples = 0;
  std::uint64_t seed = 0;
};

/// sup_y |Omega cap C_{t_{L,L}}(y)| / |C_{t_{L,L}}(y)|, maximized by a
/// Fibonacci scan (plus the cap apexes) and golden-section refinement of the
/// best candidates. A heuristic global maximum: the result never overshoots
/// the true supremum on the exact path.
DensityResult nyquist_density(const CapUnionDomain& omega, int L, const DensityOptions& options = {});

// ---------------------------------------------------------------------------
// Concentration operator

/// B_L = (1 - t_{L,L}) / int_{t_{L,L}}^1 P_L^2.
double b_constant(int L);

/// C_2(L, delta) sup_y mu(C_delta(y)) for a measure mu with the given
/// supremum of cap masses: the constant in the nonuniform L^2 bound.
double nonuniform_constant(int L, double delta, double sup_cap_measure);

/// G[(l,m),(l',m')] = int_Omega Y_{l'}^{m'} conj(Y_l^m) dsigma from the domain
/// measure, assembled column by column on up to `threads` workers.
Eigen::MatrixXcd concentration_matrix(const CapUnionDomain& omega, int L, const MeasureOptions& options = {},
                                      int threads = 1);
Eigen::MatrixXcd gram_matrix(int L, const PointCloud& measure, int threads = 1);

struct EigenOptions {
  double rq_tolerance = 1e-12;
  int stable_steps = 5;
  int max_iterations = 100000;
  std::uint64_t seed = 7;
};

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXcd vector;
  int iterations = 0;
  double residual = 0.0;  // ||G v - value v||
  double shift = 0.0;     // diagonal shift applied during the iteration
};

/// Largest eigenvalue of a Hermitian matrix.
///
/// Krylov-accelerated power iteration: Lanczos with full reorthogonalization
/// on G + shift I. The Ritz value after k steps is at least the Rayleigh
/// quotient of the k-th power iterate, and is exact once the Krylov space is
/// invariant, which matters for the clustered spectra of large caps where the
/// plain power method stalls. Runs from the normalized all-ones vector and one
/// random restart; the larger converged value wins. Converged when the Ritz
/// value moves by less than rq_tolerance for stable_steps consecutive steps.
/// In a degenerate top eigenspace the vector is one element of it.
EigenPair top_eigenvalue(const Eigen::MatrixXcd& G, const EigenOptions& options = {});

struct ConcentrationReport {
  int L = 0;
  CapUnionDomain domain;
  double domain_area = 0.0;
  double domain_area_error = 0.0;
  DensityResult density;
  double rho = 0.0;
  double b_constant = 0.0;
  double bound = 0.0;          // B_L rho
  double lambda = 0.0;         // top eigenvalue of G
  HarmonicExpansion eigenvector;
  double slack = 0.0;          // bound - lambda
  double nonuniform_constant = 0.0;
  double tolerance = 0.0;
  bool vacuous = false;        // bound >= 1
  bool gap_warning = false;    // slack < 10 * density gap estimate
  bool monte_carlo = false;
  int quadrature_n_t = 0;
  int quadrature_n_phi = 0;
  int eigen_iterations = 0;
  double eigen_residual = 0.0;
  EigenOptions eigen;
  MeasureOptions measure;
  DensityOptions density_options;
};

struct ConcentrationOptions {
  MeasureOptions measure;
  DensityOptions density;
  EigenOptions eigen;
  int threads = 1;
  double tolerance = 1e-8;
};

/// Runs the whole pipeline and checks lambda <= B_L rho + tolerance; a
/// violation throws InvariantViolation.
ConcentrationReport verify_bound(const CapUnionDomain& omega, int L, const ConcentrationOptions& options = {});

/// (B_L rho)^{min(p-1, 1)}, clipped at 1.
double lp_bound(double b_rho, double p);
double lp_bound(const CapUnionDomain& omega, int L, double p, const DensityOptions& options = {});

struct LpSampleOptions {
  std::uint64_t seed = 1;
  int trials = 100;
  /// Extra candidate (typically the p = 2 eigenvector).
  std::optional<HarmonicExpansion> candidate;
  MonteCarloOptions mc;
};

/// Best observed int_Omega |f|^p / int_{S^2} |f|^p over random Gaussian
/// expansions in S_L plus the optional candidate: an empirical lower bound on
/// lambda^p_{S_L}(Omega).
double sample_lp_ratio(const CapUnionDomain& omega, int L, double p, const LpSampleOptions& options = {});

}  // namespace sphsieve
