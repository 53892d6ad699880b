#pragma once

// Spherical harmonics Y_l^m, band-limited expansions and the product grid used
// to move between samples and coefficients.
//
// Y_l^m(theta, phi) = sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!) P_l^m(cos theta) e^{i m phi}
// with the Condon-Shortley P_l^m of specfun.hpp, and Y_l^{-m} = (-1)^m conj(Y_l^m).
// Coefficients are stored at the flat index l^2 + l + m.

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "sphsieve/sphere.hpp"

namespace sphsieve {

using Complex = std::complex<double>;

constexpr int harmonic_index(int l, int m) { return l * l + l + m; }
constexpr int harmonic_count(int L) { return (L + 1) * (L + 1); }

/// f = sum_{l<=L} sum_{|m|<=l} a_l^m Y_l^m.
class HarmonicExpansion {
 public:
  HarmonicExpansion() : HarmonicExpansion(0) {}
  explicit HarmonicExpansion(int degree_max);
  HarmonicExpansion(int degree_max, Eigen::VectorXcd coeffs);

  /// Independent standard complex Gaussian coefficients.
  static HarmonicExpansion random(int degree_max, std::mt19937_64& rng);
  /// Coefficients of a real-valued function: a_l^{-m} = (-1)^m conj(a_l^m).
  static HarmonicExpansion random_real(int degree_max, std::mt19937_64& rng);
  static HarmonicExpansion unit(int degree_max, int l, int m);

  int degree_max() const { return degree_max_; }
  const Eigen::VectorXcd& coeffs() const { return coeffs_; }
  Eigen::VectorXcd& coeffs() { return coeffs_; }

  Complex operator()(int l, int m) const { return coeffs_[harmonic_index(l, m)]; }
  Complex& operator()(int l, int m) { return coeffs_[harmonic_index(l, m)]; }

  bool is_real_valued(double tol = 1e-12) const;

 private:
  int degree_max_;
  Eigen::VectorXcd coeffs_;
};

/// Y_l^m(p) for all 0 <= |m| <= l <= L in flat-index order.
Eigen::VectorXcd harmonics_all(int L, const UnitVector& p);
Eigen::VectorXcd harmonics_all(int L, const Eigen::Vector3d& p);

/// Rows are harmonics_all(L, points.col(i)); the synthesis operator at the points.
Eigen::MatrixXcd harmonic_matrix(int L, const Eigen::Matrix3Xd& points);

Complex ylm(int l, int m, const UnitVector& p);

Complex synthesize(const HarmonicExpansion& e, const UnitVector& p);

/// sqrt(sum |a_l^m|^2) = ||f||_{L^2(S^2)}.
double parseval_norm(const HarmonicExpansion& e);

/// |P_k(<x,y>) - 4 pi/(2k+1) sum_n Y_k^n(x) conj(Y_k^n(y))|.
double addition_theorem_residual(int k, const UnitVector& x, const UnitVector& y);

/// Sample values laid out row-major by (theta ring, azimuth).
using GridValues = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Gauss-Legendre nodes in cos(theta) times equispaced azimuths
/// phi_k = 2 pi k / n_phi. Integrates exactly every polynomial of degree
/// <= min(2 n_theta - 1, n_phi - 1) in the Cartesian coordinates.
class SphereGrid {
 public:
  SphereGrid(int n_theta, int n_phi);

  /// Smallest grid exact for polynomials of the given degree.
  static SphereGrid exact_for_degree(int degree);

  /// Composite grid: n_below Gauss rings on [-1, t_break] and n_above on
  /// [t_break, 1]. No ring straddles the circle cos(theta) = t_break, so the
  /// polar cap above it is integrated exactly rather than by node counting.
  static SphereGrid split(double t_break, int n_below, int n_above, int n_phi);
  /// Same with several breaks (sorted, inside (-1,1)); orders[i] rings on the
  /// i-th piece.
  static SphereGrid composite(const std::vector<double>& breaks, const std::vector<int>& orders, int n_phi);

  int n_theta() const { return n_theta_; }
  int n_phi() const { return n_phi_; }
  const Eigen::VectorXd& cos_theta() const { return cos_theta_; }
  const Eigen::VectorXd& theta_weights() const { return theta_weights_; }
  double azimuth(int k) const;
  /// Quadrature weight of node (i, k); weights sum to 4 pi.
  double weight(int i) const { return theta_weights_[i] * azimuth_weight_; }
  Eigen::Vector3d point(int i, int k) const;

  /// Largest L for which analyze() is exact on S_L input.
  int max_exact_degree() const;
  /// Smallest Gauss order among the polar pieces.
  int polar_order() const { return polar_order_; }

  template <typename F>
  GridValues sample(F&& f) const {
    GridValues values(n_theta_, n_phi_);
    for (int i = 0; i < n_theta_; ++i)
      for (int k = 0; k < n_phi_; ++k) values(i, k) = f(point(i, k));
    return values;
  }

  /// All nodes with their weights, ring by ring.
  PointCloud cloud() const;

 private:
  SphereGrid() = default;

  int n_theta_ = 0;
  int n_phi_ = 0;
  int polar_order_ = 0;
  Eigen::VectorXd cos_theta_;
  Eigen::VectorXd theta_weights_;
  double azimuth_weight_ = 0.0;
};

GridValues synthesize_grid(const HarmonicExpansion& e, const SphereGrid& grid);

/// Coefficients int f conj(Y_l^m) dsigma by grid quadrature. Requires
/// n_theta >= L + 1 (per polar piece) and n_phi >= 2L + 1, which makes
/// analyze(synthesize(e)) = e for every e in S_L.
HarmonicExpansion analyze(const GridValues& samples, const SphereGrid& grid, int L);

/// g(x) = f(R^T x), i.e. f carried along by the rotation R.
HarmonicExpansion rotate(const Eigen::Matrix3d& rotation, const HarmonicExpansion& f);

/// int F conj(G) dsigma by grid quadrature.
Complex grid_inner(const GridValues& f, const GridValues& g, const SphereGrid& grid);

}  // namespace sphsieve
