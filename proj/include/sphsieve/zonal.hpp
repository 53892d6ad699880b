#pragma once

// Zonal filters g(<x, eta>) supported in the polar cap [delta, 1], the
// convolution theorem, and the L^2 extremal problem whose minimizer is
// g_delta = chi_[delta,1] P_L.

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "sphsieve/sphharm.hpp"

namespace sphsieve {

/// A profile on [-1,1] that vanishes outside [support_delta, 1].
///
/// The profile is piecewise polynomial: a polynomial of degree <= degree_hint
/// between consecutive knots of {support_delta, knots..., 1}. Every inner
/// product with a Legendre polynomial is therefore an exact Gauss sum. A
/// negative degree_hint marks a non-polynomial profile, integrated adaptively.
class ZonalFilter {
 public:
  ZonalFilter(double support_delta, std::function<double(double)> profile, int degree_hint,
              std::vector<double> knots = {});

  double support_delta() const { return delta_; }
  int degree_hint() const { return degree_; }
  const std::vector<double>& knots() const { return knots_; }

  /// g(t), zero outside [support_delta, 1].
  double operator()(double t) const;

  /// int_delta^1 g(t) w(t) dt for a weight that is a polynomial of degree
  /// <= weight_degree, piece by piece.
  double integrate(const std::function<double(double)>& weight, int weight_degree) const;

  /// hat g(l, 0) for l = 0..L.
  Eigen::VectorXd coefficients(int L) const;

 private:
  double delta_;
  std::function<double(double)> profile_;
  int degree_;
  std::vector<double> knots_;  // sorted, strictly inside (delta, 1)
};

/// hat g(l,0) = sqrt((2l+1)/(4 pi)) 2 pi int_delta^1 g(t) P_l(t) dt.
double zonal_coeff(const ZonalFilter& g, int l);

/// (f * g)^(l,m) = sqrt(4 pi/(2l+1)) hat f(l,m) hat g(l,0).
HarmonicExpansion convolve(const HarmonicExpansion& f, const ZonalFilter& g);

/// Same, with precomputed hat g(l,0), l = 0..L.
HarmonicExpansion convolve(const HarmonicExpansion& f, const Eigen::VectorXd& zonal_coeffs);

/// chi_[delta,1] P_k.
ZonalFilter legendre_filter(int k, double delta = -1.0);

/// chi_[delta,1].
ZonalFilter cap_indicator(double delta);

/// The minimizer chi_[delta,1] P_L; requires t_{L,L} <= delta < 1.
ZonalFilter g_delta(int L, double delta);

/// ||g||_{L^2(S^2)}^2 = 2 pi int_delta^1 g(t)^2 dt.
double filter_norm_squared(const ZonalFilter& g);

/// max_{0<=l<=L} (2l+1)/(4 pi) ||g||^2 / |hat g(l,0)|^2.
///
/// +infinity if some hat g(l,0) vanishes: convolution with g is then not
/// invertible on S_L.
double extremal_objective_p2(const ZonalFilter& g, int L);

/// C_2(L, delta) = (2 pi int_delta^1 P_L^2)^{-1}.
double c2_constant(int L, double delta);

}  // namespace sphsieve
