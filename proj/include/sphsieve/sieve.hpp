#pragma once

// The large sieve on S^2: for theta-separated points x_1..x_R and
// S = sum a_l^m Y_l^m of degree L,
//
//   sum_k |S(x_k)|^2 <= D(theta, L) sum |a_l^m|^2,
//
//   D(theta, L) = (2 pi int_{t_{L,L}}^1 P_L^2)^{-1}
//                 (1 - cos(theta/2) t_{L,L} + sin(theta/2) sqrt(1 - t_{L,L}^2))
//                 / (1 - cos(theta/2)).
//
// The second factor bounds how many points fit in a test cap C_{t_{L,L}}(y):
// the caps of polar angle theta/2 around the points have disjoint interiors
// and all lie in the cap of polar angle theta/2 + arccos(t_{L,L}) around y.

#include <cstdint>
#include <vector>

#include "sphsieve/sphere.hpp"
#include "sphsieve/sphharm.hpp"

namespace sphsieve {

class SeparatedPointSet {
 public:
  /// Checks <x_k, x_l> <= cos(theta) + 1e-12 for all k != l; InputError otherwise.
  SeparatedPointSet(std::vector<UnitVector> points, double theta);

  const std::vector<UnitVector>& points() const { return points_; }
  double theta() const { return theta_; }
  /// Smallest pairwise angle (pi for fewer than two points).
  double verified_min_angle() const { return min_angle_; }
  std::size_t size() const { return points_.size(); }

 private:
  std::vector<UnitVector> points_;
  double theta_;
  double min_angle_;
};

enum class SeparationStrategy { greedy_maximin, rejection };

struct GenerateOptions {
  int lattice_points = 100000;
  int rejection_attempts = 10000;  // consecutive failures before declaring maximality
};

/// A maximal theta-separated set, deterministic per seed.
///
/// greedy_maximin: starting from a random point, repeatedly add the candidate
/// of a randomly rotated Fibonacci lattice (plus the antipodes of accepted
/// points) farthest from the current set, while that distance is >= theta.
/// Both strategies finish with random rejection sampling until
/// rejection_attempts consecutive proposals fail.
SeparatedPointSet generate_separated(double theta, std::uint64_t seed, SeparationStrategy strategy,
                                     const GenerateOptions& options = {});

/// D(theta, L).
double sieve_constant(double theta, int L);

/// (1 - cos(theta/2) t + sin(theta/2) sqrt(1 - t^2)) / (1 - cos(theta/2)), t = t_{L,L}.
double cap_count_bound(double theta, int L);

/// 2 / (1 - cos theta). A maximal theta-separated set has at least this many
/// points: the caps of polar angle theta around its points cover S^2, so
/// R 2 pi (1 - cos theta) >= 4 pi.
double rmax_lower_bound(double theta);

/// max over the given apexes of #{x_k : <x_k, y> >= t_{L,L}}.
int max_cap_count(const SeparatedPointSet& points, int L, const std::vector<UnitVector>& apexes);

struct SieveReport {
  double theta = 0.0;
  int L = 0;
  double D = 0.0;
  double lhs = 0.0;  // sum_k |S(x_k)|^2
  double rhs = 0.0;  // D sum |a_l^m|^2
  double ratio = 0.0;
  double cap_count_bound = 0.0;
  std::size_t point_count = 0;
  bool holds = true;  // ratio <= 1 + 1e-9
};

/// Evaluates both sides of the inequality. Uses the claimed separation theta of
/// the set, not its verified minimum angle.
SieveReport sieve_check(const SeparatedPointSet& points, const HarmonicExpansion& e);

struct ThetaTightnessRow {
  double theta = 0.0;
  double D = 0.0;
  std::size_t point_count = 0;
  double rmax_bound = 0.0;
  double empirical = 0.0;   // sum_k |S(x_k)|^2 / sum |a|^2 for a_0^0 = 1 only, = R/(4 pi)
  double normalized = 0.0;  // D (1 - cos theta)
  double sharpness = 0.0;   // empirical / D
};

/// For fixed L, D(theta, L) against the a_0^0 construction on a maximal
/// theta-separated set, one row per theta.
std::vector<ThetaTightnessRow> tightness_ratio_theta(int L, const std::vector<double>& thetas, std::uint64_t seed);

struct DegreeTightnessRow {
  int L = 0;
  double D = 0.0;
  double normalized = 0.0;  // D / L^2
  double empirical = 0.0;   // |S(eta)|^2 / sum |a|^2 for a_l^m = delta_m
  double sharpness = 0.0;   // empirical / D
};

/// For fixed theta, D(theta, L) against the single-sample zonal construction.
std::vector<DegreeTightnessRow> tightness_ratio_degree(double theta, const std::vector<int>& degrees);

}  // namespace sphsieve
