#include "sphsieve/sieve.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "sphsieve/errors.hpp"
#include "sphsieve/specfun.hpp"
#include "sphsieve/zonal.hpp"

namespace sphsieve {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSeparationSlack = 1e-12;

void require_theta(double theta, const char* what) {
  if (!(theta > 0.0 && theta <= kPi)) throw DomainError(std::string(what) + ": theta must lie in (0, pi]");
}

bool separated_from(const std::vector<UnitVector>& set, const Eigen::Vector3d& p, double cos_theta) {
  for (const auto& q : set)
    if (q.vec().dot(p) > cos_theta + kSeparationSlack) return false;
  return true;
}

void fill_by_rejection(std::vector<UnitVector>& set, double cos_theta, std::mt19937_64& rng, int attempts) {
  int failures = 0;
  while (failures < attempts) {
    const UnitVector p = random_unit_vector(rng);
    if (separated_from(set, p.vec(), cos_theta)) {
      set.push_back(p);
      failures = 0;
    } else {
      ++failures;
    }
  }
}

}  // namespace

SeparatedPointSet::SeparatedPointSet(std::vector<UnitVector> points, double theta)
    : points_(std::move(points)), theta_(theta), min_angle_(kPi) {
  require_theta(theta, "SeparatedPointSet");
  const double c = std::cos(theta);
  for (std::size_t k = 0; k < points_.size(); ++k)
    for (std::size_t l = k + 1; l < points_.size(); ++l) {
      if (points_[k].dot(points_[l]) > c + kSeparationSlack)
        throw InputError("SeparatedPointSet: points " + std::to_string(k) + " and " + std::to_string(l) +
                         " violate the claimed separation");
      min_angle_ = std::min(min_angle_, angle_between(points_[k], points_[l]));
    }
}

SeparatedPointSet generate_separated(double theta, std::uint64_t seed, SeparationStrategy strategy,
                                     const GenerateOptions& options) {
  require_theta(theta, "generate_separated");
  const double c = std::cos(theta);
  std::mt19937_64 rng(seed);
  std::vector<UnitVector> chosen;

  if (strategy == SeparationStrategy::greedy_maximin) {
    const Eigen::Matrix3d rotation = random_rotation(rng);
    const Eigen::Matrix3Xd lattice = rotation * fibonacci_lattice(options.lattice_points);
    std::vector<Eigen::Vector3d> extra;  // antipodes of accepted points
    std::vector<double> extra_nearest;

    const UnitVector first = random_unit_vector(rng);
    chosen.push_back(first);
    Eigen::VectorXd nearest = lattice.transpose() * first.vec();  // max dot to the chosen set
    extra.push_back(-first.vec());
    extra_nearest.push_back(-1.0);

    for (;;) {
      Eigen::Index best_lattice;
      double best = nearest.minCoeff(&best_lattice);
      std::size_t best_extra = extra.size();
      for (std::size_t j = 0; j < extra.size(); ++j)
        if (extra_nearest[j] < best) {
          best = extra_nearest[j];
          best_extra = j;
        }
      if (best > c + kSeparationSlack) break;
      const Eigen::Vector3d p = best_extra < extra.size() ? extra[best_extra] : Eigen::Vector3d(lattice.col(best_lattice));
      chosen.push_back(UnitVector::normalize(p));
      const Eigen::Vector3d& q = chosen.back().vec();
      nearest = nearest.cwiseMax(lattice.transpose() * q);
      for (std::size_t j = 0; j < extra.size(); ++j) extra_nearest[j] = std::max(extra_nearest[j], extra[j].dot(q));
      double antipode_nearest = -1.0;
      for (const auto& s : chosen) antipode_nearest = std::max(antipode_nearest, -s.vec().dot(q));
      extra.push_back(-q);
      extra_nearest.push_back(antipode_nearest);
    }
  }
  fill_by_rejection(chosen, c, rng, options.rejection_attempts);
  return SeparatedPointSet(std::move(chosen), theta);
}

double cap_count_bound(double theta, int L) {
  require_theta(theta, "cap_count_bound");
  const double t = largest_zero(L);
  const double ch = std::cos(theta / 2.0), sh = std::sin(theta / 2.0);
  return (1.0 - ch * t + sh * std::sqrt((1.0 - t) * (1.0 + t))) / (1.0 - ch);
}

double sieve_constant(double theta, int L) {
  require_theta(theta, "sieve_constant");
  if (L < 1) throw DomainError("sieve_constant: L must be >= 1");
  return c2_constant(L, largest_zero(L)) * cap_count_bound(theta, L);
}

double rmax_lower_bound(double theta) {
  require_theta(theta, "rmax_lower_bound");
  return 2.0 / (1.0 - std::cos(theta));
}

int max_cap_count(const SeparatedPointSet& points, int L, const std::vector<UnitVector>& apexes) {
  const double t = largest_zero(L);
  int best = 0;
  for (const auto& y : apexes) {
    int count = 0;
    for (const auto& x : points.points())
      if (x.dot(y) >= t) ++count;
    best = std::max(best, count);
  }
  return best;
}

SieveReport sieve_check(const SeparatedPointSet& points, const HarmonicExpansion& e) {
  const int L = e.degree_max();
  if (L < 1) throw DomainError("sieve_check: expansion must have L >= 1");
  SieveReport r;
  r.theta = points.theta();
  r.L = L;
  r.D = sieve_constant(points.theta(), L);
  r.cap_count_bound = cap_count_bound(points.theta(), L);
  r.point_count = points.size();
  for (const auto& x : points.points()) r.lhs += std::norm(synthesize(e, x));
  r.rhs = r.D * e.coeffs().squaredNorm();
  r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : (r.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  r.holds = r.ratio <= 1.0 + 1e-9;
  return r;
}

std::vector<ThetaTightnessRow> tightness_ratio_theta(int L, const std::vector<double>& thetas, std::uint64_t seed) {
  std::vector<ThetaTightnessRow> rows;
  const auto a00 = HarmonicExpansion::unit(L, 0, 0);
  for (double theta : thetas) {
    const auto set = generate_separated(theta, seed, SeparationStrategy::greedy_maximin);
    const auto report = sieve_check(set, a00);
    ThetaTightnessRow row;
    row.theta = theta;
    row.D = report.D;
    row.point_count = set.size();
    row.rmax_bound = rmax_lower_bound(theta);
    row.empirical = report.lhs;
    row.normalized = report.D * (1.0 - std::cos(theta));
    row.sharpness = row.empirical / row.D;
    rows.push_back(row);
  }
  return rows;
}

std::vector<DegreeTightnessRow> tightness_ratio_degree(double theta, const std::vector<int>& degrees) {
  std::vector<DegreeTightnessRow> rows;
  for (int L : degrees) {
    HarmonicExpansion zonal(L);
    for (int l = 0; l <= L; ++l) zonal(l, 0) = 1.0;
    const SeparatedPointSet pole({UnitVector::north_pole()}, theta);
    const auto report = sieve_check(pole, zonal);
    DegreeTightnessRow row;
    row.L = L;
    row.D = report.D;
    row.normalized = report.D / (static_cast<double>(L) * L);
    row.empirical = report.lhs / zonal.coeffs().squaredNorm();
    row.sharpness = row.empirical / row.D;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace sphsieve
