#include "sphsieve/sphere.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

#include "sphsieve/errors.hpp"
#include "sphsieve/quadrature.hpp"

namespace sphsieve {

UnitVector::UnitVector(double x, double y, double z) : v_(x, y, z) {
  if (!(std::abs(v_.squaredNorm() - 1.0) <= 1e-12))
    throw DomainError("UnitVector: coordinates are not of unit length");
}

UnitVector UnitVector::normalize(const Eigen::Vector3d& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("UnitVector::normalize: zero or non-finite vector");
  return UnitVector(v / n, Unchecked{});
}

UnitVector UnitVector::from_angles(double polar, double azimuth) {
  const double s = std::sin(polar);
  return UnitVector(Eigen::Vector3d(s * std::cos(azimuth), s * std::sin(azimuth), std::cos(polar)),
                    Unchecked{});
}

double UnitVector::polar_angle() const { return std::atan2(std::hypot(v_.x(), v_.y()), v_.z()); }

double UnitVector::azimuth() const {
  const double phi = std::atan2(v_.y(), v_.x());
  return phi < 0.0 ? phi + 2.0 * std::numbers::pi : phi;
}

UnitVector UnitVector::antipode() const { return UnitVector(-v_, Unchecked{}); }

double angle_between(const UnitVector& a, const UnitVector& b) {
  return std::atan2(a.vec().cross(b.vec()).norm(), a.dot(b));
}

Eigen::Matrix3d frame_with_pole(const UnitVector& pole) {
  const Eigen::Vector3d& n = pole.vec();
  // Helper axis least aligned with the pole.
  Eigen::Vector3d helper = Eigen::Vector3d::Zero();
  Eigen::Index smallest;
  n.cwiseAbs().minCoeff(&smallest);
  helper[smallest] = 1.0;
  const Eigen::Vector3d e1 = (helper - helper.dot(n) * n).normalized();
  const Eigen::Vector3d e2 = n.cross(e1);
  Eigen::Matrix3d frame;
  frame << e1, e2, n;
  return frame;
}

Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  const Eigen::Quaterniond q(normal(rng), normal(rng), normal(rng), normal(rng));
  return q.normalized().toRotationMatrix();
}

UnitVector random_unit_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  for (;;) {
    const Eigen::Vector3d v(normal(rng), normal(rng), normal(rng));
    if (v.norm() > 1e-8) return UnitVector::normalize(v);
  }
}

UnitVector rotate(const Eigen::Matrix3d& rotation, const UnitVector& p) {
  return UnitVector::normalize(rotation * p.vec());
}

Eigen::Matrix3Xd fibonacci_lattice(int n) {
  if (n < 1) throw DomainError("fibonacci_lattice: n must be positive");
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  Eigen::Matrix3Xd pts(3, n);
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt((1.0 - z) * (1.0 + z));
    const double phi = golden_angle * i;
    pts.col(i) << r * std::cos(phi), r * std::sin(phi), z;
  }
  return pts;
}

void PointCloud::append(const PointCloud& other) {
  const Eigen::Index n = size();
  points.conservativeResize(3, n + other.size());
  weights.conservativeResize(n + other.size());
  points.rightCols(other.size()) = other.points;
  weights.tail(other.size()) = other.weights;
}

PointCloud cap_quadrature(const UnitVector& apex, double height, int n_t, int n_phi) {
  if (!(height >= -1.0 && height <= 1.0)) throw DomainError("cap_quadrature: height outside [-1,1]");
  if (n_t < 1 || n_phi < 1) throw DomainError("cap_quadrature: orders must be positive");
  const auto rule = cached_gauss_rule(n_t);
  const Eigen::Matrix3d frame = frame_with_pole(apex);
  const double half = (1.0 - height) / 2.0, mid = (1.0 + height) / 2.0;
  const double dphi = 2.0 * std::numbers::pi / n_phi;

  PointCloud cloud;
  cloud.points.resize(3, static_cast<Eigen::Index>(n_t) * n_phi);
  cloud.weights.resize(static_cast<Eigen::Index>(n_t) * n_phi);
  Eigen::Index k = 0;
  for (int i = 0; i < n_t; ++i) {
    const double t = mid + half * rule->nodes[i];
    const double s = std::sqrt(std::max(0.0, (1.0 - t) * (1.0 + t)));
    const double w = half * rule->weights[i] * dphi;
    for (int j = 0; j < n_phi; ++j, ++k) {
      const double phi = dphi * j;
      cloud.points.col(k) = frame * Eigen::Vector3d(s * std::cos(phi), s * std::sin(phi), t);
      cloud.weights[k] = w;
    }
  }
  return cloud;
}

}  // namespace sphsieve
