#pragma once

// Points, frames and weighted node sets on the unit sphere.

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace sphsieve {

/// A point on S^2. Construction checks |v|^2 = 1 to 1e-12; use normalize() for
/// arbitrary nonzero input.
class UnitVector {
 public:
  UnitVector() : v_(0.0, 0.0, 1.0) {}
  UnitVector(double x, double y, double z);

  static UnitVector normalize(const Eigen::Vector3d& v);
  static UnitVector from_angles(double polar, double azimuth);
  static UnitVector north_pole() { return UnitVector(); }

  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }
  const Eigen::Vector3d& vec() const { return v_; }

  double polar_angle() const;
  double azimuth() const;
  double dot(const UnitVector& other) const { return v_.dot(other.v_); }
  UnitVector antipode() const;

 private:
  struct Unchecked {};
  UnitVector(const Eigen::Vector3d& v, Unchecked) : v_(v) {}
  Eigen::Vector3d v_;
};

/// Angle in [0, pi], accurate for nearly parallel and antiparallel pairs.
double angle_between(const UnitVector& a, const UnitVector& b);

/// Right-handed orthonormal frame whose third column is the given pole.
Eigen::Matrix3d frame_with_pole(const UnitVector& pole);

/// Uniform rotation (Haar measure on SO(3)).
Eigen::Matrix3d random_rotation(std::mt19937_64& rng);

UnitVector random_unit_vector(std::mt19937_64& rng);

UnitVector rotate(const Eigen::Matrix3d& rotation, const UnitVector& p);

/// n points of the spherical Fibonacci lattice (golden-angle spiral).
Eigen::Matrix3Xd fibonacci_lattice(int n);

/// Weighted nodes representing a measure on S^2: sum_i w_i h(x_i) ~ int h dmu.
struct PointCloud {
  Eigen::Matrix3Xd points;
  Eigen::VectorXd weights;

  Eigen::Index size() const { return points.cols(); }
  void append(const PointCloud& other);
};

/// Product rule on the cap {<apex, x> >= height}: n_t Gauss nodes in the
/// polar cosine over [height, 1] times n_phi equispaced azimuths. Exact for
/// polynomials of degree <= min(2 n_t - 1, n_phi - 1) in the coordinates.
PointCloud cap_quadrature(const UnitVector& apex, double height, int n_t, int n_phi);

}  // namespace sphsieve
