#include "sphsieve/sphharm.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sphsieve/errors.hpp"
#include "sphsieve/quadrature.hpp"
#include "sphsieve/specfun.hpp"

namespace sphsieve {

namespace {

constexpr double kPi = std::numbers::pi;

// Y_l^m = sign(m) N(l,|m|) e^{i m phi}
inline double negative_order_sign(int m) { return (m < 0 && (-m) % 2 == 1) ? -1.0 : 1.0; }

void require_degree(int L, const char* what) {
  if (L < 0) throw DomainError(std::string(what) + ": negative band limit");
}

}  // namespace

HarmonicExpansion::HarmonicExpansion(int degree_max)
    : degree_max_(degree_max), coeffs_(Eigen::VectorXcd::Zero(harmonic_count(degree_max))) {
  require_degree(degree_max, "HarmonicExpansion");
}

HarmonicExpansion::HarmonicExpansion(int degree_max, Eigen::VectorXcd coeffs)
    : degree_max_(degree_max), coeffs_(std::move(coeffs)) {
  require_degree(degree_max, "HarmonicExpansion");
  if (coeffs_.size() != harmonic_count(degree_max))
    throw InputError("HarmonicExpansion: expected (L+1)^2 coefficients");
}

HarmonicExpansion HarmonicExpansion::random(int degree_max, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  HarmonicExpansion e(degree_max);
  for (auto& c : e.coeffs_) c = Complex(normal(rng), normal(rng));
  return e;
}

HarmonicExpansion HarmonicExpansion::random_real(int degree_max, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  HarmonicExpansion e(degree_max);
  for (int l = 0; l <= degree_max; ++l) {
    e(l, 0) = normal(rng);
    for (int m = 1; m <= l; ++m) {
      e(l, m) = Complex(normal(rng), normal(rng));
      e(l, -m) = (m % 2 == 0 ? 1.0 : -1.0) * std::conj(e(l, m));
    }
  }
  return e;
}

HarmonicExpansion HarmonicExpansion::unit(int degree_max, int l, int m) {
  if (l < 0 || l > degree_max || std::abs(m) > l) throw DomainError("HarmonicExpansion::unit: index out of range");
  HarmonicExpansion e(degree_max);
  e(l, m) = 1.0;
  return e;
}

bool HarmonicExpansion::is_real_valued(double tol) const {
  for (int l = 0; l <= degree_max_; ++l) {
    if (std::abs((*this)(l, 0).imag()) > tol) return false;
    for (int m = 1; m <= l; ++m)
      if (std::abs((*this)(l, -m) - (m % 2 == 0 ? 1.0 : -1.0) * std::conj((*this)(l, m))) > tol) return false;
  }
  return true;
}

Eigen::VectorXcd harmonics_all(int L, const Eigen::Vector3d& p) {
  require_degree(L, "harmonics_all");
  const double t = std::clamp(p.z(), -1.0, 1.0);
  const double phi = std::atan2(p.y(), p.x());
  const auto table = normalized_assoc_legendre_table(L, t);
  Eigen::VectorXcd y(harmonic_count(L));
  for (int m = 0; m <= L; ++m) {
    const Complex phase = std::polar(1.0, m * phi);
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    for (int l = m; l <= L; ++l) {
      const Complex v = table(l, m) * phase;
      y[harmonic_index(l, m)] = v;
      if (m > 0) y[harmonic_index(l, -m)] = sign * std::conj(v);
    }
  }
  return y;
}

Eigen::VectorXcd harmonics_all(int L, const UnitVector& p) { return harmonics_all(L, p.vec()); }

Eigen::MatrixXcd harmonic_matrix(int L, const Eigen::Matrix3Xd& points) {
  Eigen::MatrixXcd y(points.cols(), harmonic_count(L));
  for (Eigen::Index i = 0; i < points.cols(); ++i) y.row(i) = harmonics_all(L, Eigen::Vector3d(points.col(i))).transpose();
  return y;
}

Complex ylm(int l, int m, const UnitVector& p) {
  if (l < 0 || std::abs(m) > l) throw DomainError("ylm: requires |m| <= l");
  return harmonics_all(l, p)[harmonic_index(l, m)];
}

Complex synthesize(const HarmonicExpansion& e, const UnitVector& p) {
  return harmonics_all(e.degree_max(), p).transpose() * e.coeffs();
}

double parseval_norm(const HarmonicExpansion& e) { return e.coeffs().norm(); }

double addition_theorem_residual(int k, const UnitVector& x, const UnitVector& y) {
  if (k < 0) throw DomainError("addition_theorem_residual: negative degree");
  const auto yx = harmonics_all(k, x);
  const auto yy = harmonics_all(k, y);
  Complex sum = 0.0;
  for (int n = -k; n <= k; ++n) sum += yx[harmonic_index(k, n)] * std::conj(yy[harmonic_index(k, n)]);
  const double lhs = legendre_p(k, std::clamp(x.dot(y), -1.0, 1.0));
  return std::abs(lhs - 4.0 * kPi / (2 * k + 1) * sum);
}

SphereGrid::SphereGrid(int n_theta, int n_phi) : n_theta_(n_theta), n_phi_(n_phi), polar_order_(n_theta) {
  if (n_theta < 1 || n_phi < 1) throw DomainError("SphereGrid: sizes must be positive");
  const auto rule = cached_gauss_rule(n_theta);
  cos_theta_ = rule->nodes;
  theta_weights_ = rule->weights;
  azimuth_weight_ = 2.0 * kPi / n_phi;
}

SphereGrid SphereGrid::exact_for_degree(int degree) {
  require_degree(degree, "SphereGrid::exact_for_degree");
  return SphereGrid(degree / 2 + 1, degree + 1);
}

SphereGrid SphereGrid::split(double t_break, int n_below, int n_above, int n_phi) {
  return composite({t_break}, {n_below, n_above}, n_phi);
}

SphereGrid SphereGrid::composite(const std::vector<double>& breaks, const std::vector<int>& orders, int n_phi) {
  if (orders.size() != breaks.size() + 1) throw DomainError("SphereGrid::composite: need one order per piece");
  std::vector<double> edges{-1.0};
  for (double b : breaks) {
    if (!(b > edges.back() && b < 1.0)) throw DomainError("SphereGrid::composite: breaks must increase inside (-1,1)");
    edges.push_back(b);
  }
  edges.push_back(1.0);
  if (n_phi < 1 || *std::min_element(orders.begin(), orders.end()) < 1)
    throw DomainError("SphereGrid::composite: sizes must be positive");
  SphereGrid g;
  g.n_theta_ = 0;
  for (int n : orders) g.n_theta_ += n;
  g.n_phi_ = n_phi;
  g.polar_order_ = *std::min_element(orders.begin(), orders.end());
  g.cos_theta_.resize(g.n_theta_);
  g.theta_weights_.resize(g.n_theta_);
  int offset = 0;
  for (std::size_t piece = 0; piece < orders.size(); ++piece) {
    const int n = orders[piece];
    const double a = edges[piece], b = edges[piece + 1];
    const auto rule = cached_gauss_rule(n);
    g.cos_theta_.segment(offset, n) = ((a + b) / 2 + (b - a) / 2 * rule->nodes.array()).matrix();
    g.theta_weights_.segment(offset, n) = (b - a) / 2 * rule->weights;
    offset += n;
  }
  g.azimuth_weight_ = 2.0 * kPi / n_phi;
  return g;
}

double SphereGrid::azimuth(int k) const { return azimuth_weight_ * k; }

Eigen::Vector3d SphereGrid::point(int i, int k) const {
  const double t = cos_theta_[i];
  const double s = std::sqrt((1.0 - t) * (1.0 + t));
  const double phi = azimuth(k);
  return {s * std::cos(phi), s * std::sin(phi), t};
}

int SphereGrid::max_exact_degree() const { return std::min(polar_order_ - 1, (n_phi_ - 1) / 2); }

PointCloud SphereGrid::cloud() const {
  PointCloud c;
  c.points.resize(3, static_cast<Eigen::Index>(n_theta_) * n_phi_);
  c.weights.resize(c.points.cols());
  Eigen::Index j = 0;
  for (int i = 0; i < n_theta_; ++i)
    for (int k = 0; k < n_phi_; ++k, ++j) {
      c.points.col(j) = point(i, k);
      c.weights[j] = weight(i);
    }
  return c;
}

GridValues synthesize_grid(const HarmonicExpansion& e, const SphereGrid& grid) {
  const int L = e.degree_max();
  GridValues values(grid.n_theta(), grid.n_phi());
  Eigen::VectorXcd ring(2 * L + 1);
  for (int i = 0; i < grid.n_theta(); ++i) {
    const auto table = normalized_assoc_legendre_table(L, grid.cos_theta()[i]);
    for (int m = -L; m <= L; ++m) {
      Complex acc = 0.0;
      for (int l = std::abs(m); l <= L; ++l) acc += e(l, m) * table(l, std::abs(m));
      ring[m + L] = negative_order_sign(m) * acc;
    }
    for (int k = 0; k < grid.n_phi(); ++k) {
      const double phi = grid.azimuth(k);
      Complex v = 0.0;
      for (int m = -L; m <= L; ++m) v += ring[m + L] * std::polar(1.0, m * phi);
      values(i, k) = v;
    }
  }
  return values;
}

HarmonicExpansion analyze(const GridValues& samples, const SphereGrid& grid, int L) {
  require_degree(L, "analyze");
  if (samples.rows() != grid.n_theta() || samples.cols() != grid.n_phi())
    throw InputError("analyze: sample array does not match the grid");
  if (grid.max_exact_degree() < L)
    throw ResolutionError("analyze: grid " + std::to_string(grid.n_theta()) + "x" + std::to_string(grid.n_phi()) +
                          " cannot resolve band limit " + std::to_string(L));
  HarmonicExpansion e(L);
  const double dphi = 2.0 * kPi / grid.n_phi();
  Eigen::VectorXcd ring(2 * L + 1);
  for (int i = 0; i < grid.n_theta(); ++i) {
    for (int m = -L; m <= L; ++m) {
      Complex acc = 0.0;
      for (int k = 0; k < grid.n_phi(); ++k) acc += samples(i, k) * std::polar(1.0, -m * grid.azimuth(k));
      ring[m + L] = acc * dphi;
    }
    const auto table = normalized_assoc_legendre_table(L, grid.cos_theta()[i]);
    const double w = grid.theta_weights()[i];
    for (int l = 0; l <= L; ++l)
      for (int m = -l; m <= l; ++m)
        e(l, m) += w * negative_order_sign(m) * table(l, std::abs(m)) * ring[m + L];
  }
  return e;
}

HarmonicExpansion rotate(const Eigen::Matrix3d& rotation, const HarmonicExpansion& f) {
  // f o R^T is again in S_L, so the minimal grid recovers it exactly.
  const int L = f.degree_max();
  const SphereGrid grid(L + 1, 2 * L + 1);
  const Eigen::Matrix3d back = rotation.transpose();
  const GridValues values = grid.sample([&](const Eigen::Vector3d& p) {
    return synthesize(f, UnitVector::normalize(back * p));
  });
  return analyze(values, grid, L);
}

Complex grid_inner(const GridValues& f, const GridValues& g, const SphereGrid& grid) {
  Complex sum = 0.0;
  for (int i = 0; i < grid.n_theta(); ++i) {
    Complex ring = 0.0;
    for (int k = 0; k < grid.n_phi(); ++k) ring += f(i, k) * std::conj(g(i, k));
    sum += grid.weight(i) * ring;
  }
  return sum;
}

}  // namespace sphsieve
