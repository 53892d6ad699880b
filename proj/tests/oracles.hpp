#pragma once

// Independent reference computations used only by the tests. None of these
// call into the library's recurrences, rules or eigen-solver.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace oracle {

/// Dense polynomial in long double, coefficients by ascending power.
struct Poly {
  std::vector<long double> c;

  static Poly monomial(int k) {
    Poly p;
    p.c.assign(static_cast<std::size_t>(k) + 1, 0.0L);
    p.c.back() = 1.0L;
    return p;
  }
  int degree() const { return static_cast<int>(c.size()) - 1; }

  long double operator()(long double t) const {
    long double v = 0.0L;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
    return v;
  }
  Poly operator*(const Poly& o) const {
    Poly r;
    r.c.assign(c.size() + o.c.size() - 1, 0.0L);
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = 0; j < o.c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
    return r;
  }
  Poly operator*(long double s) const {
    Poly r = *this;
    for (auto& x : r.c) x *= s;
    return r;
  }
  Poly operator+(const Poly& o) const {
    Poly r;
    r.c.assign(std::max(c.size(), o.c.size()), 0.0L);
    for (std::size_t i = 0; i < c.size(); ++i) r.c[i] += c[i];
    for (std::size_t i = 0; i < o.c.size(); ++i) r.c[i] += o.c[i];
    return r;
  }
  Poly derivative() const {
    Poly r;
    if (c.size() <= 1) {
      r.c = {0.0L};
      return r;
    }
    r.c.resize(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) r.c[i - 1] = c[i] * static_cast<long double>(i);
    return r;
  }
  Poly antiderivative() const {
    Poly r;
    r.c.assign(c.size() + 1, 0.0L);
    for (std::size_t i = 0; i < c.size(); ++i) r.c[i + 1] = c[i] / static_cast<long double>(i + 1);
    return r;
  }
  long double integral(long double a, long double b) const {
    const Poly F = antiderivative();
    return F(b) - F(a);
  }
};

/// (1 - t^2)^l expanded.
inline Poly one_minus_t2_power(int l) {
  Poly base;
  base.c = {1.0L, 0.0L, -1.0L};
  Poly r;
  r.c = {1.0L};
  for (int i = 0; i < l; ++i) r = r * base;
  return r;
}

inline long double factorial(int n) {
  long double f = 1.0L;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

/// P_l by Rodrigues' formula, (-1)^l / (2^l l!) d^l/dt^l (1 - t^2)^l.
inline Poly legendre_rodrigues(int l) {
  Poly p = one_minus_t2_power(l);
  for (int i = 0; i < l; ++i) p = p.derivative();
  const long double sign = (l % 2 == 0) ? 1.0L : -1.0L;
  return p * (sign / (std::pow(2.0L, l) * factorial(l)));
}

/// (-1)^(m+l) / (2^l l!) (1-t^2)^(m/2) d^(l+m)/dt^(l+m) (1 - t^2)^l, m >= 0.
inline long double assoc_legendre_rodrigues(int l, int m, long double t) {
  Poly p = one_minus_t2_power(l);
  for (int i = 0; i < l + m; ++i) p = p.derivative();
  const long double sign = ((m + l) % 2 == 0) ? 1.0L : -1.0L;
  return sign / (std::pow(2.0L, l) * factorial(l)) * std::pow(1.0L - t * t, m / 2.0L) * p(t);
}

/// All eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.
inline Eigen::VectorXd jacobi_eigenvalues(Eigen::MatrixXcd A, int sweeps = 100) {
  const Eigen::Index n = A.rows();
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += std::norm(A(p, q));
    if (off < 1e-30) break;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const std::complex<double> apq = A(p, q);
        const double mag = std::abs(apq);
        if (mag < 1e-300) continue;
        const std::complex<double> phase = apq / mag;
        const double app = A(p, p).real(), aqq = A(q, q).real();
        const double theta = 0.5 * std::atan2(2.0 * mag, aqq - app);
        const double c = std::cos(theta), s = std::sin(theta);
        // Rotation acting on columns p, q: [c, s*phase; -s*conj(phase), c]
        for (Eigen::Index k = 0; k < n; ++k) {
          const std::complex<double> akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * std::conj(phase) * akq;
          A(k, q) = s * phase * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const std::complex<double> apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * phase * aqk;
          A(q, k) = s * std::conj(phase) * apk + c * aqk;
        }
      }
  }
  Eigen::VectorXd ev(n);
  for (Eigen::Index i = 0; i < n; ++i) ev[i] = A(i, i).real();
  return ev;
}

/// Monte Carlo estimate of the area of {x : pred(x)} with n uniform samples.
template <typename Pred>
double monte_carlo_area(Pred&& pred, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    Eigen::Vector3d v(normal(rng), normal(rng), normal(rng));
    v.normalize();
    if (pred(v)) ++hits;
  }
  return 4.0 * M_PI * hits / n;
}

}  // namespace oracle
