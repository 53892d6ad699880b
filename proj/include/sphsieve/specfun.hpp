#pragma once

// Legendre polynomials, associated Legendre functions, Legendre zeros and the
// Bessel values J0, J1, j_{0,1}.
//
// Everything here is templated on the real scalar so that the same code can be
// instantiated in extended precision (long double) as a cross-check of the
// double results.
//
// Sign convention for the associated Legendre functions:
//
//   P_l^m(t) = (-1)^(m+l) / (2^l l!) (1-t^2)^(m/2) d^(l+m)/dt^(l+m) (1-t^2)^l
//
// Since (1-t^2)^l = (-1)^l (t^2-1)^l this is the Condon-Shortley convention,
// P_l^m(t) = (-1)^m (1-t^2)^(m/2) P_l^(m)(t). In particular P_1^1(t) =
// -sqrt(1-t^2) and P_1^1(0) = -1.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "sphsieve/errors.hpp"

namespace sphsieve {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

namespace detail {

template <typename Scalar>
void require_unit_interval(Scalar t, const char* what) {
  using std::abs;
  if (!(abs(t) <= Scalar(1)))
    throw DomainError(std::string(what) + ": argument outside [-1,1]");
}

inline void require_degree(int n, const char* what) {
  if (n < 0) throw DomainError(std::string(what) + ": negative degree");
}

}  // namespace detail

/// P_0(t) .. P_n(t) at a single argument.
template <typename Scalar = double>
struct LegendreSequence {
  int degree_max = 0;
  Scalar argument = 0;
  VectorX<Scalar> values;
};

/// Forward three-term recurrence
/// (k+1) P_{k+1}(t) = (2k+1) t P_k(t) - k P_{k-1}(t).
template <typename Scalar = double>
LegendreSequence<Scalar> legendre_all(int n, Scalar t) {
  detail::require_degree(n, "legendre_all");
  detail::require_unit_interval(t, "legendre_all");
  LegendreSequence<Scalar> seq{n, t, VectorX<Scalar>(n + 1)};
  auto& p = seq.values;
  p[0] = Scalar(1);
  if (n >= 1) p[1] = t;
  for (int k = 1; k < n; ++k)
    p[k + 1] = (Scalar(2 * k + 1) * t * p[k] - Scalar(k) * p[k - 1]) / Scalar(k + 1);
  return seq;
}

/// P_n(t) without storing the sequence.
template <typename Scalar = double>
Scalar legendre_p(int n, Scalar t) {
  detail::require_degree(n, "legendre_p");
  detail::require_unit_interval(t, "legendre_p");
  if (n == 0) return Scalar(1);
  Scalar prev = Scalar(1), cur = t;
  for (int k = 1; k < n; ++k) {
    const Scalar next = (Scalar(2 * k + 1) * t * cur - Scalar(k) * prev) / Scalar(k + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// P_n'(t) as the finite sum (2n-1) P_{n-1} + (2n-5) P_{n-3} + ...
///
/// Every term is bounded on [-1,1], so the sum is accurate up to the endpoints,
/// where it equals (+-1)^(n+1) n(n+1)/2.
template <typename Scalar = double>
Scalar legendre_deriv(int n, Scalar t) {
  detail::require_degree(n, "legendre_deriv");
  detail::require_unit_interval(t, "legendre_deriv");
  if (n == 0) return Scalar(0);
  const auto seq = legendre_all(n - 1, t);
  Scalar sum = 0;
  for (int k = n - 1; k >= 0; k -= 2) sum += Scalar(2 * k + 1) * seq.values[k];
  return sum;
}

/// (P_n(t), P_n'(t)) from the two-term identity
/// (1-t^2) P_n'(t) = n (P_{n-1}(t) - t P_n(t)); O(n) and meant for Newton steps
/// at interior points.
template <typename Scalar = double>
std::pair<Scalar, Scalar> legendre_value_and_deriv(int n, Scalar t) {
  using std::abs;
  if (n == 0) return {Scalar(1), Scalar(0)};
  Scalar prev = Scalar(1), cur = t;
  for (int k = 1; k < n; ++k) {
    const Scalar next = (Scalar(2 * k + 1) * t * cur - Scalar(k) * prev) / Scalar(k + 1);
    prev = cur;
    cur = next;
  }
  const Scalar one_minus_t2 = (Scalar(1) - t) * (Scalar(1) + t);
  if (one_minus_t2 == Scalar(0)) {
    const Scalar end = Scalar(n) * Scalar(n + 1) / Scalar(2);
    return {cur, (t > 0 || (n % 2 == 1)) ? end : -end};
  }
  return {cur, Scalar(n) * (prev - t * cur) / one_minus_t2};
}

namespace detail {

// Safeguarded Newton for the unique sign change of P_n inside [lo, hi].
template <typename Scalar>
Scalar refine_legendre_zero(int n, Scalar lo, Scalar hi, Scalar seed) {
  using std::abs;
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  Scalar p_lo = legendre_p(n, lo);
  const Scalar p_hi = legendre_p(n, hi);
  if (p_lo == Scalar(0)) return lo;
  if (p_hi == Scalar(0)) return hi;
  if ((p_lo > 0) == (p_hi > 0))
    throw ConvergenceError("legendre zero: bracket does not enclose a sign change");

  Scalar x = std::clamp(seed, lo, hi);
  for (int it = 0; it < 200; ++it) {
    const auto [p, dp] = legendre_value_and_deriv(n, x);
    if (p == Scalar(0)) return x;
    if ((p > 0) == (p_lo > 0)) {
      lo = x;
      p_lo = p;
    } else {
      hi = x;
    }
    Scalar next = x - p / dp;
    if (!(next > lo && next < hi)) next = (lo + hi) / 2;
    if (abs(next - x) <= 2 * eps * std::max(Scalar(1), abs(x)) || hi - lo <= 4 * eps)
      return next;
    x = next;
  }
  throw ConvergenceError("legendre zero: no convergence in 200 iterations (n=" +
                         std::to_string(n) + ")");
}

// Bruns: (k - 1/2) pi / (n + 1/2) < theta_{n,k} < k pi / (n + 1/2), where
// theta_{n,k} = arccos of the k-th largest zero.
template <typename Scalar>
std::pair<Scalar, Scalar> bruns_bracket(int n, int k) {
  using std::cos;
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar h = Scalar(n) + Scalar(0.5);
  return {cos(Scalar(k) * pi / h), cos((Scalar(k) - Scalar(0.5)) * pi / h)};
}

}  // namespace detail

/// Power series of J_0 or J_1, truncated once a term drops below 1e-17 of the sum.
template <typename Scalar = double>
Scalar bessel_j(int order, Scalar z) {
  using std::abs;
  if (order != 0 && order != 1) throw DomainError("bessel_j: only orders 0 and 1");
  const Scalar half = z / 2;
  Scalar term = order == 0 ? Scalar(1) : half;
  Scalar sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= -(half * half) / (Scalar(k) * Scalar(k + order));
    sum += term;
    if (abs(term) <= Scalar(1e-17) * abs(sum)) break;
  }
  return sum;
}

template <typename Scalar = double>
Scalar bessel_j0(Scalar z) {
  return bessel_j(0, z);
}

template <typename Scalar = double>
Scalar bessel_j1(Scalar z) {
  return bessel_j(1, z);
}

/// Smallest positive zero of J_0 by Newton iteration (J_0' = -J_1).
template <typename Scalar = double>
Scalar bessel_j0_first_zero() {
  using std::abs;
  Scalar x = Scalar(2.4);
  for (int it = 0; it < 100; ++it) {
    const Scalar step = bessel_j0(x) / bessel_j1(x);
    x += step;
    if (abs(step) <= 4 * std::numeric_limits<Scalar>::epsilon()) return x;
  }
  throw ConvergenceError("bessel_j0_first_zero: no convergence");
}

/// Largest zero t_{n,n} of P_n.
///
/// Newton iteration seeded from 1 - j01^2 / (2 n^2) and kept inside the Bruns
/// bracket of the first zero, which contains no other root of P_n.
template <typename Scalar = double>
Scalar largest_zero(int n) {
  if (n < 1) throw DomainError("largest_zero: n must be >= 1");
  if (n == 1) return Scalar(0);
  const Scalar j01 = bessel_j0_first_zero<Scalar>();
  const Scalar seed = Scalar(1) - j01 * j01 / (Scalar(2) * Scalar(n) * Scalar(n));
  const auto [lo, hi] = detail::bruns_bracket<Scalar>(n, 1);
  return detail::refine_legendre_zero(n, lo, hi, seed);
}

/// All n zeros of P_n, ascending, exactly antisymmetric about 0.
template <typename Scalar = double>
VectorX<Scalar> all_zeros(int n) {
  using std::cos;
  if (n < 1) throw DomainError("all_zeros: n must be >= 1");
  const Scalar pi = std::numbers::pi_v<Scalar>;
  VectorX<Scalar> zeros(n);
  const Scalar nn = Scalar(n);
  const Scalar tricomi = Scalar(1) - (nn - 1) / (Scalar(8) * nn * nn * nn);
  for (int k = 1; k <= n / 2; ++k) {
    const Scalar seed = tricomi * cos(Scalar(4 * k - 1) * pi / Scalar(4 * n + 2));
    const auto [lo, hi] = detail::bruns_bracket<Scalar>(n, k);
    const Scalar z = detail::refine_legendre_zero(n, lo, hi, seed);
    zeros[n - k] = z;
    zeros[k - 1] = -z;
  }
  if (n % 2 == 1) zeros[n / 2] = Scalar(0);
  return zeros;
}

/// Unnormalized P_l^m(t), 0 <= m <= l, by the upward recurrence in l:
/// P_m^m = (-1)^m (2m-1)!! (1-t^2)^(m/2),  P_{m+1}^m = (2m+1) t P_m^m,
/// (l-m+1) P_{l+1}^m = (2l+1) t P_l^m - (l+m) P_{l-1}^m.
template <typename Scalar = double>
Scalar assoc_legendre(int l, int m, Scalar t) {
  using std::sqrt;
  detail::require_unit_interval(t, "assoc_legendre");
  if (m < 0 || l < 0) throw DomainError("assoc_legendre: requires 0 <= m <= l");
  if (m > l) throw DomainError("assoc_legendre: order exceeds degree");
  const Scalar s = sqrt((Scalar(1) - t) * (Scalar(1) + t));
  Scalar pmm = Scalar(1);
  for (int k = 1; k <= m; ++k) pmm *= -Scalar(2 * k - 1) * s;
  if (l == m) return pmm;
  Scalar prev = pmm;
  Scalar cur = Scalar(2 * m + 1) * t * pmm;
  for (int k = m + 1; k < l; ++k) {
    const Scalar next = (Scalar(2 * k + 1) * t * cur - Scalar(k + m) * prev) / Scalar(k - m + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Table N(l, m) = sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!) P_l^m(t) for 0 <= m <= l <= L,
/// i.e. Y_l^m at polar cosine t and azimuth 0. Upper triangle is zero.
///
/// Uses the recurrence for the normalized functions, which stays finite for
/// large l where the unnormalized values overflow.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> normalized_assoc_legendre_table(int L, Scalar t) {
  using std::sqrt;
  detail::require_degree(L, "normalized_assoc_legendre_table");
  detail::require_unit_interval(t, "normalized_assoc_legendre_table");
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> table =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(L + 1, L + 1);
  const Scalar s = sqrt((Scalar(1) - t) * (Scalar(1) + t));
  Scalar diag = Scalar(1) / sqrt(Scalar(4) * std::numbers::pi_v<Scalar>);
  for (int m = 0; m <= L; ++m) {
    if (m > 0) diag *= -sqrt(Scalar(2 * m + 1) / Scalar(2 * m)) * s;
    table(m, m) = diag;
    if (m + 1 <= L) table(m + 1, m) = sqrt(Scalar(2 * m + 3)) * t * diag;
    for (int l = m + 2; l <= L; ++l) {
      const Scalar l2 = Scalar(l) * Scalar(l), m2 = Scalar(m) * Scalar(m);
      const Scalar a = sqrt((Scalar(4) * l2 - Scalar(1)) / (l2 - m2));
      const Scalar lm1 = Scalar(l - 1);
      const Scalar b = sqrt((lm1 * lm1 - m2) / (Scalar(4) * lm1 * lm1 - Scalar(1)));
      table(l, m) = a * (t * table(l - 1, m) - b * table(l - 2, m));
    }
  }
  return table;
}

struct BesselConstants {
  double j01;         // smallest positive zero of J_0
  double j1_at_j01;   // J_1(j01)
  double b_limit;     // J_1(j01)^{-2}, the large-degree limit of B_L
};

/// Computed once on first use; the returned reference is immutable.
const BesselConstants& bessel_constants();

/// |P_n(1 - z^2/(2n^2)) - J_0(z)|.
double mehler_heine_gap(int n, double z);

}  // namespace sphsieve
