#pragma once

// Gauss-Legendre rules on [-1,1] and the tail integrals int_delta^1 of
// Legendre products.

#include <cmath>
#include <functional>
#include <memory>
#include <type_traits>

#include "sphsieve/specfun.hpp"

namespace sphsieve {

template <typename Scalar = double>
struct QuadratureRule {
  int order = 0;
  VectorX<Scalar> nodes;    // ascending zeros of P_order
  VectorX<Scalar> weights;  // positive, summing to 2

  /// int_a^b f(t) dt with the rule mapped affinely onto [a, b].
  template <typename F>
  Scalar integrate(F&& f, Scalar a, Scalar b) const {
    const Scalar half = (b - a) / 2, mid = (b + a) / 2;
    Scalar sum = 0;
    for (int i = 0; i < order; ++i) sum += weights[i] * f(mid + half * nodes[i]);
    return half * sum;
  }
};

/// n-point rule with w_i = 2 / ((1 - t_i^2) P_n'(t_i)^2).
///
/// At a zero of P_n the two-term derivative identity gives
/// P_n'(t_i) = n P_{n-1}(t_i) / (1 - t_i^2), so w_i = 2 (1 - t_i^2) / (n P_{n-1}(t_i))^2.
template <typename Scalar = double>
QuadratureRule<Scalar> gauss_rule(int n) {
  if (n < 1 || n > 2000) throw DomainError("gauss_rule: order must lie in [1, 2000]");
  // Double rules are built in long double and rounded once, which keeps the
  // weight sum within a few ulps of 2 up to n = 2000.
  using Wide = std::conditional_t<std::is_same_v<Scalar, double>, long double, Scalar>;
  const VectorX<Wide> nodes = all_zeros<Wide>(n);
  QuadratureRule<Scalar> rule{n, nodes.template cast<Scalar>(), VectorX<Scalar>(n)};
  for (int i = 0; i < n; ++i) {
    const Wide t = nodes[i];
    const Wide pnm1 = legendre_p(n - 1, t);
    rule.weights[i] = static_cast<Scalar>(Wide(2) * (Wide(1) - t) * (Wide(1) + t) / (Wide(n) * Wide(n) * pnm1 * pnm1));
  }
  return rule;
}

/// Process-wide cache of double rules; safe under concurrent access.
std::shared_ptr<const QuadratureRule<double>> cached_gauss_rule(int n);

/// ceil((d + 2) / 2) + 2: exact for degree d with two spare nodes.
constexpr int rule_order_for_degree(int degree) { return (degree + 3) / 2 + 2; }

/// int_delta^1 f(t) dt. With degree_hint >= 0 the integrand is taken to be a
/// polynomial of at most that degree and a single exact rule is used; a
/// negative hint selects adaptive order doubling.
double integrate_tail(const std::function<double(double)>& f, double delta, int degree_hint);

/// int_a^b f(t) dt, doubling the Gauss order until two results agree to 1e-12
/// relative.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b);

/// int_delta^1 P_L(t)^2 dt.
double pl_squared_tail(int L, double delta);

/// int_delta^1 P_L(t) P_l(t) dt.
double pl_cross_tail(int L, int l, double delta);

}  // namespace sphsieve
