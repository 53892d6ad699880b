#include "sphsieve/quadrature.hpp"

#include <map>
#include <mutex>

namespace sphsieve {

std::shared_ptr<const QuadratureRule<double>> cached_gauss_rule(int n) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const QuadratureRule<double>>> cache;
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
  }
  // Built outside the lock; a concurrent duplicate build yields an identical rule.
  auto rule = std::make_shared<const QuadratureRule<double>>(gauss_rule<double>(n));
  std::lock_guard<std::mutex> lock(mutex);
  return cache.emplace(n, std::move(rule)).first->second;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b) {
  double previous = cached_gauss_rule(8)->integrate(f, a, b);
  for (int n = 16; n <= 1024; n *= 2) {
    const double current = cached_gauss_rule(n)->integrate(f, a, b);
    if (std::abs(current - previous) <= 1e-12 * std::max(1e-300, std::abs(current)) ||
        std::abs(current - previous) <= 1e-15)
      return current;
    previous = current;
  }
  throw ConvergenceError("integrate_adaptive: no agreement up to order 1024");
}

double integrate_tail(const std::function<double(double)>& f, double delta, int degree_hint) {
  if (!(delta >= -1.0 && delta < 1.0)) throw DomainError("integrate_tail: delta must lie in [-1, 1)");
  if (degree_hint < 0) return integrate_adaptive(f, delta, 1.0);
  return cached_gauss_rule(rule_order_for_degree(degree_hint))->integrate(f, delta, 1.0);
}

double pl_squared_tail(int L, double delta) {
  if (L < 0) throw DomainError("pl_squared_tail: negative degree");
  return integrate_tail(
      [L](double t) {
        const double p = legendre_p(L, std::clamp(t, -1.0, 1.0));
        return p * p;
      },
      delta, 2 * L);
}

double pl_cross_tail(int L, int l, double delta) {
  if (l < 0 || l > L) throw DomainError("pl_cross_tail: requires 0 <= l <= L");
  return integrate_tail(
      [L, l](double t) {
        const auto seq = legendre_all(L, std::clamp(t, -1.0, 1.0));
        return seq.values[L] * seq.values[l];
      },
      delta, L + l);
}

}  // namespace sphsieve
