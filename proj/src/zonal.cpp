#include "sphsieve/zonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sphsieve/errors.hpp"
#include "sphsieve/quadrature.hpp"
#include "sphsieve/specfun.hpp"

namespace sphsieve {

namespace {
constexpr double kPi = std::numbers::pi;
}

ZonalFilter::ZonalFilter(double support_delta, std::function<double(double)> profile, int degree_hint,
                         std::vector<double> knots)
    : delta_(support_delta), profile_(std::move(profile)), degree_(degree_hint), knots_(std::move(knots)) {
  if (!(delta_ >= -1.0 && delta_ < 1.0)) throw DomainError("ZonalFilter: support_delta must lie in [-1, 1)");
  std::sort(knots_.begin(), knots_.end());
  for (double k : knots_)
    if (!(k > delta_ && k < 1.0)) throw DomainError("ZonalFilter: knots must lie strictly inside (delta, 1)");
}

double ZonalFilter::operator()(double t) const { return (t >= delta_ && t <= 1.0) ? profile_(t) : 0.0; }

double ZonalFilter::integrate(const std::function<double(double)>& weight, int weight_degree) const {
  std::vector<double> breaks{delta_};
  breaks.insert(breaks.end(), knots_.begin(), knots_.end());
  breaks.push_back(1.0);
  const auto integrand = [&](double t) { return profile_(t) * weight(t); };
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (degree_ < 0 || weight_degree < 0)
      sum += integrate_adaptive(integrand, breaks[i], breaks[i + 1]);
    else
      sum += cached_gauss_rule(rule_order_for_degree(degree_ + weight_degree))
                 ->integrate(integrand, breaks[i], breaks[i + 1]);
  }
  return sum;
}

Eigen::VectorXd ZonalFilter::coefficients(int L) const {
  if (L < 0) throw DomainError("ZonalFilter::coefficients: negative band limit");
  Eigen::VectorXd c(L + 1);
  for (int l = 0; l <= L; ++l) c[l] = zonal_coeff(*this, l);
  return c;
}

double zonal_coeff(const ZonalFilter& g, int l) {
  if (l < 0) throw DomainError("zonal_coeff: negative degree");
  const double integral =
      g.integrate([l](double t) { return legendre_p(l, std::clamp(t, -1.0, 1.0)); }, l);
  return std::sqrt((2 * l + 1) / (4.0 * kPi)) * 2.0 * kPi * integral;
}

HarmonicExpansion convolve(const HarmonicExpansion& f, const Eigen::VectorXd& zonal_coeffs) {
  const int L = f.degree_max();
  if (zonal_coeffs.size() < L + 1) throw InputError("convolve: filter coefficients shorter than the band limit");
  HarmonicExpansion out(L);
  for (int l = 0; l <= L; ++l) {
    const double multiplier = std::sqrt(4.0 * kPi / (2 * l + 1)) * zonal_coeffs[l];
    for (int m = -l; m <= l; ++m) out(l, m) = multiplier * f(l, m);
  }
  return out;
}

HarmonicExpansion convolve(const HarmonicExpansion& f, const ZonalFilter& g) {
  return convolve(f, g.coefficients(f.degree_max()));
}

ZonalFilter legendre_filter(int k, double delta) {
  if (k < 0) throw DomainError("legendre_filter: negative degree");
  return ZonalFilter(delta, [k](double t) { return legendre_p(k, std::clamp(t, -1.0, 1.0)); }, k);
}

ZonalFilter cap_indicator(double delta) {
  return ZonalFilter(delta, [](double) { return 1.0; }, 0);
}

ZonalFilter g_delta(int L, double delta) {
  if (L < 1) throw DomainError("g_delta: L must be >= 1");
  const double t_ll = largest_zero(L);
  if (delta < t_ll || !(delta < 1.0))
    throw DomainError("g_delta: requires t_{L,L} <= delta < 1");
  return legendre_filter(L, delta);
}

double filter_norm_squared(const ZonalFilter& g) {
  // g^2 has twice the profile degree; weight g itself.
  const double integral = g.integrate([&g](double t) { return g(t); }, g.degree_hint());
  return 2.0 * kPi * integral;
}

double extremal_objective_p2(const ZonalFilter& g, int L) {
  if (L < 0) throw DomainError("extremal_objective_p2: negative band limit");
  const double norm2 = filter_norm_squared(g);
  double best = 0.0;
  for (int l = 0; l <= L; ++l) {
    const double c = zonal_coeff(g, l);
    if (c == 0.0) return std::numeric_limits<double>::infinity();
    best = std::max(best, (2 * l + 1) / (4.0 * kPi) * norm2 / (c * c));
  }
  return best;
}

double c2_constant(int L, double delta) { return 1.0 / (2.0 * kPi * pl_squared_tail(L, delta)); }

}  // namespace sphsieve
