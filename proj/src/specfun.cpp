#include "sphsieve/specfun.hpp"

#include <cmath>

namespace sphsieve {

const BesselConstants& bessel_constants() {
  static const BesselConstants constants = [] {
    BesselConstants c{};
    c.j01 = bessel_j0_first_zero<double>();
    c.j1_at_j01 = bessel_j1(c.j01);
    c.b_limit = 1.0 / (c.j1_at_j01 * c.j1_at_j01);
    return c;
  }();
  return constants;
}

double mehler_heine_gap(int n, double z) {
  if (n < 1) throw DomainError("mehler_heine_gap: n must be >= 1");
  if (z < 0) throw DomainError("mehler_heine_gap: z must be >= 0");
  const double shifted = 1.0 - z * z / (2.0 * n * static_cast<double>(n));
  if (shifted < -1.0) throw DomainError("mehler_heine_gap: shifted argument leaves [-1,1]");
  return std::abs(legendre_p(n, shifted) - bessel_j0(z));
}

}  // namespace sphsieve
