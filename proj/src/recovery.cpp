#include "sphsieve/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "sphsieve/errors.hpp"

namespace sphsieve {

MaskedSamples mask(const GridValues& samples, const SphereGrid& grid, const CapUnionDomain& omega) {
  if (samples.rows() != grid.n_theta() || samples.cols() != grid.n_phi())
    throw InputError("mask: sample array does not match the grid");
  MaskedSamples out;
  out.values = samples;
  out.masked.setConstant(grid.n_theta(), grid.n_phi(), false);
  double inside = 0.0;
  for (int i = 0; i < grid.n_theta(); ++i)
    for (int k = 0; k < grid.n_phi(); ++k)
      if (omega.contains(grid.point(i, k))) {
        out.masked(i, k) = true;
        out.values(i, k) = 0.0;
        inside += grid.weight(i);
      }
  out.masked_fraction = inside / (4.0 * std::numbers::pi);
  return out;
}

HarmonicExpansion inpaint_step(const HarmonicExpansion& estimate, const MaskedSamples& observed,
                               const SphereGrid& grid) {
  GridValues values = synthesize_grid(estimate, grid);
  for (int i = 0; i < grid.n_theta(); ++i)
    for (int k = 0; k < grid.n_phi(); ++k)
      if (!observed.masked(i, k)) values(i, k) = observed.values(i, k);
  return analyze(values, grid, estimate.degree_max());
}

RecoveryRun inpaint(const MaskedSamples& observed, const SphereGrid& grid, const CapUnionDomain& omega,
                    const HarmonicExpansion& truth, int iterations, const RecoveryOptions& options) {
  const int L = truth.degree_max();
  if (L < 1) throw DomainError("inpaint: L must be >= 1");
  if (iterations < 0) throw DomainError("inpaint: negative iteration count");
  if (grid.max_exact_degree() < L) throw ResolutionError("inpaint: grid cannot resolve the band limit");

  RecoveryRun run;
  run.L = L;
  run.omega = omega;
  run.truth = truth;
  run.iterations = iterations;
  run.n_theta = grid.n_theta();
  run.n_phi = grid.n_phi();
  run.burn_in = options.burn_in;
  run.masked_fraction = observed.masked_fraction;

  const ConcentrationReport report = verify_bound(omega, L, options.concentration);
  run.lambda_bound = report.lambda;
  run.certificate = report.bound;
  if (run.lambda_bound >= options.refuse_above)
    throw DomainError("inpaint: concentration eigenvalue is too close to 1 for a contraction guarantee");

  // Discrete counterpart: the iteration contracts by the top eigenvalue of
  // the Gram matrix of the masked grid nodes.
  std::vector<Eigen::Vector3d> nodes;
  std::vector<double> weights;
  for (int i = 0; i < grid.n_theta(); ++i)
    for (int k = 0; k < grid.n_phi(); ++k)
      if (observed.masked(i, k)) {
        nodes.push_back(grid.point(i, k));
        weights.push_back(grid.weight(i));
      }
  PointCloud masked_nodes;
  masked_nodes.points.resize(3, static_cast<Eigen::Index>(nodes.size()));
  masked_nodes.weights = Eigen::Map<const Eigen::VectorXd>(weights.data(), static_cast<Eigen::Index>(weights.size()));
  for (std::size_t j = 0; j < nodes.size(); ++j) masked_nodes.points.col(static_cast<Eigen::Index>(j)) = nodes[j];
  run.grid_lambda = top_eigenvalue(gram_matrix(L, masked_nodes), options.concentration.eigen).value;

  HarmonicExpansion estimate(L);
  run.errors.push_back(parseval_norm(truth));
  for (int it = 0; it < iterations; ++it) {
    estimate = inpaint_step(estimate, observed, grid);
    run.errors.push_back((truth.coeffs() - estimate.coeffs()).norm());
  }
  run.estimate = estimate;

  const double floor = options.error_floor * run.errors.front();
  for (std::size_t k = static_cast<std::size_t>(std::max(0, options.burn_in)); k + 1 < run.errors.size(); ++k) {
    if (run.errors[k] <= floor || run.errors[k + 1] <= floor) break;
    run.contraction_ratios.push_back(run.errors[k + 1] / run.errors[k]);
  }
  if (!run.contraction_ratios.empty()) run.asymptotic_ratio = run.contraction_ratios.back();
  return run;
}

RecoveryRun recover(const HarmonicExpansion& truth, const CapUnionDomain& omega, int iterations,
                    const RecoveryOptions& options) {
  const int L = truth.degree_max();
  const int n_theta = options.n_theta > 0 ? options.n_theta : 4 * L + 48;
  const int n_phi = options.n_phi > 0 ? options.n_phi : 2 * n_theta;
  const bool align = options.align_grid && !omega.empty() && std::abs(omega.caps().front().height) < 1.0;
  if (!align) {
    const SphereGrid grid(n_theta, n_phi);
    return inpaint(mask(synthesize_grid(truth, grid), grid, omega), grid, omega, truth, iterations, options);
  }

  // Rotate the first apex to the north pole and split the rings at its height.
  const SphericalCap& first = omega.caps().front();
  const Eigen::Matrix3d to_pole = frame_with_pole(first.apex).transpose();
  const CapUnionDomain local_omega = omega.rotated(to_pole);
  const HarmonicExpansion local_truth = rotate(to_pole, truth);
  // Caps sharing the axis get their own ring breaks, so they are exact too.
  std::vector<double> breaks;
  for (const auto& cap : local_omega.caps()) {
    const double z = cap.apex.z();
    if (std::abs(std::abs(z) - 1.0) > 1e-12) continue;
    const double t = z > 0 ? cap.height : -cap.height;
    if (t > -1.0 && t < 1.0) breaks.push_back(t);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(), [](double a, double b) { return std::abs(a - b) < 1e-15; }),
               breaks.end());
  const std::vector<int> orders(breaks.size() + 1, std::max(L + 1, n_theta / 2));
  const SphereGrid grid = SphereGrid::composite(breaks, orders, n_phi);
  RecoveryRun run = inpaint(mask(synthesize_grid(local_truth, grid), grid, local_omega), grid, local_omega,
                            local_truth, iterations, options);
  const Eigen::Matrix3d from_pole = to_pole.transpose();
  run.omega = omega;
  run.truth = truth;
  run.estimate = rotate(from_pole, run.estimate);
  return run;
}

}  // namespace sphsieve
