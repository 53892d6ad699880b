#pragma once

// Recovery of a band-limited function from its samples outside Omega by
// alternating projections: put the known samples back, project onto S_L,
// repeat. The error e_k = f - f_k obeys e_{k+1} = P_L chi_Omega e_k, so each
// step contracts by at most the top eigenvalue of the concentration operator.

#include <cstdint>
#include <vector>

#include "sphsieve/concentration.hpp"
#include "sphsieve/sphharm.hpp"

namespace sphsieve {

struct MaskedSamples {
  GridValues values;  // zero where masked
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> masked;
  double masked_fraction = 0.0;  // share of quadrature weight inside Omega
};

/// Zeroes and flags every grid sample whose node lies in Omega.
MaskedSamples mask(const GridValues& samples, const SphereGrid& grid, const CapUnionDomain& omega);

struct RecoveryOptions {
  int n_theta = 0;  // 0 selects 4L + 48
  int n_phi = 0;    // 0 selects 2 n_theta
  /// Work in the frame of the first cap on a grid split at its boundary, so
  /// that cap is masked exactly. Otherwise node counting on the plain grid
  /// perturbs the contraction rate by roughly one ring's worth of area.
  bool align_grid = true;
  int burn_in = 2;
  /// Ratios stop being recorded once the error falls below this fraction of the
  /// initial error (rounding noise).
  double error_floor = 1e-12;
  double refuse_above = 1.0 - 1e-6;
  ConcentrationOptions concentration;
};

struct RecoveryRun {
  int L = 0;
  CapUnionDomain omega;
  HarmonicExpansion truth;
  HarmonicExpansion estimate;
  std::vector<double> errors;              // ||truth - f_k||, k = 0..iterations, f_0 = 0
  std::vector<double> contraction_ratios;  // errors[k+1] / errors[k], k >= burn_in
  double lambda_bound = 0.0;               // top eigenvalue of the concentration operator
  double certificate = 0.0;                // B_L rho(Omega, L)
  double grid_lambda = 0.0;                // same eigenvalue for the sampled (grid) mask
  double asymptotic_ratio = 0.0;           // last recorded contraction ratio
  double masked_fraction = 0.0;
  int iterations = 0;
  int n_theta = 0;
  int n_phi = 0;
  int burn_in = 2;
};

/// One step: synthesize the estimate, restore the observed samples outside
/// Omega, analyze back to S_L.
HarmonicExpansion inpaint_step(const HarmonicExpansion& estimate, const MaskedSamples& observed,
                               const SphereGrid& grid);

/// Runs `iterations` steps from the zero estimate, tracking the error against
/// `truth`. Refuses (DomainError) when the concentration eigenvalue is
/// >= refuse_above, since then no contraction is guaranteed.
RecoveryRun inpaint(const MaskedSamples& observed, const SphereGrid& grid, const CapUnionDomain& omega,
                    const HarmonicExpansion& truth, int iterations, const RecoveryOptions& options = {});

/// Samples `truth` on the default grid (aligned with the first cap unless
/// disabled), masks Omega and runs inpaint. Truth and estimate are reported
/// in the original frame; errors are rotation invariant.
RecoveryRun recover(const HarmonicExpansion& truth, const CapUnionDomain& omega, int iterations,
                    const RecoveryOptions& options = {});

}  // namespace sphsieve
