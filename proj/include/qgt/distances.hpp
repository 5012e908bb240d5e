#pragma once

#include <vector>

#include "qgt/models.hpp"
#include "qgt/spectral.hpp"

namespace qgt {

struct DistanceResult {
    double value = 0.0;
    /// Set when either input has adjacent significant levels closer than
    /// ten times tol::gap; the level pairing is fragile there.
    bool near_degenerate = false;
};

/// Column index assigned to each row of `weight`, maximizing the total
/// assigned weight (square matrices only).
std::vector<Eigen::Index> max_weight_assignment(const RealMatrix& weight);

/// Minimum distance between the spectral decompositions of two full-rank
/// states: d^2 = 2 - 2 max_pairing sum_n sqrt(lambda_n lambda'_n) |<n|n'>|.
/// Throws DegenerateSpectrum or DimensionMismatch.
DistanceResult sjoqvist_finite_distance(const DensityMatrix& a, const DensityMatrix& b);
DistanceResult sjoqvist_finite_distance(const SpectralDecomposition& a,
                                        const SpectralDecomposition& b);

/// W = sum_n sqrt(lambda_n) e^{i theta_n} |n><n_0| built from a
/// decomposition, spectral phases and a fixed reference frame.
struct Purification {
    ComplexMatrix w;
    SpectralDecomposition frame;
    PhaseFrame phases;
};

Purification make_purification(const SpectralDecomposition& decomposition,
                               const PhaseFrame& phases,
                               const SpectralDecomposition& reference);

/// Hilbert-Schmidt norm of the difference of two purifications.
double raw_purification_distance(const Purification& p, const Purification& q);

/// The three terms of the distance decomposition across a small
/// displacement, and how far they are from closing:
/// residual = |raw^2 - base^2 - fiber^2|, expected O(|dr|^3).
struct DecompositionCheck {
    double raw_sq = 0.0;    // purification distance squared
    double base_sq = 0.0;   // finite Sjoqvist distance squared
    double fiber_sq = 0.0;  // sum_n lambda_n (dtheta_n - i A_n(dr))^2
    double residual = 0.0;
};

/// Evaluates the decomposition across r -> r + dr with the given per-level
/// phase increments. `dr` must satisfy |dr| <= 1e-2.
DecompositionCheck decomposition_residual(const StateFamily& fam, const ParameterPoint& r,
                                          const ParameterPoint& dr,
                                          const RealVector& dtheta);

}  // namespace qgt
