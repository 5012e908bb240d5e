#pragma once

#include <Eigen/Dense>
#include <complex>

namespace qgt {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Coordinates R = (R^1, ..., R^k) of a point in parameter space.
using ParameterPoint = Eigen::VectorXd;

namespace tol {

// Validation tolerances (double-precision headroom above LAPACK-grade
// eigensolver error).
inline constexpr double hermiticity = 1e-10;
inline constexpr double trace = 1e-10;
inline constexpr double rank = 1e-12;
inline constexpr double ortho = 1e-10;
inline constexpr double eig = 1e-9;

// Overlap threshold below which frame matching falls back to index order.
inline constexpr double match = 0.5;

// Eigenvalue gaps below this make perturbative denominators untrustworthy.
inline constexpr double gap = 1e-8;

// A near-degenerate pair whose combined weight stays below this bound
// contributes O(weight) to any weighted tensor and is skipped instead of
// raising DegenerateSpectrum.
inline constexpr double degenerate_weight = 1e-6;

// Maximum admissible population of the top retained Fock level.
inline constexpr double truncation = 1e-8;

// Scaled floor used by the inequality reports.
inline constexpr double residual = 1e-10;

}  // namespace tol

inline bool is_square(const ComplexMatrix& m) { return m.rows() == m.cols(); }

/// Largest absolute entry of m - m^dagger.
double hermiticity_defect(const ComplexMatrix& m);

/// Wrap an angle to the principal branch (-pi, pi].
double wrap_angle(double x);

}  // namespace qgt
