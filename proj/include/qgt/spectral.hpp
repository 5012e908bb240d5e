#pragma once

#include "qgt/errors.hpp"
#include "qgt/types.hpp"

namespace qgt {

/// A validated full-rank density matrix: Hermitian, unit trace, all
/// eigenvalues >= tol::rank. Construct through validate_density().
class DensityMatrix {
public:
    const ComplexMatrix& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

private:
    friend DensityMatrix validate_density(const ComplexMatrix& m);
    explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}
    ComplexMatrix m_;
};

/// Eigenvalues in descending order together with the matching orthonormal
/// eigenframe (one eigenvector per column). Frames produced by
/// hermitian_eigendecompose carry the canonical gauge: the largest-magnitude
/// entry of every column is real and positive. align_frames intentionally
/// re-phases columns, so its outputs carry the overlap gauge instead.
struct SpectralDecomposition {
    RealVector eigenvalues;
    ComplexMatrix frame;
    double min_gap = 0.0;  // smallest spacing between adjacent eigenvalues

    Eigen::Index dim() const { return eigenvalues.size(); }
};

/// One spectral phase theta_n per level, in radians (defined modulo 2*pi).
struct PhaseFrame {
    RealVector phases;

    Eigen::Index levels() const { return phases.size(); }
};

/// Deterministic Hermitian eigendecomposition with descending eigenvalues
/// and the canonical column gauge. Ties in the spectrum are broken by
/// lexicographic comparison of the gauge-fixed columns.
///
/// Throws NotHermitian or ConvergenceFailure.
SpectralDecomposition hermitian_eigendecompose(const ComplexMatrix& m);

/// Checks Hermiticity, unit trace and full rank; returns the validated
/// value. Throws NotHermitian, TraceNotOne or NotFullRank.
DensityMatrix validate_density(const ComplexMatrix& m);

/// Permutes and re-phases the columns of `next` so that level n pairs with
/// level n of `prev` (maximum-overlap matching) and every diagonal overlap
/// <n_prev|n_next> is real and nonnegative. Falls back to index pairing
/// when no overlap reaches tol::match. Throws AmbiguousMatching when two
/// levels of `next` both best-match the same level of `prev`, and
/// DimensionMismatch for incompatible sizes.
SpectralDecomposition align_frames(const SpectralDecomposition& prev,
                                   const SpectralDecomposition& next);

/// As above, additionally reporting per level the phase arg<n_prev|n_next>
/// that the alignment removed. Callers reconstruct the canonical-gauge
/// Berry connection from these.
SpectralDecomposition align_frames(const SpectralDecomposition& prev,
                                   const SpectralDecomposition& next,
                                   RealVector* removed_phases);

/// Throws DegenerateSpectrum when two adjacent levels closer than tol::gap
/// carry combined weight above tol::degenerate_weight. Lighter degenerate
/// pairs are harmless: every weighted tensor bounds their contribution by
/// the combined weight.
void require_resolvable_spectrum(const RealVector& descending_eigenvalues);

/// True when some adjacent pair with combined weight above
/// tol::degenerate_weight lies closer than `gap`.
bool has_near_crossing(const RealVector& descending_eigenvalues, double gap);

}  // namespace qgt
