#include "qgt/distances.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace qgt {

std::vector<Eigen::Index> max_weight_assignment(const RealMatrix& weight) {
    if (weight.rows() != weight.cols())
        throw DimensionMismatch("max_weight_assignment: matrix must be square");
    const int n = static_cast<int>(weight.rows());
    const double inf = std::numeric_limits<double>::infinity();

    // Potential-based Hungarian algorithm on costs = -weight, O(n^3).
    std::vector<double> u(static_cast<size_t>(n) + 1, 0.0);
    std::vector<double> v(static_cast<size_t>(n) + 1, 0.0);
    std::vector<int> match(static_cast<size_t>(n) + 1, 0);
    std::vector<int> way(static_cast<size_t>(n) + 1, 0);
    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<size_t>(n) + 1, inf);
        std::vector<bool> used(static_cast<size_t>(n) + 1, false);
        do {
            used[static_cast<size_t>(j0)] = true;
            const int i0 = match[static_cast<size_t>(j0)];
            int j1 = -1;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<size_t>(j)]) continue;
                const double cur = -weight(i0 - 1, j - 1) - u[static_cast<size_t>(i0)] -
                                   v[static_cast<size_t>(j)];
                if (cur < minv[static_cast<size_t>(j)]) {
                    minv[static_cast<size_t>(j)] = cur;
                    way[static_cast<size_t>(j)] = j0;
                }
                if (minv[static_cast<size_t>(j)] < delta) {
                    delta = minv[static_cast<size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<size_t>(j)]) {
                    u[static_cast<size_t>(match[static_cast<size_t>(j)])] += delta;
                    v[static_cast<size_t>(j)] -= delta;
                } else {
                    minv[static_cast<size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (match[static_cast<size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<size_t>(j0)];
            match[static_cast<size_t>(j0)] = match[static_cast<size_t>(j1)];
            j0 = j1;
        } while (j0);
    }

    std::vector<Eigen::Index> out(static_cast<size_t>(n));
    for (int j = 1; j <= n; ++j)
        if (match[static_cast<size_t>(j)] > 0)
            out[static_cast<size_t>(match[static_cast<size_t>(j)]) - 1] = j - 1;
    return out;
}

DistanceResult sjoqvist_finite_distance(const SpectralDecomposition& a,
                                        const SpectralDecomposition& b) {
    if (a.dim() != b.dim())
        throw DimensionMismatch("sjoqvist_finite_distance: dimensions differ");
    require_resolvable_spectrum(a.eigenvalues);
    require_resolvable_spectrum(b.eigenvalues);

    const Eigen::Index n = a.dim();
    const ComplexMatrix overlap = a.frame.adjoint() * b.frame;
    RealMatrix weight(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            weight(i, j) = std::sqrt(std::max(a.eigenvalues[i], 0.0) *
                                     std::max(b.eigenvalues[j], 0.0)) *
                           std::abs(overlap(i, j));

    const std::vector<Eigen::Index> pairing = max_weight_assignment(weight);
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) total += weight(i, pairing[static_cast<size_t>(i)]);

    DistanceResult out;
    out.value = std::sqrt(std::max(2.0 - 2.0 * total, 0.0));
    out.near_degenerate = has_near_crossing(a.eigenvalues, 10.0 * tol::gap) ||
                          has_near_crossing(b.eigenvalues, 10.0 * tol::gap);
    return out;
}

DistanceResult sjoqvist_finite_distance(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim())
        throw DimensionMismatch("sjoqvist_finite_distance: dimensions differ");
    return sjoqvist_finite_distance(hermitian_eigendecompose(a.matrix()),
                                    hermitian_eigendecompose(b.matrix()));
}

Purification make_purification(const SpectralDecomposition& decomposition,
                               const PhaseFrame& phases,
                               const SpectralDecomposition& reference) {
    const Eigen::Index n = decomposition.dim();
    if (phases.levels() != n || reference.dim() != n)
        throw DimensionMismatch("make_purification: sizes do not match");
    ComplexVector diag(n);
    for (Eigen::Index i = 0; i < n; ++i)
        diag[i] = std::polar(std::sqrt(std::max(decomposition.eigenvalues[i], 0.0)),
                             phases.phases[i]);
    Purification out;
    out.w = decomposition.frame * diag.asDiagonal() * reference.frame.adjoint();
    out.frame = decomposition;
    out.phases = phases;
    return out;
}

double raw_purification_distance(const Purification& p, const Purification& q) {
    if (p.w.rows() != q.w.rows() || p.w.cols() != q.w.cols())
        throw DimensionMismatch("raw_purification_distance: dimensions differ");
    return (p.w - q.w).norm();
}

DecompositionCheck decomposition_residual(const StateFamily& fam, const ParameterPoint& r,
                                          const ParameterPoint& dr,
                                          const RealVector& dtheta) {
    if (r.size() != fam.n_params() || dr.size() != fam.n_params())
        throw DimensionMismatch("decomposition_residual: point size does not match family");
    if (dr.norm() > 1e-2)
        throw ValidationError("decomposition_residual: |dr| must be <= 1e-2");
    if (dtheta.size() != fam.dim())
        throw DimensionMismatch("decomposition_residual: one phase increment per level required");

    const SpectralDecomposition d0 = hermitian_eigendecompose(fam.density(r));
    const SpectralDecomposition d1_raw = hermitian_eigendecompose(fam.density(r + dr));
    require_resolvable_spectrum(d0.eigenvalues);
    require_resolvable_spectrum(d1_raw.eigenvalues);

    RealVector alpha;
    const SpectralDecomposition d1 = align_frames(d0, d1_raw, &alpha);

    // Canonical-gauge frame at r + dr, level-matched to d0.
    SpectralDecomposition d1_canonical = d1;
    for (Eigen::Index n = 0; n < d1.dim(); ++n)
        d1_canonical.frame.col(n) *= std::polar(1.0, alpha[n]);

    PhaseFrame zero{RealVector::Zero(fam.dim())};
    PhaseFrame moved{dtheta};
    const Purification w0 = make_purification(d0, zero, d0);
    const Purification w1 = make_purification(d1_canonical, moved, d0);

    DecompositionCheck out;
    out.raw_sq = (w1.w - w0.w).squaredNorm();
    const DistanceResult base = sjoqvist_finite_distance(d0, d1_raw);
    out.base_sq = base.value * base.value;
    for (Eigen::Index n = 0; n < fam.dim(); ++n) {
        const double horizontal_defect = dtheta[n] + alpha[n];
        out.fiber_sq += std::max(d0.eigenvalues[n], 0.0) * horizontal_defect * horizontal_defect;
    }
    out.residual = std::abs(out.raw_sq - out.base_sq - out.fiber_sq);
    return out;
}

}  // namespace qgt
