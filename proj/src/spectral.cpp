#include "qgt/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace qgt {

double hermiticity_defect(const ComplexMatrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double wrap_angle(double x) {
    const double two_pi = 2.0 * M_PI;
    double y = std::remainder(x, two_pi);
    if (y <= -M_PI) y += two_pi;
    return y;
}

namespace {

void require_finite_square(const ComplexMatrix& m) {
    if (!is_square(m)) {
        std::ostringstream os;
        os << "matrix is " << m.rows() << "x" << m.cols() << ", expected square";
        throw DimensionMismatch(os.str());
    }
    if (!m.allFinite()) throw ValidationError("matrix has non-finite entries");
}

// Rotate each column so its largest-magnitude entry is real and positive.
void gauge_fix_columns(ComplexMatrix& frame) {
    for (Eigen::Index j = 0; j < frame.cols(); ++j) {
        Eigen::Index imax = 0;
        frame.col(j).cwiseAbs().maxCoeff(&imax);
        const Complex pivot = frame(imax, j);
        const double mag = std::abs(pivot);
        if (mag > 0.0) frame.col(j) *= std::conj(pivot) / mag;
    }
}

bool column_lex_less(const ComplexMatrix& frame, Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index i = 0; i < frame.rows(); ++i) {
        const Complex& x = frame(i, a);
        const Complex& y = frame(i, b);
        if (x.real() != y.real()) return x.real() < y.real();
        if (x.imag() != y.imag()) return x.imag() < y.imag();
    }
    return false;
}

double min_adjacent_gap(const RealVector& descending) {
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i + 1 < descending.size(); ++i)
        gap = std::min(gap, descending[i] - descending[i + 1]);
    return descending.size() > 1 ? gap : std::numeric_limits<double>::infinity();
}

}  // namespace

SpectralDecomposition hermitian_eigendecompose(const ComplexMatrix& m) {
    require_finite_square(m);
    const double defect = hermiticity_defect(m);
    if (defect > tol::hermiticity) {
        std::ostringstream os;
        os << "hermiticity defect " << defect << " exceeds " << tol::hermiticity;
        throw NotHermitian(os.str());
    }

    // Symmetrize before solving so the defect below tolerance cannot leak
    // into the result.
    const ComplexMatrix sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    if (solver.info() != Eigen::Success)
        throw ConvergenceFailure("Hermitian eigensolver failed to converge");

    const Eigen::Index n = m.rows();
    ComplexMatrix frame = solver.eigenvectors();
    RealVector values = solver.eigenvalues();
    gauge_fix_columns(frame);

    std::vector<Eigen::Index> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (values[a] != values[b]) return values[a] > values[b];
        return column_lex_less(frame, a, b);
    });

    SpectralDecomposition out;
    out.eigenvalues.resize(n);
    out.frame.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        out.eigenvalues[j] = values[order[static_cast<size_t>(j)]];
        out.frame.col(j) = frame.col(order[static_cast<size_t>(j)]);
    }
    out.min_gap = min_adjacent_gap(out.eigenvalues);
    return out;
}

DensityMatrix validate_density(const ComplexMatrix& m) {
    require_finite_square(m);
    const double defect = hermiticity_defect(m);
    if (defect > tol::hermiticity) {
        std::ostringstream os;
        os << "hermiticity defect " << defect << " exceeds " << tol::hermiticity;
        throw NotHermitian(os.str());
    }
    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > tol::trace || std::abs(m.trace().imag()) > tol::trace) {
        std::ostringstream os;
        os << "trace " << tr << " differs from 1 by more than " << tol::trace;
        throw TraceNotOne(os.str());
    }
    const SpectralDecomposition d = hermitian_eigendecompose(m);
    const double min_eig = d.eigenvalues[d.dim() - 1];
    if (min_eig < tol::rank) {
        std::ostringstream os;
        os << "minimum eigenvalue " << min_eig << " below rank tolerance " << tol::rank;
        throw NotFullRank(os.str());
    }
    return DensityMatrix(m);
}

void require_resolvable_spectrum(const RealVector& descending_eigenvalues) {
    const RealVector& lambda = descending_eigenvalues;
    for (Eigen::Index n = 0; n + 1 < lambda.size(); ++n) {
        const double gap = lambda[n] - lambda[n + 1];
        const double weight = lambda[n] + lambda[n + 1];
        if (gap < tol::gap && weight > tol::degenerate_weight) {
            std::ostringstream os;
            os << "levels " << n << " and " << n + 1 << " are degenerate (gap " << gap
               << ", combined weight " << weight << ")";
            throw DegenerateSpectrum(os.str());
        }
    }
}

bool has_near_crossing(const RealVector& descending_eigenvalues, double gap) {
    const RealVector& lambda = descending_eigenvalues;
    for (Eigen::Index n = 0; n + 1 < lambda.size(); ++n) {
        if (lambda[n] - lambda[n + 1] < gap &&
            lambda[n] + lambda[n + 1] > tol::degenerate_weight)
            return true;
    }
    return false;
}

SpectralDecomposition align_frames(const SpectralDecomposition& prev,
                                   const SpectralDecomposition& next) {
    return align_frames(prev, next, nullptr);
}

SpectralDecomposition align_frames(const SpectralDecomposition& prev,
                                   const SpectralDecomposition& next,
                                   RealVector* removed_phases) {
    const Eigen::Index n = prev.dim();
    if (next.dim() != n || prev.frame.rows() != next.frame.rows())
        throw DimensionMismatch("align_frames: decompositions have different dimensions");

    const ComplexMatrix overlap = prev.frame.adjoint() * next.frame;

    // Pair column j of `next` with the prev level of largest |overlap|.
    std::vector<Eigen::Index> best(static_cast<size_t>(n));
    double weakest = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::Index imax = 0;
        const double mag = overlap.col(j).cwiseAbs().maxCoeff(&imax);
        best[static_cast<size_t>(j)] = imax;
        weakest = std::min(weakest, mag);
    }

    std::vector<Eigen::Index> source(static_cast<size_t>(n), -1);
    if (weakest < tol::match) {
        // Overlap matrix is too unstructured to trust; keep index order.
        for (Eigen::Index j = 0; j < n; ++j) source[static_cast<size_t>(j)] = j;
    } else {
        for (Eigen::Index j = 0; j < n; ++j) {
            const Eigen::Index i = best[static_cast<size_t>(j)];
            if (source[static_cast<size_t>(i)] >= 0) {
                std::ostringstream os;
                os << "levels " << source[static_cast<size_t>(i)] << " and " << j
                   << " of the new frame both best-match level " << i;
                throw AmbiguousMatching(os.str());
            }
            source[static_cast<size_t>(i)] = j;
        }
    }

    SpectralDecomposition out;
    out.eigenvalues.resize(n);
    out.frame.resize(next.frame.rows(), n);
    out.min_gap = next.min_gap;
    if (removed_phases) removed_phases->resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index j = source[static_cast<size_t>(i)];
        const Complex o = overlap(i, j);
        const double mag = std::abs(o);
        const Complex phase = mag > 0.0 ? std::conj(o) / mag : Complex(1.0, 0.0);
        out.frame.col(i) = next.frame.col(j) * phase;
        out.eigenvalues[i] = next.eigenvalues[j];
        if (removed_phases) (*removed_phases)[i] = std::arg(o);
    }
    return out;
}

}  // namespace qgt
