#pragma once

#include <functional>
#include <map>
#include <vector>

#include "qgt/models.hpp"
#include "qgt/spectral.hpp"

namespace qgt {

enum class FdScheme {
    central2,   // (f(+h) - f(-h)) / 2h
    central4,   // five-point stencil, fourth order
    richardson  // central2 at h and h/2 combined to fourth order
};

struct StepPolicy {
    double h = 1e-5;
    FdScheme scheme = FdScheme::central2;
    std::map<Eigen::Index, double> per_axis;

    double step(Eigen::Index axis) const {
        auto it = per_axis.find(axis);
        return it == per_axis.end() ? h : it->second;
    }
    void validate() const;
};

/// Central-difference approximations of the density-matrix gradient, one
/// matrix per parameter axis. Throws DomainExceeded when a stencil point
/// leaves the family domain.
std::vector<ComplexMatrix> matrix_fd(const StateFamily& fam, const ParameterPoint& r,
                                     const StepPolicy& policy);

enum class TangentRoute {
    perturbative,  // gauge-free: first-order eigen-perturbation of rho
    frame_fd       // frame differencing with aligned eigenframes
};

/// Test hook for gauge-invariance checks: an extra phase chi_n(R) applied
/// to eigenframe column n before alignment (frame_fd route only).
using GaugeField = std::function<double(Eigen::Index level, const ParameterPoint&)>;

struct TangentData {
    SpectralDecomposition spec;             // decomposition at the base point
    std::vector<ComplexMatrix> rho_grad;    // k matrices d_mu rho
    RealMatrix eigval_grad;                 // k x N, d_mu lambda_n
    std::vector<std::vector<ComplexVector>> proj_vec_grad;  // [k][n] (1-P_n)|d_mu n>
    std::vector<std::vector<Complex>> berry_conn;           // [k][n], frame route only
    bool has_berry_conn = false;

    Eigen::Index n_axes() const { return static_cast<Eigen::Index>(rho_grad.size()); }
};

/// Per-direction spectral derivatives of the family at r.
///
/// The perturbative route uses d_mu lambda_n = <n|d_mu rho|n> and
/// (1-P_n)|d_mu n> = sum_{m != n} |m><m|d_mu rho|n> / (lambda_n - lambda_m);
/// it is free of any eigenvector gauge. The frame route differences
/// eigenframes aligned across the stencil and also reports the Berry
/// connection of the canonical gauge.
///
/// Near-degenerate level pairs are tolerated while their combined weight
/// stays below tol::degenerate_weight (their contribution to any
/// lambda-weighted tensor is bounded by that weight); heavier degenerate
/// pairs raise DegenerateSpectrum.
TangentData spectral_tangent(const StateFamily& fam, const ParameterPoint& r,
                             const StepPolicy& policy, TangentRoute route,
                             const GaugeField* gauge = nullptr);

}  // namespace qgt
