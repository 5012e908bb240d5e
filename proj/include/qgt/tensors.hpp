#pragma once

#include "qgt/derivatives.hpp"

namespace qgt {

/// Pure-state geometric tensor of one spectral level together with its
/// Berry curvature F = -2 Im Q.
struct LevelTensor {
    ComplexMatrix q;
    RealMatrix f;
};

/// Q = g_fr + g_fs - i * omega, all k x k. For pure families g_fr is zero
/// and there is a single level with unit weight.
struct QgtResult {
    ComplexMatrix q;
    RealMatrix g_fr;
    RealMatrix g_fs;
    RealMatrix omega;
    std::vector<LevelTensor> per_level;
    RealVector weights;  // eigenvalues (descending) at the evaluation point

    Eigen::Index n_axes() const { return q.rows(); }
};

struct BuresResult {
    RealMatrix g_b;
};

/// Quantum geometric tensor of a pure family from gauge-invariant
/// projected derivatives: Q = <d_mu psi|(1 - |psi><psi|)|d_nu psi>.
QgtResult pure_qgt(const StateFamily& fam, const ParameterPoint& r,
                   const StepPolicy& policy);

/// Mixed-state geometric tensor built from the decomposition of rho:
/// Fisher-Rao part from eigenvalue gradients, weighted Fubini-Study part
/// and curvature from the projected eigenvector derivatives. Uses the
/// gauge-free perturbative derivative route.
QgtResult sjoqvist_qgt(const StateFamily& fam, const ParameterPoint& r,
                       const StepPolicy& policy);

/// Assembles the same tensor from precomputed tangent data; this is how
/// the frame-differencing route is exercised in gauge tests.
QgtResult sjoqvist_qgt_from_tangent(const TangentData& tangent);

/// Bures metric via the weighted double sum over eigenbasis matrix
/// elements of d_mu rho.
BuresResult bures_metric(const StateFamily& fam, const ParameterPoint& r,
                         const StepPolicy& policy);

/// Bures metric via its spectral re-expression (eigenvalue-gradient term
/// plus gap-weighted eigenvector terms); the dual route for cross checks.
BuresResult bures_metric_spectral(const StateFamily& fam, const ParameterPoint& r,
                                  const StepPolicy& policy);

}  // namespace qgt
