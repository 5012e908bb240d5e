#pragma once

#include <cstdint>
#include <functional>
#include <memory>

#include "qgt/spectral.hpp"
#include "qgt/types.hpp"

namespace qgt {

/// A parametrized family of states. `density` must be deterministic and
/// smooth over the declared domain. Pure families additionally expose a
/// normalized state vector; their density is the rank-one projector and by
/// construction fails the full-rank validation.
class StateFamily {
public:
    virtual ~StateFamily() = default;

    virtual Eigen::Index dim() const = 0;
    virtual Eigen::Index n_params() const = 0;
    virtual bool is_pure() const { return false; }

    virtual ComplexMatrix density(const ParameterPoint& r) const = 0;

    /// Normalized state vector; only pure families implement this.
    virtual ComplexVector state_vector(const ParameterPoint& r) const;

    /// True when r lies inside the family's declared parameter domain.
    virtual bool contains(const ParameterPoint& r) const;

    /// density() passed through validate_density().
    DensityMatrix evaluate(const ParameterPoint& r) const;

protected:
    void require_point(const ParameterPoint& r) const;
};

using FamilyPtr = std::shared_ptr<const StateFamily>;

struct ModelConfig {
    double beta = 1.0;    // inverse temperature
    double omega = 1.0;   // oscillator frequency (hbar = 1)
    int n_cut = 40;       // Fock-space truncation
    std::uint64_t seed = 0;
};

struct HermitianFamily {
    std::function<ComplexMatrix(const ParameterPoint&)> h;
    Eigen::Index dim = 0;
    Eigen::Index n_params = 0;
};

/// rho(R) = exp(-beta H(R)) / Tr exp(-beta H(R)), computed spectrally.
FamilyPtr thermal_family(HermitianFamily hfam, double beta);

/// Displaced truncated thermal oscillator over (x, y) with z = x + i y:
/// rho(z) = D(z) rho(0) D(z)^dagger in an n_cut-dimensional Fock space.
/// density() throws TruncationTooSmall when the population of the top
/// retained level exceeds tol::truncation.
FamilyPtr bosonic_coherent_family(const ModelConfig& cfg);

/// Pure two-level family over (theta, phi) in (0, pi) x R:
/// psi = (cos theta/2, e^{i phi} sin theta/2).
FamilyPtr bloch_pure_family();

/// The orthogonal partner (sin theta/2, -e^{i phi} cos theta/2) -- the
/// ground level of the thermal Bloch Hamiltonian.
FamilyPtr bloch_pure_lower_family();

/// Thermal state of H = (omega/2) (sin t cos p, sin t sin p, cos t).sigma.
/// Eigenvalues ((1 +/- tanh(beta omega / 2)) / 2) are constant over the chart.
FamilyPtr bloch_thermal_family(double beta, double omega);

/// Thermal family of H(R) = H0 + sum_mu R^mu V_mu with H0, V_mu drawn
/// deterministically from the seed. Identical seeds give identical families.
FamilyPtr random_smooth_family(std::uint64_t seed, Eigen::Index dim,
                               Eigen::Index n_params);

/// Same construction with every coupling V_mu scaled by `coupling`
/// (coupling = 0 gives a constant family).
FamilyPtr random_smooth_family(std::uint64_t seed, Eigen::Index dim,
                               Eigen::Index n_params, double coupling);

/// Wraps a pure family with a smooth global phase: psi -> e^{i chi(R)} psi.
/// Gauge-invariance tests use this to perturb the section.
FamilyPtr phase_twisted(FamilyPtr base,
                        std::function<double(const ParameterPoint&)> chi);

}  // namespace qgt
