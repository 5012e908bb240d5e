#include "qgt/models.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>
#include <sstream>
#include <utility>

namespace qgt {

ComplexVector StateFamily::state_vector(const ParameterPoint&) const {
    throw NotPure("state_vector is only defined for pure families");
}

bool StateFamily::contains(const ParameterPoint& r) const {
    return r.size() == n_params() && r.allFinite();
}

DensityMatrix StateFamily::evaluate(const ParameterPoint& r) const {
    return validate_density(density(r));
}

void StateFamily::require_point(const ParameterPoint& r) const {
    if (!contains(r)) {
        std::ostringstream os;
        os << "point [";
        for (Eigen::Index i = 0; i < r.size(); ++i)
            os << (i ? "," : "") << r[i];
        os << "] is outside the family domain";
        throw DomainExceeded(os.str());
    }
}

namespace {

ComplexMatrix thermal_state(const ComplexMatrix& h, double beta) {
    const SpectralDecomposition d = hermitian_eigendecompose(h);
    // Boltzmann weights relative to the ground energy; the shift cancels in
    // the normalization and keeps the exponentials bounded.
    const double e_min = d.eigenvalues.minCoeff();
    RealVector w(d.dim());
    for (Eigen::Index n = 0; n < d.dim(); ++n)
        w[n] = std::exp(-beta * (d.eigenvalues[n] - e_min));
    w /= w.sum();
    return d.frame * w.asDiagonal() * d.frame.adjoint();
}

class ThermalFamily final : public StateFamily {
public:
    ThermalFamily(HermitianFamily hfam, double beta)
        : hfam_(std::move(hfam)), beta_(beta) {
        if (beta_ <= 0.0) throw ValidationError("thermal_family: beta must be positive");
        if (hfam_.dim < 2) throw ValidationError("thermal_family: dim must be >= 2");
        if (hfam_.n_params < 1)
            throw ValidationError("thermal_family: n_params must be >= 1");
    }

    Eigen::Index dim() const override { return hfam_.dim; }
    Eigen::Index n_params() const override { return hfam_.n_params; }

    ComplexMatrix density(const ParameterPoint& r) const override {
        require_point(r);
        ComplexMatrix h = hfam_.h(r);
        if (h.rows() != hfam_.dim || h.cols() != hfam_.dim)
            throw DimensionMismatch("thermal_family: H(R) has the wrong shape");
        if (hermiticity_defect(h) > tol::hermiticity)
            throw NotHermitian("thermal_family: H(R) is not Hermitian");
        return thermal_state(h, beta_);
    }

private:
    HermitianFamily hfam_;
    double beta_;
};

class BosonicCoherentFamily final : public StateFamily {
public:
    explicit BosonicCoherentFamily(const ModelConfig& cfg) : cfg_(cfg) {
        if (cfg_.beta <= 0.0 || cfg_.omega <= 0.0)
            throw ValidationError("bosonic_coherent_family: beta and omega must be positive");
        if (cfg_.n_cut < 2)
            throw ValidationError("bosonic_coherent_family: n_cut must be >= 2");
        const Eigen::Index n = cfg_.n_cut;
        lower_ = ComplexMatrix::Zero(n, n);
        for (Eigen::Index k = 1; k < n; ++k)
            lower_(k - 1, k) = Complex(std::sqrt(static_cast<double>(k)), 0.0);
        // Truncated thermal weights of H = omega (a^dag a + 1/2); the zero
        // point shift drops out of the normalization.
        RealVector w(n);
        const double q = std::exp(-cfg_.beta * cfg_.omega);
        double acc = 1.0;
        for (Eigen::Index k = 0; k < n; ++k) {
            w[k] = acc;
            acc *= q;
        }
        w /= w.sum();
        rho0_ = w;
    }

    Eigen::Index dim() const override { return cfg_.n_cut; }
    Eigen::Index n_params() const override { return 2; }

    ComplexMatrix density(const ParameterPoint& r) const override {
        require_point(r);
        const Complex z(r[0], r[1]);
        const ComplexMatrix generator = z * lower_.adjoint() - std::conj(z) * lower_;
        const ComplexMatrix d = generator.exp();  // unitary: generator is anti-Hermitian
        ComplexMatrix rho = d * rho0_.asDiagonal() * d.adjoint();
        const double top = rho(cfg_.n_cut - 1, cfg_.n_cut - 1).real();
        if (top > tol::truncation) {
            std::ostringstream os;
            os << "top Fock level carries weight " << top << " > " << tol::truncation
               << " at z = (" << r[0] << "," << r[1] << "); increase n_cut";
            throw TruncationTooSmall(os.str());
        }
        return rho;
    }

private:
    ModelConfig cfg_;
    ComplexMatrix lower_;  // annihilation operator in the truncated Fock basis
    RealVector rho0_;      // thermal weights at z = 0
};

class BlochPureFamily final : public StateFamily {
public:
    explicit BlochPureFamily(bool lower) : lower_(lower) {}

    Eigen::Index dim() const override { return 2; }
    Eigen::Index n_params() const override { return 2; }
    bool is_pure() const override { return true; }

    bool contains(const ParameterPoint& r) const override {
        return StateFamily::contains(r) && r[0] > 0.0 && r[0] < M_PI;
    }

    ComplexVector state_vector(const ParameterPoint& r) const override {
        require_point(r);
        const double half = 0.5 * r[0];
        const Complex ph = std::polar(1.0, r[1]);
        ComplexVector psi(2);
        if (lower_) {
            psi << Complex(std::sin(half), 0.0), -ph * std::cos(half);
        } else {
            psi << Complex(std::cos(half), 0.0), ph * std::sin(half);
        }
        return psi;
    }

    ComplexMatrix density(const ParameterPoint& r) const override {
        const ComplexVector psi = state_vector(r);
        return psi * psi.adjoint();
    }

private:
    bool lower_;
};

ComplexMatrix bloch_hamiltonian(double omega, double theta, double phi) {
    const double st = std::sin(theta), ct = std::cos(theta);
    ComplexMatrix h(2, 2);
    h(0, 0) = Complex(ct, 0.0);
    h(1, 1) = Complex(-ct, 0.0);
    h(0, 1) = Complex(st * std::cos(phi), -st * std::sin(phi));
    h(1, 0) = std::conj(h(0, 1));
    return 0.5 * omega * h;
}

class BlochThermalFamily final : public StateFamily {
public:
    BlochThermalFamily(double beta, double omega) : beta_(beta), omega_(omega) {
        if (beta_ <= 0.0 || omega_ <= 0.0)
            throw ValidationError("bloch_thermal_family: beta and omega must be positive");
    }

    Eigen::Index dim() const override { return 2; }
    Eigen::Index n_params() const override { return 2; }

    bool contains(const ParameterPoint& r) const override {
        return StateFamily::contains(r) && r[0] > 0.0 && r[0] < M_PI;
    }

    ComplexMatrix density(const ParameterPoint& r) const override {
        require_point(r);
        return thermal_state(bloch_hamiltonian(omega_, r[0], r[1]), beta_);
    }

private:
    double beta_;
    double omega_;
};

ComplexMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index dim, double scale) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j)
            g(i, j) = Complex(gauss(rng), gauss(rng));
    return scale * 0.5 * (g + g.adjoint());
}

class PhaseTwistedFamily final : public StateFamily {
public:
    PhaseTwistedFamily(FamilyPtr base, std::function<double(const ParameterPoint&)> chi)
        : base_(std::move(base)), chi_(std::move(chi)) {
        if (!base_->is_pure())
            throw NotPure("phase_twisted: base family must be pure");
    }

    Eigen::Index dim() const override { return base_->dim(); }
    Eigen::Index n_params() const override { return base_->n_params(); }
    bool is_pure() const override { return true; }
    bool contains(const ParameterPoint& r) const override { return base_->contains(r); }

    ComplexVector state_vector(const ParameterPoint& r) const override {
        return std::polar(1.0, chi_(r)) * base_->state_vector(r);
    }

    ComplexMatrix density(const ParameterPoint& r) const override {
        return base_->density(r);
    }

private:
    FamilyPtr base_;
    std::function<double(const ParameterPoint&)> chi_;
};

}  // namespace

FamilyPtr thermal_family(HermitianFamily hfam, double beta) {
    return std::make_shared<ThermalFamily>(std::move(hfam), beta);
}

FamilyPtr bosonic_coherent_family(const ModelConfig& cfg) {
    return std::make_shared<BosonicCoherentFamily>(cfg);
}

FamilyPtr bloch_pure_family() { return std::make_shared<BlochPureFamily>(false); }

FamilyPtr bloch_pure_lower_family() { return std::make_shared<BlochPureFamily>(true); }

FamilyPtr bloch_thermal_family(double beta, double omega) {
    return std::make_shared<BlochThermalFamily>(beta, omega);
}

FamilyPtr random_smooth_family(std::uint64_t seed, Eigen::Index dim,
                               Eigen::Index n_params, double coupling) {
    if (dim < 2) throw ValidationError("random_smooth_family: dim must be >= 2");
    if (n_params < 1) throw ValidationError("random_smooth_family: n_params must be >= 1");

    std::mt19937_64 rng(seed);
    ComplexMatrix h0 = random_hermitian(rng, dim, 1.0);
    std::vector<ComplexMatrix> couplings;
    couplings.reserve(static_cast<size_t>(n_params));
    for (Eigen::Index mu = 0; mu < n_params; ++mu)
        couplings.push_back(random_hermitian(rng, dim, coupling));

    HermitianFamily hfam;
    hfam.dim = dim;
    hfam.n_params = n_params;
    hfam.h = [h0 = std::move(h0), couplings = std::move(couplings)](const ParameterPoint& r) {
        ComplexMatrix h = h0;
        for (size_t mu = 0; mu < couplings.size(); ++mu)
            h += r[static_cast<Eigen::Index>(mu)] * couplings[mu];
        return h;
    };
    return thermal_family(std::move(hfam), 1.0);
}

FamilyPtr random_smooth_family(std::uint64_t seed, Eigen::Index dim,
                               Eigen::Index n_params) {
    return random_smooth_family(seed, dim, n_params, 0.5);
}

FamilyPtr phase_twisted(FamilyPtr base,
                        std::function<double(const ParameterPoint&)> chi) {
    return std::make_shared<PhaseTwistedFamily>(std::move(base), std::move(chi));
}

}  // namespace qgt
