#pragma once

#include <random>

#include "qgt/models.hpp"

namespace qgt::testing {

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index dim,
                                      double scale = 1.0) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j)
            g(i, j) = Complex(gauss(rng), gauss(rng));
    return scale * 0.5 * (g + g.adjoint());
}

inline ComplexMatrix random_density(std::mt19937_64& rng, Eigen::Index dim) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j)
            g(i, j) = Complex(gauss(rng), gauss(rng));
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return rho;
}

/// Two-level diagonal family rho(R) = diag((1+R)/2, (1-R)/2) on |R| < 1.
class DiagonalFamily final : public StateFamily {
public:
    Eigen::Index dim() const override { return 2; }
    Eigen::Index n_params() const override { return 1; }
    bool contains(const ParameterPoint& r) const override {
        return StateFamily::contains(r) && std::abs(r[0]) < 1.0;
    }
    ComplexMatrix density(const ParameterPoint& r) const override {
        if (!contains(r)) throw DomainExceeded("diagonal family: |R| must be < 1");
        ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
        rho(0, 0) = 0.5 * (1.0 + r[0]);
        rho(1, 1) = 0.5 * (1.0 - r[0]);
        return rho;
    }
};

/// A family that never depends on its parameters.
class ConstantFamily final : public StateFamily {
public:
    ConstantFamily(ComplexMatrix rho, Eigen::Index k) : rho_(std::move(rho)), k_(k) {}
    Eigen::Index dim() const override { return rho_.rows(); }
    Eigen::Index n_params() const override { return k_; }
    ComplexMatrix density(const ParameterPoint&) const override { return rho_; }

private:
    ComplexMatrix rho_;
    Eigen::Index k_;
};

}  // namespace qgt::testing
