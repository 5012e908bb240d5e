#include "qgt/tensors.hpp"

#include <cmath>

namespace qgt {

namespace {

ParameterPoint shifted(const ParameterPoint& r, Eigen::Index axis, double delta) {
    ParameterPoint s = r;
    s[axis] += delta;
    return s;
}

ComplexVector state_stencil(const StateFamily& fam, const ParameterPoint& r,
                            Eigen::Index axis, const StepPolicy& policy) {
    auto f = [&](double delta) { return fam.state_vector(shifted(r, axis, delta)); };
    const double h = policy.step(axis);
    switch (policy.scheme) {
        case FdScheme::central2:
            return (f(h) - f(-h)) * (0.5 / h);
        case FdScheme::central4:
            return (f(-2.0 * h) - f(2.0 * h) + 8.0 * (f(h) - f(-h))) * (1.0 / (12.0 * h));
        case FdScheme::richardson: {
            const ComplexVector coarse = (f(h) - f(-h)) * (0.5 / h);
            const ComplexVector fine = (f(0.5 * h) - f(-0.5 * h)) * (1.0 / h);
            return (4.0 * fine - coarse) / 3.0;
        }
    }
    throw ValidationError("unknown finite-difference scheme");
}

}  // namespace

QgtResult pure_qgt(const StateFamily& fam, const ParameterPoint& r,
                   const StepPolicy& policy) {
    if (!fam.is_pure()) throw NotPure("pure_qgt requires a pure family");
    policy.validate();
    const Eigen::Index k = fam.n_params();
    const ComplexVector psi = fam.state_vector(r);

    std::vector<ComplexVector> projected(static_cast<size_t>(k));
    for (Eigen::Index mu = 0; mu < k; ++mu) {
        ComplexVector dpsi = state_stencil(fam, r, mu, policy);
        dpsi -= psi * psi.dot(dpsi);
        projected[static_cast<size_t>(mu)] = std::move(dpsi);
    }

    QgtResult out;
    out.q.resize(k, k);
    for (Eigen::Index mu = 0; mu < k; ++mu)
        for (Eigen::Index nu = 0; nu < k; ++nu)
            out.q(mu, nu) =
                projected[static_cast<size_t>(mu)].dot(projected[static_cast<size_t>(nu)]);

    out.g_fr = RealMatrix::Zero(k, k);
    out.g_fs = out.q.real();
    out.omega = -out.q.imag();
    out.per_level.push_back({out.q, -2.0 * out.q.imag()});
    out.weights = RealVector::Ones(1);
    return out;
}

QgtResult sjoqvist_qgt_from_tangent(const TangentData& tangent) {
    const Eigen::Index k = tangent.n_axes();
    const Eigen::Index dim = tangent.spec.dim();
    const RealVector& lambda = tangent.spec.eigenvalues;

    QgtResult out;
    out.weights = lambda;
    out.g_fr = RealMatrix::Zero(k, k);
    out.g_fs = RealMatrix::Zero(k, k);
    out.omega = RealMatrix::Zero(k, k);
    out.per_level.reserve(static_cast<size_t>(dim));

    for (Eigen::Index n = 0; n < dim; ++n) {
        ComplexMatrix qn(k, k);
        for (Eigen::Index mu = 0; mu < k; ++mu)
            for (Eigen::Index nu = 0; nu < k; ++nu)
                qn(mu, nu) = tangent.proj_vec_grad[static_cast<size_t>(mu)][static_cast<size_t>(n)]
                                 .dot(tangent.proj_vec_grad[static_cast<size_t>(nu)]
                                                           [static_cast<size_t>(n)]);
        const double weight = std::max(lambda[n], 0.0);
        out.g_fs += weight * qn.real();
        out.omega -= weight * qn.imag();
        // Levels lighter than the rank floor carry no trustworthy
        // eigenvalue gradient; their true Fisher-Rao share is O(weight).
        if (lambda[n] >= tol::rank) {
            for (Eigen::Index mu = 0; mu < k; ++mu)
                for (Eigen::Index nu = 0; nu < k; ++nu)
                    out.g_fr(mu, nu) += tangent.eigval_grad(mu, n) *
                                        tangent.eigval_grad(nu, n) / (4.0 * lambda[n]);
        }
        out.per_level.push_back({std::move(qn), RealMatrix()});
        out.per_level.back().f = -2.0 * out.per_level.back().q.imag();
    }

    out.q = (out.g_fr + out.g_fs).cast<Complex>() - Complex(0.0, 1.0) * out.omega;
    return out;
}

QgtResult sjoqvist_qgt(const StateFamily& fam, const ParameterPoint& r,
                       const StepPolicy& policy) {
    return sjoqvist_qgt_from_tangent(
        spectral_tangent(fam, r, policy, TangentRoute::perturbative));
}

BuresResult bures_metric(const StateFamily& fam, const ParameterPoint& r,
                         const StepPolicy& policy) {
    policy.validate();
    const SpectralDecomposition d = hermitian_eigendecompose(fam.density(r));
    const double min_eig = d.eigenvalues[d.dim() - 1];
    if (min_eig < -tol::hermiticity)
        throw NotFullRank("bures_metric: state has a negative eigenvalue");

    const std::vector<ComplexMatrix> grads = matrix_fd(fam, r, policy);
    const Eigen::Index k = fam.n_params();
    const Eigen::Index dim = d.dim();

    std::vector<ComplexMatrix> in_basis;
    in_basis.reserve(static_cast<size_t>(k));
    for (const ComplexMatrix& g : grads)
        in_basis.push_back(d.frame.adjoint() * g * d.frame);

    BuresResult out;
    out.g_b = RealMatrix::Zero(k, k);
    for (Eigen::Index mu = 0; mu < k; ++mu) {
        for (Eigen::Index nu = mu; nu < k; ++nu) {
            double acc = 0.0;
            for (Eigen::Index i = 0; i < dim; ++i) {
                for (Eigen::Index j = 0; j < dim; ++j) {
                    const double denom = d.eigenvalues[i] + d.eigenvalues[j];
                    if (denom < tol::rank) continue;  // weightless pair
                    const Complex term = in_basis[static_cast<size_t>(mu)](i, j) *
                                         in_basis[static_cast<size_t>(nu)](j, i);
                    acc += 0.5 * term.real() / denom;
                }
            }
            out.g_b(mu, nu) = acc;
            out.g_b(nu, mu) = acc;
        }
    }
    return out;
}

BuresResult bures_metric_spectral(const StateFamily& fam, const ParameterPoint& r,
                                  const StepPolicy& policy) {
    const TangentData t = spectral_tangent(fam, r, policy, TangentRoute::perturbative);
    const Eigen::Index k = t.n_axes();
    const Eigen::Index dim = t.spec.dim();
    const RealVector& lambda = t.spec.eigenvalues;

    BuresResult out;
    out.g_b = RealMatrix::Zero(k, k);

    // <m|d_mu n> recovered from the projected derivatives.
    auto coeff = [&](Eigen::Index m, Eigen::Index mu, Eigen::Index n) {
        return t.spec.frame.col(m).dot(
            t.proj_vec_grad[static_cast<size_t>(mu)][static_cast<size_t>(n)]);
    };

    for (Eigen::Index mu = 0; mu < k; ++mu) {
        for (Eigen::Index nu = mu; nu < k; ++nu) {
            double acc = 0.0;
            for (Eigen::Index n = 0; n < dim; ++n) {
                if (lambda[n] >= tol::rank)
                    acc += 0.25 * t.eigval_grad(mu, n) * t.eigval_grad(nu, n) / lambda[n];
                for (Eigen::Index m = 0; m < dim; ++m) {
                    if (m == n) continue;
                    const double weight = lambda[n] + lambda[m];
                    if (weight < tol::rank) continue;
                    const double gap = lambda[n] - lambda[m];
                    const Complex c = coeff(m, mu, n) * std::conj(coeff(m, nu, n));
                    acc += 0.5 * gap * gap / weight * c.real();
                }
            }
            out.g_b(mu, nu) = acc;
            out.g_b(nu, mu) = acc;
        }
    }
    return out;
}

}  // namespace qgt
