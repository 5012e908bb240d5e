#include "qgt/derivatives.hpp"

#include <cmath>
#include <sstream>

namespace qgt {

void StepPolicy::validate() const {
    if (!(h >= 1e-8))
        throw ValidationError("StepPolicy: base step must satisfy h >= 1e-8");
    for (const auto& [axis, ha] : per_axis)
        if (!(ha >= 1e-8))
            throw ValidationError("StepPolicy: per-axis step must satisfy h >= 1e-8");
}

namespace {

ParameterPoint shifted(const ParameterPoint& r, Eigen::Index axis, double delta) {
    ParameterPoint s = r;
    s[axis] += delta;
    return s;
}

// Applies the scheme's stencil to an arbitrary sampler f(offset). The
// sampler's value type only needs scalar multiplication and addition.
template <typename Sample, typename F>
Sample apply_stencil(const F& f, double h, FdScheme scheme) {
    switch (scheme) {
        case FdScheme::central2:
            return (f(h) - f(-h)) * (0.5 / h);
        case FdScheme::central4:
            return (f(-2.0 * h) - f(2.0 * h) + 8.0 * (f(h) - f(-h))) * (1.0 / (12.0 * h));
        case FdScheme::richardson: {
            const Sample coarse = (f(h) - f(-h)) * (0.5 / h);
            const Sample fine = (f(0.5 * h) - f(-0.5 * h)) * (1.0 / h);
            return (4.0 * fine - coarse) * (1.0 / 3.0);
        }
    }
    throw ValidationError("unknown finite-difference scheme");
}

void check_rank(const SpectralDecomposition& d) {
    const double min_eig = d.eigenvalues[d.dim() - 1];
    if (min_eig < -tol::hermiticity) {
        std::ostringstream os;
        os << "state has eigenvalue " << min_eig << " < 0: not a density matrix";
        throw NotFullRank(os.str());
    }
}

TangentData perturbative_tangent(const StateFamily& fam, const ParameterPoint& r,
                                 const StepPolicy& policy) {
    TangentData out;
    out.spec = hermitian_eigendecompose(fam.density(r));
    check_rank(out.spec);
    require_resolvable_spectrum(out.spec.eigenvalues);
    out.rho_grad = matrix_fd(fam, r, policy);

    const Eigen::Index k = fam.n_params();
    const Eigen::Index dim = out.spec.dim();
    const RealVector& lambda = out.spec.eigenvalues;
    const ComplexMatrix& frame = out.spec.frame;

    out.eigval_grad.resize(k, dim);
    out.proj_vec_grad.assign(static_cast<size_t>(k),
                             std::vector<ComplexVector>(static_cast<size_t>(dim)));
    for (Eigen::Index mu = 0; mu < k; ++mu) {
        // Gradient in the eigenbasis; diagonal is d_mu lambda, off-diagonal
        // entries divided by eigenvalue differences give <m|d_mu n>.
        const ComplexMatrix in_basis =
            frame.adjoint() * out.rho_grad[static_cast<size_t>(mu)] * frame;
        for (Eigen::Index n = 0; n < dim; ++n) {
            out.eigval_grad(mu, n) = in_basis(n, n).real();
            ComplexVector coeffs = ComplexVector::Zero(dim);
            for (Eigen::Index m = 0; m < dim; ++m) {
                if (m == n) continue;
                const double gap = lambda[n] - lambda[m];
                if (std::abs(gap) < tol::gap) continue;  // weight checked above
                coeffs[m] = in_basis(m, n) / gap;
            }
            out.proj_vec_grad[static_cast<size_t>(mu)][static_cast<size_t>(n)] =
                frame * coeffs;
        }
    }
    return out;
}

TangentData frame_fd_tangent(const StateFamily& fam, const ParameterPoint& r,
                             const StepPolicy& policy, const GaugeField* gauge) {
    TangentData out;
    out.spec = hermitian_eigendecompose(fam.density(r));
    check_rank(out.spec);
    require_resolvable_spectrum(out.spec.eigenvalues);
    out.rho_grad = matrix_fd(fam, r, policy);

    const Eigen::Index k = fam.n_params();
    const Eigen::Index dim = out.spec.dim();

    // Canonical decomposition at a stencil point, with the optional gauge
    // phase injected, aligned back to the center frame.
    struct AlignedSample {
        ComplexMatrix frame;
        RealVector eigenvalues;
        RealVector alpha;  // phases removed by the alignment
    };
    auto sample = [&](Eigen::Index axis, double delta) {
        const ParameterPoint p = shifted(r, axis, delta);
        SpectralDecomposition d = hermitian_eigendecompose(fam.density(p));
        if (gauge && *gauge) {
            for (Eigen::Index n = 0; n < dim; ++n)
                d.frame.col(n) *= std::polar(1.0, (*gauge)(n, p));
        }
        AlignedSample s;
        SpectralDecomposition a = align_frames(out.spec, d, &s.alpha);
        s.frame = std::move(a.frame);
        s.eigenvalues = std::move(a.eigenvalues);
        return s;
    };

    out.eigval_grad.resize(k, dim);
    out.proj_vec_grad.assign(static_cast<size_t>(k),
                             std::vector<ComplexVector>(static_cast<size_t>(dim)));
    out.berry_conn.assign(static_cast<size_t>(k),
                          std::vector<Complex>(static_cast<size_t>(dim)));
    out.has_berry_conn = true;

    for (Eigen::Index mu = 0; mu < k; ++mu) {
        const double h = policy.step(mu);
        std::map<double, AlignedSample> cache;
        auto at = [&](double delta) -> const AlignedSample& {
            auto it = cache.find(delta);
            if (it == cache.end()) it = cache.emplace(delta, sample(mu, delta)).first;
            return it->second;
        };
        auto frame_at = [&](double delta) { return at(delta).frame; };
        auto values_at = [&](double delta) { return at(delta).eigenvalues; };
        // Phase differences are wrapped pairwise so a gauge field close to
        // the branch cut does not corrupt the connection.
        auto alpha_pair = [&](double delta) {
            RealVector d(dim);
            const RealVector& plus = at(delta).alpha;
            const RealVector& minus = at(-delta).alpha;
            for (Eigen::Index n = 0; n < dim; ++n)
                d[n] = wrap_angle(plus[n] - minus[n]);
            return d;
        };

        const ComplexMatrix dframe = apply_stencil<ComplexMatrix>(frame_at, h, policy.scheme);
        const RealVector dvalues = apply_stencil<RealVector>(values_at, h, policy.scheme);

        RealVector dalpha;
        switch (policy.scheme) {
            case FdScheme::central2:
                dalpha = alpha_pair(h) / (2.0 * h);
                break;
            case FdScheme::central4:
                dalpha = (8.0 * alpha_pair(h) - alpha_pair(2.0 * h)) / (12.0 * h);
                break;
            case FdScheme::richardson:
                dalpha = (4.0 * (alpha_pair(0.5 * h) / h) - alpha_pair(h) / (2.0 * h)) / 3.0;
                break;
        }

        for (Eigen::Index n = 0; n < dim; ++n) {
            out.eigval_grad(mu, n) = dvalues[n];
            const ComplexVector center = out.spec.frame.col(n);
            ComplexVector dn = dframe.col(n);
            dn -= center * center.dot(dn);
            out.proj_vec_grad[static_cast<size_t>(mu)][static_cast<size_t>(n)] = dn;
            out.berry_conn[static_cast<size_t>(mu)][static_cast<size_t>(n)] =
                Complex(0.0, dalpha[n]);
        }
    }
    return out;
}

}  // namespace

std::vector<ComplexMatrix> matrix_fd(const StateFamily& fam, const ParameterPoint& r,
                                     const StepPolicy& policy) {
    policy.validate();
    if (r.size() != fam.n_params())
        throw DimensionMismatch("matrix_fd: point size does not match family");
    std::vector<ComplexMatrix> grads;
    grads.reserve(static_cast<size_t>(fam.n_params()));
    for (Eigen::Index mu = 0; mu < fam.n_params(); ++mu) {
        auto f = [&](double delta) { return fam.density(shifted(r, mu, delta)); };
        grads.push_back(apply_stencil<ComplexMatrix>(f, policy.step(mu), policy.scheme));
    }
    return grads;
}

TangentData spectral_tangent(const StateFamily& fam, const ParameterPoint& r,
                             const StepPolicy& policy, TangentRoute route,
                             const GaugeField* gauge) {
    policy.validate();
    if (r.size() != fam.n_params())
        throw DimensionMismatch("spectral_tangent: point size does not match family");
    if (route == TangentRoute::perturbative) return perturbative_tangent(fam, r, policy);
    return frame_fd_tangent(fam, r, policy, gauge);
}

}  // namespace qgt
