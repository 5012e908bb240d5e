#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qgt/tensors.hpp"
#include "test_helpers.hpp"

using namespace qgt;

namespace {

// Gauge-invariant oracle built from nothing but state overlaps: the metric
// from 2(1 - |<psi|psi'>|) along single and combined directions, the
// curvature from the Berry phase of a tiny plaquette.
RealMatrix overlap_metric_oracle(const StateFamily& fam, const ParameterPoint& r,
                                 double h) {
    const Eigen::Index k = fam.n_params();
    auto fs_dist_sq = [&](const ParameterPoint& a, const ParameterPoint& b) {
        return 2.0 * (1.0 - std::abs(fam.state_vector(a).dot(fam.state_vector(b))));
    };
    auto diag = [&](const RealVector& direction) {
        const ParameterPoint plus = r + h * direction;
        const ParameterPoint minus = r - h * direction;
        return (fs_dist_sq(r, plus) + fs_dist_sq(r, minus)) / (2.0 * h * h);
    };
    RealMatrix g(k, k);
    for (Eigen::Index mu = 0; mu < k; ++mu) {
        RealVector e_mu = RealVector::Zero(k);
        e_mu[mu] = 1.0;
        g(mu, mu) = diag(e_mu);
        for (Eigen::Index nu = mu + 1; nu < k; ++nu) {
            RealVector e_nu = RealVector::Zero(k);
            e_nu[nu] = 1.0;
            const double combined = diag((e_mu + e_nu).eval());
            g(mu, nu) = 0.5 * (combined - g(mu, mu) - diag(e_nu));
            g(nu, mu) = g(mu, nu);
        }
    }
    return g;
}

double plaquette_curvature_oracle(const StateFamily& fam, const ParameterPoint& r,
                                  Eigen::Index mu, Eigen::Index nu, double h) {
    ParameterPoint p00 = r, p10 = r, p11 = r, p01 = r;
    p10[mu] += h;
    p11[mu] += h;
    p11[nu] += h;
    p01[nu] += h;
    const ComplexVector a = fam.state_vector(p00);
    const ComplexVector b = fam.state_vector(p10);
    const ComplexVector c = fam.state_vector(p11);
    const ComplexVector d = fam.state_vector(p01);
    const Complex loop = a.dot(b) * b.dot(c) * c.dot(d) * d.dot(a);
    return -std::arg(loop) / (h * h);  // ~ F_real = -2 Im Q
}

}  // namespace

TEST_CASE("pure bloch tensor matches monopole closed forms and the overlap oracle") {
    const FamilyPtr fam = bloch_pure_family();
    StepPolicy policy;
    const double theta = 1.1, phi = 0.6;
    ParameterPoint r(2);
    r << theta, phi;
    const QgtResult q = pure_qgt(*fam, r, policy);

    CHECK(q.q(0, 0).real() == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(q.q(1, 1).real() ==
          doctest::Approx(std::sin(theta) * std::sin(theta) / 4.0).epsilon(1e-8));
    CHECK(std::abs(q.q(0, 1).real()) < 1e-9);
    CHECK(q.q(0, 1).imag() == doctest::Approx(std::sin(theta) / 4.0).epsilon(1e-8));
    CHECK(q.g_fr.cwiseAbs().maxCoeff() == 0.0);

    const RealMatrix oracle = overlap_metric_oracle(*fam, r, 1e-3);
    CHECK((q.q.real() - oracle).cwiseAbs().maxCoeff() < 1e-5);
    const double f_oracle = plaquette_curvature_oracle(*fam, r, 0, 1, 1e-3);
    CHECK(-2.0 * q.q(0, 1).imag() == doctest::Approx(f_oracle).epsilon(1e-3));
}

TEST_CASE("lower bloch level carries the opposite curvature") {
    StepPolicy policy;
    ParameterPoint r(2);
    r << 0.9, 1.7;
    const QgtResult q = pure_qgt(*bloch_pure_lower_family(), r, policy);
    CHECK(q.q(0, 1).imag() == doctest::Approx(-std::sin(0.9) / 4.0).epsilon(1e-8));
    CHECK(q.q(0, 0).real() == doctest::Approx(0.25).epsilon(1e-8));
}

TEST_CASE("constant pure family has a vanishing tensor") {
    // Freeze the state: the family ignores its parameters.
    class FrozenState final : public StateFamily {
    public:
        Eigen::Index dim() const override { return 2; }
        Eigen::Index n_params() const override { return 2; }
        bool is_pure() const override { return true; }
        ComplexVector state_vector(const ParameterPoint&) const override {
            ComplexVector psi(2);
            psi << Complex(0.6, 0.0), Complex(0.0, 0.8);
            return psi;
        }
        ComplexMatrix density(const ParameterPoint& r) const override {
            const ComplexVector psi = state_vector(r);
            return psi * psi.adjoint();
        }
    } fam;
    StepPolicy policy;
    ParameterPoint r(2);
    r << 0.3, 0.4;
    const QgtResult q = pure_qgt(fam, r, policy);
    CHECK(q.q.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("pure tensor is invariant under smooth global phase redefinitions") {
    StepPolicy policy;
    ParameterPoint r(2);
    r << 1.3, 0.2;
    const QgtResult base = pure_qgt(*bloch_pure_family(), r, policy);
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> amp(-1.5, 1.5);
    for (int i = 0; i < 5; ++i) {
        const double a = amp(rng), b = amp(rng), c = amp(rng);
        const FamilyPtr twisted = phase_twisted(
            bloch_pure_family(), [a, b, c](const ParameterPoint& p) {
                return a + b * p[0] + c * std::sin(p[1] + a);
            });
        const QgtResult q = pure_qgt(*twisted, r, policy);
        CHECK((q.q - base.q).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("pure_qgt rejects mixed families") {
    StepPolicy policy;
    ParameterPoint r(2);
    r << 1.0, 0.0;
    CHECK_THROWS_AS(pure_qgt(*bloch_thermal_family(1.0, 1.0), r, policy), NotPure);
}

TEST_CASE("thermal bloch mixed tensor: closed forms for every part") {
    const double beta = 1.0, omega = 1.0;
    const FamilyPtr fam = bloch_thermal_family(beta, omega);
    StepPolicy policy;
    const double theta = M_PI / 3.0;
    ParameterPoint r(2);
    r << theta, 0.0;
    const QgtResult q = sjoqvist_qgt(*fam, r, policy);

    const double t = std::tanh(0.5 * beta * omega);
    CHECK(q.g_fr.cwiseAbs().maxCoeff() < 1e-9);
    CHECK(q.g_fs(0, 0) == doctest::Approx(0.25).epsilon(1e-7));
    CHECK(q.g_fs(1, 1) ==
          doctest::Approx(std::sin(theta) * std::sin(theta) / 4.0).epsilon(1e-7));
    CHECK(q.omega(0, 1) == doctest::Approx(t * std::sin(theta) / 4.0).epsilon(1e-7));
    CHECK(q.omega(1, 0) == doctest::Approx(-t * std::sin(theta) / 4.0).epsilon(1e-7));

    // Ground level (largest weight) carries the lower-level curvature sign.
    REQUIRE(q.per_level.size() == 2);
    CHECK(q.per_level[0].q(0, 1).imag() ==
          doctest::Approx(-std::sin(theta) / 4.0).epsilon(1e-6));
    CHECK(q.per_level[1].q(0, 1).imag() ==
          doctest::Approx(std::sin(theta) / 4.0).epsilon(1e-6));
}

TEST_CASE("diagonal family reduces to the Fisher-Rao tensor") {
    testing::DiagonalFamily fam;
    StepPolicy policy;
    for (double R : {0.1, 0.3, -0.55}) {
        ParameterPoint r(1);
        r << R;
        const QgtResult q = sjoqvist_qgt(fam, r, policy);
        const double expected = 1.0 / (4.0 * (1.0 - R * R));
        CHECK(q.q(0, 0).real() == doctest::Approx(expected).epsilon(1e-8));
        CHECK(std::abs(q.q(0, 0).imag()) < 1e-14);
        CHECK(q.g_fs(0, 0) < 1e-12);
    }
    // At R = 0 the state is maximally mixed: a significant exact degeneracy.
    ParameterPoint center(1);
    center << 0.0;
    CHECK_THROWS_AS(sjoqvist_qgt(fam, center, policy), DegenerateSpectrum);
}

TEST_CASE("tensor parts satisfy their structural identities exactly") {
    const FamilyPtr fam = random_smooth_family(71, 5, 3);
    StepPolicy policy;
    ParameterPoint r(3);
    r << 0.2, -0.4, 0.1;
    const QgtResult q = sjoqvist_qgt(*fam, r, policy);

    CHECK((q.q - q.q.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
    const ComplexMatrix rebuilt =
        (q.g_fr + q.g_fs).cast<Complex>() - Complex(0, 1) * q.omega;
    CHECK((q.q - rebuilt).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((q.omega + q.omega.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    for (const LevelTensor& lt : q.per_level)
        CHECK((lt.f + lt.f.transpose()).cwiseAbs().maxCoeff() < 1e-12);

    Eigen::SelfAdjointEigenSolver<RealMatrix> fr(q.g_fr), fs(q.g_fs);
    CHECK(fr.eigenvalues().minCoeff() >= -1e-10);
    CHECK(fs.eigenvalues().minCoeff() >= -1e-10);
}

TEST_CASE("gauge invariance of the mixed tensor through the frame route") {
    const FamilyPtr fam = random_smooth_family(83, 3, 2);
    StepPolicy policy;
    ParameterPoint r(2);
    r << 0.4, -0.1;
    const QgtResult base = sjoqvist_qgt_from_tangent(
        spectral_tangent(*fam, r, policy, TangentRoute::frame_fd));
    std::mt19937_64 rng(91);
    std::uniform_real_distribution<double> amp(-2.0, 2.0);
    for (int i = 0; i < 8; ++i) {
        const double a = amp(rng), b = amp(rng), c = amp(rng);
        GaugeField gauge = [&](Eigen::Index level, const ParameterPoint& p) {
            return a + b * p[0] + c * p[1] * (1.0 + static_cast<double>(level));
        };
        const QgtResult twisted = sjoqvist_qgt_from_tangent(
            spectral_tangent(*fam, r, policy, TangentRoute::frame_fd, &gauge));
        CHECK((twisted.q - base.q).cwiseAbs().maxCoeff() <= 1e-7);
    }
}

TEST_CASE("zero-temperature limit reproduces the ground-level pure tensor") {
    const FamilyPtr mixed = bloch_thermal_family(50.0, 1.0);
    const FamilyPtr ground = bloch_pure_lower_family();
    StepPolicy policy;
    ParameterPoint r(2);
    r << 1.2, 0.8;
    const QgtResult qm = sjoqvist_qgt(*mixed, r, policy);
    const QgtResult qp = pure_qgt(*ground, r, policy);
    CHECK((qm.q - qp.q).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("bures metric closed form on the thermal bloch family") {
    const double beta = 1.0, omega = 1.0;
    const FamilyPtr fam = bloch_thermal_family(beta, omega);
    StepPolicy policy;
    const double theta = 1.0;
    ParameterPoint r(2);
    r << theta, 0.4;
    const BuresResult g = bures_metric(*fam, r, policy);
    const double t2 = std::tanh(0.5 * beta * omega) * std::tanh(0.5 * beta * omega);
    CHECK(g.g_b(0, 0) == doctest::Approx(t2 / 4.0).epsilon(1e-7));
    CHECK(g.g_b(1, 1) ==
          doctest::Approx(t2 * std::sin(theta) * std::sin(theta) / 4.0).epsilon(1e-7));
    CHECK(std::abs(g.g_b(0, 1)) < 1e-9);
}

TEST_CASE("bures metric approaches the Fubini-Study limit at low temperature") {
    const FamilyPtr fam = bloch_thermal_family(30.0, 1.0);
    StepPolicy policy;
    const double theta = 0.9;
    ParameterPoint r(2);
    r << theta, 1.1;
    const BuresResult g = bures_metric(*fam, r, policy);
    CHECK(g.g_b(0, 0) == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(g.g_b(1, 1) ==
          doctest::Approx(std::sin(theta) * std::sin(theta) / 4.0).epsilon(1e-6));
}

TEST_CASE("bures metric equals the Fisher-Rao tensor on the diagonal family") {
    testing::DiagonalFamily fam;
    StepPolicy policy;
    ParameterPoint r(1);
    r << 0.25;
    const BuresResult g = bures_metric(fam, r, policy);
    CHECK(g.g_b(0, 0) == doctest::Approx(1.0 / (4.0 * (1.0 - 0.0625))).epsilon(1e-8));
}

TEST_CASE("bures metric matches the fidelity oracle") {
    // Independent route: d_B(rho, sigma)^2 = 2 (1 - Tr sqrt(sqrt(rho) sigma
    // sqrt(rho))) differentiated numerically. Matrix square roots only, no
    // shared code with either metric formula.
    auto mat_sqrt = [](const ComplexMatrix& m) {
        const SpectralDecomposition d = hermitian_eigendecompose(m);
        RealVector s(d.dim());
        for (Eigen::Index i = 0; i < d.dim(); ++i)
            s[i] = std::sqrt(std::max(d.eigenvalues[i], 0.0));
        return ComplexMatrix(d.frame * s.asDiagonal() * d.frame.adjoint());
    };
    auto fidelity = [&](const ComplexMatrix& a, const ComplexMatrix& b) {
        const ComplexMatrix ra = mat_sqrt(a);
        return mat_sqrt(ra * b * ra).trace().real();
    };

    StepPolicy policy;
    const FamilyPtr families[] = {bloch_thermal_family(1.0, 1.0),
                                  random_smooth_family(42, 4, 2)};
    ParameterPoint points[2];
    points[0].resize(2);
    points[0] << 1.0, 0.4;
    points[1].resize(2);
    points[1] << 0.3, -0.2;
    for (int which = 0; which < 2; ++which) {
        const StateFamily& fam = *families[which];
        const ParameterPoint& r = points[which];
        const BuresResult g = bures_metric(fam, r, policy);
        for (Eigen::Index axis = 0; axis < 2; ++axis) {
            const double h = 1e-4;
            ParameterPoint plus = r, minus = r;
            plus[axis] += h;
            minus[axis] -= h;
            const double f = fidelity(fam.density(minus), fam.density(plus));
            const double oracle = 2.0 * (1.0 - f) / (4.0 * h * h);
            CHECK(g.g_b(axis, axis) == doctest::Approx(oracle).epsilon(1e-4));
        }
    }
}

TEST_CASE("bures metric is symmetric positive-semidefinite") {
    StepPolicy policy;
    std::mt19937_64 rng(103);
    std::uniform_real_distribution<double> coord(-0.6, 0.6);
    for (int i = 0; i < 10; ++i) {
        const FamilyPtr fam =
            random_smooth_family(500 + static_cast<std::uint64_t>(i), 4, 3);
        ParameterPoint r(3);
        r << coord(rng), coord(rng), coord(rng);
        const BuresResult g = bures_metric(*fam, r, policy);
        CHECK((g.g_b - g.g_b.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        Eigen::SelfAdjointEigenSolver<RealMatrix> es(g.g_b);
        CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    }
}

TEST_CASE("both bures routes agree on random families") {
    StepPolicy policy;
    std::mt19937_64 rng(97);
    std::uniform_real_distribution<double> coord(-0.6, 0.6);
    for (int i = 0; i < 10; ++i) {
        const FamilyPtr fam = random_smooth_family(200 + static_cast<std::uint64_t>(i), 3, 2);
        ParameterPoint r(2);
        r << coord(rng), coord(rng);
        const BuresResult a = bures_metric(*fam, r, policy);
        const BuresResult b = bures_metric_spectral(*fam, r, policy);
        CHECK((a.g_b - b.g_b).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("term-wise dominance of the mixed metric over the Bures metric") {
    StepPolicy policy;
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> coord(-0.6, 0.6);
    for (int i = 0; i < 20; ++i) {
        const FamilyPtr fam =
            random_smooth_family(300 + static_cast<std::uint64_t>(i), 4, 2);
        ParameterPoint r(2);
        r << coord(rng), coord(rng);
        const QgtResult q = sjoqvist_qgt(*fam, r, policy);
        const BuresResult g = bures_metric(*fam, r, policy);
        for (Eigen::Index mu = 0; mu < 2; ++mu)
            CHECK(g.g_b(mu, mu) <= q.q(mu, mu).real() + 1e-10);
    }
}

TEST_CASE("coherent family reproduces its closed-form tensor") {
    ModelConfig cfg;
    cfg.beta = 1.0;
    cfg.omega = 1.0;
    cfg.n_cut = 40;
    StepPolicy policy;
    ParameterPoint z(2);
    z << 0.0, 0.0;
    const QgtResult q = sjoqvist_qgt(*bosonic_coherent_family(cfg), z, policy);
    const double expected = 1.0 / std::tanh(0.5);
    CHECK(q.q(0, 0).real() == doctest::Approx(expected).epsilon(1e-3));
    CHECK(q.q(1, 1).real() == doctest::Approx(expected).epsilon(1e-3));
    CHECK(q.omega(0, 1) == doctest::Approx(-1.0).epsilon(1e-3));
}
