#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "qgt/distances.hpp"
#include "qgt/tensors.hpp"
#include "test_helpers.hpp"

using namespace qgt;

namespace {

double brute_force_assignment(const RealMatrix& w) {
    std::vector<Eigen::Index> perm(static_cast<size_t>(w.rows()));
    std::iota(perm.begin(), perm.end(), 0);
    double best = -std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (Eigen::Index i = 0; i < w.rows(); ++i)
            total += w(i, perm[static_cast<size_t>(i)]);
        best = std::max(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

DensityMatrix density_of(const ComplexMatrix& m) { return validate_density(m); }

}  // namespace

TEST_CASE("assignment solver matches brute force") {
    std::mt19937_64 rng(111);
    std::uniform_real_distribution<double> weight(0.0, 1.0);
    for (int n = 2; n <= 7; ++n) {
        for (int trial = 0; trial < 20; ++trial) {
            RealMatrix w(n, n);
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j) w(i, j) = weight(rng);
            const std::vector<Eigen::Index> perm = max_weight_assignment(w);
            double total = 0.0;
            std::vector<bool> used(static_cast<size_t>(n), false);
            for (Eigen::Index i = 0; i < n; ++i) {
                CHECK(!used[static_cast<size_t>(perm[static_cast<size_t>(i)])]);
                used[static_cast<size_t>(perm[static_cast<size_t>(i)])] = true;
                total += w(i, perm[static_cast<size_t>(i)]);
            }
            CHECK(total == doctest::Approx(brute_force_assignment(w)).epsilon(1e-12));
        }
    }
}

TEST_CASE("distance to itself vanishes") {
    std::mt19937_64 rng(121);
    const DensityMatrix rho = density_of(testing::random_density(rng, 4));
    const DistanceResult d = sjoqvist_finite_distance(rho, rho);
    // The square root turns O(1e-15) roundoff in d^2 into O(1e-7).
    CHECK(d.value < 1e-7);
    CHECK(d.value * d.value < 1e-14);
}

TEST_CASE("commuting crossed pair follows the spectral-ray closed form") {
    ComplexMatrix a = ComplexMatrix::Zero(2, 2);
    a(0, 0) = 0.7;
    a(1, 1) = 0.3;
    ComplexMatrix b = ComplexMatrix::Zero(2, 2);
    b(0, 0) = 0.3;
    b(1, 1) = 0.7;
    const DistanceResult d = sjoqvist_finite_distance(density_of(a), density_of(b));
    const double expected_sq = 2.0 - 4.0 * std::sqrt(0.7 * 0.3);
    CHECK(d.value * d.value == doctest::Approx(expected_sq).epsilon(1e-12));
    CHECK(d.value == doctest::Approx(std::sqrt(0.16696972)).epsilon(1e-6));
}

TEST_CASE("diagonal-phase rotations move along the spectral rays only") {
    std::mt19937_64 rng(131);
    const ComplexMatrix rho = testing::random_density(rng, 3);
    const SpectralDecomposition d = hermitian_eigendecompose(rho);
    ComplexVector phases(3);
    phases << std::polar(1.0, 0.3), std::polar(1.0, -1.2), std::polar(1.0, 2.5);
    const ComplexMatrix u = d.frame * phases.asDiagonal() * d.frame.adjoint();
    const ComplexMatrix rotated = u * rho * u.adjoint();
    const DistanceResult dist =
        sjoqvist_finite_distance(density_of(rho), density_of(rotated));
    CHECK(dist.value < 1e-7);
}

TEST_CASE("distance is symmetric and unitarily covariant") {
    std::mt19937_64 rng(141);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix a = testing::random_density(rng, 4);
        const ComplexMatrix b = testing::random_density(rng, 4);
        const double ab = sjoqvist_finite_distance(density_of(a), density_of(b)).value;
        const double ba = sjoqvist_finite_distance(density_of(b), density_of(a)).value;
        CHECK(ab == doctest::Approx(ba).epsilon(1e-12));

        // Random unitary from the frame of a random Hermitian matrix.
        const ComplexMatrix v =
            hermitian_eigendecompose(testing::random_hermitian(rng, 4)).frame;
        const double rotated = sjoqvist_finite_distance(
                                   density_of((v * a * v.adjoint()).eval()),
                                   density_of((v * b * v.adjoint()).eval()))
                                   .value;
        CHECK(std::abs(rotated - ab) < 1e-10);
    }
}

TEST_CASE("Fisher-Rao reduction for commuting pairs, with and without crossing") {
    std::mt19937_64 rng(151);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int trial = 0; trial < 20; ++trial) {
        RealVector pa(3), pb(3);
        for (int i = 0; i < 3; ++i) {
            pa[i] = u(rng);
            pb[i] = u(rng);
        }
        pa /= pa.sum();
        pb /= pb.sum();
        // Skip draws with near-equal weights inside one state.
        std::sort(pa.data(), pa.data() + 3, std::greater<double>());
        std::sort(pb.data(), pb.data() + 3, std::greater<double>());
        if (pa[0] - pa[1] < 1e-3 || pa[1] - pa[2] < 1e-3) continue;
        if (pb[0] - pb[1] < 1e-3 || pb[1] - pb[2] < 1e-3) continue;

        // A shared random eigenbasis; weights paired per basis vector, and
        // the second state's weights permuted to force crossings sometimes.
        const ComplexMatrix v =
            hermitian_eigendecompose(testing::random_hermitian(rng, 3)).frame;
        std::vector<int> order = {0, 1, 2};
        std::shuffle(order.begin(), order.end(), rng);
        RealVector pb_permuted(3);
        for (int i = 0; i < 3; ++i) pb_permuted[i] = pb[order[static_cast<size_t>(i)]];

        const ComplexMatrix a = v * pa.asDiagonal() * v.adjoint();
        const ComplexMatrix b = v * pb_permuted.asDiagonal() * v.adjoint();
        double expected_sq = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double diff = std::sqrt(pa[i]) - std::sqrt(pb_permuted[i]);
            expected_sq += diff * diff;
        }
        const DistanceResult d = sjoqvist_finite_distance(density_of(a), density_of(b));
        CHECK(d.value * d.value == doctest::Approx(expected_sq).epsilon(1e-10));
    }
}

TEST_CASE("near crossings are flagged") {
    ComplexMatrix a = ComplexMatrix::Zero(2, 2);
    a(0, 0) = 0.5 + 2e-8;
    a(1, 1) = 0.5 - 2e-8;
    ComplexMatrix b = ComplexMatrix::Zero(2, 2);
    b(0, 0) = 0.8;
    b(1, 1) = 0.2;
    const DistanceResult d = sjoqvist_finite_distance(density_of(a), density_of(b));
    CHECK(d.near_degenerate);
    const DistanceResult clean = sjoqvist_finite_distance(density_of(b), density_of(b));
    CHECK(!clean.near_degenerate);
}

TEST_CASE("dimension mismatch is rejected") {
    std::mt19937_64 rng(161);
    const DensityMatrix a = density_of(testing::random_density(rng, 2));
    const DensityMatrix b = density_of(testing::random_density(rng, 3));
    CHECK_THROWS_AS(sjoqvist_finite_distance(a, b), DimensionMismatch);
}

TEST_CASE("purifications reconstruct their state and are normalized") {
    std::mt19937_64 rng(171);
    const ComplexMatrix rho = testing::random_density(rng, 4);
    const SpectralDecomposition d = hermitian_eigendecompose(rho);
    PhaseFrame phases{RealVector::Zero(4)};
    phases.phases << 0.1, -0.7, 2.2, 0.0;
    const Purification w = make_purification(d, phases, d);
    CHECK(std::abs(w.w.norm() - 1.0) < 1e-10);
    CHECK(((w.w * w.w.adjoint()) - rho).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("identical purifications have zero raw distance") {
    std::mt19937_64 rng(181);
    const SpectralDecomposition d =
        hermitian_eigendecompose(testing::random_density(rng, 3));
    PhaseFrame phases{RealVector::Zero(3)};
    const Purification p = make_purification(d, phases, d);
    CHECK(raw_purification_distance(p, p) == 0.0);
}

TEST_CASE("a single-level phase shift costs 2 lambda (1 - cos delta)") {
    std::mt19937_64 rng(191);
    const ComplexMatrix rho = testing::random_density(rng, 4);
    const SpectralDecomposition d = hermitian_eigendecompose(rho);
    const double delta = 0.83;
    for (Eigen::Index level = 0; level < 4; ++level) {
        PhaseFrame base{RealVector::Zero(4)};
        PhaseFrame shifted{RealVector::Zero(4)};
        shifted.phases[level] = delta;
        const Purification p = make_purification(d, base, d);
        const Purification q = make_purification(d, shifted, d);
        const double dist = raw_purification_distance(p, q);
        const double expected = 2.0 * d.eigenvalues[level] * (1.0 - std::cos(delta));
        CHECK(dist * dist == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("raw purification distance dominates the Sjoqvist distance") {
    std::mt19937_64 rng(201);
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix a = testing::random_density(rng, 3);
        const ComplexMatrix b = testing::random_density(rng, 3);
        const SpectralDecomposition da = hermitian_eigendecompose(a);
        const SpectralDecomposition db = hermitian_eigendecompose(b);
        const double ds = sjoqvist_finite_distance(density_of(a), density_of(b)).value;
        for (int sample = 0; sample < 20; ++sample) {
            PhaseFrame ta{RealVector::Zero(3)}, tb{RealVector::Zero(3)};
            for (int n = 0; n < 3; ++n) {
                ta.phases[n] = angle(rng);
                tb.phases[n] = angle(rng);
            }
            const double raw = raw_purification_distance(make_purification(da, ta, da),
                                                         make_purification(db, tb, da));
            CHECK(raw >= ds - 1e-10);
        }
    }
}

TEST_CASE("decomposition residual vanishes for zero displacement") {
    const FamilyPtr fam = bloch_thermal_family(1.0, 1.0);
    ParameterPoint r(2), dr(2);
    r << 1.0, 0.5;
    dr << 0.0, 0.0;
    const DecompositionCheck c =
        decomposition_residual(*fam, r, dr, RealVector::Zero(2));
    CHECK(c.raw_sq < 1e-14);
    CHECK(c.residual < 1e-14);
}

TEST_CASE("horizontal phase increments close the decomposition exactly") {
    const FamilyPtr fam = bloch_thermal_family(1.0, 1.0);
    ParameterPoint r(2), dr(2);
    r << 1.1, 0.4;
    dr << 7e-4, -5e-4;
    // Recover the connection increment from the aligned decompositions,
    // then transport horizontally: dtheta_n = -arg<n|n'>.
    const SpectralDecomposition d0 = hermitian_eigendecompose(fam->density(r));
    const SpectralDecomposition d1 = hermitian_eigendecompose(fam->density(r + dr));
    RealVector alpha;
    align_frames(d0, d1, &alpha);
    const DecompositionCheck c = decomposition_residual(*fam, r, dr, (-alpha).eval());
    CHECK(c.fiber_sq < 1e-18);
    CHECK(std::abs(c.raw_sq - c.base_sq) < 1e-12);
}

TEST_CASE("decomposition residual is small at 1e-3 displacements") {
    const FamilyPtr fam = bloch_thermal_family(1.2, 0.8);
    std::mt19937_64 rng(211);
    std::uniform_real_distribution<double> angle(0.5, 2.5), dir(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        ParameterPoint r(2);
        r << angle(rng), angle(rng);
        RealVector step(2);
        step << dir(rng), dir(rng);
        step.normalize();
        RealVector gradient(2);
        gradient << dir(rng), dir(rng);
        const DecompositionCheck c = decomposition_residual(
            *fam, r, (1e-3 * step).eval(), (1e-3 * gradient).eval());
        CHECK(c.residual <= 1e-8);
    }
}

TEST_CASE("decomposition residual is third order when the spectrum varies") {
    // Constant-spectrum families lose the cubic term (it carries d lambda);
    // random thermal families probe the generic scaling.
    std::mt19937_64 rng(213);
    std::uniform_real_distribution<double> dir(-1.0, 1.0), coord(-0.4, 0.4);
    for (int trial = 0; trial < 10; ++trial) {
        const FamilyPtr fam =
            random_smooth_family(400 + static_cast<std::uint64_t>(trial), 3, 2);
        ParameterPoint r(2);
        r << coord(rng), coord(rng);
        RealVector step(2);
        step << dir(rng), dir(rng);
        step.normalize();
        RealVector gradient(3);
        gradient << dir(rng), dir(rng), dir(rng);

        const DecompositionCheck fine = decomposition_residual(
            *fam, r, (9e-4 * step).eval(), (9e-4 * gradient).eval());
        const DecompositionCheck coarse = decomposition_residual(
            *fam, r, (9e-3 * step).eval(), (9e-3 * gradient).eval());
        CHECK(fine.residual <= 1e-8);
        if (coarse.residual > 1e-11) {
            const double slope = std::log10(coarse.residual / fine.residual);
            CHECK(slope == doctest::Approx(3.0).epsilon(0.15));
        }
    }
}

TEST_CASE("finite distance matches the quadratic form infinitesimally") {
    const FamilyPtr fam = bloch_thermal_family(1.0, 1.0);
    StepPolicy policy;
    ParameterPoint r(2);
    r << 1.2, 0.3;
    const QgtResult q = sjoqvist_qgt(*fam, r, policy);
    RealVector u(2);
    u << 0.6, 0.8;

    auto remainder = [&](double s) {
        const ParameterPoint moved = r + s * u;
        const double d =
            sjoqvist_finite_distance(fam->evaluate(r), fam->evaluate(moved)).value;
        const double quad = s * s * (u.transpose() * q.q.real() * u).value();
        return std::abs(d * d - quad);
    };
    const double r2 = remainder(1e-2);
    const double r3 = remainder(1e-3);
    CHECK(r2 / (1e-2 * 1e-2) < 0.05);           // ratio harder than 1 by O(|dr|)
    CHECK(r3 < r2 / 300.0);                      // cubic suppression per decade
}
