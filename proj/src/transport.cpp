#include "qgt/transport.hpp"

#include <cmath>
#include <sstream>

namespace qgt {

Curve circle_curve(const ParameterPoint& center, double radius, int n_steps) {
    if (center.size() != 2) throw NotTwoParameter("circle_curve: center must be 2D");
    Curve c;
    c.n_steps = n_steps;
    c.closed = true;
    c.sample = [center, radius](double t) {
        // Endpoint phases coincide exactly so that sample(0) == sample(1).
        const double angle = 2.0 * M_PI * (t >= 1.0 ? t - 1.0 : t);
        ParameterPoint p = center;
        p[0] += radius * std::cos(angle);
        p[1] += radius * std::sin(angle);
        return p;
    };
    return c;
}

Curve polyline_curve(std::vector<ParameterPoint> waypoints, bool closed) {
    if (waypoints.size() < 2)
        throw ValidationError("polyline_curve: need at least two waypoints");
    if (closed && (waypoints.front() - waypoints.back()).norm() > 0.0)
        waypoints.push_back(waypoints.front());
    const int segments = static_cast<int>(waypoints.size()) - 1;
    Curve c;
    c.n_steps = segments;
    c.closed = closed;
    c.sample = [pts = std::move(waypoints), segments](double t) {
        const double s = std::clamp(t, 0.0, 1.0) * segments;
        if (s >= segments) return pts.back();  // exact endpoint, no rounding
        const int i = static_cast<int>(s);
        const double frac = s - i;
        return ParameterPoint(pts[static_cast<size_t>(i)] +
                              frac * (pts[static_cast<size_t>(i) + 1] -
                                      pts[static_cast<size_t>(i)]));
    };
    return c;
}

Curve periodic_loop_curve(const ParameterPoint& start, const ParameterPoint& shift,
                          int n_steps) {
    Curve c;
    c.n_steps = n_steps;
    c.closed = true;
    c.sample = [start, shift](double t) {
        const double frac = t >= 1.0 ? t - 1.0 : t;
        return ParameterPoint(start + frac * shift);
    };
    return c;
}

Curve rectangle_curve(const ParameterPoint& lo, const ParameterPoint& hi, int n_steps) {
    if (lo.size() != 2 || hi.size() != 2)
        throw NotTwoParameter("rectangle_curve: corners must be 2D");
    std::vector<ParameterPoint> corners(5, lo);
    corners[1][0] = hi[0];
    corners[2] = hi;
    corners[3][1] = hi[1];
    corners[4] = lo;
    Curve c = polyline_curve(std::move(corners), true);
    c.n_steps = std::max(n_steps, 4);
    return c;
}

void SurfacePatch::validate() const {
    if (lo.size() != 2 || hi.size() != 2)
        throw NotTwoParameter("SurfacePatch: corners must be 2D");
    if (n_u < 4 || n_v < 4)
        throw ValidationError("SurfacePatch: need at least 4 lattice points per axis");
    if (!(hi[0] > lo[0]) || !(hi[1] > lo[1]))
        throw ValidationError("SurfacePatch: hi must exceed lo on both axes");
}

ParameterPoint SurfacePatch::at(int i, int j) const {
    ParameterPoint p(2);
    p[0] = lo[0] + (hi[0] - lo[0]) * static_cast<double>(i) / (n_u - 1);
    p[1] = lo[1] + (hi[1] - lo[1]) * static_cast<double>(j) / (n_v - 1);
    return p;
}

ParameterPoint SurfacePatch::cell_mid(int i, int j) const {
    ParameterPoint p(2);
    p[0] = lo[0] + (hi[0] - lo[0]) * (i + 0.5) / (n_u - 1);
    p[1] = lo[1] + (hi[1] - lo[1]) * (j + 0.5) / (n_v - 1);
    return p;
}

double SurfacePatch::cell_area() const {
    return (hi[0] - lo[0]) / (n_u - 1) * (hi[1] - lo[1]) / (n_v - 1);
}

Curve boundary_curve(const SurfacePatch& patch) {
    patch.validate();
    std::vector<ParameterPoint> pts;
    pts.reserve(static_cast<size_t>(2 * (patch.n_u + patch.n_v)));
    for (int i = 0; i + 1 < patch.n_u; ++i) pts.push_back(patch.at(i, 0));
    for (int j = 0; j + 1 < patch.n_v; ++j) pts.push_back(patch.at(patch.n_u - 1, j));
    for (int i = patch.n_u - 1; i > 0; --i) pts.push_back(patch.at(i, patch.n_v - 1));
    for (int j = patch.n_v - 1; j > 0; --j) pts.push_back(patch.at(0, j));
    return polyline_curve(std::move(pts), true);
}

namespace {

ParameterPoint curve_point(const Curve& curve, int j) {
    return curve.sample(static_cast<double>(j) / curve.n_steps);
}

std::string point_text(const ParameterPoint& p) {
    std::ostringstream os;
    os << "(";
    for (Eigen::Index i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
    os << ")";
    return os.str();
}

void check_curve(const Curve& curve) {
    if (!curve.sample) throw ValidationError("curve has no sampler");
    if (curve.n_steps < 8) throw ValidationError("curve needs n_steps >= 8");
    if (curve.closed &&
        (curve.sample(0.0) - curve.sample(1.0)).norm() != 0.0)
        throw ValidationError("closed curve must satisfy sample(0) == sample(1)");
}

// Best next-level index for every currently tracked level, from the
// overlap matrix between consecutive frames.
std::vector<Eigen::Index> continuity_matching(const ComplexMatrix& overlap,
                                              const std::vector<Eigen::Index>& current,
                                              int step) {
    const Eigen::Index n = overlap.rows();
    std::vector<Eigen::Index> next(static_cast<size_t>(n));
    std::vector<bool> taken(static_cast<size_t>(n), false);
    for (Eigen::Index level = 0; level < n; ++level) {
        Eigen::Index jmax = 0;
        const double best =
            overlap.row(current[static_cast<size_t>(level)]).cwiseAbs().maxCoeff(&jmax);
        if (best < tol::match) {
            std::ostringstream os;
            os << "level " << level << " lost its partner at step " << step
               << " (best overlap " << best << "); refine the curve";
            throw LevelCrossing(os.str());
        }
        if (taken[static_cast<size_t>(jmax)]) {
            std::ostringstream os;
            os << "level matching became ambiguous at step " << step;
            throw LevelCrossing(os.str());
        }
        taken[static_cast<size_t>(jmax)] = true;
        next[static_cast<size_t>(level)] = jmax;
    }
    return next;
}

struct PlaquetteData {
    std::vector<RealMatrix> curvature;  // per level, (n_u-1) x (n_v-1)
    std::vector<RealMatrix> weight;     // midpoint eigenvalue per level
};

// Per-level plaquette Wilson-loop phases over the patch lattice, with
// midpoint weights. Pure families contribute a single unit-weight level.
PlaquetteData plaquette_sweep(const StateFamily& fam, const SurfacePatch& patch) {
    patch.validate();
    const bool pure = fam.is_pure();
    const Eigen::Index levels = pure ? 1 : fam.dim();
    const int nu = patch.n_u, nv = patch.n_v;

    std::vector<ComplexMatrix> frames(static_cast<size_t>(nu * nv));
    for (int i = 0; i < nu; ++i) {
        for (int j = 0; j < nv; ++j) {
            const ParameterPoint p = patch.at(i, j);
            if (pure) {
                frames[static_cast<size_t>(i * nv + j)] = fam.state_vector(p);
            } else {
                SpectralDecomposition d = hermitian_eigendecompose(fam.density(p));
                try {
                    require_resolvable_spectrum(d.eigenvalues);
                } catch (const DegenerateSpectrum& e) {
                    throw DegenerateSpectrum(std::string(e.what()) + " at lattice point " +
                                             point_text(p));
                }
                frames[static_cast<size_t>(i * nv + j)] = std::move(d.frame);
            }
        }
    }

    PlaquetteData out;
    out.curvature.assign(static_cast<size_t>(levels), RealMatrix::Zero(nu - 1, nv - 1));
    out.weight.assign(static_cast<size_t>(levels), RealMatrix::Zero(nu - 1, nv - 1));

    for (int i = 0; i + 1 < nu; ++i) {
        for (int j = 0; j + 1 < nv; ++j) {
            RealVector mid_weights;
            if (pure) {
                mid_weights = RealVector::Ones(1);
            } else {
                const SpectralDecomposition mid =
                    hermitian_eigendecompose(fam.density(patch.cell_mid(i, j)));
                mid_weights = mid.eigenvalues;
            }
            const ComplexMatrix& f00 = frames[static_cast<size_t>(i * nv + j)];
            const ComplexMatrix& f10 = frames[static_cast<size_t>((i + 1) * nv + j)];
            const ComplexMatrix& f11 = frames[static_cast<size_t>((i + 1) * nv + j + 1)];
            const ComplexMatrix& f01 = frames[static_cast<size_t>(i * nv + j + 1)];
            for (Eigen::Index n = 0; n < levels; ++n) {
                const Complex product = f00.col(n).dot(f10.col(n)) *
                                        f10.col(n).dot(f11.col(n)) *
                                        f11.col(n).dot(f01.col(n)) *
                                        f01.col(n).dot(f00.col(n));
                if (std::abs(product) < 0.0625) {  // every edge overlap should stay near 1
                    std::ostringstream os;
                    os << "plaquette (" << i << "," << j << ") level " << n
                       << " has vanishing Wilson product; refine the grid";
                    throw LevelCrossing(os.str());
                }
                out.curvature[static_cast<size_t>(n)](i, j) = -std::arg(product);
                out.weight[static_cast<size_t>(n)](i, j) =
                    std::max(mid_weights[std::min<Eigen::Index>(n, mid_weights.size() - 1)],
                             0.0);
            }
        }
    }
    return out;
}

}  // namespace

TransportResult horizontal_lift(const StateFamily& fam, const Curve& curve,
                                const StepPolicy& policy) {
    policy.validate();
    check_curve(curve);
    const bool pure = fam.is_pure();
    const Eigen::Index levels = pure ? 1 : fam.dim();

    // Frames along the curve; pure families carry their single ray.
    auto frame_at = [&](double t) -> std::pair<ComplexMatrix, RealVector> {
        const ParameterPoint p = curve.sample(t);
        if (pure) return {fam.state_vector(p), RealVector::Ones(1)};
        SpectralDecomposition d = hermitian_eigendecompose(fam.density(p));
        try {
            require_resolvable_spectrum(d.eigenvalues);
        } catch (const DegenerateSpectrum& e) {
            throw DegenerateSpectrum(std::string(e.what()) + " at curve point " +
                                     point_text(p));
        }
        return {std::move(d.frame), std::move(d.eigenvalues)};
    };

    TransportResult out;
    auto [frame, values] = frame_at(0.0);
    out.weights = values;
    out.phase_history.reserve(static_cast<size_t>(curve.n_steps) + 1);
    out.phase_history.push_back(PhaseFrame{RealVector::Zero(levels)});

    std::vector<Eigen::Index> tracked(static_cast<size_t>(levels));
    for (Eigen::Index n = 0; n < levels; ++n) tracked[static_cast<size_t>(n)] = n;

    RealVector theta = RealVector::Zero(levels);
    out.connection_residual_max = 0.0;

    for (int j = 0; j < curve.n_steps; ++j) {
        auto [mid_frame, mid_values] = frame_at((j + 0.5) / curve.n_steps);
        auto [next_frame, next_values] = frame_at(static_cast<double>(j + 1) / curve.n_steps);
        const ComplexMatrix overlap = frame.adjoint() * next_frame;
        const ComplexMatrix to_mid = frame.adjoint() * mid_frame;
        const ComplexMatrix from_mid = mid_frame.adjoint() * next_frame;
        const std::vector<Eigen::Index> next_tracked =
            pure ? tracked : continuity_matching(overlap, tracked, j);
        const std::vector<Eigen::Index> mid_tracked =
            pure ? tracked : continuity_matching(to_mid, tracked, j);

        // The lift advances by the coarse overlap phase; the transport
        // defect compares it against the midpoint-refined connection
        // increment, which agrees to O(step^3) when the levels are tracked
        // consistently.
        double weighted_defect = 0.0;
        for (Eigen::Index n = 0; n < levels; ++n) {
            const Eigen::Index a = tracked[static_cast<size_t>(n)];
            const Eigen::Index m = mid_tracked[static_cast<size_t>(n)];
            const Eigen::Index b = next_tracked[static_cast<size_t>(n)];
            const double step_phase = -std::arg(overlap(a, b));
            theta[n] += step_phase;
            const double refined = std::arg(to_mid(a, m)) + std::arg(from_mid(m, b));
            weighted_defect += values[a] * wrap_angle(step_phase + refined);
        }
        out.connection_residual_max =
            std::max(out.connection_residual_max, std::abs(weighted_defect));
        out.phase_history.push_back(PhaseFrame{theta});

        frame = std::move(next_frame);
        values = std::move(next_values);
        tracked = next_tracked;
        (void)mid_values;
    }

    out.raw_phases = theta;
    out.berry_phases.resize(levels);
    out.windings.resize(levels);
    out.theta_total = 0.0;
    for (Eigen::Index n = 0; n < levels; ++n) {
        out.berry_phases[n] = wrap_angle(theta[n]);
        out.windings[n] =
            static_cast<int>(std::lround((theta[n] - out.berry_phases[n]) / (2.0 * M_PI)));
        out.theta_total += out.weights[n] * theta[n];
    }
    return out;
}

double pure_berry_phase(const StateFamily& fam, const Curve& curve) {
    if (!fam.is_pure()) throw NotPure("pure_berry_phase requires a pure family");
    check_curve(curve);
    if (!curve.closed) throw ValidationError("pure_berry_phase requires a closed curve");

    double phase = 0.0;
    ComplexVector prev = fam.state_vector(curve_point(curve, 0));
    for (int j = 1; j <= curve.n_steps; ++j) {
        const ComplexVector next = fam.state_vector(curve_point(curve, j));
        phase -= std::arg(prev.dot(next));
        prev = next;
    }
    return phase;
}

RealMatrix weighted_curvature_cells(const StateFamily& fam, const SurfacePatch& patch,
                                    const StepPolicy& policy) {
    policy.validate();
    const PlaquetteData data = plaquette_sweep(fam, patch);
    RealMatrix cells = RealMatrix::Zero(patch.n_u - 1, patch.n_v - 1);
    for (size_t n = 0; n < data.curvature.size(); ++n)
        cells += 0.5 * data.weight[n].cwiseProduct(data.curvature[n]);
    return cells;
}

ThetaGResult theta_g(const StateFamily& fam, const SurfacePatch& patch,
                     const StepPolicy& policy) {
    policy.validate();
    const PlaquetteData data = plaquette_sweep(fam, patch);
    ThetaGResult out;
    out.per_level.resize(static_cast<Eigen::Index>(data.curvature.size()));
    out.cells = (patch.n_u - 1) * (patch.n_v - 1);
    for (size_t n = 0; n < data.curvature.size(); ++n) {
        out.per_level[static_cast<Eigen::Index>(n)] =
            0.5 * data.weight[n].cwiseProduct(data.curvature[n]).sum();
        out.value += out.per_level[static_cast<Eigen::Index>(n)];
    }
    return out;
}

}  // namespace qgt
