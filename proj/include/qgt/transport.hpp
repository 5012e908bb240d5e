#pragma once

#include <functional>
#include <vector>

#include "qgt/derivatives.hpp"
#include "qgt/models.hpp"

namespace qgt {

/// Parameter-space curve sampled at n_steps + 1 points of t in [0, 1].
/// Closed curves must satisfy sample(0) == sample(1) exactly.
struct Curve {
    std::function<ParameterPoint(double)> sample;
    int n_steps = 256;
    bool closed = false;
};

Curve circle_curve(const ParameterPoint& center, double radius, int n_steps);
Curve rectangle_curve(const ParameterPoint& lo, const ParameterPoint& hi, int n_steps);
/// Piecewise-linear curve through the waypoints, sampled uniformly in the
/// waypoint index; closed curves repeat the first point at the end.
Curve polyline_curve(std::vector<ParameterPoint> waypoints, bool closed);
/// Straight sweep from `start` to `start + shift`, with sample(1) wrapping
/// back to `start` exactly. This is how loops that close only through a
/// periodic coordinate (a latitude circle in its chart) are represented.
Curve periodic_loop_curve(const ParameterPoint& start, const ParameterPoint& shift,
                          int n_steps);

/// Uniform (n_u x n_v)-point lattice spanning the rectangle [lo, hi] in a
/// two-dimensional parameter space.
struct SurfacePatch {
    ParameterPoint lo, hi;
    int n_u = 8, n_v = 8;

    void validate() const;
    ParameterPoint at(int i, int j) const;
    ParameterPoint cell_mid(int i, int j) const;
    double cell_area() const;
};

/// Counterclockwise perimeter of the patch lattice, one step per lattice
/// edge; this is the boundary loop that pairs with the plaquette sum.
Curve boundary_curve(const SurfacePatch& patch);

struct TransportResult {
    std::vector<PhaseFrame> phase_history;   // accumulated theta_n after each step
    RealVector berry_phases;                 // principal values in (-pi, pi]
    Eigen::VectorXi windings;                // raw = principal + 2 pi winding
    RealVector raw_phases;                   // accumulated totals
    RealVector weights;                      // eigenvalues at the start point
    double connection_residual_max = 0.0;    // max |sum_n lambda_n (dtheta_n + arg<n|n'>)|
    double theta_total = 0.0;                // sum_n lambda_n * raw theta_n
};

/// Integrates the per-level parallel-transport condition along the curve:
/// each step advances theta_n by -arg<n(t_j)|n(t_{j+1})> with levels paired
/// by maximum overlap. Throws DegenerateSpectrum when significant levels
/// collide and LevelCrossing when the pairing becomes ambiguous.
TransportResult horizontal_lift(const StateFamily& fam, const Curve& curve,
                                const StepPolicy& policy);

/// Discrete Wilson-loop Berry phase of a closed loop of pure states,
/// invariant under per-sample phase changes. Returns the accumulated
/// (unwrapped) phase.
double pure_berry_phase(const StateFamily& fam, const Curve& curve);

struct ThetaGResult {
    double value = 0.0;
    RealVector per_level;  // lambda-weighted curvature integral per level
    int cells = 0;
};

/// Surface integral of the weighted curvature two-form: per-level
/// plaquette Wilson loops weighted by lambda_n at the cell midpoint and
/// summed with the 1/2 prefactor.
ThetaGResult theta_g(const StateFamily& fam, const SurfacePatch& patch,
                     const StepPolicy& policy);

/// Per-cell weighted plaquette phases ((n_u-1) x (n_v-1)); theta_g is
/// their sum. The volume/phase inequalities integrate |cell| values.
RealMatrix weighted_curvature_cells(const StateFamily& fam, const SurfacePatch& patch,
                                    const StepPolicy& policy);

}  // namespace qgt
