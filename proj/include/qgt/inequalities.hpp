#pragma once

#include <string>
#include <vector>

#include "qgt/tensors.hpp"
#include "qgt/transport.hpp"

namespace qgt {

/// One checked inequality lhs >= rhs. `pass` allows a scaled slack of
/// tol::residual * max(1, |lhs|, |rhs|).
struct InequalityReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;  // lhs - rhs
    bool pass = false;
    std::string context;
};

InequalityReport make_report(std::string name, double lhs, double rhs,
                             std::string context = {});

/// Q_mumu Q_nunu >= |Q_munu|^2 for the full mixed-state tensor. With
/// mu == nu the bound degenerates to an equality.
InequalityReport qgt_pair_inequality(const QgtResult& q, Eigen::Index mu, Eigen::Index nu);

/// The full report set for one axis pair: the bound above, the same bound
/// per level, and the Fisher-Rao block bound.
std::vector<InequalityReport> qgt_pair_inequality_reports(const QgtResult& q,
                                                          Eigen::Index mu,
                                                          Eigen::Index nu);

InequalityReport bures_pair_inequality(const BuresResult& g, Eigen::Index mu,
                                       Eigen::Index nu);

/// sqrt(det Re Q) >= |F_12| / 2 with F = -2 Im Q (two-parameter families).
InequalityReport det_curvature_bound_2d(const QgtResult& q);

/// Midpoint-rule integral of sqrt(det Re Q) over the patch. Dispatches to
/// the pure-state tensor for pure families.
double quantum_volume(const StateFamily& fam, const SurfacePatch& patch,
                      const StepPolicy& policy);

struct VolumePhaseReport {
    double volume = 0.0;              // integral of sqrt(det g)
    double curvature_integral = 0.0;  // integral of |F_12| / 2
    double theta_g = 0.0;
    InequalityReport volume_vs_curvature;
    InequalityReport curvature_vs_theta;
};

/// The chain V >= integral |F_12|/2 >= |theta_g| evaluated on one patch.
/// The middle integral sums |cell| over the same plaquette data that
/// theta_g sums signed, so the second bound holds by construction and the
/// first reduces to the pointwise determinant bound.
VolumePhaseReport volume_phase_relation(const StateFamily& fam, const SurfacePatch& patch,
                                        const StepPolicy& policy);

/// Randomized witness suite over random smooth families: the pair bound,
/// its per-level and Fisher-Rao companions, the Bures bound and the
/// determinant bound on two-parameter draws.
struct SuiteResult {
    int draws = 0;
    long reports = 0;
    double min_residual = 0.0;   // most negative scaled residual seen
    std::string argmin_context;
    bool pass = false;
};

SuiteResult run_inequality_suite(std::uint64_t seed, int draws);

}  // namespace qgt
