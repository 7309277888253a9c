#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hud/pattern.hpp"
#include "hud/spectral.hpp"

namespace hud {

/// Target for collective-coordinate generation of a stealthy hyperuniform
/// pattern: S(k) <= tolerance on every constrained wavevector, pairwise
/// periodic distances >= min_separation.
struct StealthyTargetSpec {
    int n_points = 200;
    double chi = 0.5;               // (0, 0.5]
    double box_length = 0.2;        // meters
    double min_separation = 0.010;  // meters, hard post-hoc constraint
    std::uint64_t seed = 0;
    double tolerance = 1e-10;       // per-k S bound
    int max_iterations = 1000;      // optimizer iteration budget per start
    int max_restarts = 11;

    void validate() const;  // throws InvalidArgument
};

struct OptimizationReport {
    double final_objective = 0.0;       // sum of S over constrained half-plane set
    double max_structure_factor = 0.0;  // certificate: direct-sum max S on constrained k
    double k_c = 0.0;                   // rad/m
    int constrained_count = 0;          // M
    double achieved_chi = 0.0;
    int iterations = 0;                 // quench + polish iterations, all starts
    int restarts_used = 0;
    double min_separation = 0.0;        // measured
    double mean_nearest_neighbor = 0.0; // measured
    bool converged = false;
};

/// Objective for the collective-coordinate construction, in scaled units
/// (unit box): Phi(r) = sum_k S(k) over the constrained half-plane set plus a
/// smooth short-range pair repulsion active below the soft core radius.
/// Exposed so tests can check the analytic gradient against finite
/// differences.
class StealthObjective {
public:
    StealthObjective(std::vector<Vec2> wavevectors, double soft_core_radius,
                     double penalty_weight);

    /// Phi and (optionally) its gradient; `positions` is 2N scalars (x0, y0,
    /// x1, y1, ...) in the unit box.
    double evaluate(const std::vector<double>& positions,
                    std::vector<double>* gradient) const;

    /// Stealth term only (no penalty), plus the largest per-k S value.
    double stealth_objective(const std::vector<double>& positions,
                             double* max_s = nullptr) const;

    std::size_t constrained_count() const { return wavevectors_.size(); }
    const std::vector<Vec2>& wavevectors() const { return wavevectors_; }

private:
    std::vector<Vec2> wavevectors_;  // scaled: 2*pi*(nx, ny)
    double soft_core_radius_;
    double penalty_weight_;
};

/// Collective-coordinate generation: multi-start Levenberg-Marquardt on the
/// constrained Fourier residuals with soft-core separation residuals, then an
/// independent direct-sum certificate. At full constraint capacity
/// (chi = 0.5, even N) the solver switches to an inversion-symmetric
/// parametrization where exact zeros remain reachable. Throws
/// ConvergenceError / SeparationError when the restart budget is exhausted.
std::pair<PointPattern, OptimizationReport> generate_stealthy(const StealthyTargetSpec& spec);

}  // namespace hud
