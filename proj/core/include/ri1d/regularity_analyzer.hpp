#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ri1d/energy_model.hpp"
#include "ri1d/evolution_integrator.hpp"
#include "ri1d/trajectory.hpp"

namespace ri1d {

/// 5 * median |increment|, floored at 10 * state_tol. A non-positive state_tol means
/// 0.1 * sqrt(median time step): increments of a Hoelder-1/2 path stay below the floor.
double default_jump_threshold(const Trajectory& traj, double state_tol = 0.0);

/// Increments above threshold, adjacent ones of equal sign merged. Limits are extrapolated
/// linearly from up to three samples on each side that do not cross a neighbouring jump.
std::vector<JumpRecord> detect_jumps(const Trajectory& traj, double threshold);

/// Pointwise variation of the samples lying in [t1, t2].
double dissipation(const Trajectory& traj, double t1, double t2);

struct WeakCheck {
    double stability = 0.0; ///< max over continuity samples of (|dE/dx| - 1)+
    double stability_time = 0.0;
    bool stability_pass = true;
    UpperBoundCheck upper;
    bool pass = true;
};

WeakCheck verify_weak(const EnergyModel& model, const Trajectory& traj, double tol, std::size_t pairs = 0,
                      std::uint64_t seed = 11);

enum class PointClass { I1, I2, I3, J };
std::string class_name(PointClass c);

struct ClassifiedPoint {
    double t = 0.0;
    double x = 0.0;
    PointClass cls = PointClass::I3;
    bool resolution_limited = false;
    bool left_exists = false;
    bool right_exists = false;
    double left = 0.0;       ///< one-sided slope estimates (finest stride)
    double right = 0.0;
    double derivative = 0.0; ///< I3 only
    bool has_prediction = false;
    double predicted = 0.0;  ///< -E_xt / E_xx
    bool has_roots = false;
    double X1 = 0.0, X2 = 0.0; ///< real roots of E_xtt + 2 E_xxt X + E_xxx X^2 = 0
    double quadratic_left = 0.0, quadratic_right = 0.0; ///< that quadratic at the one-sided slopes
};

struct ClassificationReport {
    std::vector<ClassifiedPoint> points;
    std::size_t count(PointClass c) const;
    std::size_t resolution_limited() const;
};

/// Per-sample classification. Stencils never cross a jump, nor pass through a detected kink.
ClassificationReport classify_points(const EnergyModel& model, const Trajectory& traj,
                                     const std::vector<JumpRecord>& jumps, double tol);

struct SbvSplit {
    double total = 0.0;
    double ac = 0.0;
    double jump = 0.0;
    double cantor = 0.0;
    std::vector<int> ladder;
    std::vector<double> cantor_per_rung;
    bool converged = true; ///< Cantor estimate non-increasing along the ladder
    double fraction = 0.1;
    bool sbv = true;
    std::size_t jumps = 0;
};

/// ladder: strictly increasing relative resolutions; the last one uses every sample.
SbvSplit sbv_split(const Trajectory& traj, const std::vector<int>& ladder = {1, 2, 4}, double fraction = 0.1,
                   double threshold = 0.0);

} // namespace ri1d
