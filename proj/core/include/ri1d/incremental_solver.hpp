#pragma once

#include <vector>

#include "ri1d/energy_model.hpp"
#include "ri1d/trajectory.hpp"

namespace ri1d {

struct EnergeticOptions {
    /// Scan spacing; non-positive means "use the solver tolerance".
    double scan_step = 0.0;
    double refine_tol = 1e-10;
    /// Relative energy gap under which two minimisers count as tied.
    double tie_tol = 1e-10;
};

/// Time-incremental global minimisation of z -> E(t_k, z) + |z - x_{k-1}| over search.
Trajectory solve_energetic(const EnergyModel& model, double x0, const std::vector<double>& grid, Interval search,
                           double tol, const EnergeticOptions& opts = {});

/// Uniform grid of n+1 points on [t0, t1], endpoints exact.
std::vector<double> uniform_grid(double t0, double t1, std::size_t n);

struct StabilityCheck {
    double margin = 0.0; ///< minimum of E(t,z) + |z - x(t)| - E(t,x(t))
    double time = 0.0;
    double probe = 0.0;
    double state = 0.0;
    bool pass = true;
};

StabilityCheck check_global_stability(const EnergyModel& model, const Trajectory& traj,
                                      const std::vector<double>& probe, double tol);

/// Cumulative quantities along a sampled path, per sample k (prefix [t_0, t_k]).
struct PathLedger {
    std::vector<double> energy;      ///< E(t_k, x_k)
    std::vector<double> power;       ///< int_{t_0}^{t_k} dE/dt, trapezoid, jumps at the interval's right end
    std::vector<double> dissipation; ///< sum of |increments|
    /// energy - power + dissipation, relative to sample 0
    double phi(std::size_t k) const { return energy[k] - energy[0] - power[k] + dissipation[k]; }
};

PathLedger path_ledger(const EnergyModel& model, const Trajectory& traj);

struct BalanceCheck {
    std::vector<double> residual; ///< per prefix [t_0, t_k]
    std::vector<double> dissipation;
    double max_abs = 0.0;
    double worst_time = 0.0;
    bool pass = true;
};

BalanceCheck check_energy_balance(const EnergyModel& model, const Trajectory& traj, double tol);

/// max(1, max_k |E(t_k, x_k)|): the scale used to turn relative tolerances into energies.
double energy_scale(const EnergyModel& model, const Trajectory& traj);

} // namespace ri1d
