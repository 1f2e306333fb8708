#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "ri1d/energy_model.hpp"
#include "ri1d/trajectory.hpp"

namespace ri1d {

struct LocalTolerances {
    double slide = 1e-8;  ///< allowed | |dE/dx| - 1 | on a slide
    double stick = 1e-8;  ///< allowed excess of |dE/dx| over 1 while stuck
    double fold = 1e-6;   ///< d2E/dx2 at or below this counts as degenerate
    double event = 1e-10; ///< time resolution of event bisection
    /// Consecutive slide steps tolerated with d2E/dx2 <= fold before StiffSlideError.
    int stiff_steps = 100;
};

enum class PointRegime { stick, slide_plus, slide_minus, fold, unstable };

std::string point_regime_name(PointRegime r);

/// Classifies a single state: stick, slide+-, fold or unstable.
PointRegime detect_regime(const EnergyModel& model, double t, double x, double tol, double fold_tol);

/// jump: a switch of global minimiser in the energetic scheme.
enum class EventKind { activation, fold, landing, jump };

struct RegimeEvent {
    double t = 0.0;
    EventKind kind = EventKind::activation;
    double x_before = 0.0;
    double x_after = 0.0;
};

std::string event_name(EventKind k);

struct RegimeState {
    PointRegime regime = PointRegime::stick;
    double last_event_time = 0.0;
    EventKind last_event = EventKind::activation;
    bool has_event = false;
};

struct LocalSolution {
    Trajectory trajectory;
    std::vector<RegimeEvent> events;
    RegimeState final_state;
};

/// Stick / slide / fold-jump integration on the uniform grid 0, dt, ..., horizon.
/// Jump rows are inserted at fold times.
LocalSolution solve_local(const EnergyModel& model, double x0, double horizon, double dt,
                          const LocalTolerances& tol = {});

void write_events_csv(const std::vector<RegimeEvent>& events, std::ostream& out);
std::vector<RegimeEvent> read_events_csv(std::istream& in);

struct UpperBoundCheck {
    double worst = 0.0; ///< max over t1 <= t2 of the upper-bound residual
    double t1 = 0.0;
    double t2 = 0.0;
    std::size_t pairs_checked = 0;
    bool pass = true;
};

/// Checks E(t2,x2) - E(t1,x1) - int dE/dt + Diss <= tol over all sample pairs (exactly, in linear
/// time) plus `pairs` seeded random pairs evaluated directly.
UpperBoundCheck check_upper_bound(const EnergyModel& model, const Trajectory& traj, std::size_t pairs, double tol,
                                  std::uint64_t seed = 11);

} // namespace ri1d
