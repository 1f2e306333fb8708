#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "ri1d/energy_model.hpp"
#include "ri1d/evolution_integrator.hpp"
#include "ri1d/incremental_solver.hpp"

using namespace ri1d;

namespace {
const double fold_time = 1.0 + 2.0 / (3.0 * std::sqrt(3.0));
const double fold_state = -1.0 / std::sqrt(3.0);
// other root of z^3 - z = fold_time - 1, the double root being fold_state
const double landing = 2.0 / std::sqrt(3.0);
} // namespace

TEST(SolveLocal, QuadraticStickThenSlide) {
    const LocalSolution s = solve_local(quadratic_model(), 0.0, 2.0, 1e-3);
    const Trajectory& tr = s.trajectory;
    ASSERT_EQ(tr.size(), 2001u);
    for (std::size_t k = 0; k < tr.size(); ++k) EXPECT_NEAR(tr.values[k], std::max(0.0, tr.times[k] - 1.0), 1e-9);
    ASSERT_FALSE(s.events.empty());
    EXPECT_EQ(s.events[0].kind, EventKind::activation);
    EXPECT_NEAR(s.events[0].t, 1.0, 1e-9);
}

TEST(SolveLocal, DoubleWellFoldAndLanding) {
    const LocalSolution s = solve_local(double_well_model(), -1.0, 2.0, 1e-3);
    const Trajectory& tr = s.trajectory;
    ASSERT_EQ(tr.jumps.size(), 1u);
    EXPECT_NEAR(tr.jumps[0].time, fold_time, 1e-8);
    EXPECT_NEAR(tr.jumps[0].left, fold_state, 1e-4);
    EXPECT_NEAR(tr.jumps[0].right, landing, 1e-6);
    EXPECT_NEAR(tr.jumps[0].size(), std::sqrt(3.0), 1e-3);
    bool fold = false, land = false;
    for (const auto& e : s.events) {
        fold |= e.kind == EventKind::fold;
        land |= e.kind == EventKind::landing;
    }
    EXPECT_TRUE(fold && land);
    // slide on x^3 - x - t = -1 before the fold
    for (std::size_t k = 0; k < tr.size(); ++k)
        if (tr.times[k] > 1.05 && tr.times[k] < fold_time - 0.01)
            EXPECT_NEAR(std::pow(tr.values[k], 3) - tr.values[k] - tr.times[k], -1.0, 1e-7);
}

TEST(SolveLocal, ZeroModelSticks) {
    const LocalSolution s = solve_local(zero_model(), 0.3, 2.0, 1e-2);
    for (double x : s.trajectory.values) EXPECT_EQ(x, 0.3);
}

TEST(DetectRegime, Examples) {
    EXPECT_EQ(detect_regime(quadratic_model(), 0.5, 0.0, 1e-8, 1e-6), PointRegime::stick);
    EXPECT_EQ(detect_regime(double_well_model(), fold_time, fold_state, 1e-8, 1e-6), PointRegime::fold);
    EXPECT_EQ(detect_regime(double_well_model(), 0.0, 2.0, 1e-8, 1e-6), PointRegime::unstable);
}

TEST(UpperBound, SolveLocalOutputsPass) {
    for (const auto& n : builtin_model_names()) {
        const EnergyModel m = builtin_model(n);
        const Trajectory tr = solve_local(m, n == "double-well" ? -1.0 : 0.0, 2.0, 1e-3).trajectory;
        EXPECT_TRUE(check_upper_bound(m, tr, 2000, 1e-3 * energy_scale(m, tr)).pass) << n;
    }
}

TEST(UpperBound, ZeroModelConstantIsExact) {
    const auto u = check_upper_bound(zero_model(), make_trajectory({0, 1, 2}, {0.2, 0.2, 0.2}), 100, 1e-12);
    EXPECT_EQ(u.worst, 0.0);
    EXPECT_TRUE(u.pass);
}

TEST(UpperBound, ReversedJumpIsFlagged) {
    const EnergyModel m = double_well_model();
    Trajectory tr = solve_local(m, -1.0, 2.0, 1e-3).trajectory;
    // land uphill on the wrong side and stay there
    const double t = tr.jumps.at(0).time;
    for (std::size_t k = 0; k < tr.size(); ++k)
        if (tr.times[k] >= t) tr.values[k] = -1.5;
    tr.jumps[0].right = -1.5;
    const auto u = check_upper_bound(m, tr, 2000, 1e-3);
    EXPECT_GT(u.worst, 0.0);
    EXPECT_FALSE(u.pass);
}

TEST(Events, CsvRoundTrip) {
    const LocalSolution s = solve_local(double_well_model(), -1.0, 2.0, 1e-3);
    std::stringstream io;
    write_events_csv(s.events, io);
    const auto back = read_events_csv(io);
    ASSERT_EQ(back.size(), s.events.size());
    for (std::size_t k = 0; k < back.size(); ++k) {
        EXPECT_EQ(back[k].t, s.events[k].t);
        EXPECT_EQ(back[k].kind, s.events[k].kind);
        EXPECT_EQ(back[k].x_after, s.events[k].x_after);
    }
}

// invariants

TEST(SolveLocalProperty, BranchSignAndAdmissibility) {
    for (const auto& n : builtin_model_names()) {
        const EnergyModel m = builtin_model(n);
        const Trajectory tr = solve_local(m, n == "double-well" ? -1.0 : 0.0, 2.0, 1e-3).trajectory;
        for (std::size_t k = 1; k < tr.size(); ++k) {
            if (tr.regimes[k] != Regime::slide || tr.jump_at(k) >= 0) continue;
            const GradientJet g = m.eval_dx(tr.times[k], tr.values[k]);
            EXPECT_NEAR(std::abs(g.dx), 1.0, 1e-8) << n << " t=" << tr.times[k];
            EXPECT_LE(g.dx * (tr.values[k] - tr.values[k - 1]), 1e-12) << n;
            EXPECT_GE(g.dxx, -1e-6) << n;
        }
    }
}

TEST(SolveLocalProperty, JumpsLoseAtLeastTheirLength) {
    const EnergyModel m = double_well_model();
    const Trajectory tr = solve_local(m, -1.0, 2.0, 1e-3).trajectory;
    for (const auto& j : tr.jumps)
        EXPECT_LE(m.value(j.time, j.right) - m.value(j.time, j.left), -std::abs(j.size()) + 1e-9);
}

TEST(SolveLocalProperty, AgreesWithEnergeticInConvexCase) {
    const EnergyModel m = quadratic_model();
    const Trajectory a = solve_local(m, 0.0, 2.0, 1e-3).trajectory;
    const Trajectory b = solve_energetic(m, 0.0, uniform_grid(0, 2, 2000), m.domain().x, 1e-3);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a.values[k], b.values[k], 2e-3);
}
