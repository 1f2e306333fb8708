#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "ri1d/energy_model.hpp"
#include "ri1d/incremental_solver.hpp"

using namespace ri1d;

namespace {

// independent incremental minimiser on a fixed state grid
std::vector<double> brute_force(const std::function<double(double, double)>& E, double x0, const std::vector<double>& ts,
                                double lo, double hi, double h) {
    std::vector<double> out;
    double xp = x0;
    const int n = int(std::lround((hi - lo) / h));
    for (double t : ts) {
        double best = xp, fb = E(t, xp);
        for (int i = 0; i <= n; ++i) {
            const double z = lo + i * h;
            const double f = E(t, z) + std::abs(z - xp);
            if (f < fb - 1e-14) {
                fb = f;
                best = z;
            }
        }
        out.push_back(xp = best);
    }
    return out;
}

Trajectory run(const EnergyModel& m, double x0, double dt, double T = 2.0) {
    return solve_energetic(m, x0, uniform_grid(0.0, T, std::size_t(std::lround(T / dt))), m.domain().x, 1e-3);
}

} // namespace

TEST(SolveEnergetic, QuadraticPlayOperator) {
    const Trajectory tr = run(quadratic_model(), 0.0, 1e-3);
    ASSERT_EQ(tr.size(), 2001u);
    double worst = 0;
    for (std::size_t k = 0; k < tr.size(); ++k)
        worst = std::max(worst, std::abs(tr.values[k] - std::max(0.0, tr.times[k] - 1.0)));
    EXPECT_LE(worst, 2e-3);
    EXPECT_TRUE(tr.jumps.empty());
}

TEST(SolveEnergetic, QuadraticAgainstBruteForce) {
    const Trajectory tr = run(quadratic_model(), 0.0, 1e-2);
    const auto bf = brute_force([](double t, double z) { return z * z / 2 - t * z; }, 0.0, tr.times, -3, 3, 1e-4);
    for (std::size_t k = 0; k < tr.size(); ++k) EXPECT_NEAR(tr.values[k], bf[k], 2e-4);
}

TEST(SolveEnergetic, ZeroModelNeverMoves) {
    const Trajectory tr = run(zero_model(), 0.7, 1e-2);
    for (double x : tr.values) EXPECT_EQ(x, 0.7);
}

TEST(SolveEnergetic, DoubleWellSwitchesBeforeFold) {
    // brute-force incremental minimisation on a 1e-4 state grid: switch at the step after t = 1
    constexpr double observed_switch = 1.001;
    const double fold = 1.0 + 2.0 / (3.0 * std::sqrt(3.0));
    const Trajectory tr = run(double_well_model(), -1.0, 1e-3);
    ASSERT_EQ(tr.jumps.size(), 1u);
    EXPECT_NEAR(tr.jumps[0].time, observed_switch, 1.5e-3);
    EXPECT_LT(tr.jumps[0].time, fold);
    EXPECT_NEAR(tr.jumps[0].left, -1.0, 1e-3);
    EXPECT_GT(tr.jumps[0].right, 0.9);
}

TEST(GlobalStability, QuadraticMarginIsExact) {
    const EnergyModel m = quadratic_model();
    const Trajectory tr = run(m, 0.0, 1e-3);
    std::vector<double> probe(601);
    for (std::size_t j = 0; j < probe.size(); ++j) probe[j] = -3.0 + 0.01 * double(j);
    EXPECT_GE(check_global_stability(m, tr, probe, 1e-9).margin, -1e-9);
}

TEST(GlobalStability, FrozenDoubleWellFails) {
    const EnergyModel m = double_well_model();
    const Trajectory tr = make_trajectory({2.0}, {-1.0});
    const auto c = check_global_stability(m, tr, {1.5}, 1e-6);
    // E(2,1.5) + 2.5 - E(2,-1)
    const double want = (std::pow(1.5 * 1.5 - 1, 2) / 4 - 3.0) + 2.5 - 2.0;
    EXPECT_NEAR(c.margin, want, 1e-12);
    EXPECT_LT(c.margin, -0.5);
    EXPECT_FALSE(c.pass);
}

TEST(GlobalStability, ZeroModelMarginIsDistance) {
    const auto c = check_global_stability(zero_model(), make_trajectory({0.0, 1.0}, {0.5, 0.5}), {0.4, 0.5, 1.0}, 1e-9);
    EXPECT_EQ(c.margin, 0.0);
    EXPECT_TRUE(c.pass);
}

TEST(EnergyBalance, ZeroModelConstant) {
    const auto b = check_energy_balance(zero_model(), make_trajectory({0, 1, 2}, {1, 1, 1}), 1e-12);
    for (double r : b.residual) EXPECT_EQ(r, 0.0);
}

TEST(EnergyBalance, QuadraticConvergesWithRefinement) {
    const EnergyModel m = quadratic_model();
    double prev = 0;
    for (double dt : {4e-3, 2e-3, 1e-3}) {
        const double r = check_energy_balance(m, run(m, 0.0, dt), 1.0).max_abs;
        EXPECT_LE(r, 5e-3);
        if (prev > 1e-6) EXPECT_LE(r, 0.6 * prev);
        prev = r;
    }
}

TEST(EnergyBalance, NegatedDissipationGivesTwiceDiss) {
    const EnergyModel m = quadratic_model();
    const Trajectory tr = run(m, 0.0, 1e-3);
    const PathLedger p = path_ledger(m, tr);
    const std::size_t n = tr.size() - 1;
    const double flipped = p.energy[n] - p.energy[0] - p.power[n] - p.dissipation[n];
    EXPECT_NEAR(std::abs(flipped), 2.0 * p.dissipation[n], 1e-2);
    EXPECT_NEAR(p.dissipation[n], 1.0, 2e-3);
}

// invariants

TEST(SolveEnergeticProperty, MonotoneUnderMonotoneLoadingConvexW) {
    for (double x0 : {-1.5, 0.0, 0.8}) {
        const Trajectory tr = run(quadratic_model(), x0, 2e-3);
        for (std::size_t k = 1; k < tr.size(); ++k) EXPECT_GE(tr.values[k], tr.values[k - 1] - 1e-12);
    }
}

TEST(SolveEnergeticProperty, RefinementChangesLittle) {
    const EnergyModel m = quadratic_model();
    const Trajectory a = run(m, 0.0, 2e-3), b = run(m, 0.0, 1e-3);
    double d = 0;
    for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a.values[k] - b.values[2 * k]));
    EXPECT_LE(d, 2 * 2e-3);
}

TEST(SolveEnergeticProperty, SelfConsistentAudits) {
    for (const auto& name : builtin_model_names()) {
        const EnergyModel m = builtin_model(name);
        const Trajectory tr = run(m, 0.0, 2e-3);
        std::vector<double> probe(1201);
        for (std::size_t j = 0; j < probe.size(); ++j) probe[j] = -3.0 + 0.005 * double(j);
        const double scale = energy_scale(m, tr);
        EXPECT_TRUE(check_global_stability(m, tr, probe, 10 * 1e-3 * scale).pass) << name;
        EXPECT_TRUE(check_energy_balance(m, tr, 10 * 1e-3 * scale).pass) << name;
    }
}

TEST(SolveEnergeticProperty, RateIndependence) {
    // loading l(t) = t reparametrised by s -> s^2 on [0, sqrt 2]
    const double T = std::sqrt(2.0);
    const auto sgrid = uniform_grid(0.0, T, 1000);
    std::vector<double> tgrid;
    for (double s : sgrid) tgrid.push_back(std::min(2.0, s * s));
    const EnergyModel m = double_well_model();
    const Trajectory a = solve_energetic(m, -1.0, tgrid, m.domain().x, 1e-3);
    const EnergyModel slow = EnergyModel::separable({0.25, 0, -0.5, 0, 0.25}, {0, 0, 1}, T, 3.0);
    const Trajectory b = solve_energetic(slow, -1.0, sgrid, slow.domain().x, 1e-3);
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a.values[k], b.values[k], 1e-3);
}
