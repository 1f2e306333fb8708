#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ri1d/adversarial_constructor.hpp"
#include "ri1d/energy_model.hpp"
#include "ri1d/evolution_integrator.hpp"
#include "ri1d/incremental_solver.hpp"
#include "ri1d/regularity_analyzer.hpp"

using namespace ri1d;

namespace {

Trajectory staircase() { return make_trajectory({0, 1, 2, 3, 4, 5, 6}, {0, 0, 0, 0.5, 0.5, 0.75, 0.75}); }

Trajectory sampled(const MonotoneDriver& u, std::size_t n) {
    std::vector<double> ts(n + 1), xs(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        ts[k] = double(k) / double(n);
        xs[k] = u(ts[k]);
    }
    return make_trajectory(ts, xs);
}

} // namespace

TEST(DetectJumps, Staircase) {
    const auto js = detect_jumps(staircase(), 0.1);
    ASSERT_EQ(js.size(), 2u);
    EXPECT_DOUBLE_EQ(js[0].size(), 0.5);
    EXPECT_DOUBLE_EQ(js[1].size(), 0.25);
}

TEST(DetectJumps, SmoothRamp) {
    std::vector<double> ts, xs;
    for (int k = 0; k <= 1000; ++k) ts.push_back(k * 1e-3), xs.push_back(k * 1e-3);
    EXPECT_TRUE(detect_jumps(make_trajectory(ts, xs), 10 * 1e-3).empty());
}

TEST(DetectJumps, DoubleWellLocal) {
    const Trajectory tr = solve_local(double_well_model(), -1.0, 2.0, 1e-3).trajectory;
    const auto js = detect_jumps(tr, default_jump_threshold(tr));
    ASSERT_EQ(js.size(), 1u);
    EXPECT_NEAR(js[0].size(), std::sqrt(3.0), 5e-2);
}

TEST(Dissipation, Examples) {
    EXPECT_DOUBLE_EQ(dissipation(staircase(), 0, 6), 0.75);
    const Trajectory mono = make_trajectory({0, 1, 2, 3}, {0, 0.2, 0.7, 1.1});
    EXPECT_DOUBLE_EQ(dissipation(mono, 1, 3), 0.9);
    EXPECT_DOUBLE_EQ(dissipation(sampled(cantor_driver(7), 2187), 0, 1), 1.0);
}

TEST(DissipationProperty, AdditiveAndBoundedBelow) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> N(0, 1);
    std::vector<double> ts, xs;
    double x = 0;
    for (int k = 0; k <= 200; ++k) ts.push_back(k * 0.01), xs.push_back(x += N(rng));
    const Trajectory tr = make_trajectory(ts, xs);
    for (int trial = 0; trial < 100; ++trial) {
        std::uniform_int_distribution<int> I(0, 200);
        int a = I(rng), b = I(rng), c = I(rng);
        if (a > b) std::swap(a, b);
        if (b > c) std::swap(b, c);
        if (a > b) std::swap(a, b);
        const double t1 = ts[a], t2 = ts[b], t3 = ts[c];
        EXPECT_NEAR(dissipation(tr, t1, t2) + dissipation(tr, t2, t3), dissipation(tr, t1, t3), 1e-12);
        EXPECT_GE(dissipation(tr, t1, t3), std::abs(xs[c] - xs[a]) - 1e-12);
    }
}

TEST(VerifyWeak, Examples) {
    const EnergyModel q = quadratic_model();
    EXPECT_LE(verify_weak(q, solve_local(q, 0.0, 2.0, 1e-3).trajectory, 1e-3).stability, 1e-6);
    const auto bad = verify_weak(double_well_model(), make_trajectory({0, 1, 2}, {0, 0, 0}), 1e-3);
    EXPECT_FALSE(bad.stability_pass);
    EXPECT_NEAR(bad.stability, 1.0, 1e-12);
    EXPECT_NEAR(bad.stability_time, 2.0, 1e-12);
    EXPECT_EQ(verify_weak(zero_model(), make_trajectory({0, 1, 2}, {1, 1, 1}), 1e-9).stability, 0.0);
}

TEST(Classify, QuadraticKinkAndInterior) {
    const EnergyModel m = quadratic_model();
    const Trajectory tr = solve_local(m, 0.0, 2.0, 1e-3).trajectory;
    const auto rep = classify_points(m, tr, detect_jumps(tr, default_jump_threshold(tr)), 1e-4);
    for (const auto& p : rep.points) {
        if (std::abs(p.t - 1.0) < 1e-9) {
            EXPECT_NEAR(p.left, 0.0, 1e-3);
            EXPECT_NEAR(p.right, 1.0, 1e-3);
            EXPECT_NE(p.cls, PointClass::I3);
        } else if (p.t > 0.01 && p.t < 1.99 && std::abs(p.t - 1.0) > 0.01) {
            EXPECT_EQ(p.cls, PointClass::I3) << p.t;
        }
    }
}

TEST(Classify, DoubleWellJumpSetAndSlideLaw) {
    const EnergyModel m = double_well_model();
    const Trajectory tr = solve_local(m, -1.0, 2.0, 1e-3).trajectory;
    const auto rep = classify_points(m, tr, detect_jumps(tr, default_jump_threshold(tr)), 1e-4);
    EXPECT_EQ(rep.count(PointClass::J), 1u);
    for (const auto& p : rep.points) {
        if (p.cls == PointClass::J) EXPECT_NEAR(p.t, 1.0 + 2.0 / (3.0 * std::sqrt(3.0)), 1e-3);
        if (p.cls == PointClass::I3 && !p.resolution_limited && p.has_prediction && p.t > 1.01 && p.t < 1.38)
            EXPECT_NEAR(p.derivative, 1.0 / (3 * p.x * p.x - 1), 1e-4 * std::max(1.0, std::abs(p.predicted)));
    }
}

TEST(Classify, ConstantIsI3WithZeroDerivative) {
    std::vector<double> ts;
    for (int k = 0; k <= 100; ++k) ts.push_back(k * 0.01);
    const auto rep = classify_points(zero_model(), make_trajectory(ts, std::vector<double>(101, 0.4)), {}, 1e-6);
    for (const auto& p : rep.points)
        if (p.t > 0.05 && p.t < 0.95) {
            EXPECT_EQ(p.cls, PointClass::I3);
            EXPECT_NEAR(p.derivative, 0.0, 1e-12);
        }
}

TEST(ClassifyProperty, I2PointsSatisfyQuadraticRelation) {
    for (const auto& n : builtin_model_names()) {
        const EnergyModel m = builtin_model(n);
        const Trajectory tr = solve_local(m, n == "double-well" ? -1.0 : 0.0, 2.0, 1e-3).trajectory;
        const auto rep = classify_points(m, tr, detect_jumps(tr, default_jump_threshold(tr)), 1e-4);
        const double scale = energy_scale(m, tr);
        for (const auto& p : rep.points)
            if (p.cls == PointClass::I2 && !p.resolution_limited) {
                EXPECT_LE(std::abs(p.quadratic_left), 1e-3 * scale) << n << " t=" << p.t;
                EXPECT_LE(std::abs(p.quadratic_right), 1e-3 * scale) << n << " t=" << p.t;
            }
    }
}

TEST(Sbv, SmoothTrajectoryIsAbsolutelyContinuous) {
    std::vector<double> ts, xs;
    for (int k = 0; k <= 1000; ++k) ts.push_back(k * 1e-3), xs.push_back(std::sin(3 * k * 1e-3));
    const auto s = sbv_split(make_trajectory(ts, xs));
    EXPECT_LE(s.cantor, 0.01 * s.total);
    EXPECT_TRUE(s.sbv);
}

TEST(Sbv, StaircaseIsPureJump) {
    const auto s = sbv_split(sampled(MonotoneDriver::staircase(0, {{0.25, 0.5}, {0.5, 1}, {0.75, 1.5}}, 1.0), 1000));
    EXPECT_NEAR(s.jump, s.total, 1e-9);
    EXPECT_NEAR(s.cantor, 0.0, 1e-9);
}

TEST(Sbv, CantorLevelSeven) {
    const auto s = sbv_split(sampled(cantor_driver(7), 2187));
    EXPECT_NEAR(s.total, 1.0, 1e-12);
    EXPECT_GE(s.cantor, 0.9);
    EXPECT_EQ(s.jumps, 0u);
    EXPECT_FALSE(s.sbv);
}

TEST(SbvProperty, PartsSumToTotal) {
    for (const Trajectory& tr : {staircase(), sampled(cantor_driver(5), 243), sampled(cantor_driver(6), 1000)}) {
        const auto s = sbv_split(tr);
        EXPECT_NEAR(s.ac + s.jump + s.cantor, s.total, 1e-9 * std::max(1.0, s.total));
    }
}
