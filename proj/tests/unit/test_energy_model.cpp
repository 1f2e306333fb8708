#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ri1d/energy_model.hpp"
#include "ri1d/errors.hpp"

using namespace ri1d;

namespace {

// real roots of x^3 - x - c = 0 by Cardano / trigonometric form
std::vector<double> cubic_roots(double c) {
    const double p = -1.0, q = -c;
    const double disc = -(4 * p * p * p + 27 * q * q);
    std::vector<double> r;
    if (disc > 0) {
        const double m = 2.0 * std::sqrt(-p / 3.0);
        const double th = std::acos(3.0 * q / (p * m)) / 3.0;
        for (int k = 0; k < 3; ++k) r.push_back(m * std::cos(th - 2.0 * M_PI * k / 3.0));
    } else {
        const double s = std::sqrt(q * q / 4 + p * p * p / 27);
        r.push_back(std::cbrt(-q / 2 + s) + std::cbrt(-q / 2 - s));
    }
    std::sort(r.begin(), r.end());
    return r;
}

} // namespace

TEST(Jet, ProductMatchesAnalyticCoefficients) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-2, 2);
    for (int trial = 0; trial < 50; ++trial) {
        Jet3 P, Q;
        for (int d = 0; d <= 3; ++d)
            for (int j = 0; j <= d; ++j) {
                P.coeff(d - j, j) = U(rng);
                Q.coeff(d - j, j) = U(rng);
            }
        const Jet3 R = P * Q;
        for (int d = 0; d <= 3; ++d)
            for (int j = 0; j <= d; ++j) {
                double want = 0;
                for (int i1 = 0; i1 <= d - j; ++i1)
                    for (int j1 = 0; j1 <= j; ++j1) want += P.coeff(i1, j1) * Q.coeff(d - j - i1, j - j1);
                EXPECT_NEAR(R.coeff(d - j, j), want, 1e-14 * (1 + std::abs(want)));
            }
    }
}

TEST(Jet, ExpAndReciprocalOfVariable) {
    const Jet3 x = Jet3::variable_x(0.3);
    const Jet3 e = exp(x);
    for (int j = 0; j <= 3; ++j) EXPECT_NEAR(e.derivative(0, j), std::exp(0.3), 1e-14);
    const Jet3 r = 1.0 / Jet3::variable_t(2.0);
    EXPECT_NEAR(r.derivative(1, 0), -0.25, 1e-15);
    EXPECT_NEAR(r.derivative(2, 0), 0.25, 1e-15);
    EXPECT_NEAR(r.derivative(3, 0), -6.0 / 16.0, 1e-15);
    const Jet3 one = r * Jet3::variable_t(2.0);
    EXPECT_NEAR(one.value(), 1.0, 1e-15);
    for (int d = 1; d <= 3; ++d) EXPECT_NEAR(one.coeff(d, 0), 0.0, 1e-15);
}

TEST(EnergyModel, QuadraticJetAtPoint) {
    const Jet3 j = quadratic_model().eval_jet(0.5, 2.0);
    EXPECT_DOUBLE_EQ(j.value(), 1.0);
    EXPECT_DOUBLE_EQ(j.derivative(0, 1), 1.5);
    EXPECT_DOUBLE_EQ(j.derivative(0, 2), 1.0);
    EXPECT_DOUBLE_EQ(j.derivative(1, 1), -1.0);
    for (int j3 = 0; j3 <= 3; ++j3) EXPECT_EQ(j.derivative(3 - j3, j3), 0.0);
}

TEST(EnergyModel, ZeroModelHasZeroJet) {
    const Jet3 j = zero_model().eval_jet(1.2, -0.7);
    for (double c : j.raw()) EXPECT_EQ(c, 0.0);
}

TEST(EnergyModel, DoubleWellDerivatives) {
    const GradientJet g = double_well_model().eval_dx(0.0, -1.0);
    EXPECT_DOUBLE_EQ(g.dx, 0.0);
    EXPECT_DOUBLE_EQ(g.dxx, 2.0);
    EXPECT_DOUBLE_EQ(g.dxxx, -6.0);
}

TEST(EnergyModel, DomainViolationIsAnError) {
    EXPECT_THROW(quadratic_model().value(2.5, 0.0), DomainError);
    EXPECT_THROW(quadratic_model().value(1.0, 3.5), DomainError);
    EXPECT_THROW(builtin_model("no-such-model"), ConfigError);
}

TEST(EnergyModel, BranchResidualMatchesGradient) {
    const EnergyModel m = double_well_model();
    for (double x : {-1.5, -0.2, 0.7, 1.9})
        for (int s : {-1, 1}) EXPECT_NEAR(m.branch_residual(0.8, x, s), m.dx(0.8, x) - s, 1e-14);
}

TEST(ValidateDerivatives, BuiltinsPass) {
    const auto q = validate_derivatives(quadratic_model(), quadratic_model().domain(), 100, 1e-6);
    EXPECT_TRUE(q.pass);
    for (double e : q.max_error) EXPECT_LE(e, 1e-8);
    for (const auto& n : builtin_model_names()) {
        const EnergyModel m = builtin_model(n);
        EXPECT_TRUE(validate_derivatives(m, m.domain(), 1000, 1e-6).pass) << n;
    }
}

TEST(ValidateDerivatives, CorruptedMixedSlotIsFlagged) {
    const EnergyModel m = double_well_model();
    JetEvaluator bad = [&](double t, double x) {
        Jet3 j = m.eval_jet(t, x);
        j.set_derivative(1, 1, j.derivative(1, 1) + 0.1);
        return j;
    };
    const ValidationReport r = validate_derivatives(bad, m.domain(), 100, 1e-6);
    EXPECT_FALSE(r.pass);
    const auto& names = ValidationReport::slot_names();
    for (std::size_t k = 0; k < names.size(); ++k)
        if (std::string(names[k]) == "tx") EXPECT_TRUE(r.flagged[k]);
}

TEST(StationarySet, Quadratic) {
    const auto s = stationary_set(quadratic_model(), 0.0, {-3, 3}, 601);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_NEAR(s[0].x, -1.0, 1e-12);
    EXPECT_EQ(s[0].sign, -1);
    EXPECT_NEAR(s[1].x, 1.0, 1e-12);
    EXPECT_EQ(s[1].sign, 1);
}

TEST(StationarySet, ZeroModelIsEmpty) { EXPECT_TRUE(stationary_set(zero_model(), 0.5, {-3, 3}, 100).empty()); }

TEST(StationarySet, DoubleWellAgainstCubicRoots) {
    for (double t : {0.0, 0.4, 1.1}) {
        std::vector<std::pair<double, int>> want;
        for (int s : {-1, 1})
            for (double r : cubic_roots(t + s))
                if (std::abs(r) <= 2.0) want.push_back({r, s});
        std::sort(want.begin(), want.end());
        const auto got = stationary_set(double_well_model(), t, {-2, 2}, 4001);
        ASSERT_EQ(got.size(), want.size()) << "t=" << t;
        for (std::size_t k = 0; k < got.size(); ++k) {
            EXPECT_NEAR(got[k].x, want[k].first, 1e-10);
            EXPECT_EQ(got[k].sign, want[k].second);
        }
    }
}
