#pragma once

#include <array>
#include <memory>
#include <vector>

#include "ri1d/driver.hpp"
#include "ri1d/jet.hpp"

namespace ri1d {

/// Exp-based smoothstep: 0 for r <= 0, 1 for r >= 1, C-infinity in between.
/// Returns exact constants within 1/700 of the ends, where exp(-1/r) underflows anyway.
template <int N>
Jet<N> smoothstep(const Jet<N>& r) {
    constexpr double cut = 1.0 / 700.0;
    const double v = r.value();
    if (v <= cut) return Jet<N>::constant(0.0);
    if (v >= 1.0 - cut) return Jet<N>::constant(1.0);
    Jet<N> p0 = exp(-reciprocal(r));
    Jet<N> p1 = exp(-reciprocal(1.0 - r));
    return p0 / (p0 + p1);
}

// g(t,x) in [-1,1]: positive strictly above the completed graph of u, negative strictly
// below, zero on it, saturated to +-1 for |x| >= M.
//
//   g2 = 1 - prod_k (1 - A_k(t) B_k(x)),  A_k = S((t_{k+1} - t)/w), B_k = S((x - v_k)/w)
//   g1 = 1 - prod_k (1 - C_k(t) D_k(x)),  C_k = S((t - t_k)/w),     D_k = S((v_k - x)/w)
//   g  = g2 - g1
//
// with A_last = C_0 = 1. g2 vanishes exactly on {x <= u(t+)} and g1 on {x >= u(t-)}.
class SignField {
public:
    SignField(MonotoneDriver u, double M, double sharpness);

    const MonotoneDriver& driver() const { return u_; }
    double bound() const { return M_; }
    double sharpness() const { return w_; }

    template <int N>
    Jet<N> eval(double t, double x) const;
    double value(double t, double x) const;

    /// Sorted x-locations outside of which g(t, .) is piecewise constant.
    const std::vector<double>& breakpoints() const { return breaks_; }

private:
    MonotoneDriver u_;
    double M_, w_;
    std::vector<double> breaks_;
};

/// Default sharpness: a quarter of the smallest plateau, capped at 1.
double default_sharpness(const MonotoneDriver& u);
/// Smallest admissible bound: 1 - M <= u <= M - 1, and at least 2.
double default_bound(const MonotoneDriver& u);

// E(t,x) = int_{x0}^{x} (g(t,y) - 1) dy. Additive offsets live on EnergyModel.
class ConstructedEnergy {
public:
    ConstructedEnergy(std::shared_ptr<const SignField> g, double x0);

    const SignField& field() const { return *g_; }
    std::shared_ptr<const SignField> field_ptr() const { return g_; }
    double anchor() const { return x0_; }

    Jet3 eval_jet(double t, double x) const;
    /// Jet of dE/dx = g - 1 through order 2 (no quadrature involved).
    Jet2 eval_dx_jet(double t, double x) const;
    double value(double t, double x) const;
    /// E(t, xs[k]) for ascending xs, sharing one sweep of the integrand.
    std::vector<double> values(double t, const std::vector<double>& xs) const;
    /// Taylor coefficients in t of E(., x): E, E_t, E_tt/2, E_ttt/6.
    std::array<double, 4> t_series(double t, double x) const;

private:
    template <std::size_t K, class F>
    std::array<double, K> integrate(F&& f, double a, double b) const;

    std::shared_ptr<const SignField> g_;
    double x0_;
};

} // namespace ri1d
