#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ri1d/errors.hpp"

namespace ri1d {

// Adaptive 7/15-point Gauss-Kronrod for integrands returning std::array<double, K>.
// The node tables come from Boost; the bisection driver handles vector results,
// which Boost's own integrate() does not.
template <std::size_t K>
class VectorGaussKronrod {
public:
    using Vec = std::array<double, K>;

    VectorGaussKronrod(double abs_tol, double rel_tol, int max_depth = 30)
        : abs_tol_(abs_tol), rel_tol_(rel_tol), max_depth_(max_depth) {}

    template <class F>
    Vec integrate(F&& f, double a, double b) const {
        Vec out{};
        if (a == b) return out;
        Vec whole{};
        double err = 0.0;
        rule(f, a, b, whole, err);
        const double scale = std::max(norm(whole), 1.0);
        recurse(f, a, b, whole, err, std::max(abs_tol_, rel_tol_ * scale), 0, out);
        return out;
    }

private:
    static double norm(const Vec& v) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    }

    template <class F>
    static void rule(F& f, double a, double b, Vec& res, double& err) {
        using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
        using G = boost::math::quadrature::gauss<double, 7>;
        const auto& xs = GK::abscissa();
        const auto& wk = GK::weights();
        const auto& wg = G::weights();
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        Vec kr{}, ga{};
        Vec f0 = f(mid);
        for (std::size_t c = 0; c < K; ++c) {
            kr[c] = f0[c] * wk[0];
            ga[c] = f0[c] * wg[0];
        }
        for (std::size_t i = 1; i < xs.size(); ++i) {
            Vec fp = f(mid + half * xs[i]);
            Vec fm = f(mid - half * xs[i]);
            for (std::size_t c = 0; c < K; ++c) {
                kr[c] += (fp[c] + fm[c]) * wk[i];
                if (i % 2 == 0) ga[c] += (fp[c] + fm[c]) * wg[i / 2];
            }
        }
        err = 0.0;
        for (std::size_t c = 0; c < K; ++c) {
            res[c] = kr[c] * half;
            err = std::max(err, std::abs((kr[c] - ga[c]) * half));
        }
    }

    template <class F>
    void recurse(F& f, double a, double b, const Vec& est, double err, double tol, int depth,
                 Vec& out) const {
        if (err <= tol || !(err == err)) {
            if (!(err == err)) throw QuadratureError("non-finite integrand");
            for (std::size_t c = 0; c < K; ++c) out[c] += est[c];
            return;
        }
        if (depth >= max_depth_)
            throw QuadratureError("adaptive quadrature did not reach tolerance on [" + std::to_string(a) +
                                  ", " + std::to_string(b) + "]");
        const double m = 0.5 * (a + b);
        Vec l{}, r{};
        double el = 0.0, er = 0.0;
        rule(f, a, m, l, el);
        rule(f, m, b, r, er);
        recurse(f, a, m, l, el, 0.5 * tol, depth + 1, out);
        recurse(f, m, b, r, er, 0.5 * tol, depth + 1, out);
    }

    double abs_tol_, rel_tol_;
    int max_depth_;
};

} // namespace ri1d
