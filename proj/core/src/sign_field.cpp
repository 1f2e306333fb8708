#include "ri1d/sign_field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ri1d/errors.hpp"
#include "ri1d/quadrature.hpp"

namespace ri1d {

namespace {

constexpr double kCut = 1.0 / 700.0;

template <int N>
Jet<N> affine(double v, double dt, double dx) {
    Jet<N> r = Jet<N>::constant(v);
    if constexpr (N >= 1) {
        r.coeff(1, 0) = dt;
        r.coeff(0, 1) = dx;
    }
    return r;
}

template <int N>
bool is_exact(const Jet<N>& j, double c) {
    if (j.value() != c) return false;
    for (std::size_t k = 1; k < Jet<N>::size; ++k)
        if (j.raw()[k] != 0.0) return false;
    return true;
}

} // namespace

double default_sharpness(const MonotoneDriver& u) {
    return std::min(1.0, u.min_plateau() / 4.0);
}

double default_bound(const MonotoneDriver& u) {
    return std::max({2.0, 1.0 - u.min_value(), u.max_value() + 1.0});
}

SignField::SignField(MonotoneDriver u, double M, double sharpness)
    : u_(std::move(u)), M_(M), w_(sharpness) {
    if (!(w_ > 0.0) || w_ > 1.0 || !std::isfinite(w_))
        throw ConfigError("sharpness must lie in (0, 1]");
    if (!std::isfinite(M_) || !(1.0 - M_ <= u_.min_value()) || !(u_.max_value() <= M_ - 1.0)) {
        std::ostringstream os;
        os << "driver range [" << u_.min_value() << ", " << u_.max_value() << "] violates 1 - M <= u <= M - 1 for M = "
           << M_;
        throw BoundError(os.str());
    }
    for (double v : u_.levels()) {
        breaks_.push_back(v - w_);
        breaks_.push_back(v);
        breaks_.push_back(v + w_);
    }
    std::sort(breaks_.begin(), breaks_.end());
    breaks_.erase(std::unique(breaks_.begin(), breaks_.end()), breaks_.end());
}

template <int N>
Jet<N> SignField::eval(double t, double x) const {
    const auto& tau = u_.jump_times();
    const auto& v = u_.levels();
    const std::size_t n = tau.size();
    const double eps = 0.5 * kCut * w_;
    const double iw = 1.0 / w_;

    // g2: terms with A_k B_k != 0 have tau_{k+1} > t and v_k < x.
    // 1 - prod(1 - a_k) is accumulated as q += a (1 - q) so tiny terms survive.
    Jet<N> q2 = Jet<N>::constant(0.0);
    {
        std::size_t k = std::size_t(std::upper_bound(tau.begin(), tau.end(), t + eps) - tau.begin());
        const std::size_t kend = std::size_t(std::lower_bound(v.begin(), v.end(), x - eps) - v.begin());
        for (; k < kend && k <= n; ++k) {
            Jet<N> b = smoothstep(affine<N>((x - v[k]) * iw, 0.0, iw));
            if (is_exact(b, 0.0)) continue;
            Jet<N> a = k < n ? smoothstep(affine<N>((tau[k] - t) * iw, -iw, 0.0)) : Jet<N>::constant(1.0);
            if (is_exact(a, 0.0)) continue;
            if (is_exact(a, 1.0) && is_exact(b, 1.0)) {
                q2 = Jet<N>::constant(1.0);
                break;
            }
            q2 = q2 + a * b * (1.0 - q2);
        }
    }
    // g1: terms with C_k D_k != 0 have tau_k < t and v_k > x.
    Jet<N> q1 = Jet<N>::constant(0.0);
    {
        const std::size_t c = std::size_t(std::lower_bound(tau.begin(), tau.end(), t - eps) - tau.begin());
        const std::size_t kd = std::size_t(std::upper_bound(v.begin(), v.end(), x + eps) - v.begin());
        for (std::size_t k = std::min(c, n) + 1; k-- > kd;) {
            Jet<N> d = smoothstep(affine<N>((v[k] - x) * iw, 0.0, -iw));
            if (is_exact(d, 0.0)) continue;
            Jet<N> cc = k > 0 ? smoothstep(affine<N>((t - tau[k - 1]) * iw, iw, 0.0)) : Jet<N>::constant(1.0);
            if (is_exact(cc, 0.0)) continue;
            if (is_exact(cc, 1.0) && is_exact(d, 1.0)) {
                q1 = Jet<N>::constant(1.0);
                break;
            }
            q1 = q1 + cc * d * (1.0 - q1);
        }
    }
    return q2 - q1;
}

template Jet<0> SignField::eval<0>(double, double) const;
template Jet<1> SignField::eval<1>(double, double) const;
template Jet<2> SignField::eval<2>(double, double) const;
template Jet<3> SignField::eval<3>(double, double) const;

double SignField::value(double t, double x) const { return eval<0>(t, x).value(); }

ConstructedEnergy::ConstructedEnergy(std::shared_ptr<const SignField> g, double x0)
    : g_(std::move(g)), x0_(x0) {
    if (!g_) throw ConfigError("constructed energy needs a sign field");
}

template <std::size_t K, class F>
std::array<double, K> ConstructedEnergy::integrate(F&& f, double a, double b) const {
    std::array<double, K> sum{};
    if (a == b) return sum;
    const double sgn = b > a ? 1.0 : -1.0;
    const double lo = std::min(a, b), hi = std::max(a, b);
    VectorGaussKronrod<K> gk(1e-13, 1e-12);
    const auto& br = g_->breakpoints();
    double left = lo;
    auto it = std::upper_bound(br.begin(), br.end(), lo);
    for (;;) {
        const double right = (it != br.end() && *it < hi) ? *it : hi;
        auto part = gk.integrate(f, left, right);
        for (std::size_t c = 0; c < K; ++c) sum[c] += part[c];
        if (right >= hi) break;
        left = right;
        ++it;
    }
    for (double& s : sum) s *= sgn;
    return sum;
}

std::array<double, 4> ConstructedEnergy::t_series(double t, double x) const {
    auto f = [&](double y) {
        Jet3 j = g_->eval<3>(t, y);
        return std::array<double, 4>{j.coeff(0, 0), j.coeff(1, 0), j.coeff(2, 0), j.coeff(3, 0)};
    };
    auto s = integrate<4>(f, x0_, x);
    s[0] -= x - x0_;
    return s;
}

Jet2 ConstructedEnergy::eval_dx_jet(double t, double x) const {
    Jet2 j = g_->eval<2>(t, x);
    j -= 1.0;
    return j;
}

Jet3 ConstructedEnergy::eval_jet(double t, double x) const {
    Jet2 gx = g_->eval<2>(t, x);
    Jet3 e;
    for (int d = 1; d <= 3; ++d)
        for (int j = 1; j <= d; ++j) e.coeff(d - j, j) = gx.coeff(d - j, j - 1) / j;
    e.coeff(0, 1) -= 1.0;
    auto s = t_series(t, x);
    for (int i = 0; i <= 3; ++i) e.coeff(i, 0) = s[std::size_t(i)];
    return e;
}

double ConstructedEnergy::value(double t, double x) const {
    auto f = [&](double y) { return std::array<double, 1>{g_->value(t, y)}; };
    return integrate<1>(f, x0_, x)[0] - (x - x0_);
}

std::vector<double> ConstructedEnergy::values(double t, const std::vector<double>& xs) const {
    std::vector<double> out(xs.size());
    if (xs.empty()) return out;
    auto f = [&](double y) { return std::array<double, 1>{g_->value(t, y)}; };
    double acc = integrate<1>(f, x0_, xs[0])[0];
    out[0] = acc - (xs[0] - x0_);
    for (std::size_t k = 1; k < xs.size(); ++k) {
        if (xs[k] < xs[k - 1]) throw DomainError("values(): abscissae must be ascending");
        acc += integrate<1>(f, xs[k - 1], xs[k])[0];
        out[k] = acc - (xs[k] - x0_);
    }
    return out;
}

} // namespace ri1d
