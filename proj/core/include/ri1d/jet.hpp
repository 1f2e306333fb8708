#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace ri1d {

// Truncated bivariate Taylor polynomial in (dt, dx) around an expansion point.
// Coefficients are stored Taylor-normalised, i.e. a[i][j] = d^i_t d^j_x f / (i! j!),
// ordered by total degree then by x-degree.
template <int N>
class Jet {
public:
    static constexpr int order = N;
    static constexpr std::size_t size = std::size_t((N + 1) * (N + 2) / 2);

    static constexpr std::size_t index(int i, int j) {
        const int d = i + j;
        return std::size_t(d * (d + 1) / 2 + j);
    }

    Jet() { a_.fill(0.0); }

    static Jet constant(double c) {
        Jet r;
        r.a_[0] = c;
        return r;
    }
    static Jet variable_t(double t) {
        Jet r = constant(t);
        if constexpr (N >= 1) r.a_[index(1, 0)] = 1.0;
        return r;
    }
    static Jet variable_x(double x) {
        Jet r = constant(x);
        if constexpr (N >= 1) r.a_[index(0, 1)] = 1.0;
        return r;
    }

    double value() const { return a_[0]; }

    double coeff(int i, int j) const { return a_[index(i, j)]; }
    double& coeff(int i, int j) { return a_[index(i, j)]; }

    /// Partial derivative d^i_t d^j_x at the expansion point.
    double derivative(int i, int j) const { return a_[index(i, j)] * fact(i) * fact(j); }
    void set_derivative(int i, int j, double v) { a_[index(i, j)] = v / (fact(i) * fact(j)); }

    const std::array<double, size>& raw() const { return a_; }
    std::array<double, size>& raw() { return a_; }

    bool finite() const {
        for (double v : a_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    Jet& operator+=(const Jet& o) {
        for (std::size_t k = 0; k < size; ++k) a_[k] += o.a_[k];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        for (std::size_t k = 0; k < size; ++k) a_[k] -= o.a_[k];
        return *this;
    }
    Jet& operator*=(double s) {
        for (double& v : a_) v *= s;
        return *this;
    }
    Jet& operator+=(double s) {
        a_[0] += s;
        return *this;
    }
    Jet& operator-=(double s) {
        a_[0] -= s;
        return *this;
    }
    Jet operator-() const {
        Jet r = *this;
        r *= -1.0;
        return r;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator+(Jet a, double s) { return a += s; }
    friend Jet operator+(double s, Jet a) { return a += s; }
    friend Jet operator-(Jet a, double s) { return a -= s; }
    friend Jet operator-(double s, const Jet& a) { return (-a) += s; }
    friend Jet operator*(Jet a, double s) { return a *= s; }
    friend Jet operator*(double s, Jet a) { return a *= s; }

    friend Jet operator*(const Jet& p, const Jet& q) {
        Jet r;
        for (int d1 = 0; d1 <= N; ++d1)
            for (int j1 = 0; j1 <= d1; ++j1) {
                const double pv = p.a_[index(d1 - j1, j1)];
                if (pv == 0.0) continue;
                for (int d2 = 0; d2 + d1 <= N; ++d2)
                    for (int j2 = 0; j2 <= d2; ++j2)
                        r.a_[index(d1 - j1 + d2 - j2, j1 + j2)] += pv * q.a_[index(d2 - j2, j2)];
            }
        return r;
    }
    Jet& operator*=(const Jet& o) { return *this = *this * o; }

    /// f(jet) given f and its derivatives at the base value: fd[k] = f^(k)(value()).
    Jet compose(const std::array<double, N + 1>& fd) const {
        Jet d = *this;
        d.a_[0] = 0.0;
        Jet r = constant(fd[0]);
        Jet p = constant(1.0);
        double kf = 1.0;
        for (int k = 1; k <= N; ++k) {
            p = p * d;
            kf *= k;
            Jet term = p;
            term *= fd[k] / kf;
            r += term;
        }
        return r;
    }

    friend Jet operator/(const Jet& p, const Jet& q) { return p * reciprocal(q); }
    friend Jet operator/(const Jet& p, double s) { return p * (1.0 / s); }
    friend Jet operator/(double s, const Jet& q) { return reciprocal(q) * s; }

    friend Jet reciprocal(const Jet& q) {
        const double y = q.a_[0];
        std::array<double, N + 1> fd{};
        double f = 1.0 / y;
        for (int k = 0; k <= N; ++k) {
            fd[k] = f;
            f *= -double(k + 1) / y;
        }
        return q.compose(fd);
    }

    friend Jet exp(const Jet& q) {
        std::array<double, N + 1> fd;
        fd.fill(std::exp(q.a_[0]));
        return q.compose(fd);
    }

private:
    static constexpr double fact(int n) {
        double r = 1.0;
        for (int k = 2; k <= n; ++k) r *= k;
        return r;
    }
    std::array<double, size> a_;
};

using Jet3 = Jet<3>;
using Jet2 = Jet<2>;

/// Drops the orders above M.
template <int M, int N>
Jet<M> truncate(const Jet<N>& j) {
    static_assert(M <= N);
    Jet<M> r;
    for (int d = 0; d <= M; ++d)
        for (int k = 0; k <= d; ++k) r.coeff(d - k, k) = j.coeff(d - k, k);
    return r;
}

} // namespace ri1d
