#pragma once

#include <cmath>
#include <utility>

namespace ri1d {

// Golden-section search for a minimiser of f on [a, b]. Returns (x, f(x)).
template <class F>
std::pair<double, double> golden_section(F&& f, double a, double b, double tol) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && (b - a) > tol; ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    double x = 0.5 * (a + b);
    double fx = f(x);
    if (fc < fx) { x = c; fx = fc; }
    if (fd < fx) { x = d; fx = fd; }
    return {x, fx};
}

} // namespace ri1d
