#ifndef CNOIDAL_NUMERICS_HPP
#define CNOIDAL_NUMERICS_HPP

#include <cmath>
#include <functional>
#include <stdexcept>

namespace cnoidal {

// Bisection on a bracketing interval [a,b] with f(a), f(b) of opposite sign.
// Runs until the interval width drops below xtol (absolute).
inline double bisect(const std::function<double(double)>& f, double a, double b,
                     double xtol) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0)) {
        throw std::domain_error("bisect: endpoints do not bracket a root");
    }
    while (b - a > xtol) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;  // interval at floating-point resolution
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

// Golden-section minimization on [a,b].
inline double golden_min(const std::function<double(double)>& f, double a,
                         double b, int iters = 80) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c1 = b - gr * (b - a);
    double c2 = a + gr * (b - a);
    double f1 = f(c1);
    double f2 = f(c2);
    for (int i = 0; i < iters; ++i) {
        if (f1 > f2) {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + gr * (b - a);
            f2 = f(c2);
        } else {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - gr * (b - a);
            f1 = f(c1);
        }
    }
    return f1 < f2 ? c1 : c2;
}

}  // namespace cnoidal

#endif
