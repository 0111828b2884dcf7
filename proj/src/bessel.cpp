#include "subrad/bessel.hpp"

#include <cmath>
#include <stdexcept>

#include "subrad/units.hpp"

namespace subrad::bessel {

namespace {

double jprime(int m, double x) {
    if (m == 0) return -std::cyl_bessel_j(1, x);
    return 0.5 * (std::cyl_bessel_j(m - 1, x) - std::cyl_bessel_j(m + 1, x));
}

}  // namespace

double j(int m, double x) {
    if (m < 0) throw std::invalid_argument("bessel::j expects m >= 0");
    return std::cyl_bessel_j(static_cast<unsigned>(m), x);
}

double j_zero(int m, int n) {
    if (m < 0 || n < 1) throw std::invalid_argument("bessel::j_zero expects m >= 0, n >= 1");
    // McMahon: j_{m,n} ~ b - (4m^2-1)/(8b), b = (n + m/2 - 1/4) pi
    const double b = (n + 0.5 * m - 0.25) * units::pi;
    double x = b - (4.0 * m * m - 1.0) / (8.0 * b);
    for (int it = 0; it < 50; ++it) {
        const double f = j(m, x);
        const double df = jprime(m, x);
        const double step = f / df;
        x -= step;
        if (std::abs(step) < 1e-14 * x) break;
    }
    return x;
}

double j_first_peak(int m) {
    if (m == 0) return 0.0;
    // first zero of J_m' lies between 0 and j_{m,1}; golden-section on -|J_m|
    double lo = 1e-6, hi = j_zero(m, 1);
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = std::abs(j(m, x1)), f2 = std::abs(j(m, x2));
    for (int it = 0; it < 200 && (b - a) > 1e-12; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = std::abs(j(m, x2));
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = std::abs(j(m, x1));
        }
    }
    return 0.5 * (a + b);
}

double j_peak_value(int m) {
    if (m == 0) return 1.0;
    return std::abs(j(m, j_first_peak(m)));
}

}  // namespace subrad::bessel
