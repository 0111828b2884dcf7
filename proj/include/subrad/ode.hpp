#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "subrad/types.hpp"

namespace subrad::ode {

struct Options {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_max = 0.0;  // 0 -> no cap
};

// Dormand-Prince 5(4) with standard step control; advances y from t0 to t1 in
// place.  RHS signature: Vector f(double t, const Vector& y).
template <class Rhs>
void integrate_dopri5(Rhs&& f, Vector& y, double t0, double t1, const Options& opt = {}) {
    if (t1 < t0) throw std::invalid_argument("integrate_dopri5: t1 < t0");
    if (t1 == t0) return;

    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // embedded 4th-order weights
    static constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                            e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

    double t = t0;
    double h = std::min((t1 - t0) / 10.0, 1.0);
    if (opt.h_max > 0.0) h = std::min(h, opt.h_max);

    Vector k1 = f(t, y);
    long steps = 0;
    while (t < t1) {
        if (++steps > 2'000'000)
            throw std::runtime_error("integrate_dopri5: step budget exhausted");
        h = std::min(h, t1 - t);

        const Vector k2 = f(t + c2 * h, y + h * (a21 * k1));
        const Vector k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
        const Vector k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const Vector k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Vector k6 =
            f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Vector y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Vector k7 = f(t + h, y5);
        const Vector y4 =
            y + h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double err = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const double scale =
                opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
            err = std::max(err, std::abs(y5[i] - y4[i]) / scale);
        }

        if (err <= 1.0) {
            t += h;
            y = y5;
            k1 = k7;  // FSAL
        }
        const double factor =
            (err > 0.0) ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
        h *= factor;
        if (opt.h_max > 0.0) h = std::min(h, opt.h_max);
        if (h < 1e-14) throw std::runtime_error("integrate_dopri5: step size underflow");
    }
}

}  // namespace subrad::ode
