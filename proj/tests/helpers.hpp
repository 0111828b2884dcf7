#pragma once

// Shared fixtures: seeded generators and independently coded closed forms the
// implementation is checked against.

#include <random>

#include "subrad/types.hpp"

namespace testutil {

using subrad::complex;
using subrad::Matrix;
using subrad::Matrix4cd;
using subrad::Vector;

inline std::mt19937_64 rng(uint64_t seed) { return std::mt19937_64(seed); }

inline complex random_unit_complex(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * subrad::units::pi);
    return std::polar(1.0, u(gen));
}

inline Matrix ginibre(int rows, int cols, std::mt19937_64& gen) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix g(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) g(i, j) = complex(n(gen), n(gen));
    return g;
}

// random density matrix of rank <= k via purification
inline Matrix4cd random_density(int k, std::mt19937_64& gen) {
    const Matrix g = ginibre(4, k, gen);
    Matrix4cd rho = (g * g.adjoint()) / (g * g.adjoint()).trace();
    return 0.5 * (rho + rho.adjoint());
}

// Haar-ish random unitary from the QR of a Ginibre matrix
inline Matrix random_unitary(int n, std::mt19937_64& gen) {
    const Matrix g = ginibre(n, n, gen);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) {
        const complex d = r(i, i);
        q.col(i) *= (std::abs(d) > 0) ? d / std::abs(d) : complex(1, 0);
    }
    return q;
}

// Closed-form concurrence of (1-p)|gg><gg| + p |psi_D(alpha)><psi_D(alpha)|,
// p = 1/(1+|alpha|^2): states with a single excited-coherence block have
// C = 2 |rho_{eg,ge}|, giving 2|alpha| / (1+|alpha|^2)^2.
inline double mixed_dark_concurrence(complex alpha) {
    const double a2 = std::norm(alpha);
    return 2.0 * std::abs(alpha) / ((1.0 + a2) * (1.0 + a2));
}

// Rabi closed forms for one resonant lossless mode with equal real couplings g
// and initial |e,g>: the antisymmetric half is frozen, the symmetric half
// exchanges with the photon at sqrt(2) g.
struct SymmetricRabiOracle {
    double g;
    double pop_eg(double t) const {
        const double c = std::cos(std::sqrt(2.0) * g * t);
        return 0.25 * (1.0 + c) * (1.0 + c);
    }
    double pop_ge(double t) const {
        const double c = std::cos(std::sqrt(2.0) * g * t);
        return 0.25 * (1.0 - c) * (1.0 - c);
    }
    double pop_psi_minus() const { return 0.5; }
    double pop_psi_plus(double t) const {
        const double c = std::cos(std::sqrt(2.0) * g * t);
        return 0.5 * c * c;
    }
    double pop_photon(double t) const {
        const double s = std::sin(std::sqrt(2.0) * g * t);
        return 0.5 * s * s;
    }
};

}  // namespace testutil
