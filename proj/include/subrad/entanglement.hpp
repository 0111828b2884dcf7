#pragma once

#include <optional>
#include <string>
#include <vector>

#include "subrad/types.hpp"

namespace subrad {

// Bell states (|e,g> -/+ |g,e>)/sqrt(2) in the reduced 4-basis
Vector4cd psi_minus_vector();
Vector4cd psi_plus_vector();

// Two-qubit concurrence: C = max(0, l1 - l2 - l3 - l4) with l_i the descending
// square roots of the eigenvalues of rho * (sy⊗sy) rho^* (sy⊗sy).
// Input must be Hermitian and unit-trace within 1e-8 and PSD within 1e-8
// (small negative eigenvalues are clipped); otherwise InvalidState is thrown.
double concurrence(const Matrix4cd& rho);

struct PersistenceReport {
    std::vector<complex> residuals;            // per mode: g1*cos(th) + g2*e^{i chi}*sin(th)
    std::vector<bool> satisfied;               // |residual| < tolerance
    std::vector<std::string> violating_modes;  // ids of unsatisfied modes
    double tolerance = 0.0;                    // absolute, = tol_rel * max |g|
    bool all_satisfied = true;
    std::optional<DarkStateSpec> dark_state;   // the probe spec, when it survives all modes
};

// Evaluates the per-mode dark-state conditions for the given spec.
PersistenceReport check_persistence(const SystemModel& model, const DarkStateSpec& spec,
                                    double tol_rel = 1e-9);

// Null space of the N x 2 coupling matrix, reported as a DarkStateSpec with the
// |e,g> amplitude fixed real non-negative.  nullopt when no emitter
// superposition is simultaneously dark.  A fully decoupled model returns the
// antisymmetric combination (everything is dark; that one is canonical).
std::optional<DarkStateSpec> find_dark_state(const SystemModel& model, double tol_rel = 1e-9);

struct SingleModeSteadyState {
    Matrix4cd rho;            // (1 - p)|gg><gg| + p|psi_D><psi_D|
    double dark_population;   // p = 1/(1+|alpha|^2)
    double fidelity;          // |<psi-|psi_D>|^2 = |1+alpha|^2 / (2 (1+|alpha|^2))
};

// Closed-form long-time state for one lossy mode and initial |e,g>, given the
// coupling ratio alpha = g_1/g_2 (finite).
SingleModeSteadyState single_mode_steady_state(complex alpha);

struct Populations {
    double eg = 0.0;
    double ge = 0.0;
    double psi_minus = 0.0;
    double psi_plus = 0.0;
    std::optional<double> dark;    // only when a DarkStateSpec is supplied
    std::optional<double> bright;
};

Populations state_populations(const Matrix4cd& rho,
                              const std::optional<DarkStateSpec>& spec = {});

}  // namespace subrad
