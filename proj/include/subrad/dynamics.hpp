#pragma once

#include <optional>
#include <vector>

#include "subrad/entanglement.hpp"
#include "subrad/model.hpp"
#include "subrad/types.hpp"

namespace subrad {

enum class Backend { ExactSingleExcitation, DenseLindblad };

struct PropagatorConfig {
    Backend backend = Backend::ExactSingleExcitation;
    double t_end_fs = 1000.0;
    double dt_out_fs = 0.25;
    double rtol = 1e-10;
    Frame frame = Frame::RotatingAtEmitter;
    int lindblad_mode_guard = 12;        // DenseLindblad refuses larger mode counts
    double eig_condition_limit = 1e8;    // exact backend falls back to stepping above this
    std::optional<DarkStateSpec> dark_spec;  // enables psi_D / psi_B population tracking
};

struct Trajectory {
    std::vector<double> times_fs;
    std::vector<Matrix4cd> reduced_rho;
    std::vector<Populations> populations;
    std::vector<double> concurrence;
    // weight of the absolute ground state |g,g>|vac>; unlike the reduced
    // |g,g><g,g| entry it excludes single-photon states, so mode loss can only
    // grow it
    std::vector<double> ground_population;
    bool used_integrator_fallback = false;
};

// Partial trace over the photon modes; output basis |g,g>, |g,e>, |e,g>, |e,e>.
Matrix4cd reduce_to_emitters(const QuantumState& state);

// Exact evolution within the 0/1-excitation sectors: the one-excitation block
// evolves under e^{-i H_eff t} (eigendecomposition; adaptive stepping when the
// eigenvector basis is ill-conditioned), the jump term only feeds |g,g><g,g|.
Trajectory evolve_exact(const SystemModel& model, const QuantumState& initial,
                        const PropagatorConfig& config);

// Brute-force master-equation integration of the full (N+3)^2 superoperator;
// cross-validation backend, guarded to small mode counts.
Trajectory evolve_lindblad(const SystemModel& model, const QuantumState& initial,
                           const PropagatorConfig& config);

Trajectory evolve(const SystemModel& model, const QuantumState& initial,
                  const PropagatorConfig& config);

// Long-time reduced state without integration: the initial one-excitation
// amplitude is projected onto the null space of H_eff (the dark span); every
// damped component is sent to |g,g>.  Requires kappa > 0 for every mode.
Matrix4cd steady_state(const SystemModel& model, const QuantumState& initial);

}  // namespace subrad
