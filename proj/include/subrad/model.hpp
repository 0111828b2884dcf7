#pragma once

#include <string>
#include <vector>

#include "subrad/types.hpp"

namespace subrad {

enum class Frame { Lab, RotatingAtEmitter };

// Full (N+3)-dimensional Hamiltonian over the frozen basis layout.  The global
// ground state is pinned at energy 0; RotatingAtEmitter additionally removes
// omega_ref * N_exc (omega_ref = the emitters' mean transition frequency), which
// zeroes the emitter diagonal and turns mode energies into detunings.
Matrix build_hamiltonian(const SystemModel& model, Frame frame = Frame::RotatingAtEmitter);

struct Dissipator {
    Matrix jump;         // annihilation operator restricted to the basis
    double rate;         // kappa_xi, rad/fs
    std::string mode_id;
};

// One photon-loss channel per mode; no emitter decay channels exist.
std::vector<Dissipator> build_dissipators(const SystemModel& model);

// Total excitation number (emitters + photons); commutes with the Hamiltonian.
Matrix number_operator(const SystemModel& model);

// Non-Hermitian generator of the no-jump evolution on the one-excitation sector
// (dimension N+2, rows/cols ordered [eg, ge, modes...]):
//   H_eff = H|_1exc - (i/2) sum_xi kappa_xi a_xi^dag a_xi
Matrix one_excitation_effective_hamiltonian(const SystemModel& model,
                                            Frame frame = Frame::RotatingAtEmitter);

}  // namespace subrad
