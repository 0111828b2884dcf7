#pragma once

#include <optional>
#include <vector>

#include "subrad/types.hpp"

namespace subrad::fields {

// even iff |m| is even; g(-x,-y) = +g(x,y) for even modes, -g(x,y) for odd ones
Parity classify_parity(const ModeDescriptor& mode);
Parity classify_parity(int m);

enum class ModeSelector { All, EvenOnly, OddOnly, SingleDominant };

enum class OutOfDomain { Reject, Clamp };

// Coupling g_{xi j} of one emitter to one mode, rad/fs.  `emitter_slot` (0 or 1)
// picks the stored value for DirectCoupling sources; surrogate sources evaluate
// the field at the emitter's (x, y).  Positions outside the facet throw
// FieldDomainError unless policy is Clamp (which evaluates at the facet edge).
complex coupling_at(const ModeDescriptor& mode, const EmitterDescriptor& emitter,
                    int emitter_slot = 0, OutOfDomain policy = OutOfDomain::Reject);

// All / EvenOnly / OddOnly partition by parity; SingleDominant keeps the single
// mode with the largest |g| for `reference` (default: reference dipole at origin).
std::vector<ModeDescriptor> filter_modes(const std::vector<ModeDescriptor>& modes,
                                         ModeSelector selector,
                                         const std::optional<EmitterDescriptor>& reference = {});

// Synthetic flat-facet mode family: (l, m) with l = 1..l_max, m = 0..(m_zero_only ? 0 : l).
// The (1,0) member sits at omega_anchor; successive members step up by band_step.
struct NanocavitySurrogateParams {
    double facet_radius_nm = 8.0;
    int l_max = 3;
    bool m_zero_only = false;
    double g_max = 0.05;                 // rad/fs, (1,0) coupling at its field max
    double omega_anchor = units::to_rad_per_fs(283.0, units::FrequencyUnit::THz);
    double band_step = 0.05;             // rad/fs per mode in (l, m) order
    double kappa_axial = 0.10;           // m = 0 modes (extra radiative loss)
    double kappa_azimuthal = 0.08;       // m != 0 modes
};
std::vector<ModeDescriptor> nanocavity_surrogate_modes(const NanocavitySurrogateParams& p);

// Perforated-gap variant: one dominant mode fills a hollow cylinder of radius
// r_cyl; every other mode is suppressed by 1/s inside, recovering full strength
// across a ramp of width `wall_width_nm` below the wall (charge confinement).
struct HollowCylinderParams {
    double cylinder_radius_nm = 10.0;
    double facet_radius_nm = 15.0;
    double wall_width_nm = 2.0;
    double suppression = 100.0;          // s >= 1; deep-interior background rejection
    int mode_count = 40;                 // including the dominant mode
    double g_max = 0.05;
    double omega_dominant = units::to_rad_per_fs(730.0, units::FrequencyUnit::Nanometre);
    double background_detuning_lo = 0.25;  // rad/fs above the dominant mode
    double background_detuning_hi = 0.85;
    double kappa_dominant = 0.08;
    double kappa_background = 0.09;
};
std::vector<ModeDescriptor> hollow_cylinder_profile(const HollowCylinderParams& p);

}  // namespace subrad::fields
