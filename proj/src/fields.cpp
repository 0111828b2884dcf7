#include "subrad/fields.hpp"

#include <algorithm>
#include <cmath>

#include "subrad/bessel.hpp"

namespace subrad::fields {

namespace {

// unit-peak radial profile with exactly l anti-nodes inside [0, a], zero at r = a
double radial_profile(int m_abs, int l, double a, double r) {
    const double k = bessel::j_zero(m_abs, l) / a;
    return bessel::j(m_abs, k * r) / bessel::j_peak_value(m_abs);
}

// in-cylinder amplitude factor for suppressed background modes: 1/s deep inside,
// ramping back to 1 at the wall so the profile joins the exterior continuously
double suppression_factor(const SurrogateField& f, double r) {
    const double ramp_start = f.cylinder_radius_nm - f.wall_width_nm;
    double ramp = (r - ramp_start) / f.wall_width_nm;
    ramp = std::clamp(ramp, 0.0, 1.0);
    return (1.0 + (f.suppression - 1.0) * ramp) / f.suppression;
}

}  // namespace

Parity classify_parity(int m) { return (std::abs(m) % 2 == 0) ? Parity::Even : Parity::Odd; }

Parity classify_parity(const ModeDescriptor& mode) { return classify_parity(mode.m); }

complex coupling_at(const ModeDescriptor& mode, const EmitterDescriptor& emitter,
                    int emitter_slot, OutOfDomain policy) {
    if (emitter_slot != 0 && emitter_slot != 1)
        throw InvalidState("emitter slot must be 0 or 1");
    if (const auto* d = std::get_if<DirectCoupling>(&mode.coupling_source))
        return d->g[static_cast<size_t>(emitter_slot)];

    const auto& f = std::get<SurrogateField>(mode.coupling_source);
    const double x = emitter.position_nm.x();
    const double y = emitter.position_nm.y();
    double r = std::hypot(x, y);
    const double phi = std::atan2(y, x);

    // a confined dominant mode just vanishes beyond its hollow; it is the
    // unconfined background modes that bound where emitters may sit
    if (f.dominant && f.cylinder_radius_nm > 0.0 && r > f.cylinder_radius_nm)
        return complex(0, 0);

    if (r > f.facet_radius_nm) {
        if (policy == OutOfDomain::Reject)
            throw FieldDomainError("emitter at r = " + std::to_string(r) +
                                   " nm lies outside mode '" + mode.id + "' (facet radius " +
                                   std::to_string(f.facet_radius_nm) + " nm)");
        r = f.facet_radius_nm;
    }

    const int m_abs = std::abs(mode.m);
    const bool in_cylinder = f.cylinder_radius_nm > 0.0 && r <= f.cylinder_radius_nm;

    double envelope;
    if (f.dominant) {
        envelope = radial_profile(m_abs, mode.l, f.facet_radius_nm, r);
    } else {
        envelope = radial_profile(m_abs, mode.l, f.facet_radius_nm, r);
        if (in_cylinder) envelope *= suppression_factor(f, r);
    }

    // z-component of the dipole against the vertical gap field, in units of the
    // reference dipole the amplitude was normalized to
    const double dipole_factor =
        emitter.orientation.z() * emitter.dipole_moment / units::reference_dipole_cm;

    const double magnitude = f.amplitude * envelope * std::cos(mode.m * phi) * dipole_factor;
    return magnitude * std::polar(1.0, f.phase);
}

std::vector<ModeDescriptor> filter_modes(const std::vector<ModeDescriptor>& modes,
                                         ModeSelector selector,
                                         const std::optional<EmitterDescriptor>& reference) {
    if (selector == ModeSelector::All) return modes;
    std::vector<ModeDescriptor> out;
    if (selector == ModeSelector::EvenOnly || selector == ModeSelector::OddOnly) {
        const Parity want = (selector == ModeSelector::EvenOnly) ? Parity::Even : Parity::Odd;
        for (const auto& m : modes)
            if (classify_parity(m) == want) out.push_back(m);
        return out;
    }
    // SingleDominant
    if (modes.empty()) return out;
    EmitterDescriptor ref;
    if (reference) {
        ref = *reference;
    } else {
        ref.omega = modes.front().omega;  // irrelevant to the magnitude comparison
    }
    double best = -1.0;
    size_t best_idx = 0;
    for (size_t i = 0; i < modes.size(); ++i) {
        double mag;
        if (const auto* d = std::get_if<DirectCoupling>(&modes[i].coupling_source))
            mag = std::max(std::abs(d->g[0]), std::abs(d->g[1]));
        else
            mag = std::abs(coupling_at(modes[i], ref, 0, OutOfDomain::Clamp));
        if (mag > best) {
            best = mag;
            best_idx = i;
        }
    }
    out.push_back(modes[best_idx]);
    return out;
}

std::vector<ModeDescriptor> nanocavity_surrogate_modes(const NanocavitySurrogateParams& p) {
    if (p.l_max < 1) throw ConfigError("surrogate l_max must be >= 1");
    if (!(p.facet_radius_nm > 0.0)) throw ConfigError("surrogate facet radius must be positive");
    std::vector<ModeDescriptor> modes;
    int seq = 0;
    for (int l = 1; l <= p.l_max; ++l) {
        const int m_hi = p.m_zero_only ? 0 : l;
        for (int m = 0; m <= m_hi; ++m, ++seq) {
            ModeDescriptor mode;
            mode.id = "l" + std::to_string(l) + "m" + std::to_string(m);
            mode.l = l;
            mode.m = m;
            mode.omega = p.omega_anchor + p.band_step * seq;
            mode.kappa = (m == 0) ? p.kappa_axial : p.kappa_azimuthal;
            SurrogateField f;
            f.facet_radius_nm = p.facet_radius_nm;
            f.amplitude = p.g_max / l;  // weaker response for higher radial order
            f.phase = 0.0;
            mode.coupling_source = f;
            mode.validate();
            modes.push_back(std::move(mode));
        }
    }
    return modes;
}

std::vector<ModeDescriptor> hollow_cylinder_profile(const HollowCylinderParams& p) {
    if (p.suppression < 1.0) throw ConfigError("cylinder suppression factor must be >= 1");
    if (p.mode_count < 1) throw ConfigError("cylinder mode count must be >= 1");
    if (!(p.cylinder_radius_nm > 0.0) || p.cylinder_radius_nm > p.facet_radius_nm)
        throw ConfigError("cylinder radius must be positive and fit inside the facet");

    std::vector<ModeDescriptor> modes;

    ModeDescriptor dom;
    dom.id = "M";
    dom.l = 1;
    dom.m = 0;
    dom.omega = p.omega_dominant;
    dom.kappa = p.kappa_dominant;
    SurrogateField fd;
    fd.facet_radius_nm = p.cylinder_radius_nm;  // anti-node at the centre, zero at the wall
    fd.amplitude = p.g_max;
    fd.cylinder_radius_nm = p.cylinder_radius_nm;
    fd.suppression = p.suppression;
    fd.wall_width_nm = p.wall_width_nm;
    fd.dominant = true;
    dom.coupling_source = fd;
    dom.validate();
    modes.push_back(std::move(dom));

    const int n_bg = p.mode_count - 1;
    int seq = 0;
    for (int l = 1; seq < n_bg; ++l) {
        for (int m = 0; m <= l && seq < n_bg; ++m, ++seq) {
            ModeDescriptor mode;
            mode.id = "bg_l" + std::to_string(l) + "m" + std::to_string(m);
            mode.l = l;
            mode.m = m;
            const double frac = (n_bg > 1) ? static_cast<double>(seq) / (n_bg - 1) : 0.0;
            mode.omega = p.omega_dominant + p.background_detuning_lo +
                         (p.background_detuning_hi - p.background_detuning_lo) * frac;
            mode.kappa = p.kappa_background;
            SurrogateField f;
            f.facet_radius_nm = p.facet_radius_nm;
            f.amplitude = p.g_max / l;
            f.cylinder_radius_nm = p.cylinder_radius_nm;
            f.suppression = p.suppression;
            f.wall_width_nm = p.wall_width_nm;
            f.dominant = false;
            mode.coupling_source = f;
            mode.validate();
            modes.push_back(std::move(mode));
        }
    }
    return modes;
}

}  // namespace subrad::fields
