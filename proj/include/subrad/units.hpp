#pragma once

#include <complex>
#include <string>
#include <string_view>

// Internal unit system: hbar = 1, angular frequencies and rates in rad/fs,
// time in fs, lengths in nm, dipole moments in C·m.

namespace subrad {

using complex = std::complex<double>;

namespace units {

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double c_nm_per_fs = 299.792458;     // vacuum speed of light
inline constexpr double hbar_ev_fs = 0.6582119569;    // hbar in eV·fs
inline constexpr double reference_dipole_cm = 1e-28;  // C·m, sets the coupling scale

enum class FrequencyUnit {
    RadPerFs,      // angular frequency, native
    THz,           // ordinary frequency f; omega = 2*pi*f
    ElectronVolt,  // photon energy; omega = E/hbar
    Nanometre,     // vacuum wavelength; omega = 2*pi*c/lambda
};

// Accepts "rad/fs", "THz", "eV", "nm" (case-insensitive); throws ConfigError otherwise.
FrequencyUnit parse_frequency_unit(std::string_view tag);

std::string unit_name(FrequencyUnit unit);

// Tagged value -> rad/fs. Nanometre input must be > 0.
double to_rad_per_fs(double value, FrequencyUnit unit);

// "283 THz", "0.08rad/fs", "1.2 eV", "730 nm" -> rad/fs. Unit tag is mandatory.
double parse_frequency(std::string_view text);

}  // namespace units
}  // namespace subrad
