#include "subrad/units.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "subrad/errors.hpp"

namespace subrad::units {

namespace {

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

FrequencyUnit parse_frequency_unit(std::string_view tag) {
    const std::string t = lowercase(trim(tag));
    if (t == "rad/fs") return FrequencyUnit::RadPerFs;
    if (t == "thz") return FrequencyUnit::THz;
    if (t == "ev") return FrequencyUnit::ElectronVolt;
    if (t == "nm") return FrequencyUnit::Nanometre;
    throw ConfigError("unknown frequency unit '" + std::string(tag) +
                      "' (expected rad/fs, THz, eV or nm)");
}

std::string unit_name(FrequencyUnit unit) {
    switch (unit) {
        case FrequencyUnit::RadPerFs: return "rad/fs";
        case FrequencyUnit::THz: return "THz";
        case FrequencyUnit::ElectronVolt: return "eV";
        case FrequencyUnit::Nanometre: return "nm";
    }
    return "?";
}

double to_rad_per_fs(double value, FrequencyUnit unit) {
    switch (unit) {
        case FrequencyUnit::RadPerFs:
            return value;
        case FrequencyUnit::THz:
            // 1 THz = 1e-3 cycles/fs
            return 2.0 * pi * value * 1e-3;
        case FrequencyUnit::ElectronVolt:
            return value / hbar_ev_fs;
        case FrequencyUnit::Nanometre:
            if (value <= 0.0)
                throw ConfigError("wavelength must be positive, got " + std::to_string(value) + " nm");
            return 2.0 * pi * c_nm_per_fs / value;
    }
    throw ConfigError("unhandled frequency unit");
}

double parse_frequency(std::string_view text) {
    const std::string_view s = trim(text);
    double value = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr == begin)
        throw ConfigError("cannot parse frequency value from '" + std::string(text) + "'");
    const std::string_view tag = trim(std::string_view(ptr, static_cast<size_t>(end - ptr)));
    if (tag.empty())
        throw ConfigError("frequency '" + std::string(text) +
                          "' is missing a unit tag (rad/fs, THz, eV or nm)");
    return to_rad_per_fs(value, parse_frequency_unit(tag));
}

}  // namespace subrad::units
