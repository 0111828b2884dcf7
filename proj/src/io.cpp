#include "subrad/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <iostream>
#include <sstream>
#include <system_error>

#include "CLI11.hpp"
#include "json.hpp"
#include "subrad/entanglement.hpp"
#include "subrad/units.hpp"

namespace subrad::io {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(std::string_view sv) {
    while (!sv.empty() && std::isspace(static_cast<unsigned char>(sv.front()))) sv.remove_prefix(1);
    while (!sv.empty() && std::isspace(static_cast<unsigned char>(sv.back()))) sv.remove_suffix(1);
    return std::string(sv);
}

// ------------------------------------------------------------- json access

void expect_object(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> allowed,
                    const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            fail(where, "unknown key \"" + it.key() + "\"");
    }
}

const json* find_key(const json& j, const char* key) {
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

const json& require_key(const json& j, const char* key, const std::string& where) {
    const json* p = find_key(j, key);
    if (!p) fail(where, std::string("missing required key \"") + key + "\"");
    return *p;
}

double get_number(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(where, "non-finite value");
    return v;
}

int get_int(const json& j, const std::string& where) {
    if (!j.is_number_integer()) fail(where, "expected an integer");
    return j.get<int>();
}

bool get_bool(const json& j, const std::string& where) {
    if (!j.is_boolean()) fail(where, "expected true or false");
    return j.get<bool>();
}

std::string get_string(const json& j, const std::string& where) {
    if (!j.is_string()) fail(where, "expected a string");
    return j.get<std::string>();
}

// tagged strings only: "283 THz", "0.08 rad/fs", "1.2 eV", "730 nm"
double get_frequency(const json& j, const std::string& where) {
    if (!j.is_string())
        fail(where, "expected a tagged frequency string such as \"283 THz\" or \"0.08 rad/fs\"");
    try {
        const double v = units::parse_frequency(j.get<std::string>());
        if (!std::isfinite(v)) fail(where, "non-finite value");
        return v;
    } catch (const ConfigError& e) {
        fail(where, e.what());
    }
}

complex get_complex(const json& j, const std::string& where) {
    if (j.is_string()) {
        try {
            return parse_complex(j.get<std::string>());
        } catch (const ConfigError& e) {
            fail(where, e.what());
        }
    }
    if (j.is_array() && j.size() == 2)
        return complex(get_number(j[0], where + "[0]"), get_number(j[1], where + "[1]"));
    if (j.is_number()) return complex(get_number(j, where), 0.0);
    fail(where, "expected a complex literal (\"a+bi\") or an [re, im] pair");
}

// ----------------------------------------------------------- number output

std::string freq_str(double omega_rad_fs) {
    return format_double17(omega_rad_fs) + " rad/fs";
}

json complex_json(complex z) { return json::array({z.real(), z.imag()}); }

// --------------------------------------------------------- enum name maps

std::string scenario_name(experiments::Scenario s) {
    switch (s) {
        case experiments::Scenario::ModeCountConvergence: return "mode_count";
        case experiments::Scenario::ParitySweep: return "parity";
        case experiments::Scenario::CylinderSymmetric: return "cylinder_symmetric";
        case experiments::Scenario::CylinderAsymmetric: return "cylinder_asymmetric";
    }
    return "parity";
}

experiments::Scenario parse_scenario(const std::string& name, const std::string& where) {
    if (name == "mode_count") return experiments::Scenario::ModeCountConvergence;
    if (name == "parity") return experiments::Scenario::ParitySweep;
    if (name == "cylinder_symmetric") return experiments::Scenario::CylinderSymmetric;
    if (name == "cylinder_asymmetric") return experiments::Scenario::CylinderAsymmetric;
    fail(where, "unknown scenario \"" + name +
                    "\" (expected mode_count, parity, cylinder_symmetric, or cylinder_asymmetric)");
}

std::string selector_name(fields::ModeSelector s) {
    switch (s) {
        case fields::ModeSelector::All: return "all";
        case fields::ModeSelector::EvenOnly: return "even";
        case fields::ModeSelector::OddOnly: return "odd";
        case fields::ModeSelector::SingleDominant: return "dominant";
    }
    return "all";
}

fields::ModeSelector parse_selector(const std::string& name, const std::string& where) {
    if (name == "all") return fields::ModeSelector::All;
    if (name == "even") return fields::ModeSelector::EvenOnly;
    if (name == "odd") return fields::ModeSelector::OddOnly;
    if (name == "dominant") return fields::ModeSelector::SingleDominant;
    fail(where, "unknown mode filter \"" + name + "\" (expected all, even, odd, or dominant)");
}

// ----------------------------------------------------------- config blocks

ModeDescriptor parse_mode_json(const json& j, const std::string& where) {
    expect_object(j, where);
    reject_unknown(j, {"id", "l", "m", "omega", "kappa", "g1", "g2"}, where);
    ModeDescriptor md;
    md.id = get_string(require_key(j, "id", where), where + ".id");
    md.l = get_int(require_key(j, "l", where), where + ".l");
    md.m = get_int(require_key(j, "m", where), where + ".m");
    md.omega = get_frequency(require_key(j, "omega", where), where + ".omega");
    md.kappa = get_frequency(require_key(j, "kappa", where), where + ".kappa");
    DirectCoupling dc;
    dc.g[0] = get_complex(require_key(j, "g1", where), where + ".g1");
    dc.g[1] = get_complex(require_key(j, "g2", where), where + ".g2");
    md.coupling_source = dc;
    try {
        md.validate();
    } catch (const ConfigError& e) {
        fail(where, e.what());
    }
    return md;
}

json mode_json(const ModeDescriptor& md) {
    json j;
    j["id"] = md.id;
    j["l"] = md.l;
    j["m"] = md.m;
    j["omega"] = freq_str(md.omega);
    j["kappa"] = freq_str(md.kappa);
    const auto* dc = std::get_if<DirectCoupling>(&md.coupling_source);
    if (!dc)
        throw ConfigError("mode \"" + md.id +
                          "\": only direct couplings can be written to a config document");
    j["g1"] = complex_json(dc->g[0]);
    j["g2"] = complex_json(dc->g[1]);
    return j;
}

EmitterDescriptor parse_emitter_json(const json& j, const std::string& where) {
    expect_object(j, where);
    reject_unknown(j, {"omega", "position_nm", "dipole_moment", "orientation"}, where);
    EmitterDescriptor em;
    em.omega = get_frequency(require_key(j, "omega", where), where + ".omega");
    const json& pos = require_key(j, "position_nm", where);
    if (!pos.is_array() || pos.size() < 2 || pos.size() > 3)
        fail(where + ".position_nm", "expected [x, y] or [x, y, z]");
    em.position_nm = Vector3d(get_number(pos[0], where + ".position_nm[0]"),
                              get_number(pos[1], where + ".position_nm[1]"),
                              pos.size() == 3 ? get_number(pos[2], where + ".position_nm[2]") : 0.0);
    if (const json* dm = find_key(j, "dipole_moment"))
        em.dipole_moment = get_number(*dm, where + ".dipole_moment");
    if (const json* ori = find_key(j, "orientation")) {
        if (!ori->is_array() || ori->size() != 3)
            fail(where + ".orientation", "expected [x, y, z]");
        em.orientation = Vector3d(get_number((*ori)[0], where + ".orientation[0]"),
                                  get_number((*ori)[1], where + ".orientation[1]"),
                                  get_number((*ori)[2], where + ".orientation[2]"));
    }
    try {
        em.validate();
    } catch (const ConfigError& e) {
        fail(where, e.what());
    }
    return em;
}

json emitter_json(const EmitterDescriptor& em) {
    json j;
    j["omega"] = freq_str(em.omega);
    if (em.position_nm.z() == 0.0)
        j["position_nm"] = json::array({em.position_nm.x(), em.position_nm.y()});
    else
        j["position_nm"] =
            json::array({em.position_nm.x(), em.position_nm.y(), em.position_nm.z()});
    j["dipole_moment"] = em.dipole_moment;
    j["orientation"] =
        json::array({em.orientation.x(), em.orientation.y(), em.orientation.z()});
    return j;
}

fields::NanocavitySurrogateParams parse_nanocavity_json(const json& j, const std::string& where) {
    expect_object(j, where);
    reject_unknown(j,
                   {"facet_radius_nm", "l_max", "m_zero_only", "g_max", "omega_anchor",
                    "band_step", "kappa_axial", "kappa_azimuthal"},
                   where);
    fields::NanocavitySurrogateParams p;
    if (const json* v = find_key(j, "facet_radius_nm"))
        p.facet_radius_nm = get_number(*v, where + ".facet_radius_nm");
    if (const json* v = find_key(j, "l_max")) p.l_max = get_int(*v, where + ".l_max");
    if (const json* v = find_key(j, "m_zero_only"))
        p.m_zero_only = get_bool(*v, where + ".m_zero_only");
    if (const json* v = find_key(j, "g_max")) p.g_max = get_number(*v, where + ".g_max");
    if (const json* v = find_key(j, "omega_anchor"))
        p.omega_anchor = get_frequency(*v, where + ".omega_anchor");
    if (const json* v = find_key(j, "band_step"))
        p.band_step = get_frequency(*v, where + ".band_step");
    if (const json* v = find_key(j, "kappa_axial"))
        p.kappa_axial = get_frequency(*v, where + ".kappa_axial");
    if (const json* v = find_key(j, "kappa_azimuthal"))
        p.kappa_azimuthal = get_frequency(*v, where + ".kappa_azimuthal");
    return p;
}

json nanocavity_json(const fields::NanocavitySurrogateParams& p) {
    json j;
    j["facet_radius_nm"] = p.facet_radius_nm;
    j["l_max"] = p.l_max;
    j["m_zero_only"] = p.m_zero_only;
    j["g_max"] = p.g_max;
    j["omega_anchor"] = freq_str(p.omega_anchor);
    j["band_step"] = freq_str(p.band_step);
    j["kappa_axial"] = freq_str(p.kappa_axial);
    j["kappa_azimuthal"] = freq_str(p.kappa_azimuthal);
    return j;
}

fields::HollowCylinderParams parse_cylinder_json(const json& j, const std::string& where) {
    expect_object(j, where);
    reject_unknown(j,
                   {"cylinder_radius_nm", "facet_radius_nm", "wall_width_nm", "suppression",
                    "mode_count", "g_max", "omega_dominant", "background_detuning_lo",
                    "background_detuning_hi", "kappa_dominant", "kappa_background"},
                   where);
    fields::HollowCylinderParams p;
    if (const json* v = find_key(j, "cylinder_radius_nm"))
        p.cylinder_radius_nm = get_number(*v, where + ".cylinder_radius_nm");
    if (const json* v = find_key(j, "facet_radius_nm"))
        p.facet_radius_nm = get_number(*v, where + ".facet_radius_nm");
    if (const json* v = find_key(j, "wall_width_nm"))
        p.wall_width_nm = get_number(*v, where + ".wall_width_nm");
    if (const json* v = find_key(j, "suppression"))
        p.suppression = get_number(*v, where + ".suppression");
    if (const json* v = find_key(j, "mode_count"))
        p.mode_count = get_int(*v, where + ".mode_count");
    if (const json* v = find_key(j, "g_max")) p.g_max = get_number(*v, where + ".g_max");
    if (const json* v = find_key(j, "omega_dominant"))
        p.omega_dominant = get_frequency(*v, where + ".omega_dominant");
    if (const json* v = find_key(j, "background_detuning_lo"))
        p.background_detuning_lo = get_frequency(*v, where + ".background_detuning_lo");
    if (const json* v = find_key(j, "background_detuning_hi"))
        p.background_detuning_hi = get_frequency(*v, where + ".background_detuning_hi");
    if (const json* v = find_key(j, "kappa_dominant"))
        p.kappa_dominant = get_frequency(*v, where + ".kappa_dominant");
    if (const json* v = find_key(j, "kappa_background"))
        p.kappa_background = get_frequency(*v, where + ".kappa_background");
    return p;
}

json cylinder_json(const fields::HollowCylinderParams& p) {
    json j;
    j["cylinder_radius_nm"] = p.cylinder_radius_nm;
    j["facet_radius_nm"] = p.facet_radius_nm;
    j["wall_width_nm"] = p.wall_width_nm;
    j["suppression"] = p.suppression;
    j["mode_count"] = p.mode_count;
    j["g_max"] = p.g_max;
    j["omega_dominant"] = freq_str(p.omega_dominant);
    j["background_detuning_lo"] = freq_str(p.background_detuning_lo);
    j["background_detuning_hi"] = freq_str(p.background_detuning_hi);
    j["kappa_dominant"] = freq_str(p.kappa_dominant);
    j["kappa_background"] = freq_str(p.kappa_background);
    return j;
}

SystemBlock parse_system_json(const json& j, const std::string& where, const fs::path& base_dir) {
    expect_object(j, where);
    reject_unknown(j, {"modes", "mode_table", "nanocavity", "cylinder", "mode_filter", "emitters"},
                   where);
    SystemBlock sys;

    const json* inline_modes = find_key(j, "modes");
    const json* table = find_key(j, "mode_table");
    const json* nano = find_key(j, "nanocavity");
    const json* cyl = find_key(j, "cylinder");
    const int sources = (inline_modes != nullptr) + (table != nullptr) + (nano != nullptr) +
                        (cyl != nullptr);
    if (sources != 1)
        fail(where,
             "exactly one mode source required: \"modes\", \"mode_table\", \"nanocavity\", or "
             "\"cylinder\"");

    if (inline_modes) {
        if (!inline_modes->is_array()) fail(where + ".modes", "expected an array");
        for (size_t i = 0; i < inline_modes->size(); ++i)
            sys.modes.push_back(parse_mode_json((*inline_modes)[i],
                                                where + ".modes[" + std::to_string(i) + "]"));
    }
    if (table) {
        fs::path p(get_string(*table, where + ".mode_table"));
        if (p.is_relative()) p = base_dir / p;
        sys.mode_table = p.string();
        sys.modes = parse_mode_table(p);
    }
    if (nano) sys.nanocavity = parse_nanocavity_json(*nano, where + ".nanocavity");
    if (cyl) sys.cylinder = parse_cylinder_json(*cyl, where + ".cylinder");

    if (const json* f = find_key(j, "mode_filter"))
        sys.selector = parse_selector(get_string(*f, where + ".mode_filter"), where + ".mode_filter");

    const json& emitters = require_key(j, "emitters", where);
    if (!emitters.is_array() || emitters.size() != 2)
        fail(where + ".emitters", "exactly two emitters required");
    for (size_t i = 0; i < 2; ++i)
        sys.emitters.push_back(
            parse_emitter_json(emitters[i], where + ".emitters[" + std::to_string(i) + "]"));
    return sys;
}

json system_json(const SystemBlock& sys) {
    json j;
    if (sys.mode_table) {
        j["mode_table"] = *sys.mode_table;
    } else if (sys.nanocavity) {
        j["nanocavity"] = nanocavity_json(*sys.nanocavity);
    } else if (sys.cylinder) {
        j["cylinder"] = cylinder_json(*sys.cylinder);
    } else {
        json arr = json::array();
        for (const auto& md : sys.modes) arr.push_back(mode_json(md));
        j["modes"] = arr;
    }
    if (sys.selector != fields::ModeSelector::All) j["mode_filter"] = selector_name(sys.selector);
    json ems = json::array();
    for (const auto& em : sys.emitters) ems.push_back(emitter_json(em));
    j["emitters"] = ems;
    return j;
}

PropagatorConfig parse_dynamics_json(const json& j, const std::string& where) {
    expect_object(j, where);
    reject_unknown(j,
                   {"backend", "t_end_fs", "dt_out_fs", "rtol", "frame", "lindblad_mode_guard",
                    "eig_condition_limit"},
                   where);
    PropagatorConfig cfg;
    if (const json* v = find_key(j, "backend")) {
        const std::string name = get_string(*v, where + ".backend");
        if (name == "exact")
            cfg.backend = Backend::ExactSingleExcitation;
        else if (name == "lindblad")
            cfg.backend = Backend::DenseLindblad;
        else
            fail(where + ".backend", "expected \"exact\" or \"lindblad\"");
    }
    if (const json* v = find_key(j, "t_end_fs")) cfg.t_end_fs = get_number(*v, where + ".t_end_fs");
    if (const json* v = find_key(j, "dt_out_fs"))
        cfg.dt_out_fs = get_number(*v, where + ".dt_out_fs");
    if (const json* v = find_key(j, "rtol")) cfg.rtol = get_number(*v, where + ".rtol");
    if (const json* v = find_key(j, "frame")) {
        const std::string name = get_string(*v, where + ".frame");
        if (name == "rotating")
            cfg.frame = Frame::RotatingAtEmitter;
        else if (name == "lab")
            cfg.frame = Frame::Lab;
        else
            fail(where + ".frame", "expected \"rotating\" or \"lab\"");
    }
    if (const json* v = find_key(j, "lindblad_mode_guard"))
        cfg.lindblad_mode_guard = get_int(*v, where + ".lindblad_mode_guard");
    if (const json* v = find_key(j, "eig_condition_limit"))
        cfg.eig_condition_limit = get_number(*v, where + ".eig_condition_limit");
    return cfg;
}

json dynamics_json(const PropagatorConfig& cfg) {
    json j;
    j["backend"] = cfg.backend == Backend::DenseLindblad ? "lindblad" : "exact";
    j["t_end_fs"] = cfg.t_end_fs;
    j["dt_out_fs"] = cfg.dt_out_fs;
    j["rtol"] = cfg.rtol;
    j["frame"] = cfg.frame == Frame::Lab ? "lab" : "rotating";
    j["lindblad_mode_guard"] = cfg.lindblad_mode_guard;
    j["eig_condition_limit"] = cfg.eig_condition_limit;
    return j;
}

experiments::SweepSpec parse_experiment_json(const json& j, const std::string& where) {
    expect_object(j, where);
    reject_unknown(j,
                   {"scenario", "grid_nm", "positions_nm", "t_eval_fs", "lmax_lo", "lmax_hi",
                    "emitter_omega", "dipole_moment", "threads", "store_series",
                    "persist_window_fs", "persist_tol", "nanocavity", "cylinder"},
                   where);
    experiments::SweepSpec spec;
    spec.scenario =
        parse_scenario(get_string(require_key(j, "scenario", where), where + ".scenario"),
                       where + ".scenario");
    if (const json* v = find_key(j, "grid_nm")) {
        if (!v->is_array()) fail(where + ".grid_nm", "expected an array of displacements");
        for (size_t i = 0; i < v->size(); ++i)
            spec.grid_nm.push_back(get_number((*v)[i], where + ".grid_nm[" + std::to_string(i) + "]"));
    }
    if (const json* v = find_key(j, "positions_nm")) {
        if (!v->is_array()) fail(where + ".positions_nm", "expected an array of [x1, x2] pairs");
        for (size_t i = 0; i < v->size(); ++i) {
            const std::string at = where + ".positions_nm[" + std::to_string(i) + "]";
            const json& pair = (*v)[i];
            if (!pair.is_array() || pair.size() != 2) fail(at, "expected [x1, x2]");
            spec.positions.emplace_back(get_number(pair[0], at + "[0]"),
                                        get_number(pair[1], at + "[1]"));
        }
    }
    if (const json* v = find_key(j, "t_eval_fs")) spec.t_eval_fs = get_number(*v, where + ".t_eval_fs");
    if (const json* v = find_key(j, "lmax_lo")) spec.lmax_lo = get_int(*v, where + ".lmax_lo");
    if (const json* v = find_key(j, "lmax_hi")) spec.lmax_hi = get_int(*v, where + ".lmax_hi");
    if (const json* v = find_key(j, "emitter_omega"))
        spec.emitter_omega = get_frequency(*v, where + ".emitter_omega");
    if (const json* v = find_key(j, "dipole_moment"))
        spec.dipole_moment = get_number(*v, where + ".dipole_moment");
    if (const json* v = find_key(j, "threads")) spec.threads = get_int(*v, where + ".threads");
    if (const json* v = find_key(j, "store_series"))
        spec.store_series = get_bool(*v, where + ".store_series");
    if (const json* v = find_key(j, "persist_window_fs"))
        spec.persist_window_fs = get_number(*v, where + ".persist_window_fs");
    if (const json* v = find_key(j, "persist_tol"))
        spec.persist_tol = get_number(*v, where + ".persist_tol");
    if (const json* v = find_key(j, "nanocavity"))
        spec.nanocavity = parse_nanocavity_json(*v, where + ".nanocavity");
    if (const json* v = find_key(j, "cylinder"))
        spec.cylinder = parse_cylinder_json(*v, where + ".cylinder");
    return spec;
}

json experiment_json(const experiments::SweepSpec& spec) {
    json j;
    j["scenario"] = scenario_name(spec.scenario);
    j["grid_nm"] = spec.grid_nm;
    json pos = json::array();
    for (const auto& [a, b] : spec.positions) pos.push_back(json::array({a, b}));
    j["positions_nm"] = pos;
    j["t_eval_fs"] = spec.t_eval_fs;
    j["lmax_lo"] = spec.lmax_lo;
    j["lmax_hi"] = spec.lmax_hi;
    j["emitter_omega"] = freq_str(spec.emitter_omega);
    j["dipole_moment"] = spec.dipole_moment;
    j["threads"] = spec.threads;
    j["store_series"] = spec.store_series;
    j["persist_window_fs"] = spec.persist_window_fs;
    j["persist_tol"] = spec.persist_tol;
    j["nanocavity"] = nanocavity_json(spec.nanocavity);
    j["cylinder"] = cylinder_json(spec.cylinder);
    return j;
}

OutputBlock parse_output_json(const json& j, const std::string& where) {
    expect_object(j, where);
    reject_unknown(j, {"directory", "format"}, where);
    OutputBlock out;
    if (const json* v = find_key(j, "directory"))
        out.directory = get_string(*v, where + ".directory");
    if (const json* v = find_key(j, "format")) {
        const std::string name = get_string(*v, where + ".format");
        if (name == "csv")
            out.format = OutputFormat::Csv;
        else if (name == "structured")
            out.format = OutputFormat::Structured;
        else
            fail(where + ".format", "expected \"csv\" or \"structured\"");
    }
    return out;
}

json output_json(const OutputBlock& out) {
    json j;
    j["directory"] = out.directory;
    j["format"] = out.format == OutputFormat::Structured ? "structured" : "csv";
    return j;
}

RunConfig parse_config_json(const json& doc, const fs::path& base_dir) {
    expect_object(doc, "config");
    reject_unknown(doc, {"system", "dynamics", "experiment", "output"}, "config");
    RunConfig cfg;
    if (const json* d = find_key(doc, "dynamics")) cfg.dynamics = parse_dynamics_json(*d, "dynamics");
    if (const json* s = find_key(doc, "system"))
        cfg.system = parse_system_json(*s, "system", base_dir);
    if (const json* e = find_key(doc, "experiment")) {
        cfg.experiment = parse_experiment_json(*e, "experiment");
        cfg.experiment->propagator = cfg.dynamics;
    }
    if (const json* o = find_key(doc, "output")) cfg.output = parse_output_json(*o, "output");
    return cfg;
}

// --------------------------------------------------------- result documents

json window_json(const experiments::WindowRange& w) { return json::array({w.lo, w.hi}); }

experiments::WindowRange parse_window(const json& j) {
    experiments::WindowRange w;
    w.lo = j.at(0).get<double>();
    w.hi = j.at(1).get<double>();
    return w;
}

json populations_json(const Populations& p) {
    json j;
    j["eg"] = p.eg;
    j["ge"] = p.ge;
    j["psi_minus"] = p.psi_minus;
    j["psi_plus"] = p.psi_plus;
    if (p.dark) j["dark"] = *p.dark;
    if (p.bright) j["bright"] = *p.bright;
    return j;
}

Populations parse_populations(const json& j) {
    Populations p;
    p.eg = j.at("eg").get<double>();
    p.ge = j.at("ge").get<double>();
    p.psi_minus = j.at("psi_minus").get<double>();
    p.psi_plus = j.at("psi_plus").get<double>();
    if (j.contains("dark")) p.dark = j.at("dark").get<double>();
    if (j.contains("bright")) p.bright = j.at("bright").get<double>();
    return p;
}

json persistence_json(const PersistenceReport& rep) {
    json j;
    j["tolerance"] = rep.tolerance;
    j["all_satisfied"] = rep.all_satisfied;
    json residuals = json::array();
    for (const auto& r : rep.residuals) residuals.push_back(complex_json(r));
    j["residuals"] = residuals;
    j["satisfied"] = rep.satisfied;
    j["violating_modes"] = rep.violating_modes;
    if (rep.dark_state) {
        j["dark_state"] = {{"theta", rep.dark_state->theta()}, {"chi", rep.dark_state->chi()}};
    }
    return j;
}

PersistenceReport parse_persistence(const json& j) {
    PersistenceReport rep;
    rep.tolerance = j.at("tolerance").get<double>();
    rep.all_satisfied = j.at("all_satisfied").get<bool>();
    for (const auto& r : j.at("residuals"))
        rep.residuals.emplace_back(r.at(0).get<double>(), r.at(1).get<double>());
    rep.satisfied = j.at("satisfied").get<std::vector<bool>>();
    rep.violating_modes = j.at("violating_modes").get<std::vector<std::string>>();
    if (j.contains("dark_state"))
        rep.dark_state = DarkStateSpec::from_angles(j.at("dark_state").at("theta").get<double>(),
                                                    j.at("dark_state").at("chi").get<double>());
    return rep;
}

json record_json(const experiments::SweepRecord& rec) {
    json j;
    j["x1_nm"] = rec.x1_nm;
    j["x2_nm"] = rec.x2_nm;
    j["lmax"] = rec.lmax;
    j["concurrence_eval"] = rec.concurrence_eval;
    j["pops_eval"] = populations_json(rec.pops_eval);
    j["final_state_distance"] = rec.final_state_distance;
    j["osc_frequency"] = rec.osc_frequency;
    j["osc_no_crossings"] = rec.osc_no_crossings;
    j["persistent"] = rec.persistent;
    j["windows"] = {{"concurrence", window_json(rec.win_concurrence)},
                    {"eg", window_json(rec.win_eg)},
                    {"ge", window_json(rec.win_ge)},
                    {"psi_minus", window_json(rec.win_psi_minus)},
                    {"psi_plus", window_json(rec.win_psi_plus)}};
    j["persistence"] = persistence_json(rec.persistence);
    if (rec.single_mode_prediction) j["single_mode_prediction"] = *rec.single_mode_prediction;
    if (!rec.t_series.empty()) {
        j["series"] = {{"t", rec.t_series},          {"concurrence", rec.c_series},
                       {"eg", rec.eg_series},        {"ge", rec.ge_series},
                       {"psi_minus", rec.pm_series}, {"psi_plus", rec.pp_series}};
    }
    return j;
}

experiments::SweepRecord parse_record(const json& j) {
    experiments::SweepRecord rec;
    rec.x1_nm = j.at("x1_nm").get<double>();
    rec.x2_nm = j.at("x2_nm").get<double>();
    rec.lmax = j.at("lmax").get<int>();
    rec.concurrence_eval = j.at("concurrence_eval").get<double>();
    rec.pops_eval = parse_populations(j.at("pops_eval"));
    rec.final_state_distance = j.at("final_state_distance").get<double>();
    rec.osc_frequency = j.at("osc_frequency").get<double>();
    rec.osc_no_crossings = j.at("osc_no_crossings").get<bool>();
    rec.persistent = j.at("persistent").get<bool>();
    const json& win = j.at("windows");
    rec.win_concurrence = parse_window(win.at("concurrence"));
    rec.win_eg = parse_window(win.at("eg"));
    rec.win_ge = parse_window(win.at("ge"));
    rec.win_psi_minus = parse_window(win.at("psi_minus"));
    rec.win_psi_plus = parse_window(win.at("psi_plus"));
    rec.persistence = parse_persistence(j.at("persistence"));
    if (j.contains("single_mode_prediction"))
        rec.single_mode_prediction = j.at("single_mode_prediction").get<double>();
    if (j.contains("series")) {
        const json& s = j.at("series");
        rec.t_series = s.at("t").get<std::vector<double>>();
        rec.c_series = s.at("concurrence").get<std::vector<double>>();
        rec.eg_series = s.at("eg").get<std::vector<double>>();
        rec.ge_series = s.at("ge").get<std::vector<double>>();
        rec.pm_series = s.at("psi_minus").get<std::vector<double>>();
        rec.pp_series = s.at("psi_plus").get<std::vector<double>>();
    }
    return rec;
}

json result_json(const experiments::SweepResult& result) {
    json j;
    j["scenario"] = scenario_name(result.scenario);
    j["label"] = result.label;
    json records = json::array();
    for (const auto& rec : result.records) records.push_back(record_json(rec));
    j["records"] = records;
    return j;
}

// ------------------------------------------------------------- file helpers

std::ofstream open_for_write(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write \"" + path.string() + "\"");
    return out;
}

void finish_write(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) throw std::runtime_error("error while writing \"" + path.string() + "\"");
}

constexpr const char* kCsvHeader =
    "time_fs,x1_nm,x2_nm,concurrence,pop_eg,pop_ge,pop_psiminus,pop_psiplus";

void write_csv_row(std::ofstream& out, double t, double x1, double x2, double c, double eg,
                   double ge, double pm, double pp) {
    out << format_double17(t) << ',' << format_double17(x1) << ',' << format_double17(x2) << ','
        << format_double17(c) << ',' << format_double17(eg) << ',' << format_double17(ge) << ','
        << format_double17(pm) << ',' << format_double17(pp) << '\n';
}

}  // namespace

// ------------------------------------------------------------ small parsers

double parse_double_strict(std::string_view text, const std::string& where) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (!s.empty() && s.front() == '+' && s.size() > 1 && s[1] != '+' && s[1] != '-')
        s.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw ConfigError(where + ": cannot parse number \"" + std::string(text) + "\"");
    return value;
}

std::string format_double17(double value) {
    char buf[64];
    const auto [ptr, ec] =
        std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    (void)ec;
    return std::string(buf, ptr);
}

complex parse_complex(std::string_view text) {
    std::string s;
    s.reserve(text.size());
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw ConfigError("complex literal: empty value");
    if (s.back() != 'i')
        return complex(parse_double_strict(s, "complex literal"), 0.0);
    s.pop_back();
    size_t split = std::string::npos;
    for (size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    const auto imag_of = [](const std::string& part) {
        if (part.empty() || part == "+") return 1.0;
        if (part == "-") return -1.0;
        return parse_double_strict(part, "complex literal");
    };
    if (split == std::string::npos) return complex(0.0, imag_of(s));
    return complex(parse_double_strict(s.substr(0, split), "complex literal"),
                   imag_of(s.substr(split)));
}

// --------------------------------------------------------------- mode table

std::vector<ModeDescriptor> parse_mode_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open mode table \"" + path.string() + "\"");
    const std::string context = "mode table \"" + path.filename().string() + "\"";

    struct Column {
        std::string name;
        std::optional<units::FrequencyUnit> unit;
    };
    std::vector<Column> header;
    std::vector<ModeDescriptor> modes;

    const auto column_index = [&](const std::string& name) -> int {
        for (size_t i = 0; i < header.size(); ++i)
            if (header[i].name == name) return static_cast<int>(i);
        return -1;
    };

    const auto split_cells = [](const std::string& line) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ss(line);
        while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        return cells;
    };

    const auto parse_frequency_cell = [](const std::string& cell,
                                         const std::optional<units::FrequencyUnit>& header_unit,
                                         const std::string& where) {
        double value = 0.0;
        bool bare = true;
        try {
            value = parse_double_strict(cell, where);
        } catch (const ConfigError&) {
            bare = false;
        }
        try {
            if (bare) {
                if (!header_unit)
                    fail(where, "missing unit tag (no default unit; tag the cell like \"730 nm\" "
                                "or declare one in the header like \"omega [THz]\")");
                value = units::to_rad_per_fs(value, *header_unit);
            } else {
                value = units::parse_frequency(cell);
            }
        } catch (const ConfigError& e) {
            // re-anchor unit errors at this row/column
            const std::string msg = e.what();
            if (msg.rfind(where, 0) == 0) throw;
            fail(where, msg);
        }
        if (!std::isfinite(value)) fail(where, "non-finite value");
        return value;
    };

    const auto parse_int_cell = [](const std::string& cell, const std::string& where) {
        int value = 0;
        const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
        if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size())
            fail(where, "cannot parse integer \"" + cell + "\"");
        return value;
    };

    const auto parse_coupling_cell = [](std::string cell, const std::string& column,
                                        const std::string& where) {
        const auto eq = cell.find('=');
        if (eq != std::string::npos) {
            const std::string label = lower(trim(cell.substr(0, eq)));
            if (label != column)
                fail(where, "value labelled \"" + label + "\" in column \"" + column + "\"");
            cell = cell.substr(eq + 1);
        }
        try {
            return parse_complex(cell);
        } catch (const ConfigError& e) {
            fail(where, e.what());
        }
    };

    std::string line;
    int data_row = 0;
    while (std::getline(in, line)) {
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;

        if (header.empty()) {
            for (const auto& cell : split_cells(stripped)) {
                Column col;
                const auto lb = cell.find('[');
                if (lb == std::string::npos) {
                    col.name = lower(trim(cell));
                } else {
                    const auto rb = cell.find(']', lb);
                    if (rb == std::string::npos)
                        fail(context + " header", "unterminated unit tag in \"" + cell + "\"");
                    col.name = lower(trim(cell.substr(0, lb)));
                    try {
                        col.unit = units::parse_frequency_unit(trim(cell.substr(lb + 1, rb - lb - 1)));
                    } catch (const ConfigError& e) {
                        fail(context + " header, column \"" + col.name + "\"", e.what());
                    }
                }
                if (col.name.empty()) fail(context + " header", "empty column name");
                header.push_back(std::move(col));
            }
            for (const char* required : {"id", "l", "m", "omega", "kappa", "g1", "g2"}) {
                if (column_index(required) < 0)
                    fail(context, std::string("missing column \"") + required + "\"");
            }
            for (const auto& col : header) {
                static constexpr const char* known[] = {"id", "l", "m", "omega", "kappa", "g1", "g2"};
                if (std::find_if(std::begin(known), std::end(known), [&](const char* k) {
                        return col.name == k;
                    }) == std::end(known))
                    fail(context, "unknown column \"" + col.name + "\"");
            }
            continue;
        }

        ++data_row;
        const std::string row_ctx = context + " row " + std::to_string(data_row);
        const auto cells = split_cells(stripped);
        if (cells.size() != header.size())
            fail(row_ctx, "expected " + std::to_string(header.size()) + " fields, got " +
                              std::to_string(cells.size()));

        const auto cell_of = [&](const char* name) -> const std::string& {
            return cells[static_cast<size_t>(column_index(name))];
        };
        const auto unit_of = [&](const char* name) {
            return header[static_cast<size_t>(column_index(name))].unit;
        };

        ModeDescriptor md;
        md.id = cell_of("id");
        if (md.id.empty()) fail(row_ctx + ", column \"id\"", "empty mode id");
        md.l = parse_int_cell(cell_of("l"), row_ctx + ", column \"l\"");
        md.m = parse_int_cell(cell_of("m"), row_ctx + ", column \"m\"");
        md.omega = parse_frequency_cell(cell_of("omega"), unit_of("omega"),
                                        row_ctx + ", column \"omega\"");
        md.kappa = parse_frequency_cell(cell_of("kappa"), unit_of("kappa"),
                                        row_ctx + ", column \"kappa\"");
        if (!(md.kappa > 0.0))
            fail(row_ctx + ", column \"kappa\"",
                 "loss rate must be positive (got " + format_double17(md.kappa) + ")");
        DirectCoupling dc;
        dc.g[0] = parse_coupling_cell(cell_of("g1"), "g1", row_ctx + ", column \"g1\"");
        dc.g[1] = parse_coupling_cell(cell_of("g2"), "g2", row_ctx + ", column \"g2\"");
        md.coupling_source = dc;
        try {
            md.validate();
        } catch (const ConfigError& e) {
            fail(row_ctx, e.what());
        }
        modes.push_back(std::move(md));
    }
    if (header.empty()) fail(context, "missing header row");
    return modes;
}

// ------------------------------------------------------------------- config

RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return parse_config_json(doc, base_dir);
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file \"" + path.string() + "\"");
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_config_text(buffer.str(), path.parent_path());
    } catch (const ConfigError& e) {
        throw ConfigError("\"" + path.string() + "\": " + e.what());
    }
}

std::string config_to_text(const RunConfig& config) {
    json doc;
    if (config.system) doc["system"] = system_json(*config.system);
    doc["dynamics"] = dynamics_json(config.dynamics);
    if (config.experiment) doc["experiment"] = experiment_json(*config.experiment);
    doc["output"] = output_json(config.output);
    return doc.dump(2) + "\n";
}

SystemModel build_system(const SystemBlock& system) {
    if (system.emitters.size() != 2)
        throw ConfigError("system: exactly two emitters required");
    std::vector<ModeDescriptor> modes = system.modes;
    if (system.nanocavity) modes = fields::nanocavity_surrogate_modes(*system.nanocavity);
    if (system.cylinder) modes = fields::hollow_cylinder_profile(*system.cylinder);
    modes = fields::filter_modes(modes, system.selector, system.emitters[0]);
    return SystemModel::build(std::move(modes), {system.emitters[0], system.emitters[1]});
}

// ------------------------------------------------------------------ results

std::string result_to_text(const experiments::SweepResult& result) {
    return result_json(result).dump(2) + "\n";
}

experiments::SweepResult result_from_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("result document: ") + e.what());
    }
    try {
        experiments::SweepResult result;
        result.scenario = parse_scenario(doc.at("scenario").get<std::string>(), "result.scenario");
        result.label = doc.at("label").get<std::string>();
        for (const auto& r : doc.at("records")) result.records.push_back(parse_record(r));
        return result;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("result document: ") + e.what());
    }
}

std::filesystem::path write_result_csv(const experiments::SweepResult& result,
                                       const std::filesystem::path& directory) {
    const fs::path path = directory / (result.label + ".csv");
    auto out = open_for_write(path);
    out << kCsvHeader << '\n';
    for (const auto& rec : result.records) {
        const size_t n = rec.t_series.size();
        if (rec.c_series.size() != n || rec.eg_series.size() != n || rec.ge_series.size() != n ||
            rec.pm_series.size() != n || rec.pp_series.size() != n)
            throw std::runtime_error("inconsistent series lengths in sweep record for \"" +
                                     path.string() + "\"");
        for (size_t k = 0; k < n; ++k)
            write_csv_row(out, rec.t_series[k], rec.x1_nm, rec.x2_nm, rec.c_series[k],
                          rec.eg_series[k], rec.ge_series[k], rec.pm_series[k], rec.pp_series[k]);
    }
    finish_write(out, path);
    return path;
}

std::filesystem::path write_result_structured(const experiments::SweepResult& result,
                                              const std::filesystem::path& directory) {
    const fs::path path = directory / (result.label + ".json");
    auto out = open_for_write(path);
    out << result_to_text(result);
    finish_write(out, path);
    return path;
}

experiments::SweepResult read_result_structured(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open result file \"" + path.string() + "\"");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return result_from_text(buffer.str());
}

std::vector<std::filesystem::path> write_results(
    const std::vector<experiments::SweepResult>& results, const std::filesystem::path& directory,
    OutputFormat format) {
    std::vector<fs::path> paths;
    paths.reserve(results.size());
    for (const auto& result : results) {
        paths.push_back(format == OutputFormat::Csv ? write_result_csv(result, directory)
                                                    : write_result_structured(result, directory));
    }
    return paths;
}

std::filesystem::path write_trajectory_csv(const Trajectory& trajectory, double x1_nm,
                                           double x2_nm, const std::filesystem::path& file) {
    auto out = open_for_write(file);
    out << kCsvHeader << '\n';
    for (size_t k = 0; k < trajectory.times_fs.size(); ++k) {
        const auto& p = trajectory.populations[k];
        write_csv_row(out, trajectory.times_fs[k], x1_nm, x2_nm, trajectory.concurrence[k], p.eg,
                      p.ge, p.psi_minus, p.psi_plus);
    }
    finish_write(out, file);
    return file;
}

std::filesystem::path write_trajectory_structured(const Trajectory& trajectory,
                                                  const std::filesystem::path& file) {
    json doc;
    doc["times_fs"] = trajectory.times_fs;
    doc["concurrence"] = trajectory.concurrence;
    json pops;
    std::vector<double> eg, ge, pm, pp, dark, bright;
    for (const auto& p : trajectory.populations) {
        eg.push_back(p.eg);
        ge.push_back(p.ge);
        pm.push_back(p.psi_minus);
        pp.push_back(p.psi_plus);
        if (p.dark) dark.push_back(*p.dark);
        if (p.bright) bright.push_back(*p.bright);
    }
    pops["eg"] = eg;
    pops["ge"] = ge;
    pops["psi_minus"] = pm;
    pops["psi_plus"] = pp;
    if (dark.size() == eg.size()) pops["dark"] = dark;
    if (bright.size() == eg.size()) pops["bright"] = bright;
    doc["populations"] = pops;
    doc["ground_population"] = trajectory.ground_population;
    doc["used_integrator_fallback"] = trajectory.used_integrator_fallback;
    auto out = open_for_write(file);
    out << doc.dump(2) << "\n";
    finish_write(out, file);
    return file;
}

// ---------------------------------------------------------------------- CLI

namespace {

std::string pi_note(double angle) {
    const double pi = units::pi;
    if (std::abs(angle) < 1e-12) return " (= 0)";
    if (std::abs(angle - pi / 4) < 1e-9) return " (= pi/4)";
    if (std::abs(angle - pi / 2) < 1e-9) return " (= pi/2)";
    if (std::abs(angle - 3 * pi / 4) < 1e-9) return " (= 3pi/4)";
    if (std::abs(angle - pi) < 1e-9) return " (= pi)";
    return "";
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"two-emitter dynamics in lossy multimode nanocavities"};
    app.fallthrough();
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir;
    std::string format_str;
    int threads = 0;
    std::uint64_t seed = 0;  // reserved for randomized test tooling; no physics path reads it
    app.add_option("--config", config_path, "configuration document (json)");
    app.add_option("--output", output_dir, "output directory (default: the config's output block)");
    app.add_option("--format", format_str, "output format")
        ->check(CLI::IsMember({"csv", "structured"}));
    app.add_option("--threads", threads, "worker threads for sweeps (0 = all cores)");
    app.add_option("--seed", seed, "seed for randomized test tooling; never affects physics");

    auto* cmd_simulate =
        app.add_subcommand("simulate", "propagate the configured system, write its trajectory");
    auto* cmd_sweep = app.add_subcommand("sweep", "run the configured sweep scenario");
    auto* cmd_dark =
        app.add_subcommand("check-dark", "evaluate the per-mode dark-state conditions");
    auto* cmd_steady =
        app.add_subcommand("steady-state", "closed-form long-time state and concurrence");
    auto* cmd_validate =
        app.add_subcommand("validate", "schema-check the config and mode table, no computation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        const auto load_config = [&]() {
            if (config_path.empty()) throw ConfigError("--config is required");
            return parse_config(config_path);
        };
        const auto resolve_format = [&](const RunConfig& cfg) {
            if (format_str == "csv") return OutputFormat::Csv;
            if (format_str == "structured") return OutputFormat::Structured;
            return cfg.output.format;
        };
        const auto resolve_dir = [&](const RunConfig& cfg) {
            fs::path dir = output_dir.empty() ? fs::path(cfg.output.directory)
                                              : fs::path(output_dir);
            fs::create_directories(dir);
            return dir;
        };
        const auto require_system = [](const RunConfig& cfg, const char* sub) {
            if (!cfg.system)
                throw ConfigError(std::string(sub) + " requires a \"system\" block in the config");
            return build_system(*cfg.system);
        };

        if (cmd_validate->parsed()) {
            const RunConfig cfg = load_config();
            if (cfg.system) (void)build_system(*cfg.system);  // catches placement/id conflicts
            out << "configuration valid: " << config_path << "\n";
            return 0;
        }

        if (cmd_simulate->parsed()) {
            const RunConfig cfg = load_config();
            const SystemModel model = require_system(cfg, "simulate");
            PropagatorConfig prop = cfg.dynamics;
            prop.dark_spec = find_dark_state(model);
            const auto initial = QuantumState::excited_emitter(model, 1);
            const Trajectory traj = evolve(model, initial, prop);
            const fs::path dir = resolve_dir(cfg);
            fs::path written;
            if (resolve_format(cfg) == OutputFormat::Csv) {
                written = write_trajectory_csv(traj, model.emitter(1).position_nm.x(),
                                               model.emitter(2).position_nm.x(),
                                               dir / "trajectory.csv");
            } else {
                written = write_trajectory_structured(traj, dir / "trajectory.json");
            }
            out << "wrote " << written.string() << "\n";
            out << "final concurrence = " << format_double17(traj.concurrence.back()) << "\n";
            return 0;
        }

        if (cmd_sweep->parsed()) {
            const RunConfig cfg = load_config();
            if (!cfg.experiment)
                throw ConfigError("sweep requires an \"experiment\" block in the config");
            experiments::SweepSpec spec = *cfg.experiment;
            if (app.count("--threads") > 0) spec.threads = threads;
            const OutputFormat format = resolve_format(cfg);
            if (format == OutputFormat::Csv) spec.store_series = true;  // rows need samples
            const auto results = experiments::run_sweep(spec);
            const fs::path dir = resolve_dir(cfg);
            for (const auto& path : write_results(results, dir, format))
                out << "wrote " << path.string() << "\n";
            return 0;
        }

        if (cmd_dark->parsed()) {
            const RunConfig cfg = load_config();
            const SystemModel model = require_system(cfg, "check-dark");
            const auto found = find_dark_state(model);
            if (found) {
                const auto report = check_persistence(model, *found);
                double worst = 0.0;
                for (const auto& r : report.residuals) worst = std::max(worst, std::abs(r));
                out << "dark state found: theta = " << format_double17(found->theta()) << " rad"
                    << pi_note(found->theta()) << ", chi = " << format_double17(found->chi())
                    << " rad" << pi_note(found->chi()) << "\n";
                out << "all " << model.mode_count()
                    << " mode conditions satisfied; max residual = " << format_double17(worst)
                    << " (tolerance " << format_double17(report.tolerance) << ")\n";
            } else {
                const auto probe = DarkStateSpec::from_angles(units::pi / 4, units::pi);
                const auto report = check_persistence(model, probe);
                out << "no exact dark state: " << report.violating_modes.size() << " of "
                    << model.mode_count()
                    << " mode conditions fail for the antisymmetric probe\n";
                for (size_t xi = 0; xi < report.residuals.size(); ++xi) {
                    if (report.satisfied[xi]) continue;
                    out << "  " << model.mode(static_cast<int>(xi)).id
                        << ": |residual| = " << format_double17(std::abs(report.residuals[xi]))
                        << "\n";
                }
            }
            return 0;
        }

        if (cmd_steady->parsed()) {
            const RunConfig cfg = load_config();
            const SystemModel model = require_system(cfg, "steady-state");
            const auto initial = QuantumState::excited_emitter(model, 1);
            const Matrix4cd rho = steady_state(model, initial);
            const auto dark = find_dark_state(model);
            const Populations pops = state_populations(rho, dark);
            out << "steady-state concurrence = " << format_double17(concurrence(rho)) << "\n";
            out << "pop eg = " << format_double17(pops.eg) << ", ge = " << format_double17(pops.ge)
                << ", psi- = " << format_double17(pops.psi_minus)
                << ", psi+ = " << format_double17(pops.psi_plus) << "\n";
            if (pops.dark)
                out << "dark population = " << format_double17(*pops.dark)
                    << ", bright population = " << format_double17(*pops.bright) << "\n";
            return 0;
        }

        throw ConfigError("no subcommand selected");
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const FieldDomainError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    return run_cli(argc, argv, std::cout, std::cerr);
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<std::string> full;
    full.reserve(args.size() + 1);
    full.emplace_back("subrad");
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    argv.reserve(full.size());
    for (const auto& s : full) argv.push_back(s.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace subrad::io
