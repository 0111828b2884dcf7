#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "subrad/dynamics.hpp"
#include "subrad/experiments.hpp"
#include "subrad/fields.hpp"
#include "subrad/types.hpp"

// Configuration documents, mode tables, result serialization, and the CLI.
//
// Conventions shared by every text format here:
//   - frequencies and rates are tagged strings ("283 THz", "0.08 rad/fs",
//     "1.2 eV", "730 nm"); there is no default unit,
//   - complex couplings are cartesian "a+bi" literals (or [re, im] pairs in
//     config documents),
//   - all numbers are read and written locale-independently.

namespace subrad::io {

// ---------------------------------------------------------------- documents

struct SystemBlock {
    // resolved mode list; filled from exactly one source (inline "modes",
    // a referenced "mode_table", or one of the surrogate families)
    std::vector<ModeDescriptor> modes;
    std::optional<std::string> mode_table;  // resolved path, when that source was used
    std::optional<fields::NanocavitySurrogateParams> nanocavity;
    std::optional<fields::HollowCylinderParams> cylinder;
    fields::ModeSelector selector = fields::ModeSelector::All;
    std::vector<EmitterDescriptor> emitters;  // exactly two
};

enum class OutputFormat { Csv, Structured };

struct OutputBlock {
    std::string directory = ".";
    OutputFormat format = OutputFormat::Csv;
};

struct RunConfig {
    std::optional<SystemBlock> system;                 // simulate / check-dark / steady-state
    PropagatorConfig dynamics;                         // shared propagator settings
    std::optional<experiments::SweepSpec> experiment;  // sweep scenarios
    OutputBlock output;
};

// Parse and schema-validate a config document.  Unknown keys, missing
// required keys, and malformed values raise ConfigError naming the offending
// location (e.g. `system.emitters[1].omega`).  A referenced mode table is
// loaded (and validated) relative to `base_dir` / the config file's directory.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir);

// Canonical serialization; parse_config_text(config_to_text(c)) reproduces c.
std::string config_to_text(const RunConfig& config);

// Build the model a system block describes (selector filter applied).
SystemModel build_system(const SystemBlock& system);

// -------------------------------------------------------------- mode tables

// Delimited text, one header row naming columns {id, l, m, omega, kappa, g1,
// g2} in any order.  Frequency cells carry their own unit tag ("730 nm") or
// inherit one declared in the header ("omega [THz]").  '#' lines and blank
// lines are skipped.  Violations raise ConfigError naming row and column;
// kappa must be strictly positive here (every tabulated mode is lossy).
std::vector<ModeDescriptor> parse_mode_table(const std::filesystem::path& path);

// ------------------------------------------------------------------ results

// CSV: fixed columns time_fs,x1_nm,x2_nm,concurrence,pop_eg,pop_ge,
// pop_psiminus,pop_psiplus; one row per stored time sample of each record
// (records without stored series contribute no rows).  Written to
// `<directory>/<label>.csv`; returns the path.
std::filesystem::path write_result_csv(const experiments::SweepResult& result,
                                       const std::filesystem::path& directory);

// Lossless structured mirror of a SweepResult, `<directory>/<label>.json`.
std::filesystem::path write_result_structured(const experiments::SweepResult& result,
                                              const std::filesystem::path& directory);
experiments::SweepResult read_result_structured(const std::filesystem::path& path);

std::string result_to_text(const experiments::SweepResult& result);
experiments::SweepResult result_from_text(const std::string& text);

std::vector<std::filesystem::path> write_results(
    const std::vector<experiments::SweepResult>& results,
    const std::filesystem::path& directory, OutputFormat format);

// Single-trajectory outputs (same CSV column layout, fixed emitter positions).
std::filesystem::path write_trajectory_csv(const Trajectory& trajectory, double x1_nm,
                                           double x2_nm, const std::filesystem::path& file);
std::filesystem::path write_trajectory_structured(const Trajectory& trajectory,
                                                  const std::filesystem::path& file);

// ------------------------------------------------------------------ helpers

// Cartesian complex literal: "0.05", "0.05+0i", "-0.3-0.7i", "1e-3i", "-i".
complex parse_complex(std::string_view text);

// Shortest-faithful 17-significant-digit decimal (locale-free, to_chars).
std::string format_double17(double value);

// Locale-free full-string double parse; throws ConfigError("<where>: ...").
double parse_double_strict(std::string_view text, const std::string& where);

// --------------------------------------------------------------------- CLI

// Subcommands: simulate | sweep | check-dark | steady-state | validate.
// Flags: --config <path>, --output <dir>, --format csv|structured,
// --threads <n>, --seed <n> (reserved for randomized test tooling; no
// physics path reads it).  Exit codes: 0 success, 1 validation error,
// 2 runtime error.
int cli_main(int argc, const char* const* argv);
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace subrad::io
