#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "subrad/dynamics.hpp"
#include "subrad/fields.hpp"

namespace subrad::experiments {

enum class Scenario { ModeCountConvergence, ParitySweep, CylinderSymmetric, CylinderAsymmetric };

struct SweepSpec {
    Scenario scenario = Scenario::ParitySweep;

    // symmetric scenarios: displacement values x (emitters at (-x, 0) and (+x, 0));
    // CylinderAsymmetric instead takes explicit (x1, x2) pairs in `positions`
    std::vector<double> grid_nm;
    std::vector<std::pair<double, double>> positions;

    double t_eval_fs = 1000.0;
    PropagatorConfig propagator;

    fields::NanocavitySurrogateParams nanocavity;  // ModeCountConvergence, ParitySweep
    fields::HollowCylinderParams cylinder;         // cylinder scenarios
    int lmax_lo = 1, lmax_hi = 9;                  // ModeCountConvergence range

    // emitter template applied at each grid position
    double emitter_omega = units::to_rad_per_fs(283.0, units::FrequencyUnit::THz);
    double dipole_moment = units::reference_dipole_cm;

    int threads = 0;             // 0 -> hardware concurrency
    bool store_series = false;   // keep per-sample series in the records
    double persist_window_fs = 100.0;
    double persist_tol = 1e-4;   // max population drift counting as "persistent"
};

struct WindowRange {
    double lo = 0.0, hi = 0.0;
    double span() const { return hi - lo; }
};

struct SweepRecord {
    double x1_nm = 0.0, x2_nm = 0.0;
    int lmax = 0;                        // ModeCountConvergence only
    double concurrence_eval = 0.0;       // at t_eval
    Populations pops_eval;
    double final_state_distance = -1.0;  // to (|gg><gg| + |psi-><psi-|)/2; convergence only
    double osc_frequency = 0.0;          // rad/fs; convergence only
    bool osc_no_crossings = false;
    bool persistent = false;  // concurrence flat within tol over the final window and nonzero

    // extremes over the final `persist_window_fs`
    WindowRange win_concurrence, win_eg, win_ge, win_psi_minus, win_psi_plus;

    PersistenceReport persistence;  // for the found dark state, or the psi- probe
    std::optional<double> single_mode_prediction;  // closed-form overlay (cylinder asymmetric)

    // filled only when store_series is set
    std::vector<double> t_series, c_series, eg_series, ge_series, pm_series, pp_series;
};

struct SweepResult {
    Scenario scenario;
    std::string label;  // distinguishes selector passes / file names
    std::vector<SweepRecord> records;
};

struct FrequencyEstimate {
    double omega_rad_fs = 0.0;
    bool no_crossings = false;
};

// Dominant oscillation frequency by crossing counting: rising crossings of the
// series' settled level (median of the late half) are one period apart, so the
// rate comes out insensitive to waveform shape and to slow amplitude decay.
// Crossing instants are linearly interpolated; fewer than two rising crossings
// sets no_crossings.
FrequencyEstimate oscillation_frequency(const std::vector<double>& times_fs,
                                        const std::vector<double>& values);

// Axial-mode families of increasing size, both emitters at the centre.
SweepResult run_mode_count_convergence(const SweepSpec& spec);

// EvenOnly / OddOnly / All passes over a symmetric displacement grid.
std::vector<SweepResult> run_parity_sweep(const SweepSpec& spec);

SweepResult run_cylinder_symmetric(const SweepSpec& spec);
SweepResult run_cylinder_asymmetric(const SweepSpec& spec);
std::vector<SweepResult> run_cylinder_sweeps(const SweepSpec& spec);  // both of the above

std::vector<SweepResult> run_sweep(const SweepSpec& spec);  // dispatch on scenario

}  // namespace subrad::experiments
