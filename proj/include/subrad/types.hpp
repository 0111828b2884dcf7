#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "subrad/errors.hpp"
#include "subrad/units.hpp"

namespace subrad {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Eigen::Matrix4cd;
using Eigen::Vector2cd;
using Eigen::Vector3d;
using Eigen::Vector4cd;

// Reduced two-emitter basis, fixed order |g,g>, |g,e>, |e,g>, |e,e>.
namespace reduced {
inline constexpr int gg = 0;
inline constexpr int ge = 1;
inline constexpr int eg = 2;
inline constexpr int ee = 3;
}  // namespace reduced

enum class Parity { Even, Odd };

// Explicit couplings, one complex g per emitter (rad/fs).
struct DirectCoupling {
    std::array<complex, 2> g{complex(0, 0), complex(0, 0)};
    bool operator==(const DirectCoupling&) const = default;
};

// Analytic E_z profile of one (l,m) gap mode at the gap mid-plane:
//   g(r,phi) = amplitude * Jhat_|m|(k_l r) * cos(m phi) * e^{i phase} * dipole_factor
// with k_l pinned so the profile has exactly l radial anti-nodes inside the
// facet and vanishes at its edge; Jhat is J_|m| scaled to unit peak so that
// `amplitude` is the coupling of a z-aligned reference dipole at the field max.
struct SurrogateField {
    double facet_radius_nm = 8.0;
    double amplitude = 0.05;  // rad/fs at field maximum, reference dipole
    double phase = 0.0;       // 0 or pi

    // hollow-cylinder shaping; inactive when cylinder_radius_nm <= 0
    double cylinder_radius_nm = -1.0;
    double suppression = 1.0;    // in-cylinder divisor for non-dominant modes
    double wall_width_nm = 2.0;  // ramp zone below the wall
    bool dominant = false;       // the isolated cylinder mode

    bool operator==(const SurrogateField&) const = default;
};

struct ModeDescriptor {
    std::string id;
    int l = 1;           // radial anti-node count, >= 1
    int m = 0;           // azimuthal index, |m| <= l
    double omega = 0.0;  // rad/fs
    double kappa = 0.0;  // energy decay rate, rad/fs, >= 0
    std::variant<DirectCoupling, SurrogateField> coupling_source = DirectCoupling{};

    void validate() const;  // throws ConfigError
    bool operator==(const ModeDescriptor&) const = default;
};

struct EmitterDescriptor {
    double omega = 0.0;          // transition frequency, rad/fs
    double dipole_moment = units::reference_dipole_cm;  // C*m
    Vector3d orientation{0, 0, 1};
    Vector3d position_nm{0, 0, 0};

    void validate() const;
    bool operator==(const EmitterDescriptor& o) const {
        return omega == o.omega && dipole_moment == o.dipole_moment &&
               orientation == o.orientation && position_nm == o.position_nm;
    }
};

// N x 2 complex couplings g_{xi j} (mode xi, emitter j), rad/fs.
class CouplingMatrix {
public:
    CouplingMatrix() : g_(0, 2) {}
    explicit CouplingMatrix(Matrix g);

    int mode_count() const { return static_cast<int>(g_.rows()); }
    complex entry(int xi, int j) const { return g_(xi, j); }
    double magnitude(int xi, int j) const { return std::abs(g_(xi, j)); }
    double phase(int xi, int j) const;  // in [0, 2*pi)
    double max_magnitude() const;
    const Matrix& raw() const { return g_; }

private:
    Matrix g_;
};

// Dark-state ray  |psi_D> = cos(theta)|e,g> + e^{i chi} sin(theta)|g,e>,
// stored canonically with theta in [0, pi/2], chi in [0, 2*pi).
// Equivalent ratio form |psi_D> ∝ |e,g> - alpha|g,e>, alpha = -e^{i chi} tan(theta).
class DarkStateSpec {
public:
    DarkStateSpec() = default;  // |e,g>

    static DarkStateSpec from_angles(double theta, double chi);  // theta in [-pi/2, pi/2]
    static DarkStateSpec from_alpha(complex alpha);
    // un-normalized amplitudes (a, b) on (|e,g>, |g,e>); must not both vanish
    static DarkStateSpec from_amplitudes(complex a, complex b);

    double theta() const { return theta_; }
    double chi() const { return chi_; }

    bool alpha_finite() const;  // false exactly when theta = pi/2 (|g,e> ray)
    complex alpha() const;      // throws InvalidState when not finite

    Vector2cd amplitudes() const;      // (cos theta, e^{i chi} sin theta)
    Vector4cd dark_vector() const;     // in the reduced 4-basis
    Vector4cd bright_vector() const;   // orthonormal complement in the span

    bool operator==(const DarkStateSpec&) const = default;

private:
    double theta_ = 0.0;
    double chi_ = 0.0;
};

// Two emitters + N lossy modes restricted to the 0/1-excitation sectors.
// Hilbert layout (dimension N+3), frozen:
//   0        |g,g> ⊗ |0>
//   1        |e,g> ⊗ |0>
//   2        |g,e> ⊗ |0>
//   3 + xi   |g,g> ⊗ |1_xi>, modes in declaration order
class SystemModel {
public:
    static SystemModel build(std::vector<ModeDescriptor> modes,
                             std::array<EmitterDescriptor, 2> emitters);

    int mode_count() const { return static_cast<int>(modes_.size()); }
    int dim() const { return mode_count() + 3; }

    static constexpr int ground_index() { return 0; }
    static int emitter_index(int j);       // j in {1, 2} -> 1, 2
    int mode_index(int xi) const;          // xi in [0, N) -> 3 + xi

    std::string basis_label(int index) const;   // "gg0", "eg0", "ge0", "gg1:<id>"
    int basis_index(const std::string& label) const;

    const std::vector<ModeDescriptor>& modes() const { return modes_; }
    const ModeDescriptor& mode(int xi) const;
    const std::array<EmitterDescriptor, 2>& emitters() const { return emitters_; }
    const EmitterDescriptor& emitter(int j) const;  // j in {1, 2}
    const CouplingMatrix& coupling() const { return coupling_; }

    // rotating-frame reference, the emitters' (mean) transition frequency
    double reference_frequency() const;

private:
    SystemModel() = default;
    std::vector<ModeDescriptor> modes_;
    std::array<EmitterDescriptor, 2> emitters_;
    CouplingMatrix coupling_;
};

// State over the model's Hilbert space: either the compact exact-backend form
// (one-excitation amplitudes + ground population, no cross-sector coherence)
// or a dense (N+3) x (N+3) density matrix.
class QuantumState {
public:
    // psi indexed like the full basis minus the ground row: [eg, ge, modes...]
    static QuantumState compact(Vector psi, double ground_population);
    static QuantumState excited_emitter(const SystemModel& model, int j);  // j in {1, 2}
    static QuantumState ground(const SystemModel& model);
    static QuantumState dense(Matrix rho);

    bool is_compact() const { return compact_.has_value(); }
    const Vector& amplitudes() const;      // compact only
    double ground_population() const;      // compact only
    const Matrix& density() const;         // dense only
    Matrix to_density() const;             // either form
    int dim() const;                       // N+3

    void validate() const;  // throws InvalidState

private:
    struct Compact {
        Vector psi;
        double p_ground;
    };
    std::optional<Compact> compact_;
    std::optional<Matrix> dense_;
};

// Hermitian within herm_tol (max-abs), trace 1 within trace_tol, eigenvalues >= -1e-8.
void validate_density(const Matrix& rho, double herm_tol, double trace_tol, const char* what);

// (1/2)||rho - sigma||_1
double trace_distance(const Matrix4cd& rho, const Matrix4cd& sigma);

}  // namespace subrad
