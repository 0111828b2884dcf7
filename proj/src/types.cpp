#include "subrad/types.hpp"

#include <cmath>

namespace subrad {

namespace {

double wrap_two_pi(double x) {
    const double tau = 2.0 * units::pi;
    double y = std::fmod(x, tau);
    if (y < 0) y += tau;
    if (y >= tau) y -= tau;
    return y;
}

}  // namespace

// ---- descriptors -----------------------------------------------------------

void ModeDescriptor::validate() const {
    if (id.empty()) throw ConfigError("mode id must be non-empty");
    if (l < 1) throw ConfigError("mode '" + id + "': l must be >= 1, got " + std::to_string(l));
    if (std::abs(m) > l)
        throw ConfigError("mode '" + id + "': |m| must be <= l, got m=" + std::to_string(m));
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw ConfigError("mode '" + id + "': omega must be positive and finite");
    if (kappa < 0.0 || !std::isfinite(kappa))
        throw ConfigError("mode '" + id + "': kappa must be >= 0");
    if (const auto* f = std::get_if<SurrogateField>(&coupling_source)) {
        if (!(f->facet_radius_nm > 0.0))
            throw ConfigError("mode '" + id + "': facet radius must be positive");
        if (!std::isfinite(f->amplitude))
            throw ConfigError("mode '" + id + "': amplitude must be finite");
        const bool zero = std::abs(f->phase) < 1e-12;
        const bool pi = std::abs(f->phase - units::pi) < 1e-12;
        if (!zero && !pi)
            throw ConfigError("mode '" + id + "': surrogate phase must be 0 or pi");
        if (f->cylinder_radius_nm > 0.0) {
            if (f->suppression < 1.0)
                throw ConfigError("mode '" + id + "': suppression factor must be >= 1");
            if (!(f->wall_width_nm > 0.0))
                throw ConfigError("mode '" + id + "': wall width must be positive");
            if (f->cylinder_radius_nm > f->facet_radius_nm)
                throw ConfigError("mode '" + id + "': cylinder radius exceeds facet radius");
        }
    }
}

void EmitterDescriptor::validate() const {
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw ConfigError("emitter omega must be positive and finite");
    if (!(dipole_moment > 0.0))
        throw ConfigError("emitter dipole moment must be positive");
    if (std::abs(orientation.norm() - 1.0) > 1e-6)
        throw ConfigError("emitter orientation must be a unit vector");
    if (!position_nm.allFinite())
        throw ConfigError("emitter position must be finite");
}

// ---- coupling matrix --------------------------------------------------------

CouplingMatrix::CouplingMatrix(Matrix g) : g_(std::move(g)) {
    if (g_.cols() != 2) throw InvalidState("coupling matrix must have exactly 2 columns");
}

double CouplingMatrix::phase(int xi, int j) const {
    return wrap_two_pi(std::arg(g_(xi, j)));
}

double CouplingMatrix::max_magnitude() const {
    if (g_.rows() == 0) return 0.0;
    return g_.cwiseAbs().maxCoeff();
}

// ---- dark-state spec --------------------------------------------------------

DarkStateSpec DarkStateSpec::from_angles(double theta, double chi) {
    if (!(theta >= -units::pi / 2 - 1e-12 && theta <= units::pi / 2 + 1e-12))
        throw InvalidState("dark-state theta outside [-pi/2, pi/2]");
    DarkStateSpec s;
    if (theta < 0) {  // absorb sign into the relative phase
        theta = -theta;
        chi += units::pi;
    }
    s.theta_ = theta;
    s.chi_ = wrap_two_pi(chi);
    // chi is a global phase when either amplitude vanishes; canonicalize to 0
    if (s.theta_ == 0.0 || s.theta_ == units::pi / 2) s.chi_ = 0.0;
    return s;
}

DarkStateSpec DarkStateSpec::from_alpha(complex alpha) {
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
        throw InvalidState("dark-state alpha must be finite");
    DarkStateSpec s;
    s.theta_ = std::atan(std::abs(alpha));
    s.chi_ = (alpha == complex(0, 0)) ? 0.0 : wrap_two_pi(std::arg(-alpha));
    return s;
}

DarkStateSpec DarkStateSpec::from_amplitudes(complex a, complex b) {
    const double na = std::abs(a), nb = std::abs(b);
    if (na == 0.0 && nb == 0.0)
        throw InvalidState("dark-state amplitudes must not both vanish");
    DarkStateSpec s;
    s.theta_ = std::atan2(nb, na);
    s.chi_ = (na > 0.0 && nb > 0.0) ? wrap_two_pi(std::arg(b * std::conj(a))) : 0.0;
    return s;
}

bool DarkStateSpec::alpha_finite() const { return theta_ < units::pi / 2; }

complex DarkStateSpec::alpha() const {
    if (!alpha_finite())
        throw InvalidState("alpha is infinite for the |g,e> dark state (theta = pi/2)");
    return -std::polar(std::tan(theta_), chi_);
}

Vector2cd DarkStateSpec::amplitudes() const {
    return Vector2cd(std::cos(theta_), std::polar(std::sin(theta_), chi_));
}

Vector4cd DarkStateSpec::dark_vector() const {
    Vector4cd v = Vector4cd::Zero();
    v[reduced::eg] = std::cos(theta_);
    v[reduced::ge] = std::polar(std::sin(theta_), chi_);
    return v;
}

Vector4cd DarkStateSpec::bright_vector() const {
    Vector4cd v = Vector4cd::Zero();
    v[reduced::eg] = -std::polar(std::sin(theta_), -chi_);
    v[reduced::ge] = std::cos(theta_);
    return v;
}

// ---- quantum state ----------------------------------------------------------

QuantumState QuantumState::compact(Vector psi, double ground_population) {
    QuantumState st;
    st.compact_ = Compact{std::move(psi), ground_population};
    st.validate();
    return st;
}

QuantumState QuantumState::excited_emitter(const SystemModel& model, int j) {
    if (j != 1 && j != 2) throw InvalidState("emitter index must be 1 or 2");
    Vector psi = Vector::Zero(model.dim() - 1);
    psi[j - 1] = 1.0;
    return compact(std::move(psi), 0.0);
}

QuantumState QuantumState::ground(const SystemModel& model) {
    return compact(Vector::Zero(model.dim() - 1), 1.0);
}

QuantumState QuantumState::dense(Matrix rho) {
    QuantumState st;
    st.dense_ = std::move(rho);
    st.validate();
    return st;
}

const Vector& QuantumState::amplitudes() const {
    if (!compact_) throw InvalidState("state is not in compact form");
    return compact_->psi;
}

double QuantumState::ground_population() const {
    if (!compact_) throw InvalidState("state is not in compact form");
    return compact_->p_ground;
}

const Matrix& QuantumState::density() const {
    if (!dense_) throw InvalidState("state is not in dense form");
    return *dense_;
}

Matrix QuantumState::to_density() const {
    if (dense_) return *dense_;
    const int n = static_cast<int>(compact_->psi.size());
    Matrix rho = Matrix::Zero(n + 1, n + 1);
    rho(0, 0) = compact_->p_ground;
    rho.block(1, 1, n, n) = compact_->psi * compact_->psi.adjoint();
    return rho;
}

int QuantumState::dim() const {
    if (dense_) return static_cast<int>(dense_->rows());
    return static_cast<int>(compact_->psi.size()) + 1;
}

void QuantumState::validate() const {
    if (compact_) {
        if (compact_->psi.size() < 2)
            throw InvalidState("compact state needs at least the two emitter amplitudes");
        if (compact_->p_ground < -1e-10)
            throw InvalidState("ground population is negative");
        const double total = compact_->p_ground + compact_->psi.squaredNorm();
        if (std::abs(total - 1.0) > 1e-10)
            throw InvalidState("compact state populations do not sum to 1");
    } else if (dense_) {
        if (dense_->rows() != dense_->cols())
            throw InvalidState("density matrix must be square");
        if (dense_->rows() < 3)
            throw InvalidState("density matrix smaller than the two-emitter sector");
        validate_density(*dense_, 1e-12, 1e-10, "state density matrix");
    } else {
        throw InvalidState("empty quantum state");
    }
}

void validate_density(const Matrix& rho, double herm_tol, double trace_tol, const char* what) {
    if (rho.rows() != rho.cols()) throw InvalidState(std::string(what) + ": not square");
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm > herm_tol)
        throw InvalidState(std::string(what) + ": not Hermitian (max deviation " +
                           std::to_string(herm) + ")");
    const double tr = rho.trace().real();
    if (std::abs(tr - 1.0) > trace_tol)
        throw InvalidState(std::string(what) + ": trace " + std::to_string(tr) + " != 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()),
                                             Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-8)
        throw InvalidState(std::string(what) + ": negative eigenvalue " +
                           std::to_string(es.eigenvalues().minCoeff()));
}

double trace_distance(const Matrix4cd& rho, const Matrix4cd& sigma) {
    const Matrix4cd diff = 0.5 * ((rho - sigma) + (rho - sigma).adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix4cd> es(diff, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace subrad
