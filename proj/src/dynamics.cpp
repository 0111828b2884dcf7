#include "subrad/dynamics.hpp"

#include <cmath>

#include "subrad/ode.hpp"

namespace subrad {

namespace {

std::vector<double> output_times(double t_end, double dt) {
    if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be >= 0");
    if (!(dt > 0.0)) throw std::invalid_argument("dt_out must be > 0");
    std::vector<double> ts;
    const long n = static_cast<long>(std::floor(t_end / dt + 1e-9));
    ts.reserve(static_cast<size_t>(n) + 2);
    for (long k = 0; k <= n; ++k) ts.push_back(static_cast<double>(k) * dt);
    if (ts.back() < t_end - 1e-9 * std::max(1.0, t_end)) ts.push_back(t_end);
    return ts;
}

// One-excitation content of a state: pure columns Psi with rho11 = Psi Psi^dag,
// plus the coherence column against the ground sector.
struct SectorColumns {
    Matrix psi;    // n1 x m
    Vector coh;    // n1, rho(1.., 0); zero for compact states
    bool pure;     // single unit-weight column (compact input)
};

SectorColumns split_sectors(const SystemModel& model, const QuantumState& initial) {
    const int n1 = model.dim() - 1;
    SectorColumns sc;
    sc.coh = Vector::Zero(n1);
    if (initial.is_compact()) {
        if (initial.amplitudes().size() != n1)
            throw InvalidState("state dimension does not match the model");
        sc.psi = initial.amplitudes();
        sc.pure = true;
        return sc;
    }
    const Matrix& rho = initial.density();
    if (rho.rows() != model.dim())
        throw InvalidState("state dimension does not match the model");
    const Matrix rho11 = 0.5 * (rho.block(1, 1, n1, n1) +
                                rho.block(1, 1, n1, n1).adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho11);
    int m = 0;
    for (int k = 0; k < n1; ++k)
        if (es.eigenvalues()[k] > 1e-14) ++m;
    sc.psi = Matrix(n1, std::max(m, 1));
    sc.psi.setZero();
    int col = 0;
    for (int k = 0; k < n1; ++k)
        if (es.eigenvalues()[k] > 1e-14)
            sc.psi.col(col++) = std::sqrt(es.eigenvalues()[k]) * es.eigenvectors().col(k);
    sc.coh = rho.block(1, 0, n1, 1);
    sc.pure = false;
    return sc;
}

// reduced matrix from propagated columns; ee stays empty, the gg population is
// fixed by trace preservation (jumps and the initial ground weight both land there)
Matrix4cd reduce_from_columns(const Matrix& psi, const Vector& coh) {
    Matrix4cd rho4 = Matrix4cd::Zero();
    const complex r00 = psi.row(0).dot(psi.row(0));  // dot conjugates the lhs
    const complex r11 = psi.row(1).dot(psi.row(1));
    const complex r01 = psi.row(1).dot(psi.row(0));  // rho11(0,1) = sum_k psi0 conj(psi1)
    rho4(reduced::eg, reduced::eg) = r00.real();
    rho4(reduced::ge, reduced::ge) = r11.real();
    rho4(reduced::eg, reduced::ge) = r01;
    rho4(reduced::ge, reduced::eg) = std::conj(r01);
    rho4(reduced::eg, reduced::gg) = coh[0];
    rho4(reduced::gg, reduced::eg) = std::conj(coh[0]);
    rho4(reduced::ge, reduced::gg) = coh[1];
    rho4(reduced::gg, reduced::ge) = std::conj(coh[1]);
    rho4(reduced::gg, reduced::gg) = 1.0 - r00.real() - r11.real();
    return rho4;
}

void append_sample(Trajectory& tr, double t, const Matrix4cd& rho4, double vacuum,
                   const std::optional<DarkStateSpec>& spec) {
    tr.times_fs.push_back(t);
    tr.reduced_rho.push_back(rho4);
    tr.populations.push_back(state_populations(rho4, spec));
    tr.concurrence.push_back(concurrence(rho4));
    tr.ground_population.push_back(vacuum);
}

Matrix4cd reduce_dense(const Matrix& rho) {
    const int n1 = static_cast<int>(rho.rows()) - 1;
    Matrix4cd rho4 = Matrix4cd::Zero();
    rho4(reduced::eg, reduced::eg) = rho(1, 1);
    rho4(reduced::ge, reduced::ge) = rho(2, 2);
    rho4(reduced::eg, reduced::ge) = rho(1, 2);
    rho4(reduced::ge, reduced::eg) = rho(2, 1);
    rho4(reduced::eg, reduced::gg) = rho(1, 0);
    rho4(reduced::gg, reduced::eg) = rho(0, 1);
    rho4(reduced::ge, reduced::gg) = rho(2, 0);
    rho4(reduced::gg, reduced::ge) = rho(0, 2);
    complex gg = rho(0, 0);
    for (int xi = 2; xi < n1; ++xi) gg += rho(1 + xi, 1 + xi);  // photon branches
    rho4(reduced::gg, reduced::gg) = gg.real();
    return rho4;
}

}  // namespace

Matrix4cd reduce_to_emitters(const QuantumState& state) {
    if (state.is_compact()) {
        const Vector& psi = state.amplitudes();
        Vector coh = Vector::Zero(psi.size());
        return reduce_from_columns(psi, coh);
    }
    return reduce_dense(state.density());
}

Trajectory evolve_exact(const SystemModel& model, const QuantumState& initial,
                        const PropagatorConfig& config) {
    initial.validate();
    const int n1 = model.dim() - 1;
    SectorColumns sc = split_sectors(model, initial);
    const bool has_coh = sc.coh.cwiseAbs().maxCoeff() > 0.0;

    // propagate Psi and the ground coherence with the same e^{-i H_eff t}
    Matrix cols(n1, sc.psi.cols() + (has_coh ? 1 : 0));
    cols.leftCols(sc.psi.cols()) = sc.psi;
    if (has_coh) cols.col(cols.cols() - 1) = sc.coh;

    const Matrix heff = one_excitation_effective_hamiltonian(model, config.frame);
    const std::vector<double> times = output_times(config.t_end_fs, config.dt_out_fs);

    Trajectory tr;
    tr.times_fs.reserve(times.size());

    auto sample = [&](double t, const Matrix& cols_t) {
        Matrix psi_t = cols_t.leftCols(sc.psi.cols());
        Vector coh_t = has_coh ? Vector(cols_t.col(cols_t.cols() - 1)) : Vector::Zero(n1);
        // everything outside the excited columns has already relaxed to |g,g>|vac>
        append_sample(tr, t, reduce_from_columns(psi_t, coh_t),
                      1.0 - psi_t.squaredNorm(), config.dark_spec);
    };

    Eigen::ComplexEigenSolver<Matrix> ces(heff, /*computeEigenvectors=*/true);
    bool eig_ok = ces.info() == Eigen::Success;
    if (eig_ok) {
        Eigen::JacobiSVD<Matrix> svd(ces.eigenvectors());
        const double smin = svd.singularValues().minCoeff();
        const double smax = svd.singularValues().maxCoeff();
        eig_ok = smin > 0.0 && smax / smin < config.eig_condition_limit;
    }

    if (eig_ok) {
        const Matrix& v = ces.eigenvectors();
        const Vector& lam = ces.eigenvalues();
        const Matrix w = v.partialPivLu().solve(cols);
        Vector phases(n1);
        for (double t : times) {
            for (int i = 0; i < n1; ++i) phases[i] = std::exp(complex(0, -1) * lam[i] * t);
            sample(t, v * (phases.asDiagonal() * w));
        }
    } else {
        tr.used_integrator_fallback = true;
        ode::Options opt;
        opt.rtol = config.rtol;
        Vector y(n1 * cols.cols());
        Eigen::Map<Matrix>(y.data(), n1, cols.cols()) = cols;
        auto rhs = [&](double, const Vector& yy) {
            Eigen::Map<const Matrix> c(yy.data(), n1, cols.cols());
            Vector dy(yy.size());
            Eigen::Map<Matrix>(dy.data(), n1, cols.cols()) = complex(0, -1) * (heff * c);
            return dy;
        };
        double t_prev = 0.0;
        sample(0.0, cols);
        for (size_t i = 1; i < times.size(); ++i) {
            ode::integrate_dopri5(rhs, y, t_prev, times[i], opt);
            t_prev = times[i];
            sample(times[i], Eigen::Map<Matrix>(y.data(), n1, cols.cols()));
        }
    }
    return tr;
}

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return k;
}

}  // namespace

Trajectory evolve_lindblad(const SystemModel& model, const QuantumState& initial,
                           const PropagatorConfig& config) {
    initial.validate();
    if (model.mode_count() > config.lindblad_mode_guard)
        throw ConfigError("DenseLindblad backend is limited to " +
                          std::to_string(config.lindblad_mode_guard) +
                          " modes; use the exact backend");
    const int d = model.dim();
    Matrix rho0 = initial.to_density();
    if (rho0.rows() != d) throw InvalidState("state dimension does not match the model");

    const Matrix h = build_hamiltonian(model, config.frame);
    const Matrix id = Matrix::Identity(d, d);

    // vec(rho) column-major; vec(A rho B) = (B^T ⊗ A) vec(rho)
    Matrix liou = complex(0, -1) * (kron(id, h) - kron(h.transpose(), id));
    for (const auto& dis : build_dissipators(model)) {
        const Matrix& a = dis.jump;
        const Matrix n = a.adjoint() * a;
        liou += dis.rate * (kron(a.conjugate(), a) -
                            0.5 * kron(id, n) - 0.5 * kron(n.transpose(), id));
    }

    const std::vector<double> times = output_times(config.t_end_fs, config.dt_out_fs);
    ode::Options opt;
    opt.rtol = config.rtol;

    Vector y(d * d);
    Eigen::Map<Matrix>(y.data(), d, d) = rho0;
    auto rhs = [&](double, const Vector& yy) { return Vector(liou * yy); };

    Trajectory tr;
    auto sample = [&](double t) {
        Matrix rho = Eigen::Map<Matrix>(y.data(), d, d);
        rho = 0.5 * (rho + rho.adjoint());  // observables from the hermitized copy
        append_sample(tr, t, reduce_dense(rho), rho(0, 0).real(), config.dark_spec);
    };

    sample(0.0);
    double t_prev = 0.0;
    for (size_t i = 1; i < times.size(); ++i) {
        ode::integrate_dopri5(rhs, y, t_prev, times[i], opt);
        t_prev = times[i];
        sample(times[i]);
    }
    return tr;
}

Trajectory evolve(const SystemModel& model, const QuantumState& initial,
                  const PropagatorConfig& config) {
    if (config.backend == Backend::DenseLindblad)
        return evolve_lindblad(model, initial, config);
    return evolve_exact(model, initial, config);
}

Matrix4cd steady_state(const SystemModel& model, const QuantumState& initial) {
    initial.validate();
    for (const auto& m : model.modes())
        if (!(m.kappa > 0.0))
            throw InvalidState("steady state requires kappa > 0 for every mode (mode '" +
                               m.id + "')");

    const int n1 = model.dim() - 1;
    const Matrix heff = one_excitation_effective_hamiltonian(model, Frame::RotatingAtEmitter);

    // dark span = null space of H_eff; dark vectors carry no photon weight, so the
    // orthogonal projector coincides with the spectral one
    Eigen::JacobiSVD<Matrix> svd(heff, Eigen::ComputeFullV);
    const double smax = svd.singularValues().maxCoeff();
    Matrix p = Matrix::Zero(n1, n1);
    if (smax == 0.0) {
        p.setIdentity();  // nothing couples, nothing decays
    } else {
        for (int k = 0; k < n1; ++k) {
            if (svd.singularValues()[k] < 1e-10 * smax) {
                const Vector v = svd.matrixV().col(k);
                p += v * v.adjoint();
            }
        }
    }

    SectorColumns sc = split_sectors(model, initial);
    const Matrix psi_inf = p * sc.psi;
    const Vector coh_inf = p * sc.coh;
    return reduce_from_columns(psi_inf, coh_inf);
}

}  // namespace subrad
