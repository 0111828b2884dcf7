#include "subrad/entanglement.hpp"

#include <algorithm>
#include <cmath>

namespace subrad {

Vector4cd psi_minus_vector() {
    Vector4cd v = Vector4cd::Zero();
    v[reduced::eg] = 1.0 / std::sqrt(2.0);
    v[reduced::ge] = -1.0 / std::sqrt(2.0);
    return v;
}

Vector4cd psi_plus_vector() {
    Vector4cd v = Vector4cd::Zero();
    v[reduced::eg] = 1.0 / std::sqrt(2.0);
    v[reduced::ge] = 1.0 / std::sqrt(2.0);
    return v;
}

namespace {

Matrix4cd spin_flip_matrix() {
    // sigma_y ⊗ sigma_y, anti-diagonal in the product basis
    Matrix4cd f = Matrix4cd::Zero();
    f(0, 3) = -1.0;
    f(1, 2) = 1.0;
    f(2, 1) = 1.0;
    f(3, 0) = -1.0;
    return f;
}

}  // namespace

double concurrence(const Matrix4cd& rho) {
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-8) throw InvalidState("concurrence: input is not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-8 || std::abs(rho.trace().imag()) > 1e-8)
        throw InvalidState("concurrence: input trace is not 1");

    const Matrix4cd r = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix4cd> es(r);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -1e-8) throw InvalidState("concurrence: input is not positive semidefinite");

    // Factor rho = M M^dag (clipping the numerically negative tail).  The
    // Wootters lambdas are then the singular values of the complex-symmetric
    // matrix B = M^T (sy x sy) M: with Ytilde = sy x sy,
    //   eig(rho rho_tilde) = eig(M M^dag Y M^* M^T Y) = eig(B^dag B) = sv(B)^2,
    // and the SVD delivers the square roots directly, without the half-digit
    // loss of taking sqrt of near-zero eigenvalues of a non-Hermitian product.
    Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0);
    ev /= ev.sum();
    const Matrix4cd m =
        es.eigenvectors() * ev.cwiseSqrt().asDiagonal().toDenseMatrix().cast<complex>();

    static const Matrix4cd flip = spin_flip_matrix();
    const Matrix4cd b = m.transpose() * flip * m;
    const Eigen::JacobiSVD<Matrix4cd> svd(b);
    const auto& lam = svd.singularValues();  // sorted descending
    const double c = lam[0] - lam[1] - lam[2] - lam[3];
    return std::clamp(c, 0.0, 1.0);
}

PersistenceReport check_persistence(const SystemModel& model, const DarkStateSpec& spec,
                                    double tol_rel) {
    const Vector2cd ab = spec.amplitudes();
    PersistenceReport rep;
    rep.tolerance = tol_rel * model.coupling().max_magnitude();
    for (int xi = 0; xi < model.mode_count(); ++xi) {
        const complex res = model.coupling().entry(xi, 0) * ab[0] +
                            model.coupling().entry(xi, 1) * ab[1];
        const bool ok = std::abs(res) < rep.tolerance ||
                        (rep.tolerance == 0.0 && res == complex(0, 0));
        rep.residuals.push_back(res);
        rep.satisfied.push_back(ok);
        if (!ok) {
            rep.all_satisfied = false;
            rep.violating_modes.push_back(model.mode(xi).id);
        }
    }
    if (rep.all_satisfied) rep.dark_state = spec;
    return rep;
}

std::optional<DarkStateSpec> find_dark_state(const SystemModel& model, double tol_rel) {
    const DarkStateSpec antisymmetric =
        DarkStateSpec::from_angles(units::pi / 4.0, units::pi);  // (|e,g> - |g,e>)/sqrt(2)
    if (model.mode_count() == 0) return antisymmetric;

    const Matrix& g = model.coupling().raw();
    if (model.coupling().max_magnitude() == 0.0) return antisymmetric;

    Eigen::JacobiSVD<Matrix> svd(g, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv[0];
    // with two columns the second singular value exists only when N >= 2
    const double smin = (sv.size() > 1) ? sv[1] : 0.0;
    if (smin >= tol_rel * smax) return std::nullopt;

    const Vector2cd v = svd.matrixV().col(1);
    return DarkStateSpec::from_amplitudes(v[0], v[1]);
}

SingleModeSteadyState single_mode_steady_state(complex alpha) {
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
        throw InvalidState("single-mode steady state needs finite alpha");
    const double a2 = std::norm(alpha);
    const double p = 1.0 / (1.0 + a2);

    Vector4cd dark = Vector4cd::Zero();
    dark[reduced::eg] = 1.0;
    dark[reduced::ge] = -alpha;
    dark /= std::sqrt(1.0 + a2);

    SingleModeSteadyState out;
    out.rho = p * (dark * dark.adjoint());
    out.rho(reduced::gg, reduced::gg) += 1.0 - p;
    out.dark_population = p;
    out.fidelity = std::norm(complex(1, 0) + alpha) / (2.0 * (1.0 + a2));
    return out;
}

Populations state_populations(const Matrix4cd& rho, const std::optional<DarkStateSpec>& spec) {
    auto expect = [&rho](const Vector4cd& v) { return (v.adjoint() * rho * v)[0].real(); };
    Populations p;
    p.eg = rho(reduced::eg, reduced::eg).real();
    p.ge = rho(reduced::ge, reduced::ge).real();
    p.psi_minus = expect(psi_minus_vector());
    p.psi_plus = expect(psi_plus_vector());
    if (spec) {
        p.dark = expect(spec->dark_vector());
        p.bright = expect(spec->bright_vector());
    }
    return p;
}

}  // namespace subrad
