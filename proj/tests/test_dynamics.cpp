#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "subrad/dynamics.hpp"

using namespace subrad;

namespace {

ModeDescriptor direct_mode(const std::string& id, double omega, double kappa, complex g1,
                           complex g2) {
    ModeDescriptor mode;
    mode.id = id;
    mode.omega = omega;
    mode.kappa = kappa;
    mode.coupling_source = DirectCoupling{{g1, g2}};
    return mode;
}

EmitterDescriptor emitter(double omega = 1.778) {
    EmitterDescriptor e;
    e.omega = omega;
    return e;
}

SystemModel one_mode(double kappa, complex g1, complex g2, double detuning = 0.0) {
    return SystemModel::build({direct_mode("M", 1.778 + detuning, kappa, g1, g2)},
                              {emitter(), emitter()});
}

SystemModel random_model(std::mt19937_64& gen, int n_modes) {
    std::uniform_real_distribution<double> detu(-0.05, 0.05);
    std::uniform_real_distribution<double> kap(0.05, 0.12);
    std::uniform_real_distribution<double> mag(0.015, 0.05);
    std::vector<ModeDescriptor> modes;
    for (int i = 0; i < n_modes; ++i)
        modes.push_back(direct_mode("m" + std::to_string(i), 1.778 + detu(gen), kap(gen),
                                    mag(gen) * testutil::random_unit_complex(gen),
                                    mag(gen) * testutil::random_unit_complex(gen)));
    return SystemModel::build(std::move(modes), {emitter(), emitter()});
}

QuantumState random_dense_state(const SystemModel& model, std::mt19937_64& gen) {
    const int d = model.dim();
    const Matrix g = testutil::ginibre(d, 2, gen);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    rho = 0.5 * (rho + rho.adjoint());
    return QuantumState::dense(std::move(rho));
}

}  // namespace

TEST_SUITE_BEGIN("dynamics");

TEST_CASE("lossless resonant exchange follows the closed-form oscillation") {
    const double g = 0.05;
    auto model = one_mode(0.0, g, g);
    testutil::SymmetricRabiOracle oracle{g};

    PropagatorConfig cfg;
    cfg.t_end_fs = 200.0;
    cfg.dt_out_fs = 0.5;
    const auto tr = evolve_exact(model, QuantumState::excited_emitter(model, 1), cfg);
    CHECK_FALSE(tr.used_integrator_fallback);
    REQUIRE(tr.times_fs.size() == 401);

    for (size_t i = 0; i < tr.times_fs.size(); ++i) {
        const double t = tr.times_fs[i];
        const auto& p = tr.populations[i];
        CHECK(p.eg == doctest::Approx(oracle.pop_eg(t)).epsilon(1e-9).scale(1.0));
        CHECK(p.ge == doctest::Approx(oracle.pop_ge(t)).epsilon(1e-9).scale(1.0));
        CHECK(p.psi_minus == doctest::Approx(oracle.pop_psi_minus()).epsilon(1e-9).scale(1.0));
        CHECK(p.psi_plus == doctest::Approx(oracle.pop_psi_plus(t)).epsilon(1e-9).scale(1.0));
        const double gg = tr.reduced_rho[i](reduced::gg, reduced::gg).real();
        CHECK(gg == doctest::Approx(oracle.pop_photon(t)).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("an emitter decoupled from every mode keeps its excitation") {
    auto model = one_mode(0.1, 0.05, 0.0);
    PropagatorConfig cfg;
    cfg.t_end_fs = 400.0;
    cfg.dt_out_fs = 10.0;
    const auto tr = evolve_exact(model, QuantumState::excited_emitter(model, 2), cfg);
    for (size_t i = 0; i < tr.times_fs.size(); ++i) {
        CHECK(tr.populations[i].ge == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(tr.concurrence[i] < 1e-10);
    }
}

TEST_CASE("balanced lossy coupling funnels into half ground, half antisymmetric") {
    auto model = one_mode(0.1, 0.02, 0.02);
    PropagatorConfig cfg;
    cfg.t_end_fs = 2000.0;
    cfg.dt_out_fs = 500.0;
    cfg.dark_spec = DarkStateSpec::from_alpha(complex(1.0, 0.0));
    const auto tr = evolve_exact(model, QuantumState::excited_emitter(model, 1), cfg);

    Matrix4cd target = 0.5 * psi_minus_vector() * psi_minus_vector().adjoint();
    target(reduced::gg, reduced::gg) += 0.5;
    CHECK(trace_distance(tr.reduced_rho.back(), target) < 1e-8);
    CHECK(tr.concurrence.back() == doctest::Approx(0.5).epsilon(1e-8));
    REQUIRE(tr.populations.back().dark.has_value());
    CHECK(*tr.populations.back().dark == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(*tr.populations.back().bright < 1e-8);

    // the same ray is found structurally and satisfies every mode condition
    const auto found = find_dark_state(model);
    REQUIRE(found.has_value());
    CHECK(std::abs(found->alpha() - complex(1.0, 0.0)) < 1e-10);
    CHECK(check_persistence(model, *found).all_satisfied);
}

TEST_CASE("ground state is stationary for both backends") {
    auto model = one_mode(0.08, 0.03, complex(0.0, 0.02));
    PropagatorConfig cfg;
    cfg.t_end_fs = 50.0;
    cfg.dt_out_fs = 10.0;
    for (Backend b : {Backend::ExactSingleExcitation, Backend::DenseLindblad}) {
        cfg.backend = b;
        const auto tr = evolve(model, QuantumState::ground(model), cfg);
        for (const auto& rho : tr.reduced_rho) {
            CHECK(rho(reduced::gg, reduced::gg).real() == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(rho.cwiseAbs().maxCoeff() == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("backends agree on random models and states") {
    auto gen = testutil::rng(2024);
    PropagatorConfig cfg;
    cfg.t_end_fs = 150.0;
    cfg.dt_out_fs = 5.0;
    for (int trial = 0; trial < 6; ++trial) {
        auto model = random_model(gen, 1 + trial % 3);
        const QuantumState initial = (trial % 2 == 0)
                                         ? QuantumState::excited_emitter(model, 1)
                                         : random_dense_state(model, gen);
        const auto exact = evolve_exact(model, initial, cfg);
        const auto lind = evolve_lindblad(model, initial, cfg);
        REQUIRE(exact.times_fs.size() == lind.times_fs.size());
        double worst = 0.0;
        for (size_t i = 0; i < exact.times_fs.size(); ++i)
            worst = std::max(worst,
                             (exact.reduced_rho[i] - lind.reduced_rho[i]).cwiseAbs().maxCoeff());
        CHECK(worst < 1e-7);
    }
}

TEST_CASE("master-equation integration conserves the trace") {
    auto gen = testutil::rng(9);
    auto model = random_model(gen, 2);
    PropagatorConfig cfg;
    cfg.t_end_fs = 120.0;
    cfg.dt_out_fs = 4.0;
    const auto tr = evolve_lindblad(model, random_dense_state(model, gen), cfg);
    for (const auto& rho : tr.reduced_rho)
        CHECK(std::abs(rho.trace() - complex(1, 0)) < 1e-9);
}

TEST_CASE("ground population never decreases under loss") {
    auto gen = testutil::rng(17);
    auto model = random_model(gen, 3);
    PropagatorConfig cfg;
    cfg.t_end_fs = 300.0;
    cfg.dt_out_fs = 1.0;
    const auto tr = evolve_exact(model, QuantumState::excited_emitter(model, 1), cfg);
    REQUIRE(tr.ground_population.size() == tr.times_fs.size());
    for (size_t i = 1; i < tr.times_fs.size(); ++i) {
        CHECK(tr.ground_population[i] >= tr.ground_population[i - 1] - 1e-12);
        // the reduced |g,g> entry also carries transient photon weight on top
        CHECK(tr.reduced_rho[i](reduced::gg, reduced::gg).real() >=
              tr.ground_population[i] - 1e-12);
    }
}

TEST_CASE("forced stepping fallback reproduces the spectral path") {
    auto gen = testutil::rng(33);
    auto model = random_model(gen, 2);
    PropagatorConfig cfg;
    cfg.t_end_fs = 120.0;
    cfg.dt_out_fs = 6.0;
    const auto spectral = evolve_exact(model, QuantumState::excited_emitter(model, 1), cfg);
    CHECK_FALSE(spectral.used_integrator_fallback);

    cfg.eig_condition_limit = 0.0;  // no basis is ever accepted
    const auto stepped = evolve_exact(model, QuantumState::excited_emitter(model, 1), cfg);
    CHECK(stepped.used_integrator_fallback);
    for (size_t i = 0; i < spectral.times_fs.size(); ++i)
        CHECK((spectral.reduced_rho[i] - stepped.reduced_rho[i]).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("reduced matrices are frame-independent for sector-diagonal states") {
    auto model = one_mode(0.06, complex(0.02, 0.01), 0.03, 0.04);
    PropagatorConfig cfg;
    cfg.t_end_fs = 80.0;
    cfg.dt_out_fs = 2.0;

    for (Backend b : {Backend::ExactSingleExcitation, Backend::DenseLindblad}) {
        cfg.backend = b;
        cfg.frame = Frame::RotatingAtEmitter;
        const auto rot = evolve(model, QuantumState::excited_emitter(model, 1), cfg);
        cfg.frame = Frame::Lab;
        const auto lab = evolve(model, QuantumState::excited_emitter(model, 1), cfg);
        for (size_t i = 0; i < rot.times_fs.size(); ++i)
            CHECK((rot.reduced_rho[i] - lab.reduced_rho[i]).cwiseAbs().maxCoeff() < 2e-7);
    }
}

TEST_CASE("partial trace handles compact and dense forms") {
    auto model = one_mode(0.1, 0.02, 0.02);  // dim 4: gg0, eg0, ge0, gg1
    SUBCASE("compact") {
        Vector psi(3);
        psi << complex(0.6, 0.0), complex(0.0, 0.48), complex(0.2, 0.0);
        const double pg = 1.0 - psi.squaredNorm();
        const auto rho4 = reduce_to_emitters(QuantumState::compact(psi, pg));
        CHECK(rho4(reduced::eg, reduced::eg).real() == doctest::Approx(0.36).epsilon(1e-14));
        CHECK(rho4(reduced::ge, reduced::ge).real() == doctest::Approx(0.2304).epsilon(1e-14));
        CHECK(std::abs(rho4(reduced::eg, reduced::ge) - complex(0.0, -0.288)) < 1e-14);
        CHECK(rho4(reduced::gg, reduced::gg).real() ==
              doctest::Approx(pg + 0.04).epsilon(1e-12));
        CHECK(rho4(reduced::ee, reduced::ee) == complex(0, 0));
        CHECK(std::abs(rho4.trace() - complex(1, 0)) < 1e-14);
    }
    SUBCASE("dense keeps ground coherences, folds photon weight") {
        Vector full(4);
        full << 0.5, complex(0.0, 0.5), 0.5, 0.5;  // |gg0>, |eg0>, |ge0>, |gg1>
        Matrix rho = full * full.adjoint();
        const auto rho4 = reduce_to_emitters(QuantumState::dense(rho));
        CHECK(rho4(reduced::gg, reduced::gg).real() == doctest::Approx(0.5).epsilon(1e-14));
        // (eg, ge) coherence comes from full indices (1, 2)
        CHECK(std::abs(rho4(reduced::eg, reduced::ge) - complex(0.0, 0.25)) < 1e-15);
        // ground-excited coherence survives as (eg, gg) from full (1, 0)
        CHECK(std::abs(rho4(reduced::eg, reduced::gg) - complex(0.0, 0.25)) < 1e-15);
        CHECK(std::abs(rho4(reduced::ge, reduced::gg) - complex(0.25, 0.0)) < 1e-15);
        CHECK(std::abs(rho4.trace() - complex(1, 0)) < 1e-14);
    }
}

TEST_CASE("projection onto the undamped span matches long-time evolution") {
    auto gen = testutil::rng(71);
    PropagatorConfig cfg;
    cfg.t_end_fs = 1e5;
    cfg.dt_out_fs = 5e4;
    for (int trial = 0; trial < 6; ++trial) {
        auto model = random_model(gen, 1 + trial % 3);
        const QuantumState initial = (trial % 2 == 0)
                                         ? QuantumState::excited_emitter(model, 1)
                                         : random_dense_state(model, gen);
        const Matrix4cd projected = steady_state(model, initial);
        const auto tr = evolve_exact(model, initial, cfg);
        CHECK(trace_distance(projected, tr.reduced_rho.back()) < 1e-6);
    }

    // a model with an exact dark ray: the projection keeps precisely that ray
    auto dark_model = SystemModel::build(
        {direct_mode("a", 1.80, 0.08, 0.02, 0.04), direct_mode("b", 1.75, 0.10, -0.01, -0.02)},
        {emitter(), emitter()});
    const Matrix4cd rho_inf = steady_state(dark_model, QuantumState::excited_emitter(dark_model, 1));
    const auto tr = evolve_exact(dark_model, QuantumState::excited_emitter(dark_model, 1), cfg);
    CHECK(trace_distance(rho_inf, tr.reduced_rho.back()) < 1e-7);
    // alpha = 1/2: dark weight 1/(1 + 1/4) = 0.8, concurrence 2*0.5/(1.25^2) = 0.64
    CHECK(concurrence(rho_inf) == doctest::Approx(0.64).epsilon(1e-9));
    const auto pops = state_populations(rho_inf, DarkStateSpec::from_alpha(complex(0.5, 0)));
    CHECK(*pops.dark == doctest::Approx(0.8).epsilon(1e-9));
    CHECK(*pops.bright < 1e-9);
}

TEST_CASE("modes without loss have no steady state") {
    auto model = one_mode(0.0, 0.02, 0.02);
    CHECK_THROWS_AS((void)steady_state(model, QuantumState::excited_emitter(model, 1)),
                    InvalidState);
}

TEST_CASE("a fully decoupled model is its own steady state") {
    std::vector<ModeDescriptor> none;
    auto model = SystemModel::build(none, {emitter(), emitter()});
    const Matrix4cd rho = steady_state(model, QuantumState::excited_emitter(model, 1));
    CHECK(rho(reduced::eg, reduced::eg).real() == doctest::Approx(1.0).epsilon(1e-14));

    PropagatorConfig cfg;
    cfg.t_end_fs = 10.0;
    cfg.dt_out_fs = 5.0;
    const auto tr = evolve_exact(model, QuantumState::excited_emitter(model, 1), cfg);
    CHECK(trace_distance(tr.reduced_rho.back(), rho) < 1e-12);
}

TEST_CASE("dense master equation refuses oversized mode counts") {
    std::vector<ModeDescriptor> modes;
    for (int i = 0; i < 13; ++i)
        modes.push_back(direct_mode("m" + std::to_string(i), 1.8 + 0.01 * i, 0.1, 0.01, 0.01));
    auto model = SystemModel::build(std::move(modes), {emitter(), emitter()});
    PropagatorConfig cfg;
    CHECK_THROWS_AS((void)evolve_lindblad(model, QuantumState::excited_emitter(model, 1), cfg),
                    ConfigError);
}

TEST_CASE("output grid covers zero to t_end") {
    auto model = one_mode(0.1, 0.02, 0.02);
    PropagatorConfig cfg;
    cfg.t_end_fs = 10.0;
    cfg.dt_out_fs = 3.0;
    const auto tr = evolve_exact(model, QuantumState::excited_emitter(model, 1), cfg);
    REQUIRE(tr.times_fs.size() == 5);  // 0, 3, 6, 9, then the endpoint
    CHECK(tr.times_fs.front() == 0.0);
    CHECK(tr.times_fs.back() == 10.0);
    CHECK(tr.reduced_rho.size() == tr.times_fs.size());
    CHECK(tr.populations.size() == tr.times_fs.size());
    CHECK(tr.concurrence.size() == tr.times_fs.size());
}

TEST_SUITE_END();
