#include "doctest.h"

#include "catq/dynamics.hpp"
#include "catq/fock.hpp"

using namespace catq;

namespace {

EffectiveParams code_point(int cutoff = 24)
{
    return from_theta({1.0, 0.0}, 2.0, 0.0, {}, cutoff);
}

} // namespace

TEST_CASE("logical states")
{
    CHECK(fidelity(QubitState::zero_l(), QubitState::zero_l()) == doctest::Approx(1.0));
    CHECK(fidelity(QubitState::zero_l(), QubitState::one_l()) == doctest::Approx(0.0));
    CHECK(fidelity(QubitState::plus_l(), QubitState::zero_l()) == doctest::Approx(0.5));
    QubitState mixed;
    mixed.q = Matrix2::Identity() / 2.0;
    CHECK(fidelity(mixed, mixed) == doctest::Approx(1.0));
    QubitState bad;
    bad.q(0, 1) = 1.0;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("embedding and extraction are inverse on the code space")
{
    const Manifold bare = bare_manifold(code_point());
    for (const QubitState& q : {QubitState::zero_l(), QubitState::one_l(), QubitState::plus_l()}) {
        const Matrix rho = q_embed(q, bare);
        CHECK(std::abs(rho.trace() - 1.0) < 1e-10);
        CHECK((q_extract(rho, bare).q - q.q).norm() < 1e-9);
    }
    const PureState plus = cat_state(alpha_steady(code_point()), CatSign::Even, FockSpace(24));
    CHECK(std::abs(q_extract(plus.projector(), bare).q(0, 0) - 1.0) < 1e-8);

    QubitState unphysical;
    unphysical.q << 2.0, 0.0, 0.0, -1.0;
    CHECK_THROWS_AS(q_embed(unphysical, bare), Error);
}

TEST_CASE("evolution basics")
{
    const EffectiveParams p = code_point();
    const SuperOperator l = build_single_mode(p);
    const Manifold bare = bare_manifold(p);
    const Matrix rho0 = q_embed(QubitState::plus_l(), bare);
    CHECK((evolve(l, rho0, 0.0) - rho0).norm() == 0.0);
    // The whole code space is stationary and Q is conserved.
    const Matrix rt = evolve(l, rho0, 3.0);
    CHECK((rt - rho0).norm() < 1e-7);
    CHECK((q_extract(rt, bare).q - QubitState::plus_l().q).norm() < 1e-8);

    // A state outside the code space relaxes but keeps its conserved quantities.
    Matrix vac = Matrix::Zero(24, 24);
    vac(0, 0) = 1.0;
    const auto samples = evolve_samples(l, vac, {0.0, 0.5, 2.0, 8.0});
    REQUIRE(samples.size() == 4);
    for (const auto& s : samples) CHECK((q_extract(s, bare).q - QubitState::zero_l().q).norm() < 1e-8);
    CHECK_THROWS_AS(evolve_samples(l, vac, {1.0, 0.5}), Error);
    CHECK_THROWS_AS(evolve(l, Matrix::Zero(3, 3), 1.0), Error);
}

TEST_CASE("phase convention for a real amplitude")
{
    EffectiveParams p = from_theta({1.0, 0.44 * M_PI}, cplx(0.0, 3.0), 0.0, {}, 0);
    p = with_real_alpha(p);
    const cplx a = alpha_steady(p);
    CHECK(std::abs(a.imag()) < 1e-12);
    CHECK(a.real() > 0.0);
    CHECK(std::abs(p.g2drive) == doctest::Approx(3.0));
    CHECK(omega_x(p, 0.1) == doctest::Approx(0.2 * a.real()));
}

TEST_CASE("gauge invariance of the dephasing dynamics under a drive phase")
{
    // Rotating a -> a e^{i phi} maps G -> G e^{2 i phi}; logical fidelities stay put.
    EffectiveParams p = from_theta({1.0, 0.2}, 2.0, 0.0, {0.0, 0.01}, 24);
    EffectiveParams q = p;
    q.g2drive *= std::polar(1.0, 1.1);
    const Manifold bp = bare_manifold(p), bq = bare_manifold(q);
    const Matrix rp = evolve(build_single_mode(p), q_embed(QubitState::plus_l(), bp), 5.0);
    const Matrix rq = evolve(build_single_mode(q), q_embed(QubitState::plus_l(), bq), 5.0);
    CHECK((q_extract(rp, bp).q - q_extract(rq, bq).q).norm() < 1e-8);
}

TEST_CASE("recovery without an error is perfect")
{
    const std::vector<double> t0s{1.0, 2.0};
    const RecoveryGrid g = recovery_grid(code_point(20), {0.0}, t0s);
    CHECK(g.infidelity.maxCoeff() < 1e-8);
    CHECK(g.t1 == doctest::Approx(5.0));
    CHECK_THROWS_AS(recovery_grid(from_theta({1.0, 0.0}, 2.0, 0.1, {}, 20), {0.0}, t0s), Error);
}

TEST_CASE("a small detuning error is corrected")
{
    const double inf = recovery_protocol(code_point(24), 0.5, 1.0);
    CHECK(inf < 0.05);
    CHECK(inf >= -1e-12);
}

TEST_CASE("undriven X gate does nothing")
{
    const GateXResult r = gate_x(code_point(), 0.0, 2.0, 3);
    CHECK(r.omega_x == 0.0);
    CHECK(r.final_infidelity < 1e-8);
    CHECK_THROWS_AS(gate_x_error(code_point(), 0.0), Error);
    CHECK_THROWS_AS(gate_x(code_point(), -1.0, 1.0), Error);
}

TEST_CASE("slow X drive follows the ideal rotation")
{
    const EffectiveParams p = code_point();
    const double f = 0.02;
    const double w = omega_x(p, f);
    const GateXResult r = gate_x(p, f, M_PI / (2.0 * w), 5);
    CHECK(r.final_infidelity < 0.02);
    // Half a Rabi period ends close to |1_L>.
    CHECK(std::abs(r.trajectory.qubits.back().q(1, 1)) > 0.9);
}

TEST_CASE("uncoupled XX evolution keeps the product state")
{
    const EffectiveParams p = code_point(8);
    const GateXXResult r = gate_xx(p, p, 0.0, 1.0, 4);
    for (double e : r.trajectory.observables.at("even_weight")) CHECK(e == doctest::Approx(1.0).epsilon(1e-8));
    for (double b : r.trajectory.observables.at("bell_plus")) CHECK(b == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(r.omega_fit == 0.0);
}

TEST_CASE("sinusoid fit")
{
    std::vector<double> t, y;
    for (int k = 0; k < 60; ++k) {
        t.push_back(0.1 * k);
        y.push_back(0.7 * std::sin(1.3 * t.back() + 0.4) + 0.1);
    }
    const auto [w, amp] = fit_sinusoid(t, y, 0.5, 3.0);
    CHECK(w == doctest::Approx(1.3).epsilon(1e-6));
    CHECK(amp == doctest::Approx(0.7).epsilon(1e-6));
    CHECK_THROWS_AS(fit_sinusoid({0.0, 1.0}, {0.0, 1.0}, 0.5, 3.0), Error);
}
