#include "doctest.h"

#include <cmath>

#include "catq/rates.hpp"

using namespace catq;

TEST_CASE("frozen reference rates")
{
    EffectiveParams p;
    p.g2drive = 2.0;
    p.eta2ph = 1.0;
    p.kappaphi = 1e-3;
    p.cutoff = 24;
    CHECK(gamma_phi_exact(p) == doctest::Approx(7.348758686804583e-05).epsilon(1e-6));

    const EffectiveParams q = from_theta({1.0, 0.44 * M_PI}, 2.1, 1.05, {0.0, 1e-3}, 24);
    CHECK(gamma_phi_exact(q) == doctest::Approx(0.0010325809731814616).epsilon(1e-6));
}

TEST_CASE("no dephasing, no phase flips")
{
    const EffectiveParams p = from_theta({1.0, 0.3}, 2.0, 0.0, {}, 20);
    CHECK(gamma_phi_exact(p) < 1e-9);
    // A detuning alone already lifts the coherence degeneracy.
    CHECK(gamma_phi_exact(from_theta({1.0, 0.3}, 2.0, 0.5, {}, 20)) > 1e-6);
    EffectiveParams k = p;
    k.kappa1 = 0.01;
    try {
        gamma_phi_exact(k);
        FAIL("expected SymmetryBroken");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SymmetryBroken);
    }
}

TEST_CASE("closed form")
{
    CHECK(gamma_phi_sinh(0.2, 0.0) == doctest::Approx(0.1));
    CHECK(gamma_phi_sinh(1.0, 1.0) == doctest::Approx(1.0 / std::sinh(2.0)));
    CHECK(gamma_phi_sinh(1.0, 349.0) == doctest::Approx(349.0 / std::sinh(698.0)).epsilon(1e-10));
    CHECK(gamma_phi_sinh(1.0, 360.0) > 0.0);
    CHECK_THROWS_AS(gamma_phi_sinh(1.0, -1.0), Error);
}

TEST_CASE("perturbative rate agrees with the exact gap at weak dephasing")
{
    EffectiveParams p;
    p.g2drive = 2.0;
    p.eta2ph = 1.0;
    p.kappaphi = 1e-4;
    p.cutoff = 24;
    const PerturbativeRate r = gamma_phi_perturbative(p);
    REQUIRE(r.sinh_form.has_value());
    CHECK(r.trace_formula == doctest::Approx(*r.sinh_form).epsilon(1e-3));
    CHECK(r.trace_formula == doctest::Approx(gamma_phi_exact(p)).epsilon(1e-2));

    const EffectiveParams q = from_theta({1.0, 0.44 * M_PI}, 2.1, 1.05, {0.0, 1e-4}, 24);
    const PerturbativeRate rq = gamma_phi_perturbative(q);
    CHECK_FALSE(rq.sinh_form.has_value());
    CHECK(rq.trace_formula == doctest::Approx(gamma_phi_exact(q)).epsilon(0.05));
}

TEST_CASE("line fits")
{
    const LineFit f = fit_line({0.0, 1.0, 2.0, 3.0}, {1.0, 3.0, 5.0, 7.0});
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.r2 == doctest::Approx(1.0));
    CHECK_THROWS_AS(fit_line({1.0}, {1.0}), Error);

    RateScan s;
    s.axis = ScanAxis::KappaPhi;
    for (double k : {1e-4, 1e-3, 1e-2}) {
        RatePoint pt;
        pt.value = k;
        pt.gamma_phi = 3.0 * k;
        s.push(pt);
    }
    const LineFit pw = fit_power_law(s);
    CHECK(pw.slope == doctest::Approx(1.0));
}

TEST_CASE("exponential window on synthetic data")
{
    RateScan s;
    s.axis = ScanAxis::G;
    for (int k = 0; k <= 20; ++k) {
        const double g = 1.0 + 0.25 * k;
        RatePoint pt;
        pt.value = g;
        // flat head, then exp(-2 G)
        pt.gamma_phi = g < 2.0 ? 0.05 : 0.5 * std::exp(-2.0 * g) * std::exp(4.0) * 0.1;
        s.push(pt);
    }
    const ZetaFit z = extract_zeta(s);
    CHECK(z.zeta == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(z.r2 > 0.999);
    CHECK(s.values[z.first] >= 2.0);

    RateScan flat;
    flat.axis = ScanAxis::G;
    for (int k = 0; k < 8; ++k) {
        RatePoint pt;
        pt.value = k;
        pt.gamma_phi = (k % 2) ? 1.0 : 2.0;
        flat.push(pt);
    }
    CHECK_THROWS_AS(extract_zeta(flat), Error);
}

TEST_CASE("scans and the rate cache")
{
    clear_rate_cache();
    const EffectiveParams p = from_theta({1.0, 0.44 * M_PI}, 2.0, 0.0, {0.0, 1e-3}, 16);
    const RateScan s = scan(p, ScanAxis::Delta, {0.0, 0.5, 1.0}, 1);
    REQUIRE(s.size() == 3);
    CHECK(rate_cache_size() > 0);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(s.metadata[k].delta == doctest::Approx(s.values[k]));
        CHECK(s.gamma_phi[k] > 0.0);
        CHECK(s.photon_number[k] > 0.0);
        CHECK(s.lambda_pp[k] > s.lambda_pm[k]);
    }
    const RateScan s2 = scan(p, ScanAxis::Delta, {0.0, 0.5, 1.0}, 2);
    CHECK(s2.gamma_phi == s.gamma_phi);
    clear_rate_cache();
    CHECK(rate_cache_size() == 0);
    CHECK(std::string(axis_name(ScanAxis::KappaPhi)) == "kappaphi");
}

TEST_CASE("flat landscape for a vanishing drive")
{
    WarningCapture cap;
    const OptimalDetuning o = optimal_detuning(from_theta({1.0, 0.44 * M_PI}, 1e-9, 0.0, {0.0, 1e-3}, 8), 9);
    CHECK(o.flat);
    CHECK(o.delta_min == 0.0);
    CHECK(cap.contains("flat-landscape"));
}

TEST_CASE("no transition inside a narrow low-drive window")
{
    try {
        find_gc({1.0, 0.44 * M_PI}, 1e-3, 1.0, 1.2, 20);
        FAIL("expected NoTransition");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NoTransition);
    }
}
