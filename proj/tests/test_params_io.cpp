#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "catq/params_io.hpp"

using namespace catq;

TEST_CASE("complex values")
{
    CHECK(complex_from_json(json(2.5)) == cplx(2.5, 0.0));
    CHECK(complex_from_json(json::array({1.0, -2.0})) == cplx(1.0, -2.0));
    CHECK_THROWS_AS(complex_from_json(json("x")), Error);
    CHECK(complex_from_json(complex_to_json(cplx(0.5, 0.25))) == cplx(0.5, 0.25));
}

TEST_CASE("raw effective parameters round trip")
{
    EffectiveParams p;
    p.delta = 0.3;
    p.g2drive = cplx(1.0, 2.0);
    p.kerr = 0.4;
    p.eta2ph = 1.0;
    p.kappa1 = 0.01;
    p.kappaphi = 0.02;
    p.cutoff = 30;
    const EffectiveParams q = effective_from_json(to_json(p));
    CHECK(q.delta == p.delta);
    CHECK(q.g2drive == p.g2drive);
    CHECK(q.kerr == p.kerr);
    CHECK(q.eta2ph == p.eta2ph);
    CHECK(q.kappa1 == p.kappa1);
    CHECK(q.kappaphi == p.kappaphi);
    CHECK(q.cutoff == p.cutoff);
}

TEST_CASE("theta form")
{
    const EffectiveParams p = effective_from_json(json::parse(R"({"w": 2.0, "two_theta_over_pi": 1.0, "g": 3.0, "delta_over_g": 0.5})"));
    CHECK(p.eta2ph == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
    CHECK(p.kerr == doctest::Approx(2.0));
    CHECK(p.delta == doctest::Approx(1.5));
    CHECK_THROWS_AS(effective_from_json(json::parse(R"({"w": 1, "g": 1, "delta": 1, "delta_over_g": 1})")), Error);
}

TEST_CASE("row form and rejection of unknown keys")
{
    const EffectiveParams p = effective_from_json(json::parse(R"({"row": "c", "kappaphi": 0.001})"));
    CHECK(p.kappaphi == 0.001);
    CHECK(p.eta2ph > 0.0);
    CHECK_THROWS_AS(effective_from_json(json::parse(R"({"row": "cc"})")), Error);
    CHECK_THROWS_AS(effective_from_json(json::parse(R"({"delta": 1, "bogus": 2})")), Error);
    CHECK_THROWS_AS(effective_from_json(json::parse(R"({"eta2ph": -1})")), Error);
}

TEST_CASE("micro parameters and files")
{
    MicroParams m;
    m.ej = 2e4;
    m.phi_s = 0.1;
    m.eps_d = cplx(25.0, 0.0);
    m.kappa_r = 200.0;
    const MicroParams back = micro_from_json(to_json(m));
    CHECK(back.ej == m.ej);
    CHECK(back.eps_d == m.eps_d);
    CHECK(back.kappa_r == m.kappa_r);
    CHECK_THROWS_AS(micro_from_json(json::parse(R"({"ej": 1, "x": 2})")), Error);

    const std::string path = "catq_params_test.json";
    {
        std::ofstream out(path);
        out << to_json(m).dump();
    }
    CHECK(micro_from_json(load_json_file(path)).phi_s == 0.1);
    {
        std::ofstream out(path);
        out << "{ not json";
    }
    CHECK_THROWS_AS(load_json_file(path), Error);
    std::remove(path.c_str());
    try {
        load_json_file("missing-file.json");
        FAIL("expected Io");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Io);
    }
}
