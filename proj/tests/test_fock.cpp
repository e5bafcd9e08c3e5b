#include "doctest.h"

#include <cmath>

#include "catq/fock.hpp"

using namespace catq;

TEST_CASE("annihilation operator entries")
{
    const Matrix a2 = annihilation(FockSpace(2)).data();
    CHECK(a2(0, 1) == cplx(1.0));
    CHECK(a2(0, 0) == cplx(0.0));
    CHECK(a2(1, 0) == cplx(0.0));
    CHECK(a2(1, 1) == cplx(0.0));
    CHECK(std::abs(annihilation(FockSpace(3)).data()(1, 2) - std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("canonical commutator below the cutoff")
{
    const FockSpace s(9);
    const Matrix a = annihilation(s).data(), ad = creation(s).data();
    const Matrix c = a * ad - ad * a;
    CHECK((c.topLeftCorner(8, 8) - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("parity operator")
{
    const FockSpace s(3);
    const Matrix p = parity(s).data();
    CHECK(p(0, 0) == cplx(1.0));
    CHECK(p(1, 1) == cplx(-1.0));
    CHECK(p(2, 2) == cplx(1.0));
    const FockSpace s8(8);
    const Matrix p8 = parity(s8).data(), a = annihilation(s8).data(), n = number(s8).data();
    CHECK((p8 * p8 - Matrix::Identity(8, 8)).norm() == 0.0);
    CHECK((p8 * a * p8 + a).norm() == 0.0);
    CHECK((p8 * n - n * p8).norm() == 0.0);
}

TEST_CASE("mixed-cutoff arithmetic is rejected")
{
    const OperatorMatrix a = annihilation(FockSpace(4)), b = annihilation(FockSpace(5));
    CHECK_THROWS_AS(a + b, Error);
    try {
        (void)(a * b);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DimensionMismatch);
    }
    CHECK_THROWS_AS(FockSpace(1), Error);
}

TEST_CASE("hermiticity flag")
{
    const FockSpace s(6);
    CHECK(number(s).is_hermitian());
    CHECK((annihilation(s) + creation(s)).is_hermitian());
    CHECK_FALSE(annihilation(s).is_hermitian());
}

TEST_CASE("coherent states")
{
    const FockSpace s(40);
    const PureState vac = coherent_state(0.0, s);
    CHECK(std::abs(vac.amplitudes(0) - cplx(1.0)) < 1e-15);
    CHECK(vac.amplitudes.tail(39).norm() == 0.0);

    const cplx alpha(2.0, 0.0);  // |alpha|^2 = 4
    const PureState c = coherent_state(alpha, s);
    CHECK(std::abs(c.amplitudes.norm() - 1.0) < 1e-12);
    const Vector res = annihilation(s).data() * c.amplitudes - alpha * c.amplitudes;
    CHECK(res.norm() < 1e-8);
    const cplx mean = c.amplitudes.dot(number(s).data() * c.amplitudes);
    CHECK(std::abs(mean - 4.0) < 1e-8);

    CHECK_THROWS_AS(coherent_state(cplx(4.0, 0.0), FockSpace(12)), Error);
}

TEST_CASE("cat states")
{
    const FockSpace s(40);
    CHECK(std::abs(cat_state(0.0, CatSign::Even, s).amplitudes(0) - cplx(1.0)) < 1e-15);
    try {
        cat_state(0.0, CatSign::Odd, s);
        FAIL("odd cat at alpha = 0 must be rejected");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegenerateCat);
    }
    const cplx alpha(1.3, 0.7);
    const Vector ce = cat_state(alpha, CatSign::Even, s).amplitudes, co = cat_state(alpha, CatSign::Odd, s).amplitudes;
    CHECK(std::abs(ce.dot(co)) < 1e-14);
    const Matrix p = parity(s).data();
    CHECK((p * ce - ce).norm() < 1e-12);
    CHECK((p * co + co).norm() < 1e-12);

    const Vector c2 = cat_state(2.0, CatSign::Even, s).amplitudes;
    double odd = 0.0;
    for (int k = 1; k < 40; k += 2) odd += std::norm(c2(k));
    CHECK(odd < 1e-12);

    // Closed form (|a> + |-a>)/sqrt(2(1 + e^{-2|a|^2})), n-th amplitude for even n.
    const double a = 1.1;
    const Vector ca = cat_state(a, CatSign::Even, s).amplitudes;
    const double norm = std::sqrt(2.0 * (1.0 + std::exp(-2.0 * a * a)));
    const double amp4 = 2.0 * std::exp(-a * a / 2.0) * std::pow(a, 4) / std::sqrt(24.0) / norm;
    CHECK(std::abs(ca(4).real() - amp4) < 1e-12);
}

TEST_CASE("guard cutoff")
{
    CHECK(guard_cutoff(0.0) == 10);
    CHECK(guard_cutoff(2.0) == 36);  // 16 + 10 + 10
    CHECK(coherent_tail_weight(2.0, guard_cutoff(2.0)) < 1e-10);
}
