#include "doctest.h"

#include <unsupported/Eigen/MatrixFunctions>

#include "catq/expmv.hpp"
#include "catq/liouvillian.hpp"

using namespace catq;

TEST_CASE("trivial arguments")
{
    SparseMatrix a(3, 3);
    const Vector v = Vector::Ones(3);
    CHECK(expmv(a, 1.0, v) == v);
    CHECK_THROWS_AS(expmv(a, -1.0, v), Error);
    CHECK_THROWS_AS(expmv(a, 1.0, Vector::Ones(4)), Error);
}

TEST_CASE("matches the dense exponential")
{
    Matrix d = Matrix::Random(40, 40) * 0.3;
    d.diagonal().array() -= 2.0;
    const SparseMatrix a = d.sparseView();
    const Vector v = Vector::Random(40);
    ExpmvStats st;
    const Vector w = expmv(a, 3.0, v, {1e-12, 30, 10}, &st);
    const Vector ref = (3.0 * d).exp() * v;
    CHECK((w - ref).norm() < 1e-9 * ref.norm());
    CHECK(st.steps >= 1);
}

TEST_CASE("frozen reference evolutions")
{
    EffectiveParams p;
    p.delta = 0.4;
    p.g2drive = 0.8;
    p.kerr = 0.5;
    p.eta2ph = 1.0;
    p.kappa1 = 0.2;
    p.kappaphi = 0.1;
    p.cutoff = 6;
    SuperOperator l = build_single_mode(p);
    Matrix rho = Matrix::Zero(6, 6);
    rho(0, 0) = 1.0;
    Matrix r = unvec(expmv(l.matrix, 2.5, vec(rho), {1e-13, 30, 10}), 6);
    double n = 0.0;
    for (int k = 0; k < 6; ++k) n += k * r(k, k).real();
    CHECK(n == doctest::Approx(0.38980815182512135).epsilon(1e-9));
    CHECK(std::abs(r(0, 2) - cplx(-0.04389918670625125, 0.29592201074077495)) < 1e-9);

    EffectiveParams q;
    q.g2drive = 1.5;
    q.eta2ph = 1.0;
    q.cutoff = 16;
    l = build_single_mode(q);
    rho = Matrix::Zero(16, 16);
    rho(0, 0) = 1.0;
    r = unvec(expmv(l.matrix, 0.7, vec(rho), {1e-13, 30, 10}), 16);
    n = 0.0;
    for (int k = 0; k < 16; ++k) n += k * r(k, k).real();
    CHECK(n == doctest::Approx(0.5451994699550582).epsilon(1e-9));
    CHECK(std::abs(r(0, 2) - cplx(0.0, 0.39423404740981627)) < 1e-9);
}
