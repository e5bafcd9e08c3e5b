#include "doctest.h"

#include <algorithm>
#include <cstdio>

#include <unsupported/Eigen/KroneckerProduct>

#include "catq/fock.hpp"
#include "catq/liouvillian.hpp"
#include "catq/spectral.hpp"

using namespace catq;

namespace {

EffectiveParams mixed_point(int n)
{
    EffectiveParams p;
    p.delta = 0.3;
    p.g2drive = cplx(1.2, 0.4);
    p.kerr = 0.7;
    p.eta2ph = 1.0;
    p.kappaphi = 0.05;
    p.cutoff = n;
    return p;
}

// Greedy multiset match of two spectra.
double spectrum_mismatch(std::vector<cplx> a, std::vector<cplx> b)
{
    if (a.size() != b.size()) return INFINITY;
    double worst = 0.0;
    for (const cplx& x : a) {
        auto it = std::min_element(b.begin(), b.end(), [&](cplx u, cplx v) { return std::abs(u - x) < std::abs(v - x); });
        worst = std::max(worst, std::abs(*it - x));
        b.erase(it);
    }
    return worst;
}

} // namespace

TEST_CASE("vectorisation is column stacking")
{
    Matrix m(2, 2);
    m << 1.0, 2.0, 3.0, 4.0;
    const Vector v = vec(m);
    CHECK(v(1) == cplx(3.0));
    CHECK(v(2) == cplx(2.0));
    CHECK(unvec(v, 2) == m);
}

TEST_CASE("dissipator examples")
{
    const FockSpace s(4);
    const SuperOperator z = dissipator(OperatorMatrix(Matrix::Zero(4, 4), 4));
    CHECK(z.matrix.norm() == 0.0);

    const SuperOperator da = dissipator(annihilation(s));
    Matrix one = Matrix::Zero(4, 4);
    one(1, 1) = 1.0;
    Matrix expect = Matrix::Zero(4, 4);
    expect(0, 0) = 1.0;
    expect(1, 1) = -1.0;
    CHECK((da.apply(one) - expect).norm() < 1e-15);

    const SuperOperator da2 = dissipator(annihilation(s) * annihilation(s));
    Matrix x = Matrix::Random(4, 4);
    CHECK(std::abs(da2.apply(x).trace()) < 1e-14);
}

TEST_CASE("vacuum is stationary under pure two-photon loss")
{
    EffectiveParams p;
    p.eta2ph = 1.0;
    p.cutoff = 10;
    const SuperOperator l = build_single_mode(p);
    Matrix vac = Matrix::Zero(10, 10);
    vac(0, 0) = 1.0;
    CHECK(l.apply(vac).norm() == 0.0);
}

TEST_CASE("cats are stationary at resonance")
{
    for (double th : {0.0, 0.44 * M_PI, 0.48 * M_PI}) {
        const EffectiveParams p = from_theta({1.0, th}, 5.0, 0.0, {}, 0);
        const EffectiveParams q = resolve_cutoff(p);
        const SuperOperator l = build_single_mode(q);
        const cplx a = alpha_steady(q);
        for (CatSign sgn : {CatSign::Even, CatSign::Odd}) {
            const Matrix rho = cat_state(a, sgn, FockSpace(q.cutoff)).projector();
            CHECK(l.apply(rho).norm() < 1e-8);
        }
    }
}

TEST_CASE("Lindblad invariants")
{
    for (double kappa : {0.0, 0.2}) {
        EffectiveParams p = mixed_point(10);
        p.kappa1 = kappa;
        const SuperOperator l = build_single_mode(p);
        CHECK(trace_preservation_residual(l) < 1e-10);
        CHECK(hermiticity_preservation_residual(l, 20, 7) < 1e-12);
    }
    CHECK(parity_commutator_norm(build_single_mode(mixed_point(10))) < 1e-12);
}

TEST_CASE("parity blocks")
{
    const SuperOperator l = build_single_mode(mixed_point(12));
    const BlockDecomposition b = parity_blocks(l);
    CHECK(b.off_block_norm < 1e-14);
    for (const auto& blk : b.blocks) CHECK(blk.rows() == 36);

    std::vector<cplx> union_spec;
    for (Sector s : {Sector::PP, Sector::PM, Sector::MP, Sector::MM}) {
        const auto r = eigensolve_block(b, s, SolveOptions{false, -1});
        union_spec.insert(union_spec.end(), r.eigenvalues.begin(), r.eigenvalues.end());
    }
    CHECK(spectrum_mismatch(union_spec, full_spectrum(l)) < 1e-8);

    EffectiveParams k = mixed_point(12);
    k.kappa1 = 0.1;
    const SuperOperator lk = build_single_mode(k);
    try {
        parity_blocks(lk, true);
        FAIL("expected SymmetryBroken");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SymmetryBroken);
    }
    const BlockDecomposition bk = parity_blocks(lk, false);
    CHECK(bk.pp_mm_coupling > 0.0);
    CHECK(bk.pm_mp_coupling > 0.0);
    CHECK(std::abs(bk.off_block_norm * bk.off_block_norm - bk.pp_mm_coupling * bk.pp_mm_coupling -
                   bk.pm_mp_coupling * bk.pm_mp_coupling) < 1e-12);

    try {
        parity_blocks(SuperOperator{SparseMatrix(9, 9), {3}});
        FAIL("expected CutoffParity");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::CutoffParity);
    }
}

TEST_CASE("sector embedding round trip")
{
    Matrix rho = Matrix::Zero(6, 6);
    rho(1, 2) = cplx(0.5, 0.25);
    rho(3, 0) = 2.0;
    const Vector v = operator_to_sector(rho, Sector::MP);
    CHECK(v.size() == 9);
    CHECK((sector_to_operator(v, Sector::MP, 6) - rho).norm() == 0.0);
    CHECK(sector_of(1, 2) == Sector::MP);
    CHECK(sector_of(2, 3) == Sector::PM);
}

TEST_CASE("add_hamiltonian")
{
    const SuperOperator l = build_single_mode(mixed_point(8));
    const OperatorMatrix h = 0.7 * number(FockSpace(8));
    const SuperOperator back = add_hamiltonian(add_hamiltonian(l, h), -1.0 * h);
    CHECK(Matrix(back.matrix - l.matrix).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(Matrix(add_hamiltonian(l, 0.0 * h).matrix - l.matrix).norm() == 0.0);

    EffectiveParams shifted = mixed_point(8);
    shifted.delta += 0.7;
    CHECK(Matrix(add_hamiltonian(l, h).matrix - build_single_mode(shifted).matrix).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("two-mode builder")
{
    EffectiveParams p1 = mixed_point(4), p2 = mixed_point(6);
    p2.kerr = 0.2;
    GateHamiltonian hop;
    hop.amplitude = 0.0;
    const SuperOperator l = build_two_mode(p1, p2, hop);
    const SuperOperator l1 = build_single_mode(p1), l2 = build_single_mode(p2);
    // rho = rho1 (x) rho2 evolves as L1 rho1 (x) rho2 + rho1 (x) L2 rho2.
    const Matrix r1 = Matrix::Random(4, 4), r2 = Matrix::Random(6, 6);
    const Matrix rho = Eigen::kroneckerProduct(r1, r2).eval();
    const Matrix expect = Eigen::kroneckerProduct(l1.apply(r1), r2).eval() + Eigen::kroneckerProduct(r1, l2.apply(r2)).eval();
    CHECK((l.apply(rho) - expect).norm() < 1e-12);

    hop.amplitude = 0.3;
    const SuperOperator lj = build_two_mode(p1, p2, hop);
    CHECK(trace_preservation_residual(lj) < 1e-10);
    CHECK(parity_commutator_norm(lj) < 1e-10);
    CHECK(hermiticity_preservation_residual(lj, 3, 1) < 1e-12);

    const std::int64_t old = memory_ceiling();
    set_memory_ceiling(100);
    try {
        build_two_mode(p1, p2, hop);
        FAIL("expected MemoryCeiling");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MemoryCeiling);
    }
    set_memory_ceiling(old);
}

TEST_CASE("superoperator dump round trip")
{
    const SuperOperator l = build_single_mode(mixed_point(4));
    const std::string path = "catq_dump_test.bin";
    dump_superoperator(l, path, 5u);
    std::uint32_t flags = 0;
    const Matrix back = load_superoperator_dump(path, &flags);
    CHECK(flags == 5u);
    CHECK((back - Matrix(l.matrix)).norm() == 0.0);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_superoperator_dump("does-not-exist.bin"), Error);
}
