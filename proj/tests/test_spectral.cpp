#include "doctest.h"

#include "catq/fock.hpp"
#include "catq/spectral.hpp"

using namespace catq;

namespace {

EffectiveParams mixed_point()
{
    EffectiveParams p;
    p.delta = 0.3;
    p.g2drive = cplx(1.2, 0.4);
    p.kerr = 0.7;
    p.eta2ph = 1.0;
    p.kappaphi = 0.05;
    p.cutoff = 12;
    return p;
}

} // namespace

TEST_CASE("frozen reference spectrum at N = 12")
{
    const PointAnalysis pa = analyze_point(mixed_point(), -1);
    CHECK(pa.gaps.pp == doctest::Approx(1.51247767883627).epsilon(1e-8));
    CHECK(pa.gaps.mm == doctest::Approx(3.4494137404656957).epsilon(1e-8));
    CHECK(pa.gaps.pm == doctest::Approx(0.030075916989547417).epsilon(1e-8));
    const cplx l = pa.manifold.lambda0[static_cast<int>(Sector::PM)];
    CHECK(l.real() == doctest::Approx(-0.030075916989547417).epsilon(1e-8));
    CHECK(std::abs(l.imag()) == doctest::Approx(0.13031304326548776).epsilon(1e-8));
    CHECK(photon_number(pa.manifold) == doctest::Approx(0.9300032438214605).epsilon(1e-8));
}

TEST_CASE("vacuum manifold")
{
    EffectiveParams p;
    p.eta2ph = 1.0;
    p.cutoff = 8;
    const PointAnalysis pa = analyze_point(p);
    CHECK(std::abs(pa.manifold.lambda0[0]) < 1e-10);
    CHECK(std::abs(pa.manifold.rho0(Sector::PP)(0, 0) - 1.0) < 1e-10);
    CHECK(photon_number(pa.manifold) < 1e-10);
    CHECK(std::abs(pa.manifold.rho0(Sector::MM)(1, 1) - 1.0) < 1e-10);
}

TEST_CASE("code point: the four slowest eigenvalues vanish and the steady states are cats")
{
    const EffectiveParams p = from_theta({1.0, 0.0}, 5.0, 0.0, {}, 40);
    const PointAnalysis pa = analyze_point(p);
    for (cplx l : pa.manifold.lambda0) CHECK(std::abs(l) < 1e-9);
    const cplx a = alpha_steady(p);
    const FockSpace s(40);
    const Matrix even = cat_state(a, CatSign::Even, s).projector();
    const Matrix odd = cat_state(a, CatSign::Odd, s).projector();
    CHECK(trace_distance_fro(pa.manifold.rho0(Sector::PP), even) < 1e-6);
    CHECK(trace_distance_fro(pa.manifold.rho0(Sector::MM), odd) < 1e-6);
    CHECK(photon_number(pa.manifold) == doctest::Approx(std::norm(a) * std::tanh(std::norm(a))).epsilon(1e-6));
    CHECK(pa.gaps.pm < 1e-9);
    CHECK(pa.gaps.pp > 1.0);

    const NSDiagnostic ns = ns_diagnostic(pa.manifold);
    CHECK(ns.d_pp_mm < 1e-6);
    CHECK(ns.d_pp_pm < 1e-6);
}

TEST_CASE("biorthonormality and trace normalisation")
{
    const PointAnalysis pa = analyze_point(mixed_point(), 4);
    for (const auto& r : pa.results) {
        if (!r) continue;  // -+ follows from +- by adjoint symmetry
        const auto& res = *r;
        for (std::size_t m = 0; m < res.right_ops.size(); ++m)
            for (std::size_t n = 0; n < res.right_ops.size(); ++n) {
                const cplx o = (res.left_ops[m].adjoint() * res.right_ops[n]).trace();
                CHECK(std::abs(o - (m == n ? 1.0 : 0.0)) < 1e-8);
            }
    }
    CHECK(std::abs(pa.manifold.rho0(Sector::PP).trace() - 1.0) < 1e-10);
    CHECK(std::abs(pa.manifold.rho0(Sector::MM).trace() - 1.0) < 1e-10);
    // Identity is conserved in both diagonal sectors.
    const Matrix jp = pa.manifold.j0(Sector::PP);
    for (int k = 0; k < 12; k += 2) CHECK(std::abs(jp(k, k) - 1.0) < 1e-8);
}

TEST_CASE("conjugate pairing of the off-diagonal sectors")
{
    const SuperOperator l = build_single_mode(mixed_point());
    const SectorResults r = solve_sectors(l, {Sector::PM, Sector::MP}, SolveOptions{false, -1});
    const auto& pm = r[1]->eigenvalues;
    const auto& mp = r[2]->eigenvalues;
    REQUIRE(pm.size() == mp.size());
    std::vector<bool> used(mp.size(), false);
    double worst = 0.0;
    for (cplx z : pm) {
        double best = INFINITY;
        std::size_t bi = 0;
        for (std::size_t k = 0; k < mp.size(); ++k)
            if (!used[k] && std::abs(mp[k] - std::conj(z)) < best) best = std::abs(mp[k] - std::conj(z)), bi = k;
        used[bi] = true;
        worst = std::max(worst, best);
    }
    CHECK(worst < 1e-8);

    const Manifold m = analyze_point(mixed_point()).manifold;
    CHECK((m.rho0(Sector::MP) - m.rho0(Sector::PM).adjoint()).norm() < 1e-8);
}

TEST_CASE("conserved quantities commute with the dynamics")
{
    const EffectiveParams p = from_theta({1.0, 0.3}, cplx(2.0, 0.5), 0.4, {}, 24);
    const PointAnalysis pa = analyze_point(p);
    const SuperOperator l = build_single_mode(p);
    // J is conserved if (L^dag J) = conj(lambda) J.
    SuperOperator adj{SparseMatrix(l.matrix.adjoint()), l.cutoffs};
    for (int s = 0; s < 4; ++s) {
        const Matrix& j = pa.manifold.j[s];
        CHECK((adj.apply(j) - std::conj(pa.manifold.lambda0[s]) * j).norm() < 1e-7 * std::max(1.0, j.norm()));
    }
}

TEST_CASE("eigen_decompose on a small diagonalisable matrix")
{
    Matrix a(3, 3);
    a << -1.0, 1.0, 0.0, 0.0, -2.0, 0.0, 0.0, 0.0, -0.5;
    const EigenDecomposition d = eigen_decompose(a, true);
    REQUIRE(d.values.size() == 3);
    CHECK(std::abs(d.values[0] + 0.5) < 1e-14);
    CHECK(std::abs(d.values[2] + 2.0) < 1e-14);
    CHECK((a * d.right - d.right * Eigen::Map<const Vector>(d.values.data(), 3).asDiagonal().toDenseMatrix()).norm() < 1e-12);
    CHECK((d.left.adjoint() * d.right - Matrix::Identity(3, 3)).norm() < 1e-12);
}
