#include "catq/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "catq/fock.hpp"

namespace catq {

namespace {

// Sort by descending real part; inside a real-part cluster by ascending |Im|,
// then ascending Im.
std::vector<int> spectral_order(const std::vector<cplx>& w, double scale)
{
    std::vector<int> idx(w.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return w[a].real() > w[b].real(); });
    const double tol = 1e-10 * std::max(scale, 1.0);
    std::size_t start = 0;
    while (start < idx.size()) {
        std::size_t end = start + 1;
        while (end < idx.size() && w[idx[end - 1]].real() - w[idx[end]].real() <= tol) ++end;
        std::stable_sort(idx.begin() + start, idx.begin() + end, [&](int a, int b) {
            const double ia = std::abs(w[a].imag()), ib = std::abs(w[b].imag());
            if (std::abs(ia - ib) > tol) return ia < ib;
            return w[a].imag() < w[b].imag();
        });
        start = end;
    }
    return idx;
}

double inf_norm(const Matrix& a) { return a.cwiseAbs().rowwise().sum().maxCoeff(); }

} // namespace

EigenDecomposition eigen_decompose(const Matrix& a, bool vectors, int keep)
{
    const lapack_int n = static_cast<lapack_int>(a.rows());
    if (a.rows() != a.cols()) throw Error(ErrorKind::DimensionMismatch, "eigensolve needs a square matrix");
    Matrix work = a;
    Eigen::VectorXcd w(n);
    Matrix vl, vr;
    if (vectors) {
        vl.resize(n, n);
        vr.resize(n, n);
    }
    const lapack_int info =
        LAPACKE_zgeev(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', vectors ? 'V' : 'N', n, work.data(), n, w.data(),
                      vectors ? vl.data() : nullptr, n, vectors ? vr.data() : nullptr, n);
    if (info != 0) throw Error(ErrorKind::ToleranceNotMet, "zgeev failed with info " + std::to_string(info));

    const double scale = inf_norm(a);
    std::vector<cplx> vals(w.data(), w.data() + n);
    const std::vector<int> order = spectral_order(vals, scale);

    EigenDecomposition out;
    out.values.resize(n);
    for (int k = 0; k < n; ++k) out.values[k] = vals[order[k]];
    if (!vectors) return out;

    // Extend the kept range over the cluster straddling its end.
    const double pair_tol = 1e-6 * std::max(scale, 1.0);
    int kept = (keep < 0 || keep > n) ? static_cast<int>(n) : keep;
    while (kept < n && std::abs(out.values[kept] - out.values[kept - 1]) <= pair_tol) ++kept;

    out.right.resize(n, kept);
    out.left.resize(n, kept);
    for (int k = 0; k < kept; ++k) {
        out.right.col(k) = vr.col(order[k]).normalized();
        out.left.col(k) = vl.col(order[k]);
    }

    // Biorthonormalise cluster by cluster: J_c <- J_c M^{-H}, M = J_c^H R_c.
    int start = 0;
    while (start < kept) {
        int end = start + 1;
        while (end < kept && std::abs(out.values[end] - out.values[start]) <= pair_tol) ++end;
        const int k = end - start;
        const Matrix m = out.left.middleCols(start, k).adjoint() * out.right.middleCols(start, k);
        Eigen::JacobiSVD<Matrix> svd(m);
        const auto& sv = svd.singularValues();
        if (sv(k - 1) <= 1e-300 * std::max(1.0, sv(0))) {
            std::ostringstream os;
            os << "left/right eigenvectors for eigenvalue " << out.values[start] << " cannot be paired";
            throw Error(ErrorKind::PairingFailure, os.str());
        }
        const double cond = sv(0) / sv(k - 1);
        // For simple eigenvalues M is 1x1 and its inverse is the eigenvalue
        // condition number.
        const double kappa = (k == 1) ? 1.0 / sv(0) : cond;
        if (kappa > 1e8) {
            std::ostringstream os;
            os << "pairing condition number " << kappa << " at eigenvalue " << out.values[start];
            warn("defective", os.str());
        }
        out.left.middleCols(start, k) = out.left.middleCols(start, k) * m.inverse().adjoint();
        start = end;
    }
    return out;
}

SpectralResult eigensolve_block(const Matrix& block, Sector sector, int cutoff, const SolveOptions& opt)
{
    const EigenDecomposition e = eigen_decompose(block, opt.vectors, opt.keep);
    SpectralResult r;
    r.sector = sector;
    r.cutoff = cutoff;
    r.scale = inf_norm(block);
    r.eigenvalues = e.values;
    const double grow_tol = 1e-8 * std::max(r.scale, 1.0);
    if (!r.eigenvalues.empty() && r.eigenvalues.front().real() > grow_tol) {
        std::ostringstream os;
        os << "sector " << sector_name(sector) << " has a growing mode " << r.eigenvalues.front();
        warn("growing-mode", os.str());
    }
    if (opt.vectors) {
        for (Eigen::Index k = 0; k < e.right.cols(); ++k) {
            r.right_ops.push_back(sector_to_operator(e.right.col(k), sector, cutoff));
            r.left_ops.push_back(sector_to_operator(e.left.col(k), sector, cutoff));
        }
    }
    return r;
}

SpectralResult eigensolve_block(const BlockDecomposition& blocks, Sector sector, const SolveOptions& opt)
{
    return eigensolve_block(Matrix(blocks.block(sector)), sector, blocks.cutoff, opt);
}

std::vector<cplx> full_spectrum(const SuperOperator& s)
{
    return eigen_decompose(Matrix(s.matrix), false).values;
}

SectorResults solve_sectors(const SuperOperator& s, const std::vector<Sector>& sectors, const SolveOptions& opt)
{
    const BlockDecomposition blocks = parity_blocks(s, true);
    SectorResults out;
    for (Sector sec : sectors) out[static_cast<int>(sec)] = eigensolve_block(blocks, sec, opt);
    return out;
}

namespace {

const SpectralResult& need(const SectorResults& r, Sector s, bool vectors)
{
    const auto& x = r[static_cast<int>(s)];
    if (!x) throw Error(ErrorKind::InvalidArgument, std::string("sector ") + sector_name(s) + " was not solved");
    if (vectors && !x->has_vectors())
        throw Error(ErrorKind::InvalidArgument, std::string("sector ") + sector_name(s) + " was solved without vectors");
    return *x;
}

// Slowest eigenpair of a diagonal sector, resolving a degenerate null cluster by
// the trace-carrying combination.
std::pair<Matrix, Matrix> slowest_diagonal(const SpectralResult& r)
{
    const double tol = 1e-10 * std::max(r.scale, 1.0);
    std::size_t k = 1;
    while (k < r.right_ops.size() && std::abs(r.eigenvalues[k] - r.eigenvalues[0]) <= tol) ++k;
    if (k == 1) return {r.right_ops[0], r.left_ops[0]};
    Matrix rho = Matrix::Zero(r.cutoff, r.cutoff), j = Matrix::Zero(r.cutoff, r.cutoff);
    double w = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const cplx c = std::conj(r.right_ops[i].trace());
        rho += c * r.right_ops[i];
        j += c * r.left_ops[i];
        w += std::norm(c);
    }
    if (w == 0.0) return {r.right_ops[0], r.left_ops[0]};
    return {rho, j / w};
}

} // namespace

Manifold steady_and_coherences(const SectorResults& results)
{
    Manifold m;
    for (Sector s : {Sector::PP, Sector::MM}) {
        const SpectralResult& r = need(results, s, true);
        auto [rho, j] = slowest_diagonal(r);
        const cplx tr = rho.trace();
        if (std::abs(tr) < 1e-14) throw Error(ErrorKind::NonPositiveSteadyState, std::string("sector ") + sector_name(s) + " steady state is traceless");
        rho /= tr;
        rho = (rho + rho.adjoint()).eval() / 2.0;
        j /= std::conj((j.adjoint() * rho).trace());
        j = (j + j.adjoint()).eval() / 2.0;
        const double min_ev = Eigen::SelfAdjointEigenSolver<Matrix>(rho, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
        if (min_ev < -1e-8) {
            std::ostringstream os;
            os << "steady state of sector " << sector_name(s) << " has eigenvalue " << min_ev;
            throw Error(ErrorKind::NonPositiveSteadyState, os.str());
        }
        const int idx = static_cast<int>(s);
        m.rho[idx] = rho;
        m.j[idx] = j;
        m.lambda0[idx] = r.eigenvalues[0];
        m.cutoff = r.cutoff;
    }
    {
        const SpectralResult& r = need(results, Sector::PM, true);
        Matrix rho = r.right_ops[0];
        Matrix j = r.left_ops[0];
        rho /= rho.norm();
        Eigen::Index bi = 0, bj = 0;
        rho.cwiseAbs().maxCoeff(&bi, &bj);
        const cplx phase = std::polar(1.0, -std::arg(rho(bi, bj)));
        rho *= phase;
        j /= std::conj((j.adjoint() * rho).trace());
        const int pm = static_cast<int>(Sector::PM), mp = static_cast<int>(Sector::MP);
        m.rho[pm] = rho;
        m.j[pm] = j;
        m.lambda0[pm] = r.eigenvalues[0];
        m.rho[mp] = rho.adjoint();
        m.j[mp] = j.adjoint();
        m.lambda0[mp] = std::conj(r.eigenvalues[0]);
    }
    return m;
}

Gaps gaps(const SectorResults& results)
{
    auto clamp = [](double x) { return x < 0 ? 0.0 : x; };
    Gaps g;
    const SpectralResult& pp = need(results, Sector::PP, false);
    const SpectralResult& mm = need(results, Sector::MM, false);
    const SpectralResult& pm = need(results, Sector::PM, false);
    if (pp.eigenvalues.size() < 2 || mm.eigenvalues.size() < 2)
        throw Error(ErrorKind::InvalidArgument, "diagonal sectors need at least two eigenvalues");
    g.pp = clamp(-pp.eigenvalues[1].real());
    g.mm = clamp(-mm.eigenvalues[1].real());
    g.pm = clamp(-pm.eigenvalues[0].real());
    return g;
}

std::array<Matrix, 4> conserved_quantities(const SectorResults& results)
{
    return steady_and_coherences(results).j;
}

double trace_distance_fro(const Matrix& a, const Matrix& b) { return (a - b).norm(); }

namespace {

Matrix corner(const Matrix& rho, int mo, int no)
{
    const int half = static_cast<int>(rho.rows()) / 2;
    Matrix z(half, half);
    for (int j = 0; j < half; ++j)
        for (int i = 0; i < half; ++i) z(i, j) = rho(2 * i + mo, 2 * j + no);
    return z;
}

Matrix sorted_unitary(const Matrix& z)
{
    const Matrix h = (z + z.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const int n = static_cast<int>(h.rows());
    Matrix u(n, n);
    // Eigen returns ascending eigenvalues; reverse for descending.
    for (int k = 0; k < n; ++k) {
        Vector v = es.eigenvectors().col(n - 1 - k);
        Eigen::Index imax = 0;
        v.cwiseAbs().maxCoeff(&imax);
        v *= std::polar(1.0, -std::arg(v(imax)));
        u.col(k) = v;
    }
    return u;
}

} // namespace

NSDiagnostic ns_diagnostic(const Manifold& m)
{
    if (m.cutoff % 2 != 0) throw Error(ErrorKind::CutoffParity, "noiseless-subsystem diagnostic requires an even cutoff");
    const Matrix zpp = corner(m.rho0(Sector::PP), 0, 0);
    const Matrix zmm = corner(m.rho0(Sector::MM), 1, 1);
    Matrix zpm = corner(m.rho0(Sector::PM), 0, 1);
    // Coherences are Frobenius-normalised; bring them to the scale of z_{++}.
    zpm *= zpp.norm() / std::max(zpm.norm(), 1e-300);
    const Matrix up = sorted_unitary(zpp), um = sorted_unitary(zmm);
    NSDiagnostic d;
    d.z[0] = up.adjoint() * zpp * up;
    d.z[1] = up.adjoint() * zpm * um;
    d.z[2] = d.z[1].adjoint();
    d.z[3] = um.adjoint() * zmm * um;
    d.d_pp_mm = trace_distance_fro(d.z[0], d.z[3]);
    d.d_pp_pm = trace_distance_fro(d.z[0], d.z[1]);
    return d;
}

double photon_number(const Manifold& m, PhotonState which)
{
    const Matrix n = number(FockSpace(m.cutoff)).data();
    switch (which) {
    case PhotonState::EvenSteady: return (m.rho0(Sector::PP) * n).trace().real();
    case PhotonState::OddSteady: return (m.rho0(Sector::MM) * n).trace().real();
    case PhotonState::Mixture: return 0.5 * ((m.rho0(Sector::PP) + m.rho0(Sector::MM)) * n).trace().real();
    }
    return 0.0;
}

PointAnalysis analyze_point(const EffectiveParams& p, int keep)
{
    PointAnalysis a;
    a.params = resolve_cutoff(p, 2, true);
    const SuperOperator s = build_single_mode(a.params);
    a.results = solve_sectors(s, {Sector::PP, Sector::PM, Sector::MM}, SolveOptions{true, keep});
    a.manifold = steady_and_coherences(a.results);
    a.gaps = gaps(a.results);
    return a;
}

} // namespace catq
