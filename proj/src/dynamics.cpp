#include "catq/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "catq/fock.hpp"
#include "catq/parallel.hpp"
#include "catq/rwa.hpp"

namespace catq {

void QubitState::validate(double herm_tol) const
{
    if ((q - q.adjoint()).cwiseAbs().maxCoeff() > herm_tol)
        throw Error(ErrorKind::InvalidArgument, "logical state is not Hermitian");
}

QubitState QubitState::zero_l()
{
    QubitState s;
    s.q(0, 0) = 1.0;
    return s;
}

QubitState QubitState::one_l()
{
    QubitState s;
    s.q(1, 1) = 1.0;
    return s;
}

QubitState QubitState::plus_l()
{
    QubitState s;
    s.q.setConstant(0.5);
    return s;
}

namespace {

void check_drift(const Matrix& rho0, const Matrix& rho, double tol)
{
    const double tr = std::abs(rho.trace() - rho0.trace());
    const double herm = (rho - rho.adjoint()).norm() - (rho0 - rho0.adjoint()).norm();
    if (tr > tol || herm > tol) {
        std::ostringstream os;
        os << "evolution drift exceeds tolerance " << tol << " (trace " << tr << ", hermiticity " << herm << ")";
        throw Error(ErrorKind::ToleranceNotMet, os.str());
    }
}

ExpmvOptions krylov_options(const EvolveOptions& opt)
{
    ExpmvOptions e;
    e.tol = std::max(1e-14, opt.tol * 1e-2);
    e.krylov_dim = opt.krylov_dim;
    return e;
}

} // namespace

Matrix evolve(const SuperOperator& s, const Matrix& rho0, double t, const EvolveOptions& opt)
{
    const int d = s.hilbert_dim();
    if (rho0.rows() != d || rho0.cols() != d) throw Error(ErrorKind::DimensionMismatch, "initial state does not match superoperator");
    if (t == 0.0) return rho0;
    const Matrix rho = unvec(expmv(s.matrix, t, vec(rho0), krylov_options(opt)), d);
    check_drift(rho0, rho, opt.tol);
    return rho;
}

std::vector<Matrix> evolve_samples(const SuperOperator& s, const Matrix& rho0, const std::vector<double>& times,
                                   const EvolveOptions& opt)
{
    const int d = s.hilbert_dim();
    if (rho0.rows() != d || rho0.cols() != d) throw Error(ErrorKind::DimensionMismatch, "initial state does not match superoperator");
    std::vector<Matrix> out;
    out.reserve(times.size());
    Vector v = vec(rho0);
    double now = 0.0;
    const ExpmvOptions eo = krylov_options(opt);
    for (double t : times) {
        if (t < now) throw Error(ErrorKind::InvalidArgument, "sample times must be increasing and non-negative");
        if (t > now) v = expmv(s.matrix, t - now, v, eo);
        now = t;
        Matrix rho = unvec(v, d);
        check_drift(rho0, rho, opt.tol);
        out.push_back(std::move(rho));
    }
    return out;
}

QubitState q_extract(const Matrix& rho, const Manifold& bare)
{
    QubitState s;
    for (int mu = 0; mu < 2; ++mu)
        for (int nu = 0; nu < 2; ++nu) {
            const Matrix& j = bare.j[mu * 2 + nu];
            // Tr(J^dag rho) = sum conj(J_ab) rho_ab
            s.q(mu, nu) = (j.conjugate().cwiseProduct(rho)).sum();
        }
    return s;
}

Matrix q_embed(const QubitState& q, const Manifold& bare)
{
    Matrix rho = Matrix::Zero(bare.cutoff, bare.cutoff);
    for (int mu = 0; mu < 2; ++mu)
        for (int nu = 0; nu < 2; ++nu) rho += q.q(mu, nu) * bare.rho[mu * 2 + nu];
    rho = (rho + rho.adjoint()).eval() / 2.0;
    const double min_ev = Eigen::SelfAdjointEigenSolver<Matrix>(rho, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
    if (min_ev < -1e-6) {
        std::ostringstream os;
        os << "embedded state has eigenvalue " << min_ev;
        throw Error(ErrorKind::NonPhysicalEmbedding, os.str());
    }
    return rho;
}

double fidelity(const QubitState& a, const QubitState& b)
{
    const double overlap = (a.q * b.q).trace().real();
    double da = a.q.determinant().real(), db = b.q.determinant().real();
    if (da < -1e-10 || db < -1e-10) {
        std::ostringstream os;
        os << "negative determinant clamped (" << da << ", " << db << ")";
        warn("fidelity", os.str());
    }
    da = std::max(da, 0.0);
    db = std::max(db, 0.0);
    return overlap + 2.0 * std::sqrt(da * db);
}

Manifold bare_manifold(const EffectiveParams& p)
{
    EffectiveParams q = p;
    q.kappa1 = 0.0;
    q.kappaphi = 0.0;
    return analyze_point(q, 1).manifold;
}

EffectiveParams with_real_alpha(EffectiveParams p)
{
    p.g2drive = std::polar(std::abs(p.g2drive), std::arg(cplx(p.kerr, p.eta2ph)));
    return p;
}

RecoveryGrid recovery_grid(const EffectiveParams& p, const std::vector<double>& delta_errs, const std::vector<double>& t0s,
                           const RecoveryOptions& opt, int workers)
{
    if (p.delta != 0.0) throw Error(ErrorKind::InvalidArgument, "the recovery protocol starts at zero detuning");
    if (!(p.eta2ph > 0)) throw Error(ErrorKind::InvalidArgument, "recovery needs eta2ph > 0");
    if (delta_errs.empty() || t0s.empty()) throw Error(ErrorKind::InvalidArgument, "recovery grid is empty");
    RecoveryGrid g;
    g.delta_errs = delta_errs;
    g.t0s = t0s;
    EffectiveParams q = p;
    if (q.cutoff == 0) {
        double dmax = 0.0;
        for (double d : delta_errs) dmax = std::max(dmax, std::abs(d));
        q.cutoff = auto_cutoff(q, dmax);
    }
    if (q.cutoff % 2) ++q.cutoff;
    g.cutoff = q.cutoff;
    g.t1 = opt.t1 >= 0 ? opt.t1 : 5.0 / q.eta2ph;

    const Manifold bare = bare_manifold(q);
    const QubitState q0 = QubitState::plus_l();
    const Matrix rho0 = q_embed(q0, bare);
    const SuperOperator l0 = build_single_mode(q);

    // Tr(J^dag e^{L t1} rho) = Tr((e^{L^dag t1} J)^dag rho)
    Manifold pulled = bare;
    const SparseMatrix l0_adj = l0.matrix.adjoint();
    for (int s = 0; s < 4; ++s)
        pulled.j[s] = unvec(expmv(l0_adj, g.t1, vec(bare.j[s]), krylov_options(opt.evolve)), q.cutoff);

    const OperatorMatrix n = number(FockSpace(q.cutoff));
    g.infidelity.resize(static_cast<Eigen::Index>(delta_errs.size()), static_cast<Eigen::Index>(t0s.size()));
    parallel_for(delta_errs.size(), workers, [&](std::size_t i) {
        const SuperOperator lq = add_hamiltonian(l0, delta_errs[i] * n);
        const std::vector<Matrix> quenched = evolve_samples(lq, rho0, t0s, opt.evolve);
        for (std::size_t k = 0; k < quenched.size(); ++k)
            g.infidelity(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = 1.0 - fidelity(q0, q_extract(quenched[k], pulled));
    });
    return g;
}

std::vector<double> recovery_scan(const EffectiveParams& p, double delta_err, const std::vector<double>& t0s,
                                  const RecoveryOptions& opt)
{
    EffectiveParams q = p;
    if (q.cutoff == 0) q.cutoff = auto_cutoff(q, delta_err);
    const RecoveryGrid g = recovery_grid(q, {delta_err}, t0s, opt, 1);
    std::vector<double> out(t0s.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = g.infidelity(0, static_cast<Eigen::Index>(k));
    return out;
}

double recovery_protocol(const EffectiveParams& p, double delta_err, double t0, const RecoveryOptions& opt)
{
    return recovery_scan(p, delta_err, {t0}, opt).front();
}

double omega_x(const EffectiveParams& p, double f)
{
    EffectiveParams q = p;
    q.delta = 0.0;
    return 2.0 * f * alpha_steady(q).real();
}

namespace {

QubitState rotate_x(const QubitState& q0, double angle)
{
    Matrix2 r;
    r << std::cos(angle), -I * std::sin(angle), -I * std::sin(angle), std::cos(angle);
    QubitState out;
    out.q = r * q0.q * r.adjoint();
    return out;
}

std::vector<double> linspace(double a, double b, int n)
{
    std::vector<double> v(n);
    for (int k = 0; k < n; ++k) v[k] = (n == 1) ? b : a + (b - a) * k / (n - 1);
    return v;
}

} // namespace

GateXResult gate_x(const EffectiveParams& p, double f, double duration, int samples, const EvolveOptions& opt)
{
    if (f < 0 || duration < 0) throw Error(ErrorKind::InvalidArgument, "drive amplitude and duration must be non-negative");
    EffectiveParams q = resolve_cutoff(p, 2, true);
    const Manifold bare = bare_manifold(q);
    const SuperOperator lg = add_hamiltonian(build_single_mode(q), x_drive_hamiltonian(f, FockSpace(q.cutoff)));
    const QubitState q0 = QubitState::zero_l();
    const Matrix rho0 = q_embed(q0, bare);

    GateXResult res;
    res.omega_x = omega_x(q, f);
    res.trajectory.times = linspace(0.0, duration, std::max(samples, 2));
    const auto states = evolve_samples(lg, rho0, res.trajectory.times, opt);
    auto& inf = res.trajectory.observables["infidelity"];
    for (std::size_t k = 0; k < states.size(); ++k) {
        const QubitState qt = q_extract(states[k], bare);
        res.trajectory.qubits.push_back(qt);
        inf.push_back(1.0 - fidelity(rotate_x(q0, res.omega_x * res.trajectory.times[k]), qt));
    }
    res.final_infidelity = inf.back();
    return res;
}

double gate_x_error(const EffectiveParams& p, double f, const EvolveOptions& opt)
{
    EffectiveParams q = resolve_cutoff(p, 2, true);
    const double w = omega_x(q, f);
    if (!(w > 0)) throw Error(ErrorKind::InvalidArgument, "the X-gate Rabi frequency must be positive");
    const Manifold bare = bare_manifold(q);
    const SuperOperator lg = add_hamiltonian(build_single_mode(q), x_drive_hamiltonian(f, FockSpace(q.cutoff)));
    const QubitState q0 = QubitState::zero_l();
    const Matrix rf = evolve(lg, q_embed(q0, bare), M_PI / w, opt);
    return 1.0 - fidelity(q0, q_extract(rf, bare));
}

Matrix4 q2_extract(const Matrix& rho, const Manifold& m1, const Manifold& m2)
{
    Matrix4 q2;
    for (int mu = 0; mu < 2; ++mu)
        for (int nu = 0; nu < 2; ++nu)
            for (int mu2 = 0; mu2 < 2; ++mu2)
                for (int nu2 = 0; nu2 < 2; ++nu2) {
                    const Matrix k = Eigen::kroneckerProduct(Matrix(m1.j[mu * 2 + nu].adjoint()), Matrix(m2.j[mu2 * 2 + nu2].adjoint())).eval();
                    // Tr(rho K) = sum_ab rho_ab K_ba
                    q2(mu * 2 + mu2, nu * 2 + nu2) = (rho.transpose().cwiseProduct(k)).sum();
                }
    return q2;
}

double bell_expectation(const Matrix4& q2, int sign)
{
    Eigen::Vector4cd b = Eigen::Vector4cd::Zero();
    b(0) = 1.0 / std::sqrt(2.0);
    b(3) = (sign >= 0 ? 1.0 : -1.0) / std::sqrt(2.0);
    return (b.adjoint() * q2 * b)(0, 0).real();
}

std::pair<double, double> fit_sinusoid(const std::vector<double>& t, const std::vector<double>& y, double w_lo, double w_hi)
{
    if (t.size() != y.size() || t.size() < 4) throw Error(ErrorKind::InvalidArgument, "sinusoid fit needs >= 4 samples");
    const Eigen::Index n = static_cast<Eigen::Index>(t.size());
    Eigen::VectorXd yy = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
    auto solve = [&](double w, Eigen::Vector3d* coef) {
        Eigen::MatrixXd a(n, 3);
        for (Eigen::Index k = 0; k < n; ++k) a.row(k) << std::sin(w * t[k]), std::cos(w * t[k]), 1.0;
        const Eigen::Vector3d c = a.colPivHouseholderQr().solve(yy);
        if (coef) *coef = c;
        return (a * c - yy).squaredNorm();
    };
    const int grid = 4000;
    double best_w = w_lo, best = solve(w_lo, nullptr);
    for (int k = 1; k <= grid; ++k) {
        const double w = w_lo + (w_hi - w_lo) * k / grid;
        const double r = solve(w, nullptr);
        if (r < best) {
            best = r;
            best_w = w;
        }
    }
    const double h = (w_hi - w_lo) / grid;
    double a = std::max(w_lo, best_w - h), b = std::min(w_hi, best_w + h);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = solve(c, nullptr), fd = solve(d, nullptr);
    for (int it = 0; it < 80 && (b - a) > 1e-12 * std::max(1.0, b); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = solve(c, nullptr);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = solve(d, nullptr);
        }
    }
    const double w = (a + b) / 2.0;
    Eigen::Vector3d coef;
    solve(w, &coef);
    return {w, std::hypot(coef(0), coef(1))};
}

GateXXResult gate_xx(const EffectiveParams& p1, const EffectiveParams& p2, double j, double duration, int samples,
                     const EvolveOptions& opt)
{
    const EffectiveParams q1 = resolve_cutoff(p1, 2, true), q2 = resolve_cutoff(p2, 2, true);
    const Manifold m1 = bare_manifold(q1), m2 = bare_manifold(q2);
    GateHamiltonian hop;
    hop.kind = GateKind::XXHop;
    hop.amplitude = j;
    const SuperOperator l = build_two_mode(q1, q2, hop);
    const Matrix rho0 = Eigen::kroneckerProduct(m1.rho0(Sector::PP), m2.rho0(Sector::PP)).eval();

    GateXXResult res;
    EffectiveParams r1 = q1, r2 = q2;
    r1.delta = r2.delta = 0.0;
    res.omega_xx_expected = 2.0 * j * std::abs(alpha_steady(r1) * alpha_steady(r2));
    res.trajectory.times = linspace(0.0, duration, std::max(samples, 2));
    const auto states = evolve_samples(l, rho0, res.trajectory.times, opt);
    auto& bp = res.trajectory.observables["bell_plus"];
    auto& bm = res.trajectory.observables["bell_minus"];
    auto& ew = res.trajectory.observables["even_weight"];
    auto& p00 = res.trajectory.observables["pop_00"];
    auto& p11 = res.trajectory.observables["pop_11"];
    std::vector<double> diff, pops;
    for (const auto& rho : states) {
        const Matrix4 q = q2_extract(rho, m1, m2);
        bp.push_back(bell_expectation(q, +1));
        bm.push_back(bell_expectation(q, -1));
        ew.push_back((q(0, 0) + q(3, 3)).real());
        p00.push_back(q(0, 0).real());
        p11.push_back(q(3, 3).real());
        diff.push_back(bp.back() - bm.back());
        pops.push_back(p00.back() - p11.back());
    }
    if (j > 0 && states.size() >= 4) {
        const double w0 = 2.0 * res.omega_xx_expected;
        const auto [w, amp] = fit_sinusoid(res.trajectory.times, diff, 0.2 * w0, 3.0 * w0);
        res.omega_fit = w;
        res.amplitude_fit = amp;
        const auto [wp, ap] = fit_sinusoid(res.trajectory.times, pops, 0.2 * w0, 3.0 * w0);
        res.omega_pop_fit = wp;
        res.amplitude_pop_fit = ap;
    }
    return res;
}

AdiabaticReport adiabatic_validation(const MicroParams& m, int storage_cutoff, int readout_cutoff, double t_final,
                                     int samples, const EvolveOptions& opt)
{
    const DerivedCouplings d = derive_couplings(m);
    const rwa::HamiltonianCoefficients hc = rwa::effective_hamiltonian(m.ej, m.phi_s, m.phi_r, d.xi_p);
    const EffectiveParams single = effective_from_micro(m, storage_cutoff);

    AdiabaticReport rep;
    // The cross-Kerr shift detunes the readout per storage photon, so it counts as an effective rate too.
    const double fastest =
        std::max({single.eta2ph, std::abs(single.g2drive), single.kerr, single.kappa1, std::abs(single.delta), hc.chi_rs});
    rep.rate_ratio = fastest > 0 ? m.kappa_r / fastest : INFINITY;
    if (rep.rate_ratio < 10.0) {
        std::ostringstream os;
        os << "kappa_r is only " << rep.rate_ratio << "x the largest effective storage rate";
        warn("adiabaticity", os.str());
    }

    const FockSpace ss(storage_cutoff), sr(readout_cutoff);
    const Matrix is = Matrix::Identity(storage_cutoff, storage_cutoff), ir = Matrix::Identity(readout_cutoff, readout_cutoff);
    const Matrix as = Eigen::kroneckerProduct(annihilation(ss).data(), ir).eval();
    const Matrix ar = Eigen::kroneckerProduct(is, annihilation(sr).data()).eval();
    const Matrix ns = as.adjoint() * as, nr = ar.adjoint() * ar;
    const Matrix asd2 = as.adjoint() * as.adjoint();
    const Matrix ard2 = ar.adjoint() * ar.adjoint();
    const int dim = storage_cutoff * readout_cutoff;
    const Matrix param = (hc.g_2 * asd2 + std::conj(m.eps_d) * Matrix::Identity(dim, dim)) * ar;
    const Matrix h = d.delta_s * ns + d.delta_r * nr - hc.u_s / 2.0 * (asd2 * as * as) - hc.u_r / 2.0 * (ard2 * ar * ar) -
                     hc.chi_rs * ns * nr - (param + param.adjoint());
    const SuperOperator l2 = lindbladian(h, {{m.kappa_r, ar}, {m.kappa_s, as}}, {storage_cutoff, readout_cutoff});
    const SuperOperator l1 = build_single_mode(single);

    rep.times = linspace(0.0, t_final, std::max(samples, 2));
    Matrix v2 = Matrix::Zero(dim, dim);
    v2(0, 0) = 1.0;
    Matrix v1 = Matrix::Zero(storage_cutoff, storage_cutoff);
    v1(0, 0) = 1.0;
    const auto s2 = evolve_samples(l2, v2, rep.times, opt);
    const auto s1 = evolve_samples(l1, v1, rep.times, opt);
    const Matrix n1 = number(ss).data();
    for (std::size_t k = 0; k < rep.times.size(); ++k) {
        rep.n_two_mode.push_back((s2[k] * ns).trace().real());
        rep.n_single_mode.push_back((s1[k] * n1).trace().real());
    }
    const double ref = std::max(std::abs(rep.n_single_mode.back()), 1e-12);
    for (std::size_t k = 0; k < rep.times.size(); ++k)
        rep.max_relative_deviation = std::max(rep.max_relative_deviation, std::abs(rep.n_two_mode[k] - rep.n_single_mode[k]) / ref);
    rep.final_relative_deviation = std::abs(rep.n_two_mode.back() - rep.n_single_mode.back()) / ref;
    return rep;
}

} // namespace catq
