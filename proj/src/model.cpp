#include "catq/model.hpp"

#include <cmath>
#include <sstream>

#include "catq/fock.hpp"

namespace catq {

void EffectiveParams::validate() const
{
    const double vals[] = {delta, g2drive.real(), g2drive.imag(), kerr, eta2ph, kappa1, kappaphi};
    for (double v : vals)
        if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "effective parameters must be finite");
    if (kerr < 0 || eta2ph < 0 || kappa1 < 0 || kappaphi < 0)
        throw Error(ErrorKind::InvalidArgument, "kerr, eta2ph, kappa1 and kappaphi must be non-negative");
    if (cutoff < 0 || cutoff == 1) throw Error(ErrorKind::InvalidArgument, "cutoff must be 0 (auto) or >= 2");
}

DerivedCouplings derive_couplings(const MicroParams& m)
{
    if (!(m.kappa_r > 0)) throw Error(ErrorKind::InvalidArgument, "kappa_r must be positive");
    if (std::abs(m.eps_d) > std::abs(m.eps_p))
        warn("drive-ordering", "|eps_d| exceeds |eps_p|; the pump is assumed to dominate");

    DerivedCouplings d;
    const double ps2 = m.phi_s * m.phi_s;
    const double pr2 = m.phi_r * m.phi_r;
    d.u_s = m.ej * ps2 * ps2 / 2.0;
    d.u_r = m.ej * pr2 * pr2 / 2.0;
    d.chi_rs = m.ej * ps2 * pr2;
    d.delta_rp = m.omega_r - m.omega_p;
    d.xi_p = -I * m.eps_p / (m.kappa_r / 2.0 + I * d.delta_rp);
    d.g_2 = d.chi_rs * std::conj(d.xi_p) / 2.0;

    const double c = ps2 + pr2;
    const double shift = 1.0 - c / 2.0 - pr2 * std::norm(d.xi_p);
    d.omega_eff_s = m.ej * ps2 * shift;
    d.omega_eff_r = m.ej * pr2 * shift;
    d.delta_s = m.omega_s + d.omega_eff_s - (m.omega_p + m.omega_d) / 2.0;
    d.delta_r = m.omega_r + d.omega_eff_r - m.omega_d;

    d.gamma_filter = 1.0 / (cplx(0.5, 0.0) - I * d.delta_r / m.kappa_r);
    d.g2drive = -2.0 * I * d.gamma_filter * m.eps_d * d.g_2 / m.kappa_r;
    d.eta2ph = 2.0 * d.gamma_filter.real() * std::norm(d.g_2) / m.kappa_r;
    return d;
}

EffectiveParams effective_from_micro(const MicroParams& m, int cutoff)
{
    const DerivedCouplings d = derive_couplings(m);
    EffectiveParams p;
    p.delta = d.delta_s;
    p.g2drive = d.g2drive;
    p.kerr = d.u_s;
    p.eta2ph = d.eta2ph;
    p.kappa1 = m.kappa_s;
    p.cutoff = cutoff;
    return p;
}

EffectiveParams from_theta(const ThetaParam& t, cplx g2drive, double delta, const Losses& losses, int cutoff)
{
    if (!(t.w > 0)) throw Error(ErrorKind::InvalidArgument, "W must be positive");
    if (t.theta < 0 || t.theta > M_PI / 2 + 1e-15) throw Error(ErrorKind::InvalidArgument, "theta must lie in [0, pi/2]");
    EffectiveParams p;
    p.delta = delta;
    p.g2drive = g2drive;
    p.eta2ph = t.w * std::cos(t.theta);
    p.kerr = t.w * std::sin(t.theta);
    // cos(pi/2) is 6e-17, not 0.
    if (p.eta2ph < 1e-15 * t.w) p.eta2ph = 0.0;
    p.kappa1 = losses.kappa1;
    p.kappaphi = losses.kappaphi;
    p.cutoff = cutoff;
    return p;
}

ThetaParam to_theta(double eta2ph, double kerr)
{
    return {std::hypot(eta2ph, kerr), std::atan2(kerr, eta2ph)};
}

cplx alpha_steady(const EffectiveParams& p)
{
    if (p.delta != 0.0) throw Error(ErrorKind::InvalidArgument, "the stationary amplitude formula holds at zero detuning only");
    if (p.kerr == 0.0 && p.eta2ph == 0.0) throw Error(ErrorKind::ZeroStabilization, "kerr and eta2ph both vanish");
    if (p.g2drive == cplx(0.0)) return 0.0;
    // With the -U/2 a^2+ a^2 Kerr term the exactly stationary cat satisfies
    // (U + i eta) alpha^2 = G.
    return std::sqrt(p.g2drive / cplx(p.kerr, p.eta2ph));
}

double dephasing_from_thermal(double nth, double kappa_r, double chi_rs)
{
    if (nth < 0 || kappa_r < 0 || chi_rs < 0) throw Error(ErrorKind::InvalidArgument, "inputs must be non-negative");
    const double den = kappa_r * kappa_r + chi_rs * chi_rs;
    if (den == 0.0) return 0.0;
    return nth * kappa_r * chi_rs * chi_rs / den;
}

double bit_flip_rate(const EffectiveParams& p, cplx alpha) { return p.kappa1 * std::norm(alpha); }

double phase_flip_estimate(const EffectiveParams& p, cplx alpha)
{
    const double n = std::norm(alpha);
    if (n == 0.0) return p.kappaphi / 2.0;
    if (2.0 * n > 700.0) return 0.0;
    return p.kappaphi * n / std::sinh(2.0 * n);
}

EffectiveParams resolve_cutoff(EffectiveParams p, int minimum, bool even)
{
    if (p.cutoff == 0) {
        int n = minimum;
        if (p.eta2ph > 0 || p.kerr > 0) {
            EffectiveParams r = p;
            r.delta = 0.0;
            n = std::max(n, guard_cutoff(alpha_steady(r)));
        }
        p.cutoff = n;
    }
    if (even && p.cutoff % 2 == 1) ++p.cutoff;
    return p;
}

const std::array<TableRow, 6>& design_table()
{
    static const std::array<TableRow, 6> rows{{
        {'a', 0.016, 4.81, 5.46, 1.17},
        {'b', 1.0, 10.7, 4.91, 4.50},
        {'c', 2.0, 14.1, 6.43, 2.15},
        {'d', 3.0, 19.9, 9.11, 1.07},
        {'e', 4.0, 23.9, 10.7, 0.75},
        {'f', 5.0, 29.1, 13.3, 0.50},
    }};
    return rows;
}

const TableRow& design_row(char label)
{
    for (const auto& r : design_table())
        if (r.label == label) return r;
    throw Error(ErrorKind::InvalidArgument, std::string("unknown design row '") + label + "'");
}

EffectiveParams row_params(const TableRow& row, double delta_over_g, const Losses& losses, int cutoff)
{
    EffectiveParams p;
    p.eta2ph = row.eta_mhz;
    p.kerr = row.u_over_eta * row.eta_mhz;
    p.g2drive = row.g_over_eta * row.eta_mhz;
    p.delta = delta_over_g * row.g_over_eta * row.eta_mhz;
    p.kappa1 = losses.kappa1;
    p.kappaphi = losses.kappaphi;
    p.cutoff = cutoff;
    return p;
}

TableCheck check_design_row(const TableRow& row, double kappa_r, double xi_p_abs)
{
    // eta = 4|g2|^2/kappa_r with |g2| = chi |xi_p| / 2.
    const double chi = row.chi_over_eta * row.eta_mhz;
    const double g2 = chi * xi_p_abs / 2.0;
    TableCheck c;
    c.label = row.label;
    c.eta_table = row.eta_mhz;
    c.eta_predicted = 4.0 * g2 * g2 / kappa_r;
    c.relative_deviation = std::abs(c.eta_predicted - c.eta_table) / c.eta_table;
    c.consistent = c.relative_deviation <= 0.05;
    if (!c.consistent) {
        std::ostringstream os;
        os << "design row " << row.label << ": eta from chi^2|xi_p|^2/kappa_r is " << c.eta_predicted
           << " MHz vs tabulated " << c.eta_table << " MHz";
        warn("table-consistency", os.str());
    }
    return c;
}


double mean_field_photons(const EffectiveParams& p)
{
    // |U n - Delta|^2 + eta^2 n^2 = |G|^2
    const double w2 = p.kerr * p.kerr + p.eta2ph * p.eta2ph;
    if (w2 == 0.0) return 0.0;
    const double g = std::abs(p.g2drive);
    const double disc = w2 * g * g - p.eta2ph * p.eta2ph * p.delta * p.delta;
    if (disc < 0) return 0.0;
    const double n = (p.kerr * p.delta + std::sqrt(disc)) / w2;
    return std::max(n, 0.0);
}

int auto_cutoff(const EffectiveParams& p, double delta)
{
    EffectiveParams q = p;
    q.delta = delta;
    double n = mean_field_photons(q);
    if (p.eta2ph > 0 || p.kerr > 0) {
        q.delta = 0.0;
        n = std::max(n, std::norm(alpha_steady(q)));
    }
    int cut = guard_cutoff(std::sqrt(n));
    if (cut % 2) ++cut;
    return cut;
}

MicroParams with_zero_detunings(MicroParams m)
{
    // omega_eff does not depend on omega_s or omega_d, only on omega_p via xi_p.
    const DerivedCouplings d = derive_couplings(m);
    m.omega_d = m.omega_r + d.omega_eff_r;
    m.omega_s = (m.omega_p + m.omega_d) / 2.0 - d.omega_eff_s;
    return m;
}

} // namespace catq
