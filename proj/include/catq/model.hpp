// model.hpp — Effective cat-qubit parameters and closed-form relations to the
// microscopic two-cavity circuit

#pragma once

#include <array>
#include <string>

#include "catq/types.hpp"

namespace catq {

// Single-mode effective model. Rates and frequencies share one angular unit
// (MHz by default).
struct EffectiveParams {
    double delta = 0.0;      // detuning
    cplx g2drive = 0.0;      // two-photon drive G
    double kerr = 0.0;       // self-Kerr U
    double eta2ph = 0.0;     // two-photon loss eta
    double kappa1 = 0.0;     // single-photon loss
    double kappaphi = 0.0;   // pure dephasing
    int cutoff = 0;          // 0 selects the guard cutoff

    void validate() const;
};

struct MicroParams {
    double ej = 0.0;
    double phi_s = 0.0;
    double phi_r = 0.0;
    cplx eps_p = 0.0;
    cplx eps_d = 0.0;
    double omega_s = 0.0;
    double omega_r = 0.0;
    double omega_p = 0.0;
    double omega_d = 0.0;
    double kappa_r = 0.0;
    double kappa_s = 0.0;
};

struct DerivedCouplings {
    double u_s = 0.0;
    double u_r = 0.0;
    double chi_rs = 0.0;
    cplx xi_p = 0.0;
    cplx g_2 = 0.0;
    cplx gamma_filter = 0.0;
    double delta_s = 0.0;
    double delta_r = 0.0;
    double delta_rp = 0.0;
    double omega_eff_s = 0.0;
    double omega_eff_r = 0.0;
    cplx g2drive = 0.0;   // G after eliminating the readout mode
    double eta2ph = 0.0;  // eta after eliminating the readout mode
};

struct ThetaParam {
    double w = 1.0;
    double theta = 0.0;
};

struct Losses {
    double kappa1 = 0.0;
    double kappaphi = 0.0;
};

DerivedCouplings derive_couplings(const MicroParams& m);

// Storage-mode effective model implied by a circuit.
EffectiveParams effective_from_micro(const MicroParams& m, int cutoff = 0);

EffectiveParams from_theta(const ThetaParam& t, cplx g2drive, double delta, const Losses& losses = {}, int cutoff = 0);
ThetaParam to_theta(double eta2ph, double kerr);

// Resonant stationary cat amplitude (principal branch). Requires delta == 0.
cplx alpha_steady(const EffectiveParams& p);

double dephasing_from_thermal(double nth, double kappa_r, double chi_rs);
double bit_flip_rate(const EffectiveParams& p, cplx alpha);
double phase_flip_estimate(const EffectiveParams& p, cplx alpha);

// Copy of p with the cutoff resolved from the guard formula when it is 0.
EffectiveParams resolve_cutoff(EffectiveParams p, int minimum = 2, bool even = true);

// Reference design table (ratios to eta, eta in MHz).
struct TableRow {
    char label;
    double u_over_eta;
    double g_over_eta;
    double chi_over_eta;
    double eta_mhz;
};

const std::array<TableRow, 6>& design_table();
const TableRow& design_row(char label);

// Row parameters with G real positive; delta given as a multiple of G.
EffectiveParams row_params(const TableRow& row, double delta_over_g = 0.0, const Losses& losses = {}, int cutoff = 0);

struct TableCheck {
    char label;
    double eta_table;
    double eta_predicted;  // chi^2 |xi_p|^2 / kappa_r at zero readout detuning
    double relative_deviation;
    bool consistent;       // deviation within 5%
};

TableCheck check_design_row(const TableRow& row, double kappa_r = 100.0, double xi_p_abs = 1.0);


// Largest stationary photon number of the classical (mean-field) equations,
// 0 when only the vacuum solution exists.
double mean_field_photons(const EffectiveParams& p);

// Guard cutoff covering both the resonant cat and the mean-field photon number
// at the given detuning (even).
int auto_cutoff(const EffectiveParams& p, double delta);

// Readout/drive frequencies chosen so that both effective detunings vanish.
MicroParams with_zero_detunings(MicroParams m);

} // namespace catq
