// dynamics.hpp — Master-equation evolution, logical-qubit embedding/extraction,
// fidelity, recovery and gate protocols, adiabatic-elimination check

#pragma once

#include <map>
#include <string>
#include <vector>

#include "catq/expmv.hpp"
#include "catq/liouvillian.hpp"
#include "catq/model.hpp"
#include "catq/spectral.hpp"
#include "catq/types.hpp"

namespace catq {

using Matrix2 = Eigen::Matrix2cd;

// Logical 2x2 matrix indexed by parity sector: 0 <-> +, 1 <-> -.
struct QubitState {
    Matrix2 q = Matrix2::Zero();

    void validate(double herm_tol = 1e-8) const;
    static QubitState zero_l();   // |0_L> = even cat
    static QubitState one_l();    // |1_L> = odd cat
    static QubitState plus_l();   // (|0_L> + |1_L>)/sqrt 2
};

struct Trajectory {
    std::vector<double> times;
    std::vector<QubitState> qubits;
    std::map<std::string, std::vector<double>> observables;
};

struct EvolveOptions {
    double tol = 1e-9;          // bound on trace and hermiticity drift
    int krylov_dim = 30;
};

Matrix evolve(const SuperOperator& s, const Matrix& rho0, double t, const EvolveOptions& opt = {});
// States at each of the increasing sample times.
std::vector<Matrix> evolve_samples(const SuperOperator& s, const Matrix& rho0, const std::vector<double>& times,
                                   const EvolveOptions& opt = {});

QubitState q_extract(const Matrix& rho, const Manifold& bare);
Matrix q_embed(const QubitState& q, const Manifold& bare);
double fidelity(const QubitState& a, const QubitState& b);

// Steady manifold of the bare Liouvillian (kappa = kappaphi = 0) at p's detuning.
Manifold bare_manifold(const EffectiveParams& p);

// Phase of G for which the resonant amplitude alpha is real and positive.
EffectiveParams with_real_alpha(EffectiveParams p);

struct RecoveryOptions {
    double t1 = -1.0;  // recovery time; default 5/eta
    EvolveOptions evolve{};
};

struct RecoveryGrid {
    std::vector<double> delta_errs;
    std::vector<double> t0s;
    Eigen::MatrixXd infidelity;  // rows: delta_err, cols: t0
    int cutoff = 0;
    double t1 = 0.0;
};

// One cutoff (auto from the largest delta_err when p.cutoff is 0) and one bare
// manifold for the whole grid. The t1 stage is applied to the conserved
// quantities through the adjoint generator, once per grid.
RecoveryGrid recovery_grid(const EffectiveParams& p, const std::vector<double>& delta_errs, const std::vector<double>& t0s,
                           const RecoveryOptions& opt = {}, int workers = 0);

double recovery_protocol(const EffectiveParams& p, double delta_err, double t0, const RecoveryOptions& opt = {});
// Infidelity for every t0 in an increasing list (one quench trajectory).
std::vector<double> recovery_scan(const EffectiveParams& p, double delta_err, const std::vector<double>& t0s,
                                  const RecoveryOptions& opt = {});

// Rabi frequency 2 F Re(alpha) at zero detuning.
double omega_x(const EffectiveParams& p, double f);

struct GateXResult {
    Trajectory trajectory;   // observables: t, infidelity vs ideal rotation
    double omega_x = 0.0;
    double final_infidelity = 0.0;
};

// Evolve |0_L> under L0 - i[F(a + a^dag), .] and compare with the ideal
// rotation exp(-i Omega_X t sigma_x) at each sample.
GateXResult gate_x(const EffectiveParams& p, double f, double duration, int samples = 2, const EvolveOptions& opt = {});

// Full Rabi period T_X = pi/Omega_X from |0_L> with losses; returns 1 - F(Q(0), Q(T_X)).
double gate_x_error(const EffectiveParams& p, double f, const EvolveOptions& opt = {});

struct GateXXResult {
    Trajectory trajectory;      // observables: bell_plus, bell_minus, even_weight, pop_00, pop_11
    double omega_xx_expected = 0.0;
    double omega_fit = 0.0;     // angular frequency of <B+> - <B->
    double amplitude_fit = 0.0;
    double omega_pop_fit = 0.0; // angular frequency of P(00) - P(11)
    double amplitude_pop_fit = 0.0;
};

using Matrix4 = Eigen::Matrix4cd;
Matrix4 q2_extract(const Matrix& rho, const Manifold& m1, const Manifold& m2);
double bell_expectation(const Matrix4& q2, int sign);

GateXXResult gate_xx(const EffectiveParams& p1, const EffectiveParams& p2, double j, double duration, int samples,
                     const EvolveOptions& opt = {});

// Fit y(t) ~ a sin(w t) + b cos(w t) + c over w; returns {w, amplitude}.
std::pair<double, double> fit_sinusoid(const std::vector<double>& t, const std::vector<double>& y, double w_lo, double w_hi);

struct AdiabaticReport {
    std::vector<double> times;
    std::vector<double> n_two_mode;
    std::vector<double> n_single_mode;
    double max_relative_deviation = 0.0;
    double final_relative_deviation = 0.0;
    double rate_ratio = 0.0;  // kappa_r / largest effective storage rate, cross-Kerr included
};

// Two-mode storage+readout model assembled from the resonant RWA coefficients
// versus the eliminated single-mode model, both started in vacuum.
AdiabaticReport adiabatic_validation(const MicroParams& m, int storage_cutoff, int readout_cutoff, double t_final,
                                     int samples, const EvolveOptions& opt = {});

} // namespace catq
