// rates.hpp — Logical phase-flip rate, optimal detuning, critical drive and
// exponential-suppression fits

#pragma once

#include <optional>
#include <vector>

#include "catq/model.hpp"
#include "catq/types.hpp"

namespace catq {

// Slowest off-diagonal (+-) decay rate of L0 + kappaphi D[n]. Needs kappa1 == 0.
double gamma_phi_exact(const EffectiveParams& p);

// Closed form kappaphi |alpha|^2 / sinh(2 |alpha|^2).
double gamma_phi_sinh(double kappaphi, double alpha2);

struct PerturbativeRate {
    double trace_formula = 0.0;            // -Re kappaphi Tr(J+-^dag D[n] rho+-)
    std::optional<double> sinh_form;       // only at delta = U = 0
};

PerturbativeRate gamma_phi_perturbative(const EffectiveParams& p);

enum class ScanAxis { Delta, G, KappaPhi };
const char* axis_name(ScanAxis a);

struct RatePoint {
    double value = 0.0;
    double gamma_phi = 0.0;
    double photon_number = 0.0;  // <n> in the even steady state
    double lambda_pp = 0.0;
    double lambda_pm = 0.0;
    EffectiveParams params;
};

struct RateScan {
    ScanAxis axis = ScanAxis::Delta;
    std::vector<double> values;
    std::vector<double> gamma_phi;
    std::vector<double> photon_number;
    std::vector<double> lambda_pp;
    std::vector<double> lambda_pm;
    std::vector<EffectiveParams> metadata;

    void push(const RatePoint& pt);
    void validate() const;
    std::size_t size() const { return values.size(); }
};

// Full diagnostics at one point (cutoff 0 -> auto cutoff at the point's detuning).
RatePoint rate_point(const EffectiveParams& p);

// The axis value replaces delta, |G| (phase of p.g2drive kept) or kappaphi.
RateScan scan(const EffectiveParams& p, ScanAxis axis, const std::vector<double>& values, int workers = 0);

struct OptimalDetuning {
    double delta_min = 0.0;
    double gamma_phi = 0.0;
    bool flat = false;  // gamma_phi varies by < 1e-12 over the window
    int cutoff = 0;
};

// Minimises gamma_phi over delta in [0, 2|G|]: coarse grid then golden section.
OptimalDetuning optimal_detuning(const EffectiveParams& p, int coarse_points = 81);
OptimalDetuning optimal_detuning(double g, const ThetaParam& theta, double kappaphi, int cutoff = 0);

// Scan over |G| with delta set to the optimal detuning at each point.
RateScan scan_optimal(const EffectiveParams& p, const std::vector<double>& gs, int workers = 0);

struct CriticalPoint {
    double g_c = 0.0;
    double g_below = 0.0;
    double g_above = 0.0;
    double delta_below = 0.0;  // delta_min at g_below
    double delta_above = 0.0;  // delta_min at g_above
    int evaluations = 0;
};

// Bisection on delta_min(G) > 0.05 G inside [g_lo, g_hi] to resolution 1e-3 W.
CriticalPoint find_gc(const EffectiveParams& p, double g_lo, double g_hi);
CriticalPoint find_gc(const ThetaParam& theta, double kappaphi, double g_lo, double g_hi, int cutoff = 0);

struct ZetaFit {
    double gamma0 = 0.0;
    double zeta = 0.0;  // ln gamma_phi ~ ln gamma0 - zeta G
    double r2 = 0.0;
    std::size_t first = 0;  // inclusive window bounds into the scan
    std::size_t last = 0;
};

ZetaFit extract_zeta(const RateScan& scan, std::size_t min_points = 6, double slope_spread = 0.1);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// log-log slope of gamma_phi against kappaphi.
LineFit fit_power_law(const RateScan& kappaphi_scan);

void clear_rate_cache();
std::size_t rate_cache_size();

} // namespace catq
