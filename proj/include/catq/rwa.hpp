// rwa.hpp — Normally ordered expansion of powers of the junction phase and
// exact resonant-term filtering

#pragma once

#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "catq/types.hpp"

namespace catq::rwa {

using Rational = boost::rational<long long>;

// Rational coefficients over a basis of drive frequencies (default (w_p, w_d)).
struct FrequencyVector {
    std::vector<Rational> c;

    bool is_zero() const;
    FrequencyVector& operator+=(const FrequencyVector& o);
    FrequencyVector operator*(long long k) const;
    bool operator==(const FrequencyVector&) const = default;
};

// A_i ~ exp(-i f_i t); scalar modes are c-numbers that commute with everything.
struct ModeSymbol {
    std::string name;
    bool is_operator = true;
    FrequencyVector freq;
};

// Storage A1 = phi_s a_s, readout A2 = phi_r a_r, pump A3 = phi_r xi_p
// with the matching condition 2 w_s = w_p + w_d substituted.
std::vector<ModeSymbol> default_modes();

// coefficient * (C/2)^c_power * prod (A_i^dag)^dag[i] * prod A_i^plain[i]
struct LadderTerm {
    std::vector<int> dag;
    std::vector<int> plain;
    long long coefficient = 0;
    int c_power = 0;

    FrequencyVector frequency(const std::vector<ModeSymbol>& modes) const;
    LadderTerm adjoint() const;
    std::string monomial(const std::vector<ModeSymbol>& modes) const;
    bool same_monomial(const LadderTerm& o) const { return dag == o.dag && plain == o.plain && c_power == o.c_power; }
};

inline constexpr int kMaxPower = 12;

// Complete expansion of Q^n, Q = A + A^dag, A = sum_i A_i, [A, A^dag] = C.
std::vector<LadderTerm> q_power_expand(int n, int mode_count = 3);

std::vector<LadderTerm> resonance_filter(const std::vector<LadderTerm>& terms, const std::vector<ModeSymbol>& modes);

// Fully normal-ordered (c_power == 0) layer of the filtered expansion.
std::vector<LadderTerm> normal_ordered_layer(const std::vector<LadderTerm>& terms);

std::vector<LadderTerm> resonant_q6();

// True when the list contains the adjoint of each of its terms with equal weight.
bool conjugation_closed(const std::vector<LadderTerm>& terms);

struct HamiltonianCoefficients {
    double omega_eff_s = 0.0;  // a_s^dag a_s
    double omega_eff_r = 0.0;  // a_r^dag a_r
    double u_s = 0.0;          // -U_s/2 a_s^dag2 a_s^2
    double u_r = 0.0;
    double chi_rs = 0.0;       // -chi n_s n_r
    cplx g_2 = 0.0;            // -(g_2 a_s^dag2 a_r + h.c.)
    double constant = 0.0;
};

// Resonant part of E_J phi^2/2 - E_J phi^4/24 with the default modes.
HamiltonianCoefficients effective_hamiltonian(double ej, double phi_s, double phi_r, cplx xi_p);

std::string format_table(const std::vector<LadderTerm>& terms, const std::vector<ModeSymbol>& modes);
std::string to_json(const std::vector<LadderTerm>& terms, const std::vector<ModeSymbol>& modes);

} // namespace catq::rwa
