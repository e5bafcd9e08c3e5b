#include "catq/rwa.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

#include "json.hpp"

namespace catq::rwa {

namespace {

long long factorial(int n)
{
    long long f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

long long binomial(int n, int k)
{
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

long long multinomial(const std::vector<int>& parts)
{
    int total = 0;
    long long r = 1;
    for (int p : parts) {
        total += p;
        r *= binomial(total, p);
    }
    return r;
}

// All exponent vectors of the given length summing to total.
void compositions(int total, int len, std::vector<int>& cur, const std::function<void(const std::vector<int>&)>& f)
{
    if (static_cast<int>(cur.size()) == len - 1) {
        cur.push_back(total);
        f(cur);
        cur.pop_back();
        return;
    }
    for (int k = total; k >= 0; --k) {
        cur.push_back(k);
        compositions(total - k, len, cur, f);
        cur.pop_back();
    }
}

} // namespace

bool FrequencyVector::is_zero() const
{
    return std::all_of(c.begin(), c.end(), [](const Rational& r) { return r.numerator() == 0; });
}

FrequencyVector& FrequencyVector::operator+=(const FrequencyVector& o)
{
    if (c.size() < o.c.size()) c.resize(o.c.size(), Rational(0));
    for (std::size_t i = 0; i < o.c.size(); ++i) c[i] += o.c[i];
    return *this;
}

FrequencyVector FrequencyVector::operator*(long long k) const
{
    FrequencyVector r = *this;
    for (auto& x : r.c) x *= k;
    return r;
}

std::vector<ModeSymbol> default_modes()
{
    return {
        {"A1", true, {{Rational(1, 2), Rational(1, 2)}}},
        {"A2", true, {{Rational(0), Rational(1)}}},
        {"A3", false, {{Rational(-1), Rational(0)}}},
    };
}

FrequencyVector LadderTerm::frequency(const std::vector<ModeSymbol>& modes) const
{
    if (modes.size() != dag.size()) throw Error(ErrorKind::DimensionMismatch, "mode list does not match term");
    FrequencyVector f;
    for (std::size_t i = 0; i < modes.size(); ++i) f += modes[i].freq * (plain[i] - dag[i]);
    return f;
}

LadderTerm LadderTerm::adjoint() const
{
    LadderTerm t = *this;
    std::swap(t.dag, t.plain);
    return t;
}

std::string LadderTerm::monomial(const std::vector<ModeSymbol>& modes) const
{
    std::ostringstream os;
    bool any = false;
    auto emit = [&](const std::string& sym, int e) {
        if (e == 0) return;
        if (any) os << ' ';
        os << sym;
        if (e > 1) os << '^' << e;
        any = true;
    };
    for (std::size_t i = 0; i < dag.size(); ++i) emit(modes[i].name + "+", dag[i]);
    for (std::size_t i = 0; i < plain.size(); ++i) emit(modes[i].name, plain[i]);
    if (!any) os << "1";
    return os.str();
}

std::vector<LadderTerm> q_power_expand(int n, int mode_count)
{
    if (n < 0 || n > kMaxPower) throw Error(ErrorKind::InvalidArgument, "power must lie in [0, 12]");
    if (mode_count < 1) throw Error(ErrorKind::InvalidArgument, "need at least one mode");
    std::vector<LadderTerm> out;
    for (int k = 0; 2 * k <= n; ++k) {
        const int m = n - 2 * k;
        const long long outer = factorial(n) / (factorial(m) * factorial(k));
        for (int j = 0; j <= m; ++j) {
            const long long mid = binomial(m, j);
            std::vector<int> cur;
            compositions(j, mode_count, cur, [&](const std::vector<int>& alpha) {
                std::vector<int> cur2;
                compositions(m - j, mode_count, cur2, [&](const std::vector<int>& beta) {
                    LadderTerm t;
                    t.dag = alpha;
                    t.plain = beta;
                    t.c_power = k;
                    t.coefficient = outer * mid * multinomial(alpha) * multinomial(beta);
                    out.push_back(std::move(t));
                });
            });
        }
    }
    return out;
}

std::vector<LadderTerm> resonance_filter(const std::vector<LadderTerm>& terms, const std::vector<ModeSymbol>& modes)
{
    std::vector<LadderTerm> out;
    for (const auto& t : terms)
        if (t.frequency(modes).is_zero()) out.push_back(t);
    return out;
}

std::vector<LadderTerm> normal_ordered_layer(const std::vector<LadderTerm>& terms)
{
    std::vector<LadderTerm> out;
    for (const auto& t : terms)
        if (t.c_power == 0) out.push_back(t);
    return out;
}

std::vector<LadderTerm> resonant_q6()
{
    return normal_ordered_layer(resonance_filter(q_power_expand(6), default_modes()));
}

bool conjugation_closed(const std::vector<LadderTerm>& terms)
{
    for (const auto& t : terms) {
        const LadderTerm a = t.adjoint();
        const auto it = std::find_if(terms.begin(), terms.end(), [&](const LadderTerm& o) { return o.same_monomial(a); });
        if (it == terms.end() || it->coefficient != t.coefficient) return false;
    }
    return true;
}

HamiltonianCoefficients effective_hamiltonian(double ej, double phi_s, double phi_r, cplx xi_p)
{
    const auto modes = default_modes();
    const double c = phi_s * phi_s + phi_r * phi_r;
    const double prefactor[2] = {ej / 2.0, -ej / 24.0};
    const int powers[2] = {2, 4};
    const double scale_op[2] = {phi_s, phi_r};

    // Operator content (dag_s, dag_r, plain_s, plain_r) -> accumulated weight.
    std::map<std::array<int, 4>, cplx> acc;
    for (int p = 0; p < 2; ++p) {
        for (const auto& t : resonance_filter(q_power_expand(powers[p]), modes)) {
            cplx w = prefactor[p] * static_cast<double>(t.coefficient) * std::pow(c / 2.0, t.c_power);
            for (int i = 0; i < 2; ++i) w *= std::pow(scale_op[i], t.dag[i] + t.plain[i]);
            // A3 = phi_r xi_p is a c-number.
            w *= std::pow(phi_r * std::conj(xi_p), t.dag[2]) * std::pow(phi_r * xi_p, t.plain[2]);
            acc[{t.dag[0], t.dag[1], t.plain[0], t.plain[1]}] += w;
        }
    }
    auto get = [&](std::array<int, 4> k) {
        const auto it = acc.find(k);
        return it == acc.end() ? cplx(0.0) : it->second;
    };
    HamiltonianCoefficients h;
    h.omega_eff_s = get({1, 0, 1, 0}).real();
    h.omega_eff_r = get({0, 1, 0, 1}).real();
    h.u_s = -2.0 * get({2, 0, 2, 0}).real();
    h.u_r = -2.0 * get({0, 2, 0, 2}).real();
    h.chi_rs = -get({1, 1, 1, 1}).real();
    h.g_2 = -get({2, 0, 0, 1});
    h.constant = get({0, 0, 0, 0}).real();
    return h;
}

std::string format_table(const std::vector<LadderTerm>& terms, const std::vector<ModeSymbol>& modes)
{
    std::ostringstream os;
    os << std::left << std::setw(14) << "coefficient" << std::setw(10) << "C-power" << "monomial\n";
    for (const auto& t : terms)
        os << std::left << std::setw(14) << t.coefficient << std::setw(10) << t.c_power << t.monomial(modes) << "\n";
    return os.str();
}

std::string to_json(const std::vector<LadderTerm>& terms, const std::vector<ModeSymbol>& modes)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& t : terms)
        arr.push_back({{"dagger_exponents", t.dag},
                       {"plain_exponents", t.plain},
                       {"coefficient", t.coefficient},
                       {"c_power", t.c_power},
                       {"monomial", t.monomial(modes)}});
    return arr.dump(2);
}

} // namespace catq::rwa
