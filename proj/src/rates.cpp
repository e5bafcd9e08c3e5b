#include "catq/rates.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <tuple>

#include <Eigen/LU>

#include "catq/dynamics.hpp"
#include "catq/fock.hpp"
#include "catq/liouvillian.hpp"
#include "catq/parallel.hpp"
#include "catq/spectral.hpp"

namespace catq {

namespace {

using Key = std::tuple<int, double, double, double, double, double, double, double, int>;

Key key_of(int kind, const EffectiveParams& p)
{
    return {kind, p.delta, p.g2drive.real(), p.g2drive.imag(), p.kerr, p.eta2ph, p.kappa1, p.kappaphi, p.cutoff};
}

std::mutex g_cache_mutex;
std::map<Key, RatePoint> g_cache;

// Runs fn with truncation warnings dropped; callers report truncation once.
template <typename Fn>
auto without_truncation_warnings(Fn&& fn)
{
    std::vector<std::pair<std::string, std::string>> kept;
    auto run = [&] {
        WarningCapture cap;
        auto r = fn();
        for (const auto& e : cap.entries())
            if (e.first != "truncation") kept.push_back(e);
        return r;
    };
    auto r = run();
    for (const auto& [c, m] : kept) warn(c, m);
    return r;
}

void check_guard(const EffectiveParams& p)
{
    if (p.cutoff == 0 || !(p.eta2ph > 0 || p.kerr > 0)) return;
    EffectiveParams r = p;
    r.delta = 0.0;
    const int guard = guard_cutoff(alpha_steady(r));
    if (p.cutoff < guard) {
        std::ostringstream os;
        os << "cutoff " << p.cutoff << " is below the guard value " << guard;
        warn("truncation", os.str());
    }
}

EffectiveParams point_params(const EffectiveParams& p)
{
    EffectiveParams q = p;
    if (q.cutoff == 0) q.cutoff = auto_cutoff(q, q.delta);
    if (q.cutoff % 2) ++q.cutoff;
    return q;
}

bool cache_lookup(const Key& k, RatePoint& out)
{
    std::lock_guard lock(g_cache_mutex);
    auto it = g_cache.find(k);
    if (it == g_cache.end()) return false;
    out = it->second;
    return true;
}

void cache_store(const Key& k, const RatePoint& pt)
{
    std::lock_guard lock(g_cache_mutex);
    g_cache.emplace(k, pt);
}

double gamma_phi_resolved(const EffectiveParams& q)
{
    const Key k = key_of(0, q);
    RatePoint cached;
    if (cache_lookup(k, cached)) return cached.gamma_phi;
    const double g = without_truncation_warnings([&] {
        const BlockDecomposition b = parity_blocks(build_single_mode(q), true);
        const SpectralResult r = eigensolve_block(b, Sector::PM, SolveOptions{false, 1});
        return std::max(0.0, -r.eigenvalues.front().real());
    });
    RatePoint pt;
    pt.gamma_phi = g;
    pt.lambda_pm = g;
    pt.params = q;
    cache_store(k, pt);
    return g;
}

double with_axis(EffectiveParams& q, ScanAxis axis, double v)
{
    switch (axis) {
    case ScanAxis::Delta: q.delta = v; break;
    case ScanAxis::G: {
        const double phase = std::abs(q.g2drive) > 0 ? std::arg(q.g2drive) : 0.0;
        q.g2drive = std::polar(v, phase);
        break;
    }
    case ScanAxis::KappaPhi: q.kappaphi = v; break;
    }
    return v;
}

} // namespace

double gamma_phi_exact(const EffectiveParams& p)
{
    if (p.kappa1 > 0) throw Error(ErrorKind::SymmetryBroken, "gamma_phi_exact needs kappa1 == 0 (strong parity symmetry)");
    const EffectiveParams q = point_params(p);
    check_guard(q);
    return gamma_phi_resolved(q);
}

double gamma_phi_sinh(double kappaphi, double alpha2)
{
    if (alpha2 < 0) throw Error(ErrorKind::InvalidArgument, "|alpha|^2 must be non-negative");
    if (alpha2 == 0.0) return kappaphi / 2.0;
    if (2.0 * alpha2 > 700.0) return 2.0 * kappaphi * alpha2 * std::exp(-2.0 * alpha2);
    return kappaphi * alpha2 / std::sinh(2.0 * alpha2);
}

PerturbativeRate gamma_phi_perturbative(const EffectiveParams& p)
{
    PerturbativeRate out;
    EffectiveParams q = point_params(p);
    const Manifold m = without_truncation_warnings([&] { return bare_manifold(q); });
    const Matrix n = number(FockSpace(q.cutoff)).data();
    const Matrix& rho = m.rho0(Sector::PM);
    const Matrix dn = n * rho * n - 0.5 * (n * n * rho + rho * n * n);
    const cplx t = (m.j0(Sector::PM).conjugate().cwiseProduct(dn)).sum();
    out.trace_formula = -q.kappaphi * t.real();
    if (q.delta == 0.0 && q.kerr == 0.0 && q.eta2ph > 0) out.sinh_form = gamma_phi_sinh(q.kappaphi, std::abs(q.g2drive) / q.eta2ph);
    return out;
}

const char* axis_name(ScanAxis a)
{
    switch (a) {
    case ScanAxis::Delta: return "delta";
    case ScanAxis::G: return "g";
    case ScanAxis::KappaPhi: return "kappaphi";
    }
    return "?";
}

void RateScan::push(const RatePoint& pt)
{
    values.push_back(pt.value);
    gamma_phi.push_back(pt.gamma_phi);
    photon_number.push_back(pt.photon_number);
    lambda_pp.push_back(pt.lambda_pp);
    lambda_pm.push_back(pt.lambda_pm);
    metadata.push_back(pt.params);
}

void RateScan::validate() const
{
    const std::size_t n = values.size();
    if (gamma_phi.size() != n || photon_number.size() != n || lambda_pp.size() != n || lambda_pm.size() != n ||
        metadata.size() != n)
        throw Error(ErrorKind::DimensionMismatch, "rate scan columns differ in length");
    for (std::size_t k = 1; k < n; ++k)
        if (!(values[k] > values[k - 1])) throw Error(ErrorKind::InvalidArgument, "scan grid must be strictly increasing");
    for (double g : gamma_phi)
        if (!(g >= 0)) throw Error(ErrorKind::InvalidArgument, "gamma_phi must be non-negative");
}

RatePoint rate_point(const EffectiveParams& p)
{
    const EffectiveParams q = point_params(p);
    const Key k = key_of(1, q);
    RatePoint pt;
    if (cache_lookup(k, pt)) return pt;
    pt = without_truncation_warnings([&] {
        RatePoint r;
        r.params = q;
        const BlockDecomposition b = parity_blocks(build_single_mode(q), q.kappa1 == 0.0);
        const Matrix pp = Matrix(b.block(Sector::PP));
        const SpectralResult spp = eigensolve_block(pp, Sector::PP, q.cutoff, SolveOptions{false, 2});
        r.lambda_pp = std::max(0.0, -spp.eigenvalues.at(1).real());
        if (q.kappa1 == 0.0) {
            const SpectralResult spm = eigensolve_block(b, Sector::PM, SolveOptions{false, 1});
            r.lambda_pm = std::max(0.0, -spm.eigenvalues.front().real());
            r.gamma_phi = r.lambda_pm;
        }
        // Even steady state: replace the first equation by the trace condition.
        const int h = q.cutoff / 2;
        Matrix a = pp;
        a.row(0).setZero();
        for (int i = 0; i < h; ++i) a(0, i + i * h) = 1.0;
        Vector rhs = Vector::Zero(a.rows());
        rhs(0) = 1.0;
        const Vector x = a.partialPivLu().solve(rhs);
        double num = 0.0;
        for (int i = 0; i < h; ++i) num += 2.0 * i * x(i + i * h).real();
        r.photon_number = num;
        return r;
    });
    cache_store(k, pt);
    return pt;
}

RateScan scan(const EffectiveParams& p, ScanAxis axis, const std::vector<double>& values, int workers)
{
    if (values.empty()) throw Error(ErrorKind::InvalidArgument, "scan grid is empty");
    check_guard(p);
    std::vector<RatePoint> pts(values.size());
    parallel_for(values.size(), workers, [&](std::size_t i) {
        EffectiveParams q = p;
        with_axis(q, axis, values[i]);
        pts[i] = rate_point(q);
        pts[i].value = values[i];
    });
    RateScan s;
    s.axis = axis;
    for (const auto& pt : pts) s.push(pt);
    s.validate();
    return s;
}

OptimalDetuning optimal_detuning(const EffectiveParams& p, int coarse_points)
{
    if (coarse_points < 3) throw Error(ErrorKind::InvalidArgument, "optimal_detuning needs at least 3 coarse points");
    if (p.kappa1 > 0) throw Error(ErrorKind::SymmetryBroken, "optimal_detuning needs kappa1 == 0");
    const double g = std::abs(p.g2drive);
    if (!(g > 0)) throw Error(ErrorKind::InvalidArgument, "optimal_detuning needs |G| > 0");
    EffectiveParams base = p;
    if (base.cutoff == 0) base.cutoff = auto_cutoff(base, 2.0 * g);
    if (base.cutoff % 2) ++base.cutoff;
    check_guard(base);

    auto gamma_at = [&](double d) {
        EffectiveParams q = base;
        q.delta = d;
        return gamma_phi_resolved(q);
    };
    std::vector<double> grid(coarse_points), vals(coarse_points);
    for (int k = 0; k < coarse_points; ++k) {
        grid[k] = 2.0 * g * k / (coarse_points - 1);
        vals[k] = gamma_at(grid[k]);
    }
    OptimalDetuning out;
    out.cutoff = base.cutoff;
    const auto [lo_it, hi_it] = std::minmax_element(vals.begin(), vals.end());
    if (*hi_it - *lo_it < 1e-12) {
        warn("flat-landscape", "gamma_phi is flat over the detuning window; returning delta_min = 0");
        out.flat = true;
        out.gamma_phi = vals.front();
        return out;
    }
    const int kmin = static_cast<int>(lo_it - vals.begin());
    if (kmin == 0) {
        out.delta_min = 0.0;
        out.gamma_phi = vals.front();
        // A minimum at the boundary is kept unless the interior beats it.
        double a = 0.0, b = grid[1];
        const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
        double c = b - gr * (b - a), d = a + gr * (b - a);
        double fc = gamma_at(c), fd = gamma_at(d);
        while (b - a > 1e-3 * g) {
            if (fc < fd) {
                b = d; d = c; fd = fc; c = b - gr * (b - a); fc = gamma_at(c);
            } else {
                a = c; c = d; fc = fd; d = a + gr * (b - a); fd = gamma_at(d);
            }
        }
        const double m = (fc < fd) ? c : d;
        const double fm = std::min(fc, fd);
        if (fm < out.gamma_phi) {
            out.delta_min = m;
            out.gamma_phi = fm;
        }
        return out;
    }
    double a = grid[kmin - 1], b = grid[std::min(kmin + 1, coarse_points - 1)];
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = gamma_at(c), fd = gamma_at(d);
    while (b - a > 1e-3 * g) {
        if (fc < fd) {
            b = d; d = c; fd = fc; c = b - gr * (b - a); fc = gamma_at(c);
        } else {
            a = c; c = d; fc = fd; d = a + gr * (b - a); fd = gamma_at(d);
        }
    }
    out.delta_min = (fc < fd) ? c : d;
    out.gamma_phi = std::min(fc, fd);
    if (vals[kmin] < out.gamma_phi) {
        out.delta_min = grid[kmin];
        out.gamma_phi = vals[kmin];
    }
    return out;
}

OptimalDetuning optimal_detuning(double g, const ThetaParam& theta, double kappaphi, int cutoff)
{
    return optimal_detuning(from_theta(theta, g, 0.0, Losses{0.0, kappaphi}, cutoff));
}

RateScan scan_optimal(const EffectiveParams& p, const std::vector<double>& gs, int workers)
{
    if (gs.empty()) throw Error(ErrorKind::InvalidArgument, "scan grid is empty");
    std::vector<RatePoint> pts(gs.size());
    parallel_for(gs.size(), workers, [&](std::size_t i) {
        EffectiveParams q = p;
        with_axis(q, ScanAxis::G, gs[i]);
        const OptimalDetuning od = optimal_detuning(q);
        q.delta = od.delta_min;
        q.cutoff = od.cutoff;
        pts[i] = rate_point(q);
        pts[i].value = gs[i];
    });
    RateScan s;
    s.axis = ScanAxis::G;
    for (const auto& pt : pts) s.push(pt);
    s.validate();
    return s;
}

CriticalPoint find_gc(const EffectiveParams& p, double g_lo, double g_hi)
{
    if (!(g_hi > g_lo && g_lo > 0)) throw Error(ErrorKind::InvalidArgument, "find_gc needs 0 < g_lo < g_hi");
    const double w = std::hypot(p.kerr, p.eta2ph);
    CriticalPoint cp;
    auto probe = [&](double g, double& dmin) {
        EffectiveParams q = p;
        with_axis(q, ScanAxis::G, g);
        const OptimalDetuning od = optimal_detuning(q);
        ++cp.evaluations;
        dmin = od.delta_min;
        return od.delta_min > 0.05 * g;
    };
    double d_lo = 0.0, d_hi = 0.0;
    if (!probe(g_hi, d_hi)) {
        std::ostringstream os;
        os << "delta_min stays below 0.05 G up to G = " << g_hi;
        throw Error(ErrorKind::NoTransition, os.str());
    }
    if (probe(g_lo, d_lo)) {
        std::ostringstream os;
        os << "delta_min already exceeds 0.05 G at G = " << g_lo;
        throw Error(ErrorKind::NoTransition, os.str());
    }
    while (g_hi - g_lo > 1e-3 * w) {
        const double mid = 0.5 * (g_lo + g_hi);
        double d = 0.0;
        if (probe(mid, d)) {
            g_hi = mid;
            d_hi = d;
        } else {
            g_lo = mid;
            d_lo = d;
        }
    }
    cp.g_below = g_lo;
    cp.g_above = g_hi;
    cp.g_c = 0.5 * (g_lo + g_hi);
    cp.delta_below = d_lo;
    cp.delta_above = d_hi;
    return cp;
}

CriticalPoint find_gc(const ThetaParam& theta, double kappaphi, double g_lo, double g_hi, int cutoff)
{
    return find_gc(from_theta(theta, g_lo, 0.0, Losses{0.0, kappaphi}, cutoff), g_lo, g_hi);
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2) throw Error(ErrorKind::InvalidArgument, "line fit needs >= 2 paired samples");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
        syy += (y[k] - my) * (y[k] - my);
    }
    if (sxx == 0.0) throw Error(ErrorKind::InvalidArgument, "line fit needs distinct abscissae");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

ZetaFit extract_zeta(const RateScan& s, std::size_t min_points, double slope_spread)
{
    s.validate();
    const std::size_t n = s.size();
    // Local slopes of ln gamma between neighbours; non-positive rates break runs.
    std::vector<double> slope(n > 0 ? n - 1 : 0);
    std::vector<bool> ok(slope.size());
    for (std::size_t k = 0; k + 1 < n; ++k) {
        ok[k] = s.gamma_phi[k] > 0 && s.gamma_phi[k + 1] > 0;
        if (ok[k]) slope[k] = (std::log(s.gamma_phi[k + 1]) - std::log(s.gamma_phi[k])) / (s.values[k + 1] - s.values[k]);
    }
    std::size_t best_first = 0, best_len = 0;
    for (std::size_t i = 0; i < slope.size(); ++i) {
        double sum = 0, sum2 = 0;
        for (std::size_t j = i; j < slope.size() && ok[j]; ++j) {
            sum += slope[j];
            sum2 += slope[j] * slope[j];
            const double m = static_cast<double>(j - i + 1);
            const double mean = sum / m;
            const double var = std::max(0.0, sum2 / m - mean * mean);
            if (std::sqrt(var) >= slope_spread * std::abs(mean) || mean == 0.0) break;
            const std::size_t len = j - i + 2;  // points
            if (len > best_len) {
                best_len = len;
                best_first = i;
            }
        }
    }
    if (best_len < min_points) {
        std::ostringstream os;
        os << "longest exponential window has " << best_len << " points (need " << min_points << ")";
        throw Error(ErrorKind::NoExponentialWindow, os.str());
    }
    std::vector<double> x(s.values.begin() + best_first, s.values.begin() + best_first + best_len);
    std::vector<double> y;
    for (std::size_t k = best_first; k < best_first + best_len; ++k) y.push_back(std::log(s.gamma_phi[k]));
    const LineFit f = fit_line(x, y);
    ZetaFit z;
    z.zeta = -f.slope;
    z.gamma0 = std::exp(f.intercept);
    z.r2 = f.r2;
    z.first = best_first;
    z.last = best_first + best_len - 1;
    return z;
}

LineFit fit_power_law(const RateScan& s)
{
    std::vector<double> x, y;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (s.values[k] <= 0 || s.gamma_phi[k] <= 0) throw Error(ErrorKind::InvalidArgument, "power-law fit needs positive data");
        x.push_back(std::log(s.values[k]));
        y.push_back(std::log(s.gamma_phi[k]));
    }
    return fit_line(x, y);
}

void clear_rate_cache()
{
    std::lock_guard lock(g_cache_mutex);
    g_cache.clear();
}

std::size_t rate_cache_size()
{
    std::lock_guard lock(g_cache_mutex);
    return g_cache.size();
}

} // namespace catq
