// catq — command-line front end: every subcommand writes a CSV (with '#'
// header comments) and a JSON metadata sidecar into the output directory.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "catq/dynamics.hpp"
#include "catq/parallel.hpp"
#include "catq/params_io.hpp"
#include "catq/rates.hpp"
#include "catq/rwa.hpp"
#include "catq/spectral.hpp"

using namespace catq;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "1.0.0";

struct GridSpec {
    std::string axis;
    double start = 0.0;
    double stop = 0.0;
    int count = 1;
    bool log = false;

    std::vector<double> values() const
    {
        std::vector<double> v(count);
        for (int k = 0; k < count; ++k) {
            const double f = count == 1 ? 0.0 : double(k) / (count - 1);
            v[k] = log ? start * std::pow(stop / start, f) : start + (stop - start) * f;
        }
        return v;
    }
};

// axis:start:stop:count[:log]
GridSpec parse_grid(const std::string& s)
{
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 4 && parts.size() != 5) throw Error(ErrorKind::InvalidArgument, "grid must be axis:start:stop:count[:log]: " + s);
    GridSpec g;
    g.axis = parts[0];
    try {
        g.start = std::stod(parts[1]);
        g.stop = std::stod(parts[2]);
        g.count = std::stoi(parts[3]);
    } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidArgument, "grid values are not numeric: " + s);
    }
    if (g.count < 1) throw Error(ErrorKind::InvalidArgument, "grid count must be >= 1: " + s);
    if (parts.size() == 5) {
        if (parts[4] != "log") throw Error(ErrorKind::InvalidArgument, "unknown grid flag '" + parts[4] + "'");
        if (!(g.start > 0 && g.stop > 0)) throw Error(ErrorKind::InvalidArgument, "log grids need positive bounds");
        g.log = true;
    }
    return g;
}

struct Run {
    std::string name;
    std::string params_path;
    std::vector<std::string> grids;
    int cutoff = -1;
    std::string out_dir;
    int workers = 0;
    double tol = 1e-9;

    json meta = json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> comments;
    std::string text;  // optional plain-text report (rwa)

    GridSpec grid(const std::string& axis, const std::string& fallback = "") const
    {
        for (const auto& g : grids) {
            const GridSpec s = parse_grid(g);
            if (s.axis == axis) return s;
        }
        if (fallback.empty()) throw Error(ErrorKind::InvalidArgument, "missing --grid " + axis + ":start:stop:count");
        return parse_grid(fallback);
    }

    // First grid whose axis is one of the allowed names.
    GridSpec any_grid(const std::vector<std::string>& axes, const std::string& fallback = "") const
    {
        for (const auto& g : grids) {
            const GridSpec s = parse_grid(g);
            if (std::find(axes.begin(), axes.end(), s.axis) != axes.end()) return s;
        }
        if (!fallback.empty()) return parse_grid(fallback);
        std::string all;
        for (const auto& a : axes) all += (all.empty() ? "" : "|") + a;
        throw Error(ErrorKind::InvalidArgument, "missing --grid with axis " + all);
    }

    json params_json() const
    {
        if (params_path.empty()) throw Error(ErrorKind::InvalidArgument, "--params is required for " + name);
        return load_json_file(params_path);
    }

    EffectiveParams effective() const
    {
        EffectiveParams p = effective_from_json(params_json());
        if (cutoff >= 0) p.cutoff = cutoff;
        return p;
    }

    EvolveOptions evolve_opts() const
    {
        EvolveOptions o;
        o.tol = tol;
        return o;
    }
};

std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

fs::path output_dir(const Run& r)
{
    std::string d = r.out_dir;
    if (d.empty()) {
        const char* env = std::getenv("CATQ_OUT_DIR");
        d = env ? env : ".";
    }
    std::error_code ec;
    fs::create_directories(d, ec);
    if (ec || !fs::is_directory(d)) throw Error(ErrorKind::Io, "cannot create output directory " + d);
    return d;
}

void write_outputs(const Run& r, const fs::path& dir, double wall)
{
    const fs::path csv = dir / (r.name + ".csv");
    std::ofstream out(csv);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + csv.string());
    out << "# catq " << r.name << "\n";
    for (const auto& c : r.comments) out << "# " << c << "\n";
    for (std::size_t k = 0; k < r.columns.size(); ++k) out << (k ? "," : "") << r.columns[k];
    out << "\n";
    for (const auto& row : r.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << fmt(row[k]);
        out << "\n";
    }
    if (!out) throw Error(ErrorKind::Io, "write failed for " + csv.string());

    json side = r.meta;
    side["subcommand"] = r.name;
    side["version"] = kVersion;
    side["wall_time_s"] = wall;
    side["unit_base"] = "MHz";
    side["tolerances"]["evolution_drift"] = r.tol;
    side["workers"] = r.workers > 0 ? r.workers : default_workers();
    side["grids"] = r.grids;
    side["csv"] = csv.filename().string();
    std::ofstream js(dir / (r.name + ".json"));
    js << side.dump(2) << "\n";
    if (!r.text.empty()) {
        std::ofstream tx(dir / (r.name + ".txt"));
        tx << r.text;
    }
}

// --- subcommands -----------------------------------------------------------

void cmd_spectrum(Run& r)
{
    EffectiveParams p = r.effective();
    if (p.cutoff == 0) p = resolve_cutoff(p);
    const bool symmetric = p.kappa1 == 0.0;
    r.meta["params"] = to_json(p);
    r.meta["cutoff"] = p.cutoff;
    r.columns = {"sector", "index", "re", "im"};
    if (symmetric) {
        const PointAnalysis pa = analyze_point(p, -1);
        r.meta["gaps"] = {{"pp", pa.gaps.pp}, {"pm", pa.gaps.pm}, {"mm", pa.gaps.mm}};
        r.meta["photon_number_even"] = photon_number(pa.manifold);
        r.comments.push_back("sector: 0=++ 1=+- 2=-+ 3=--; eigenvalues slowest first");
        for (int s = 0; s < 4; ++s) {
            // -+ is the complex conjugate of +- and is not solved separately.
            const bool mirror = !pa.results[s];
            const auto& ev = (mirror ? pa.results[1] : pa.results[s])->eigenvalues;
            for (std::size_t k = 0; k < ev.size(); ++k)
                r.rows.push_back({double(s), double(k), ev[k].real(), mirror ? -ev[k].imag() : ev[k].imag()});
        }
    } else {
        r.comments.push_back("parity symmetry broken (kappa1 > 0): full spectrum, sector = -1");
        const auto ev = full_spectrum(build_single_mode(p));
        for (std::size_t k = 0; k < ev.size(); ++k) r.rows.push_back({-1.0, double(k), ev[k].real(), ev[k].imag()});
    }
}

void emit_scan(Run& r, const RateScan& s, const std::string& axis_label)
{
    // The scanned quantity leads; the remaining parameters follow so every row
    // stands on its own.
    const std::vector<std::string> params{"delta", "g_abs", "kappaphi"};
    r.columns = {axis_label};
    for (const auto& c : params)
        if (c != axis_label) r.columns.push_back(c);
    for (const char* c : {"cutoff", "gamma_phi", "lambda_pp", "lambda_pm", "photon_number"}) r.columns.push_back(c);
    for (std::size_t k = 0; k < s.size(); ++k) {
        const EffectiveParams& q = s.metadata[k];
        const double pv[3] = {q.delta, std::abs(q.g2drive), q.kappaphi};
        std::vector<double> row{s.values[k]};
        for (int c = 0; c < 3; ++c)
            if (params[c] != axis_label) row.push_back(pv[c]);
        for (double x : {double(q.cutoff), s.gamma_phi[k], s.lambda_pp[k], s.lambda_pm[k], s.photon_number[k]}) row.push_back(x);
        r.rows.push_back(std::move(row));
    }
}

void cmd_sweep_delta(Run& r)
{
    const EffectiveParams p = r.effective();
    const GridSpec g = r.any_grid({"delta", "delta_over_g"}, "delta_over_g:-1.5:1.5:61");
    std::vector<double> deltas = g.values();
    if (g.axis == "delta_over_g")
        for (double& d : deltas) d *= std::abs(p.g2drive);
    r.meta["params"] = to_json(p);
    r.meta["cutoff"] = p.cutoff == 0 ? json("auto per point") : json(p.cutoff);
    const RateScan s = scan(p, ScanAxis::Delta, deltas, r.workers);
    emit_scan(r, s, "delta");
}

void cmd_gamma_phi(Run& r)
{
    const EffectiveParams p = r.effective();
    const GridSpec g = r.any_grid({"delta", "delta_over_g", "g", "kappaphi"});
    std::vector<double> v = g.values();
    ScanAxis axis = ScanAxis::Delta;
    if (g.axis == "g") axis = ScanAxis::G;
    if (g.axis == "kappaphi") axis = ScanAxis::KappaPhi;
    if (g.axis == "delta_over_g")
        for (double& d : v) d *= std::abs(p.g2drive);
    r.meta["params"] = to_json(p);
    r.meta["cutoff"] = p.cutoff == 0 ? json("auto per point") : json(p.cutoff);
    emit_scan(r, scan(p, axis, v, r.workers), g.axis == "delta_over_g" ? "delta" : g.axis == "g" ? "g_abs" : g.axis);
}

void cmd_optimal_delta(Run& r)
{
    const EffectiveParams p = r.effective();
    r.meta["params"] = to_json(p);
    r.columns = {"g_abs", "delta_min", "gamma_phi", "flat", "cutoff"};
    std::vector<double> gs{std::abs(p.g2drive)};
    for (const auto& spec : r.grids)
        if (parse_grid(spec).axis == "g") gs = parse_grid(spec).values();
    for (double g : gs) {
        EffectiveParams q = p;
        q.g2drive = std::polar(g, std::arg(p.g2drive));
        const OptimalDetuning o = optimal_detuning(q);
        r.rows.push_back({g, o.delta_min, o.gamma_phi, o.flat ? 1.0 : 0.0, double(o.cutoff)});
    }
}

void cmd_find_gc(Run& r, double g_lo, double g_hi)
{
    const EffectiveParams p = r.effective();
    r.meta["params"] = to_json(p);
    r.meta["bracket"] = {g_lo, g_hi};
    const CriticalPoint c = find_gc(p, g_lo, g_hi);
    r.columns = {"g_c", "g_below", "g_above", "delta_below", "delta_above", "evaluations"};
    r.rows.push_back({c.g_c, c.g_below, c.g_above, c.delta_below, c.delta_above, double(c.evaluations)});
}

void cmd_zeta(Run& r)
{
    const EffectiveParams p = r.effective();
    const GridSpec g = r.grid("g", "g:2.1:4.0:20");
    r.meta["params"] = to_json(p);
    const RateScan s = scan_optimal(p, g.values(), r.workers);
    emit_scan(r, s, "g_abs");
    try {
        const ZetaFit z = extract_zeta(s);
        r.meta["zeta"] = {{"zeta", z.zeta}, {"gamma0", z.gamma0}, {"r2", z.r2}, {"first", z.first}, {"last", z.last}};
        r.comments.push_back("zeta " + fmt(z.zeta) + " r2 " + fmt(z.r2) + " window rows " + std::to_string(z.first) + ".." +
                             std::to_string(z.last));
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NoExponentialWindow) throw;
        r.meta["zeta"] = nullptr;
        warn("zeta", e.what());
    }
}

void cmd_recover(Run& r, double t1)
{
    const EffectiveParams p = r.effective();
    const double eta = p.eta2ph;
    const GridSpec de = r.grid("delta_err", "delta_err:" + fmt(0.5 * eta) + ":" + fmt(6.0 * eta) + ":12");
    const GridSpec t0 = r.grid("t0", "t0:" + fmt(1.0 / eta) + ":" + fmt(5.0 / eta) + ":5");
    RecoveryOptions opt;
    opt.t1 = t1;
    opt.evolve = r.evolve_opts();
    const RecoveryGrid g = recovery_grid(p, de.values(), t0.values(), opt, r.workers);
    r.meta["params"] = to_json(p);
    r.meta["cutoff"] = g.cutoff;
    r.meta["t1"] = g.t1;
    r.columns = {"delta_err", "t0", "infidelity"};
    for (std::size_t i = 0; i < g.delta_errs.size(); ++i)
        for (std::size_t j = 0; j < g.t0s.size(); ++j)
            r.rows.push_back({g.delta_errs[i], g.t0s[j], g.infidelity(Eigen::Index(i), Eigen::Index(j))});
}

void cmd_gate_x(Run& r, double f, double duration, int samples)
{
    EffectiveParams p = r.effective();
    if (p.cutoff == 0) p = resolve_cutoff(p);
    const double w = omega_x(p, f);
    if (duration <= 0) {
        if (!(w > 0)) throw Error(ErrorKind::InvalidArgument, "give --duration when the Rabi frequency vanishes");
        duration = M_PI / w;
    }
    const GateXResult g = gate_x(p, f, duration, samples, r.evolve_opts());
    r.meta["params"] = to_json(p);
    r.meta["cutoff"] = p.cutoff;
    r.meta["f"] = f;
    r.meta["omega_x"] = g.omega_x;
    r.meta["final_infidelity"] = g.final_infidelity;
    r.columns = {"t", "infidelity", "q_pp_re", "q_mm_re", "q_pm_re", "q_pm_im"};
    const auto& inf = g.trajectory.observables.at("infidelity");
    for (std::size_t k = 0; k < g.trajectory.times.size(); ++k) {
        const Matrix2& q = g.trajectory.qubits[k].q;
        r.rows.push_back({g.trajectory.times[k], inf[k], q(0, 0).real(), q(1, 1).real(), q(0, 1).real(), q(0, 1).imag()});
    }
}

void cmd_gate_x_error(Run& r)
{
    EffectiveParams p = r.effective();
    if (p.cutoff == 0) p = resolve_cutoff(p);
    const GridSpec g = r.grid("f");
    r.meta["params"] = to_json(p);
    r.meta["cutoff"] = p.cutoff;
    r.columns = {"f", "omega_x", "t_x", "infidelity"};
    const std::vector<double> fs = g.values();
    std::vector<double> err(fs.size());
    parallel_for(fs.size(), r.workers > 0 ? r.workers : default_workers(),
                 [&](std::size_t k) { err[k] = gate_x_error(p, fs[k], r.evolve_opts()); });
    for (std::size_t k = 0; k < fs.size(); ++k) {
        const double w = omega_x(p, fs[k]);
        r.rows.push_back({fs[k], w, M_PI / w, err[k]});
    }
}

void cmd_gate_xx(Run& r, double j, double duration, int samples)
{
    EffectiveParams p = r.effective();
    if (p.cutoff == 0) p.cutoff = 10;
    if (duration <= 0) {
        EffectiveParams q = p;
        q.delta = 0.0;
        const double wxx = 2.0 * j * std::norm(alpha_steady(q));
        if (!(wxx > 0)) throw Error(ErrorKind::InvalidArgument, "give --duration when the hop amplitude vanishes");
        duration = 3.0 * M_PI / wxx;
    }
    const GateXXResult g = gate_xx(p, p, j, duration, samples, r.evolve_opts());
    r.meta["params"] = to_json(p);
    r.meta["cutoff"] = {p.cutoff, p.cutoff};
    r.meta["j"] = j;
    r.meta["omega_xx_expected"] = g.omega_xx_expected;
    r.meta["omega_fit"] = g.omega_fit;
    r.meta["amplitude_fit"] = g.amplitude_fit;
    r.columns = {"t", "bell_plus", "bell_minus", "even_weight"};
    const auto& obs = g.trajectory.observables;
    for (std::size_t k = 0; k < g.trajectory.times.size(); ++k)
        r.rows.push_back({g.trajectory.times[k], obs.at("bell_plus")[k], obs.at("bell_minus")[k], obs.at("even_weight")[k]});
}

void cmd_dephasing_study(Run& r)
{
    const EffectiveParams p = r.effective();
    const GridSpec g = r.grid("kappaphi", "kappaphi:1e-4:1e-2:9:log");
    r.meta["params"] = to_json(p);
    const RateScan s = scan(p, ScanAxis::KappaPhi, g.values(), r.workers);
    emit_scan(r, s, "kappaphi");
    const LineFit f = fit_power_law(s);
    r.meta["power_law"] = {{"exponent", f.slope}, {"log_prefactor", f.intercept}, {"r2", f.r2}};
    r.comments.push_back("power-law exponent " + fmt(f.slope));
}

void cmd_derive_params(Run& r, double kappa_r, double xi_p)
{
    r.columns = {"row", "eta_table", "eta_predicted", "relative_deviation", "consistent"};
    if (!r.params_path.empty()) {
        const MicroParams m = micro_from_json(r.params_json());
        const DerivedCouplings d = derive_couplings(m);
        const EffectiveParams e = effective_from_micro(m, r.cutoff > 0 ? r.cutoff : 0);
        r.meta["micro"] = to_json(m);
        r.meta["derived"] = {{"u_s", d.u_s},
                             {"u_r", d.u_r},
                             {"chi_rs", d.chi_rs},
                             {"xi_p", complex_to_json(d.xi_p)},
                             {"g_2", complex_to_json(d.g_2)},
                             {"delta_s", d.delta_s},
                             {"delta_r", d.delta_r},
                             {"omega_eff_s", d.omega_eff_s},
                             {"omega_eff_r", d.omega_eff_r}};
        r.meta["params"] = to_json(e);
    }
    r.meta["kappa_r"] = kappa_r;
    r.meta["xi_p_abs"] = xi_p;
    r.comments.push_back("row: 0=a .. 5=f");
    for (const auto& row : design_table()) {
        const TableCheck c = check_design_row(row, kappa_r, xi_p);
        r.rows.push_back({double(row.label - 'a'), c.eta_table, c.eta_predicted, c.relative_deviation, c.consistent ? 1.0 : 0.0});
    }
}

void cmd_rwa(Run& r, int power, bool all_layers)
{
    const auto modes = rwa::default_modes();
    auto terms = rwa::resonance_filter(rwa::q_power_expand(power), modes);
    if (!all_layers) terms = rwa::normal_ordered_layer(terms);
    r.meta["power"] = power;
    r.meta["terms"] = json::parse(rwa::to_json(terms, modes));
    r.meta["conjugation_closed"] = rwa::conjugation_closed(terms);
    r.text = rwa::format_table(terms, modes);
    std::cout << r.text;
    r.columns = {"coefficient", "c_power", "dag1", "dag2", "dag3", "plain1", "plain2", "plain3"};
    for (const auto& t : terms)
        r.rows.push_back({double(t.coefficient), double(t.c_power), double(t.dag[0]), double(t.dag[1]), double(t.dag[2]), double(t.plain[0]),
                          double(t.plain[1]), double(t.plain[2])});
}

void cmd_validate_adiabatic(Run& r, int ns, int nr, double t_final, int samples)
{
    const MicroParams m = micro_from_json(r.params_json());
    const AdiabaticReport a = adiabatic_validation(m, ns, nr, t_final, samples, r.evolve_opts());
    r.meta["micro"] = to_json(m);
    r.meta["cutoff"] = {ns, nr};
    r.meta["rate_ratio"] = a.rate_ratio;
    r.meta["final_relative_deviation"] = a.final_relative_deviation;
    r.meta["max_relative_deviation"] = a.max_relative_deviation;
    r.columns = {"t", "n_two_mode", "n_single_mode"};
    for (std::size_t k = 0; k < a.times.size(); ++k) r.rows.push_back({a.times[k], a.n_two_mode[k], a.n_single_mode[k]});
}

int exit_code(ErrorKind k)
{
    switch (k) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::Io:
    case ErrorKind::CutoffParity:
    case ErrorKind::MemoryCeiling: return 2;
    default: return 3;
    }
}

void report_error(const std::string& kind, const std::string& message)
{
    std::cerr << json{{"error", kind}, {"message", message}}.dump() << "\n";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Dissipative cat-qubit simulator"};
    app.require_subcommand(1);
    Run run;
    app.add_option("--params", run.params_path, "JSON parameter file")->check(CLI::ExistingFile);
    app.add_option("--grid", run.grids, "axis:start:stop:count[:log] (repeatable)");
    app.add_option("--cutoff", run.cutoff, "Fock cutoff override (0 = auto)");
    app.add_option("--out", run.out_dir, "output directory (default $CATQ_OUT_DIR or .)");
    app.add_option("--workers", run.workers, "worker threads (default: available parallelism)");
    app.add_option("--tol", run.tol, "evolution drift tolerance");
    app.fallthrough();

    double g_lo = 1.0, g_hi = 3.0, t1 = -1.0, f = 0.05, duration = -1.0, j = 0.025, kappa_r = 100.0, xi_p = 1.0, t_final = 10.0;
    int samples = 101, power = 4, ns = 28, nr = 4;
    bool all_layers = false;

    auto* sp = app.add_subcommand("spectrum", "gaps and sector eigenvalues at a point");
    auto* sd = app.add_subcommand("sweep-delta", "gaps and phase-flip rate against detuning");
    auto* gp = app.add_subcommand("gamma-phi", "phase-flip rate along one axis");
    auto* od = app.add_subcommand("optimal-delta", "detuning that minimises the phase-flip rate");
    auto* gc = app.add_subcommand("find-gc", "critical drive of the optimal-detuning jump");
    gc->add_option("--g-lo", g_lo, "lower drive bracket");
    gc->add_option("--g-hi", g_hi, "upper drive bracket");
    auto* ze = app.add_subcommand("zeta", "exponential suppression along the optimal detuning");
    auto* rc = app.add_subcommand("recover", "detuning-error recovery grid");
    rc->add_option("--t1", t1, "recovery time (default 5/eta)");
    auto* gx = app.add_subcommand("gate-x", "X-gate trajectory");
    gx->add_option("--f", f, "drive amplitude F");
    gx->add_option("--duration", duration, "gate duration (default pi/Omega_X)");
    gx->add_option("--samples", samples, "sample count");
    auto* gxe = app.add_subcommand("gate-x-error", "X-gate error after one Rabi period");
    auto* gxx = app.add_subcommand("gate-xx", "two-mode XX gate");
    gxx->add_option("--j", j, "hop amplitude J");
    gxx->add_option("--duration", duration, "duration (default three oscillation periods)");
    gxx->add_option("--samples", samples, "sample count");
    auto* ds = app.add_subcommand("dephasing-study", "phase-flip rate against dephasing");
    auto* dp = app.add_subcommand("derive-params", "effective parameters and design-table check");
    dp->add_option("--kappa-r", kappa_r, "readout decay for the table check");
    dp->add_option("--xi-p", xi_p, "pump displacement modulus for the table check");
    auto* rw = app.add_subcommand("rwa", "resonant normally ordered terms of Q^n");
    rw->add_option("--power", power, "power n (0..12)");
    rw->add_flag("--all-layers", all_layers, "include contraction layers");
    auto* va = app.add_subcommand("validate-adiabatic", "two-mode versus eliminated single-mode model");
    va->add_option("--storage-cutoff", ns, "storage cutoff");
    va->add_option("--readout-cutoff", nr, "readout cutoff");
    va->add_option("--t-final", t_final, "final time");
    va->add_option("--samples", samples, "sample count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        report_error("ConfigError", e.what());
        return 2;
    }

    run.name = app.get_subcommands().front()->get_name();
    if (run.workers > 0) set_default_workers(run.workers);
    std::vector<json> warnings;
    set_warning_sink([&](const std::string& cat, const std::string& msg) {
        warnings.push_back({{"category", cat}, {"message", msg}});
        std::cerr << "warning [" << cat << "]: " << msg << "\n";
    });

    const auto t0 = std::chrono::steady_clock::now();
    try {
        const fs::path dir = output_dir(run);
        if (sp->parsed()) cmd_spectrum(run);
        else if (sd->parsed()) cmd_sweep_delta(run);
        else if (gp->parsed()) cmd_gamma_phi(run);
        else if (od->parsed()) cmd_optimal_delta(run);
        else if (gc->parsed()) cmd_find_gc(run, g_lo, g_hi);
        else if (ze->parsed()) cmd_zeta(run);
        else if (rc->parsed()) cmd_recover(run, t1);
        else if (gx->parsed()) cmd_gate_x(run, f, duration, samples);
        else if (gxe->parsed()) cmd_gate_x_error(run);
        else if (gxx->parsed()) cmd_gate_xx(run, j, duration, samples);
        else if (ds->parsed()) cmd_dephasing_study(run);
        else if (dp->parsed()) cmd_derive_params(run, kappa_r, xi_p);
        else if (rw->parsed()) cmd_rwa(run, power, all_layers);
        else if (va->parsed()) cmd_validate_adiabatic(run, ns, nr, t_final, samples);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        run.meta["warnings"] = warnings;
        write_outputs(run, dir, wall);
    } catch (const Error& e) {
        report_error(to_string(e.kind()), e.what());
        return exit_code(e.kind());
    } catch (const json::exception& e) {
        report_error("ConfigError", e.what());
        return 2;
    } catch (const std::exception& e) {
        report_error("InternalError", e.what());
        return 3;
    }
    return 0;
}
