#include "catq/params_io.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace catq {

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const char* what)
{
    if (!j.is_object()) throw Error(ErrorKind::InvalidArgument, std::string(what) + " must be a JSON object");
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k)) throw Error(ErrorKind::InvalidArgument, std::string("unknown key '") + k + "' in " + what);
}

double number(const json& j, const char* key, double fallback)
{
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw Error(ErrorKind::InvalidArgument, std::string("'") + key + "' must be a number");
    return j.at(key).get<double>();
}

} // namespace

cplx complex_from_json(const json& j)
{
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
    throw Error(ErrorKind::InvalidArgument, "complex values must be a number or [re, im]");
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

EffectiveParams effective_from_json(const json& j)
{
    EffectiveParams p;
    if (j.contains("row")) {
        reject_unknown(j, {"row", "delta_over_g", "kappa1", "kappaphi", "cutoff"}, "parameters");
        const std::string r = j.at("row").get<std::string>();
        if (r.size() != 1) throw Error(ErrorKind::InvalidArgument, "row must be a single letter");
        p = row_params(design_row(r[0]), number(j, "delta_over_g", 0.0), Losses{number(j, "kappa1", 0.0), number(j, "kappaphi", 0.0)},
                       static_cast<int>(number(j, "cutoff", 0)));
    } else if (j.contains("w") || j.contains("two_theta_over_pi")) {
        reject_unknown(j, {"w", "two_theta_over_pi", "g", "delta", "delta_over_g", "kappa1", "kappaphi", "cutoff"}, "parameters");
        const ThetaParam t{number(j, "w", 1.0), number(j, "two_theta_over_pi", 0.0) * M_PI / 2.0};
        const cplx g = j.contains("g") ? complex_from_json(j.at("g")) : cplx(0.0);
        if (j.contains("delta") && j.contains("delta_over_g"))
            throw Error(ErrorKind::InvalidArgument, "give either delta or delta_over_g");
        const double delta = j.contains("delta_over_g") ? number(j, "delta_over_g", 0.0) * std::abs(g) : number(j, "delta", 0.0);
        p = from_theta(t, g, delta, Losses{number(j, "kappa1", 0.0), number(j, "kappaphi", 0.0)}, static_cast<int>(number(j, "cutoff", 0)));
    } else {
        reject_unknown(j, {"delta", "g2drive", "kerr", "eta2ph", "kappa1", "kappaphi", "cutoff"}, "parameters");
        p.delta = number(j, "delta", 0.0);
        if (j.contains("g2drive")) p.g2drive = complex_from_json(j.at("g2drive"));
        p.kerr = number(j, "kerr", 0.0);
        p.eta2ph = number(j, "eta2ph", 0.0);
        p.kappa1 = number(j, "kappa1", 0.0);
        p.kappaphi = number(j, "kappaphi", 0.0);
        p.cutoff = static_cast<int>(number(j, "cutoff", 0));
    }
    p.validate();
    return p;
}

json to_json(const EffectiveParams& p)
{
    return json{{"delta", p.delta},   {"g2drive", complex_to_json(p.g2drive)}, {"kerr", p.kerr},
                {"eta2ph", p.eta2ph}, {"kappa1", p.kappa1},                    {"kappaphi", p.kappaphi},
                {"cutoff", p.cutoff}};
}

MicroParams micro_from_json(const json& j)
{
    reject_unknown(j, {"ej", "phi_s", "phi_r", "eps_p", "eps_d", "omega_s", "omega_r", "omega_p", "omega_d", "kappa_r", "kappa_s"},
                   "micro parameters");
    MicroParams m;
    m.ej = number(j, "ej", 0.0);
    m.phi_s = number(j, "phi_s", 0.0);
    m.phi_r = number(j, "phi_r", 0.0);
    if (j.contains("eps_p")) m.eps_p = complex_from_json(j.at("eps_p"));
    if (j.contains("eps_d")) m.eps_d = complex_from_json(j.at("eps_d"));
    m.omega_s = number(j, "omega_s", 0.0);
    m.omega_r = number(j, "omega_r", 0.0);
    m.omega_p = number(j, "omega_p", 0.0);
    m.omega_d = number(j, "omega_d", 0.0);
    m.kappa_r = number(j, "kappa_r", 0.0);
    m.kappa_s = number(j, "kappa_s", 0.0);
    return m;
}

json to_json(const MicroParams& m)
{
    return json{{"ej", m.ej},           {"phi_s", m.phi_s},     {"phi_r", m.phi_r},
                {"eps_p", complex_to_json(m.eps_p)}, {"eps_d", complex_to_json(m.eps_d)},
                {"omega_s", m.omega_s}, {"omega_r", m.omega_r}, {"omega_p", m.omega_p},
                {"omega_d", m.omega_d}, {"kappa_r", m.kappa_r}, {"kappa_s", m.kappa_s}};
}

json load_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::InvalidArgument, path + ": " + e.what());
    }
}

} // namespace catq
