#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "zst/spectral.hpp"
#include "zst/types.hpp"
#include "zst/zonal.hpp"

namespace zst {

/// Checks every model invariant; fatal problems land in errors, advisory
/// findings (e.g. a coarse dt for the slow dynamics) in warnings.
inline ValidationReport validate_config(const ExperimentConfig& cfg) {
    ValidationReport rep;
    auto err = [&rep](const std::string& m) { rep.errors.push_back(m); };
    auto warn = [&rep](const std::string& m) { rep.warnings.push_back(m); };

    const ZonalSpec& z = cfg.zonal;
    if (z.kind == ZonalKind::Linear) {
        if (z.gamma_u <= 0.0) err("zonal: linear damping gamma_u must be positive");
    } else {
        if (z.c <= 0.0) err("zonal: cubic damping must be positive");
        if (z.sigma_u == 0.0 && z.B == 0.0)
            err("zonal: cubic model needs sigma_u or B nonzero for a stationary density");
    }
    if (z.sigma_u < 0.0) err("zonal: sigma_u must be non-negative");

    const ShearSpec& s = cfg.shear;
    if (s.d_v <= 0.0) err("shear: uniform damping d_v must be positive");
    if (s.nu < 0.0) err("shear: viscosity nu must be non-negative");
    if (s.kind == ShearKind::QG && s.F <= 0.0) err("shear: QG requires F > 0");

    const SpectrumSpec& sp = cfg.spectrum;
    if (sp.E0 <= 0.0) err("spectrum: base energy E0 must be positive");
    if (sp.kind == SpectrumKind::Combined && sp.k0 < 1)
        err("spectrum: combined crossover k0 must be a positive integer");

    const TracerSpec& t = cfg.tracer;
    if (t.d_T <= 0.0) err("tracer: uniform damping d_T must be positive");
    if (t.kappa < 0.0) err("tracer: diffusivity kappa must be non-negative");

    if (cfg.kmax < 1) err("run: kmax must be at least 1");
    if (!(cfg.epsilon > 0.0 && cfg.epsilon <= 1.0)) err("run: epsilon must lie in (0, 1]");
    if (cfg.dt <= 0.0) err("run: dt must be positive");
    if (cfg.t_burnin < 0.0) err("run: t_burnin must be non-negative");
    if (cfg.t_end <= cfg.t_burnin) err("run: t_end must exceed t_burnin");
    if (cfg.subsample < 1) err("run: subsample must be a positive integer");
    if (cfg.n_ensemble < 1) err("run: n_ensemble must be a positive integer");
    if (cfg.x_grid_n < 1) err("run: x_grid_n must be a positive integer");

    // The stiff linear parts are integrated exactly; dt only needs to resolve
    // the slow zonal dynamics.
    if (rep.ok()) {
        double rate = 0.0;
        if (z.kind == ZonalKind::Linear) {
            rate = z.gamma_u;
        } else {
            auto reg = classify_regime(z.a, z.b, z.c, z.f);
            double span = 1.0;
            for (const auto& r : reg.roots) span = std::max(span, std::abs(r.u));
            rate = std::abs(z.a) + 2.0 * std::abs(z.b) * span + 3.0 * z.c * span * span;
        }
        if (rate > 0.0 && cfg.dt > 0.1 / rate) {
            std::ostringstream os;
            os << "run: dt = " << cfg.dt << " is coarse for the zonal drift rate " << rate
               << "; consider dt <= " << 0.1 / rate;
            warn(os.str());
        }
    }
    return rep;
}

/// Per-wavenumber coefficient table for k = 1..kmax. Negative modes follow by
/// conjugation (a_{-k} = -a_k, b_{-k} = -b_k, gamma_{v,-k} = gamma_{v,k}).
inline ModeTable build_mode_table(const ExperimentConfig& cfg) {
    if (cfg.kmax < 1) throw std::invalid_argument("build_mode_table: kmax must be at least 1");
    std::vector<int> ks(static_cast<std::size_t>(cfg.kmax));
    for (int k = 1; k <= cfg.kmax; ++k) ks[static_cast<std::size_t>(k - 1)] = k;
    const std::vector<double> energies = energy_spectrum(cfg.spectrum, ks);

    ModeTable table;
    table.reserve(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const int k = ks[i];
        ModeCoefficients m;
        m.k = k;
        auto [ak, bk] = dispersion_coeffs(cfg.shear, k);
        m.a_k = ak;
        m.b_k = bk;
        m.gamma_v = shear_damping(cfg.shear, k);
        m.gamma_T = cfg.tracer.d_T + cfg.tracer.kappa * static_cast<double>(k) * static_cast<double>(k);
        if (m.gamma_v <= 0.0) throw std::invalid_argument("build_mode_table: gamma_v must be positive");
        if (m.gamma_T <= 0.0) throw std::invalid_argument("build_mode_table: gamma_T must be positive");
        m.E_v = energies[i];
        m.sigma_v = std::sqrt(2.0 * m.gamma_v * m.E_v);
        if (!resonance_degenerate(m.a_k, m.k)) m.u_res = -m.b_k / (m.a_k + static_cast<double>(k));
        table.push_back(m);
    }
    return table;
}

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline double parse_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("config: value for '" + key + "' is not a number: " + v);
    }
    if (pos != v.size()) throw ConfigError("config: trailing characters in value for '" + key + "'");
    return d;
}

inline long long parse_int(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    long long d = 0;
    try {
        d = std::stoll(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("config: value for '" + key + "' is not an integer: " + v);
    }
    if (pos != v.size()) throw ConfigError("config: trailing characters in value for '" + key + "'");
    return d;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("config: value for '" + key + "' must be true/false: " + v);
}

}  // namespace detail

/// Parses the sectioned key = value experiment format. Sections are [zonal],
/// [shear], [spectrum], [tracer], [run]; keys equal the field names. Unknown
/// sections or keys are errors. '#' starts a comment.
inline ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": malformed section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            if (section != "zonal" && section != "shear" && section != "spectrum" &&
                section != "tracer" && section != "run")
                throw ConfigError("config line " + std::to_string(lineno) + ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": key outside a section");

        auto unknown = [&]() -> ConfigError {
            return ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key +
                               "' in section [" + section + "]");
        };
        if (section == "zonal") {
            if (key == "kind") {
                if (value == "linear") cfg.zonal.kind = ZonalKind::Linear;
                else if (value == "cubic") cfg.zonal.kind = ZonalKind::Cubic;
                else throw ConfigError("config: zonal kind must be linear or cubic");
            } else if (key == "gamma_u") cfg.zonal.gamma_u = detail::parse_double(key, value);
            else if (key == "f") cfg.zonal.f = detail::parse_double(key, value);
            else if (key == "a") cfg.zonal.a = detail::parse_double(key, value);
            else if (key == "b") cfg.zonal.b = detail::parse_double(key, value);
            else if (key == "c") cfg.zonal.c = detail::parse_double(key, value);
            else if (key == "A") cfg.zonal.A = detail::parse_double(key, value);
            else if (key == "B") cfg.zonal.B = detail::parse_double(key, value);
            else if (key == "sigma_u") cfg.zonal.sigma_u = detail::parse_double(key, value);
            else throw unknown();
        } else if (section == "shear") {
            if (key == "kind") {
                if (value == "random") cfg.shear.kind = ShearKind::Random;
                else if (value == "advective") cfg.shear.kind = ShearKind::Advective;
                else if (value == "qg") cfg.shear.kind = ShearKind::QG;
                else throw ConfigError("config: shear kind must be random, advective or qg");
            } else if (key == "d_v") cfg.shear.d_v = detail::parse_double(key, value);
            else if (key == "nu") cfg.shear.nu = detail::parse_double(key, value);
            else if (key == "c_wave") cfg.shear.c_wave = detail::parse_double(key, value);
            else if (key == "beta") cfg.shear.beta = detail::parse_double(key, value);
            else if (key == "F") cfg.shear.F = detail::parse_double(key, value);
            else throw unknown();
        } else if (section == "spectrum") {
            if (key == "kind") {
                if (value == "equipartition") cfg.spectrum.kind = SpectrumKind::Equipartition;
                else if (value == "kolmogorov") cfg.spectrum.kind = SpectrumKind::Kolmogorov;
                else if (value == "combined") cfg.spectrum.kind = SpectrumKind::Combined;
                else throw ConfigError("config: spectrum kind must be equipartition, kolmogorov or combined");
            } else if (key == "E0") cfg.spectrum.E0 = detail::parse_double(key, value);
            else if (key == "k0") cfg.spectrum.k0 = static_cast<int>(detail::parse_int(key, value));
            else if (key == "normalize_total") cfg.spectrum.normalize_total = detail::parse_bool(key, value);
            else throw unknown();
        } else if (section == "tracer") {
            if (key == "alpha") cfg.tracer.alpha = detail::parse_double(key, value);
            else if (key == "d_T") cfg.tracer.d_T = detail::parse_double(key, value);
            else if (key == "kappa") cfg.tracer.kappa = detail::parse_double(key, value);
            else throw unknown();
        } else {  // run
            if (key == "kmax") cfg.kmax = static_cast<int>(detail::parse_int(key, value));
            else if (key == "epsilon") cfg.epsilon = detail::parse_double(key, value);
            else if (key == "dt") cfg.dt = detail::parse_double(key, value);
            else if (key == "t_end") cfg.t_end = detail::parse_double(key, value);
            else if (key == "t_burnin") cfg.t_burnin = detail::parse_double(key, value);
            else if (key == "subsample") cfg.subsample = static_cast<int>(detail::parse_int(key, value));
            else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(detail::parse_int(key, value));
            else if (key == "n_ensemble") cfg.n_ensemble = static_cast<int>(detail::parse_int(key, value));
            else if (key == "x_grid_n") cfg.x_grid_n = static_cast<int>(detail::parse_int(key, value));
            else throw unknown();
        }
    }
    return cfg;
}

inline ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

/// Canonical text form of a config; used for content hashing so trajectory
/// records can name the configuration that produced them.
inline std::string serialize_config(const ExperimentConfig& cfg) {
    char buf[64];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    std::ostringstream os;
    os << "[zonal]\n";
    os << "kind = " << (cfg.zonal.kind == ZonalKind::Linear ? "linear" : "cubic") << "\n";
    os << "gamma_u = " << num(cfg.zonal.gamma_u) << "\nf = " << num(cfg.zonal.f) << "\n";
    os << "a = " << num(cfg.zonal.a) << "\nb = " << num(cfg.zonal.b) << "\nc = " << num(cfg.zonal.c) << "\n";
    os << "A = " << num(cfg.zonal.A) << "\nB = " << num(cfg.zonal.B) << "\n";
    os << "sigma_u = " << num(cfg.zonal.sigma_u) << "\n";
    os << "[shear]\n";
    os << "kind = "
       << (cfg.shear.kind == ShearKind::Random ? "random"
                                               : cfg.shear.kind == ShearKind::Advective ? "advective" : "qg")
       << "\n";
    os << "d_v = " << num(cfg.shear.d_v) << "\nnu = " << num(cfg.shear.nu) << "\n";
    os << "c_wave = " << num(cfg.shear.c_wave) << "\nbeta = " << num(cfg.shear.beta) << "\nF = " << num(cfg.shear.F)
       << "\n";
    os << "[spectrum]\n";
    os << "kind = "
       << (cfg.spectrum.kind == SpectrumKind::Equipartition
               ? "equipartition"
               : cfg.spectrum.kind == SpectrumKind::Kolmogorov ? "kolmogorov" : "combined")
       << "\n";
    os << "E0 = " << num(cfg.spectrum.E0) << "\nk0 = " << cfg.spectrum.k0 << "\n";
    os << "normalize_total = " << (cfg.spectrum.normalize_total ? "true" : "false") << "\n";
    os << "[tracer]\n";
    os << "alpha = " << num(cfg.tracer.alpha) << "\nd_T = " << num(cfg.tracer.d_T) << "\nkappa = "
       << num(cfg.tracer.kappa) << "\n";
    os << "[run]\n";
    os << "kmax = " << cfg.kmax << "\nepsilon = " << num(cfg.epsilon) << "\ndt = " << num(cfg.dt) << "\n";
    os << "t_end = " << num(cfg.t_end) << "\nt_burnin = " << num(cfg.t_burnin) << "\n";
    os << "subsample = " << cfg.subsample << "\nseed = " << cfg.seed << "\n";
    os << "n_ensemble = " << cfg.n_ensemble << "\nx_grid_n = " << cfg.x_grid_n << "\n";
    return os.str();
}

}  // namespace zst
