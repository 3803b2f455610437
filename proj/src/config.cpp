#include "rvf/config.hpp"

#include <fstream>
#include <sstream>

#include "rvf/errors.hpp"

namespace rvf {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, int line) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("expected a number, got '" + v + "'", line);
    }
}

int parse_int(const std::string& v, int line) {
    try {
        size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("expected an integer, got '" + v + "'", line);
    }
}

Variant parse_variant(const std::string& v, int line) {
    if (v == "perfect") return Variant::Perfect;
    if (v == "naive") return Variant::Naive;
    if (v == "lichnerowicz") return Variant::Lichnerowicz;
    if (v == "incompressible") return Variant::Incompressible;
    if (v == "irrotational") return Variant::Irrotational;
    throw ConfigError("unknown variant '" + v + "'", line);
}

} // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    StateRange range;
    bool saw_range = false;

    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("unterminated section header", lineno);
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key = value", lineno);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));

        if (section == "eos") {
            if (key == "family")
                cfg.eos_family = val;
            else if (key == "path")
                cfg.eos_table_path = val;
            else
                cfg.eos_params[key] = parse_double(val, lineno);
        } else if (section == "state") {
            if (key == "F")
                cfg.F = parse_double(val, lineno);
            else if (key == "s")
                cfg.s = parse_double(val, lineno);
            else
                throw ConfigError("unknown key '" + key + "' in [state]", lineno);
        } else if (section == "state_range") {
            saw_range = true;
            if (key == "F_min")
                range.F_min = parse_double(val, lineno);
            else if (key == "F_max")
                range.F_max = parse_double(val, lineno);
            else if (key == "count")
                range.count = parse_int(val, lineno);
            else if (key == "s")
                cfg.s_fixed = parse_double(val, lineno);
            else
                throw ConfigError("unknown key '" + key + "' in [state_range]", lineno);
        } else if (section == "viscosity") {
            if (key == "kappa")
                cfg.kappa = parse_double(val, lineno);
            else if (key == "vartheta")
                cfg.vartheta = parse_double(val, lineno);
            else if (key == "variant")
                cfg.variant = parse_variant(val, lineno);
            else if (key == "gravity")
                cfg.gravity = parse_double(val, lineno);
            else
                throw ConfigError("unknown key '" + key + "' in [viscosity]", lineno);
        } else if (section == "grid") {
            if (key == "length")
                cfg.grid_length = parse_double(val, lineno);
            else if (key == "n")
                cfg.grid_n = parse_int(val, lineno);
            else if (key == "cfl")
                cfg.cfl = parse_double(val, lineno);
            else if (key == "horizon")
                cfg.horizon = parse_double(val, lineno);
            else
                throw ConfigError("unknown key '" + key + "' in [grid]", lineno);
        } else if (section == "dod") {
            if (key == "bump_center")
                cfg.bump_center = parse_double(val, lineno);
            else if (key == "bump_width")
                cfg.bump_width = parse_double(val, lineno);
            else if (key == "bump_amplitude")
                cfg.bump_amplitude = parse_double(val, lineno);
            else if (key == "probe_lo")
                cfg.probe_lo = parse_double(val, lineno);
            else if (key == "probe_hi")
                cfg.probe_hi = parse_double(val, lineno);
            else
                throw ConfigError("unknown key '" + key + "' in [dod]", lineno);
        } else if (section == "cauchy") {
            if (key == "slice")
                cfg.slice_path = val;
            else if (key == "target")
                cfg.target = val;
            else
                throw ConfigError("unknown key '" + key + "' in [cauchy]", lineno);
        } else if (section == "run" || section == "output") {
            if (key == "dir")
                cfg.out_dir = val;
            else if (key == "seed")
                cfg.seed = (unsigned)parse_int(val, lineno);
            else if (key == "threads")
                cfg.threads = parse_int(val, lineno);
            else if (key == "tolerance")
                cfg.tolerance = parse_double(val, lineno);
            else
                throw ConfigError("unknown key '" + key + "' in [" + section + "]", lineno);
        } else {
            throw ConfigError("key outside of a known section", lineno);
        }
    }

    if (saw_range) cfg.range = range;

    // validation
    if (cfg.kappa < 0.0) throw ConfigError("kappa must be non-negative");
    const bool viscous = cfg.variant != Variant::Perfect;
    if (viscous && !(cfg.vartheta > 0.0))
        throw ConfigError("viscous variants require vartheta > 0");
    if (cfg.threads < 1) throw ConfigError("threads must be at least 1");
    if (cfg.range && cfg.range->count < 2) throw ConfigError("state_range count must be >= 2");
    if (cfg.range && !(cfg.range->F_max > cfg.range->F_min))
        throw ConfigError("state_range needs F_max > F_min");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

EquationOfState RunConfig::make_eos() const {
    auto get = [&](const char* k, double dflt) {
        auto it = eos_params.find(k);
        return it == eos_params.end() ? dflt : it->second;
    };
    if (eos_family == "power_law")
        return EquationOfState::power_law(get("c", 1.0), get("a", 2.0), get("theta0", 1.0),
                                          get("theta_s", 0.0));
    if (eos_family == "affine_index")
        return EquationOfState::affine_index(get("gamma", 1.4), get("K0", 1.0), get("beta", 1.0));
    if (eos_family == "tabulated") {
        if (eos_table_path.empty()) throw ConfigError("tabulated EOS needs path = <csv>");
        return EquationOfState::tabulated_from_csv(eos_table_path);
    }
    throw ConfigError("unknown EOS family '" + eos_family + "'");
}

} // namespace rvf
