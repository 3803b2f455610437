#include "rvf/leray.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

namespace rvf {

LeraySystemSpec LeraySystemSpec::builtin_paper() {
    LeraySystemSpec spec;
    spec.unknowns = {{"g", 5}, {"s", 4}, {"C", 4}};

    LerayEquation metric;
    metric.name = "metric_evolution";
    metric.m = 4;
    metric.t = 2;
    metric.hyperbolic_factors = 2;
    metric.dep = {{"g", 3}, {"s", 2}, {"C", 2}};

    LerayEquation entropy;
    entropy.name = "entropy_transport";
    entropy.m = 3;
    entropy.t = 2;
    entropy.hyperbolic_factors = 1;
    entropy.dep = {{"g", 3}, {"s", 2}, {"C", 2}};

    LerayEquation current;
    current.name = "current_evolution";
    current.m = 4;
    current.t = 1;
    current.hyperbolic_factors = 2;
    current.dep = {{"g", 4}, {"C", 3}};  // no entropy dependence

    spec.equations = {metric, entropy, current};
    return spec;
}

const LerayUnknown* LeraySystemSpec::find_unknown(const std::string& name) const {
    for (const auto& u : unknowns)
        if (u.name == name) return &u;
    return nullptr;
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
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

} // namespace

LeraySystemSpec LeraySystemSpec::parse(const std::string& text) {
    LeraySystemSpec spec;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    enum class Sect { None, Unknown, Equation } sect = Sect::None;

    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("unterminated section header", lineno);
            std::istringstream hs(line.substr(1, line.size() - 2));
            std::string kind, name;
            hs >> kind >> name;
            if (name.empty()) throw ConfigError("section needs a name", lineno);
            if (kind == "unknown") {
                spec.unknowns.push_back({name, 1});
                sect = Sect::Unknown;
            } else if (kind == "equation") {
                LerayEquation eq;
                eq.name = name;
                spec.equations.push_back(eq);
                sect = Sect::Equation;
            } else {
                throw ConfigError("unknown section kind '" + kind + "'", lineno);
            }
            continue;
        }

        const auto eqp = line.find('=');
        if (eqp == std::string::npos) throw ConfigError("expected key = value", lineno);
        const std::string key = trim(line.substr(0, eqp));
        const std::string val = trim(line.substr(eqp + 1));

        if (sect == Sect::Unknown) {
            if (key == "s")
                spec.unknowns.back().s = parse_int(val, lineno);
            else
                throw ConfigError("unknown key '" + key + "' in unknown section", lineno);
        } else if (sect == Sect::Equation) {
            auto& eq = spec.equations.back();
            if (key == "m")
                eq.m = parse_int(val, lineno);
            else if (key == "t")
                eq.t = parse_int(val, lineno);
            else if (key == "factors")
                eq.hyperbolic_factors = parse_int(val, lineno);
            else if (key.rfind("dep ", 0) == 0)
                eq.dep[trim(key.substr(4))] = parse_int(val, lineno);
            else
                throw ConfigError("unknown key '" + key + "' in equation section", lineno);
        } else {
            throw ConfigError("key outside of any section", lineno);
        }
    }
    if (spec.unknowns.empty() || spec.equations.empty())
        throw ConfigError("spec needs at least one unknown and one equation");
    return spec;
}

LeraySystemSpec LeraySystemSpec::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open spec file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

VerificationReport verify(const LeraySystemSpec& spec) {
    VerificationReport rep;
    auto fail = [&](const std::string& eq, const std::string& unk, std::string msg) {
        rep.pass = false;
        rep.violations.push_back({eq, unk, std::move(msg)});
    };

    for (const auto& u : spec.unknowns)
        if (u.s < 1) fail("", u.name, "unknown index s must be >= 1");
    for (const auto& e : spec.equations) {
        if (e.t < 1) fail(e.name, "", "equation index t must be >= 1");
        if (e.hyperbolic_factors < 1) fail(e.name, "", "factor count must be >= 1");
    }

    if (spec.equations.size() != spec.unknowns.size())
        fail("", "", "diagonal system needs as many equations as unknowns");

    const size_t n = std::min(spec.equations.size(), spec.unknowns.size());
    for (size_t i = 0; i < n; ++i) {
        const auto& e = spec.equations[i];
        const auto& u = spec.unknowns[i];
        if (e.m != u.s - e.t + 1) {
            std::ostringstream os;
            os << "order mismatch: m = " << e.m << " but s(" << u.name << ") - t + 1 = "
               << u.s - e.t + 1;
            fail(e.name, u.name, os.str());
        }
    }

    for (const auto& e : spec.equations) {
        for (const auto& [name, order] : e.dep) {
            const auto* u = spec.find_unknown(name);
            if (!u) {
                fail(e.name, name, "dependence on an undeclared unknown");
                continue;
            }
            const int bound = u->s - e.t;
            if (bound < 0) {
                std::ostringstream os;
                os << "s(" << name << ") - t = " << bound << " < 0: the unknown must not appear";
                fail(e.name, name, os.str());
            } else if (order > bound) {
                std::ostringstream os;
                os << "depends on " << order << " derivatives, allowed at most " << bound;
                fail(e.name, name, os.str());
            }
        }
    }
    return rep;
}

std::string VerificationReport::summary() const {
    std::ostringstream os;
    if (pass) {
        os << "PASS: Leray index structure verified";
        return os.str();
    }
    os << "FAIL: " << violations.size() << " violation(s)\n";
    for (const auto& v : violations) {
        os << "  - ";
        if (!v.equation.empty()) os << "equation " << v.equation;
        if (!v.unknown.empty()) os << (v.equation.empty() ? "unknown " : ", unknown ") << v.unknown;
        os << ": " << v.message << "\n";
    }
    return os.str();
}

GevreyBound gevrey_bound(const LeraySystemSpec& spec) {
    GevreyBound out;
    out.w = 1;
    for (const auto& e : spec.equations) out.w = std::max(out.w, e.hyperbolic_factors);
    if (out.w == 1) {
        out.strictly_hyperbolic = true;
        out.sigma_max = std::numeric_limits<double>::infinity();
    } else {
        out.sigma_max = double(out.w) / double(out.w - 1);
    }
    return out;
}

CauchyRequirements cauchy_requirements(const LeraySystemSpec& spec) {
    CauchyRequirements out;
    for (const auto& u : spec.unknowns) out.data_orders.emplace_back(u.name, u.s - 1);
    for (const auto& e : spec.equations) out.compat_depths.emplace_back(e.name, e.t - 1);
    return out;
}

} // namespace rvf
