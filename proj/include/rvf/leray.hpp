#pragma once

// Mechanical verification of Leray index structures for declared PDE systems.
// A system with per-equation order m(t), unknown indices s(k) and equation
// indices t(t) qualifies when
//   (i)  m(t) = s(t) - t(t) + 1 for the diagonal unknown of each equation,
//   (ii) equation t depends on at most s(k) - t(t) derivatives of unknown k,
//        and not on unknown k at all when s(k) - t(t) < 0.
// Dependence tables are declared, not inferred: the module verifies the
// bookkeeping of a reduction, it does not parse PDEs.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rvf/errors.hpp"

namespace rvf {

struct LerayUnknown {
    std::string name;
    int s = 1;
};

struct LerayEquation {
    std::string name;
    int m = 1;                        // operator order
    int t = 1;                        // equation index
    int hyperbolic_factors = 1;       // p_t: factor count of the characteristic polynomial
    std::map<std::string, int> dep;   // max derivative order of each unknown on the rhs
};

struct LeraySystemSpec {
    std::vector<LerayUnknown> unknowns;
    std::vector<LerayEquation> equations;

    // the coupled metric/entropy/current system with indices
    // m = (4,3,4), s = (5,4,4), t = (2,2,1) and factor counts (2,1,2)
    static LeraySystemSpec builtin_paper();

    // declarative text format: [unknown NAME] / [equation NAME] sections
    static LeraySystemSpec parse(const std::string& text);
    static LeraySystemSpec parse_file(const std::string& path);

    const LerayUnknown* find_unknown(const std::string& name) const;
};

struct LerayViolation {
    std::string equation;
    std::string unknown;  // empty for condition (i) and structural failures
    std::string message;
};

struct VerificationReport {
    bool pass = true;
    std::vector<LerayViolation> violations;
    std::string summary() const;
};

VerificationReport verify(const LeraySystemSpec& spec);

struct GevreyBound {
    int w = 1;                  // max_t p_t
    double sigma_max = 0.0;     // w / (w - 1); unused when strictly hyperbolic
    bool strictly_hyperbolic = false;  // w = 1: Sobolev well-posed, sigma unbounded
};

GevreyBound gevrey_bound(const LeraySystemSpec& spec);

struct CauchyRequirements {
    std::vector<std::pair<std::string, int>> data_orders;       // s(k) - 1 per unknown
    std::vector<std::pair<std::string, int>> compat_depths;     // t(t) - 1 per equation
};

CauchyRequirements cauchy_requirements(const LeraySystemSpec& spec);

} // namespace rvf
