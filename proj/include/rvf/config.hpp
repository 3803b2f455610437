#pragma once

// Run configuration: a small sectioned key-value text format.
// Unknown keys are errors; messages carry line numbers.

#include <map>
#include <optional>
#include <string>

#include "rvf/stress_energy.hpp"
#include "rvf/thermo.hpp"

namespace rvf {

struct StateRange {
    double F_min = 1.1, F_max = 4.0;
    int count = 32;
};

struct RunConfig {
    // equation of state
    std::string eos_family = "power_law";
    std::map<std::string, double> eos_params;  // family-specific
    std::string eos_table_path;                // tabulated family

    // state or state range
    std::optional<double> F, s;
    std::optional<StateRange> range;
    double s_fixed = 1.0;

    Variant variant = Variant::Lichnerowicz;
    double kappa = 0.0;
    double vartheta = 1.0;
    double gravity = 1.0;

    // grid for the 1+1 model
    double grid_length = 2.0;
    int grid_n = 256;
    double cfl = 0.4;
    double horizon = 0.5;

    // domain-of-dependence geometry
    double bump_center = 0.5, bump_width = 0.2, bump_amplitude = 1.0;
    double probe_lo = 1.4, probe_hi = 1.6;

    std::string slice_path;  // build-cauchy input
    std::string target = "irrotational";

    std::string out_dir = ".";
    unsigned seed = 1;
    int threads = 1;
    double tolerance = 1e-9;

    EquationOfState make_eos() const;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text);

} // namespace rvf
