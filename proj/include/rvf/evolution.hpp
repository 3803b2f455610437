#pragma once

// Desk-scale dynamical checks: a 1+1-dimensional model system whose principal
// parts copy the multiplicity structure of the coupled equations (two squared
// wave factors and one transport-of-wave factor), a domain-of-dependence
// experiment on it, and causality speed scans over thermodynamic states.
//
// The model is exactly that: a model. It realizes the principal-part
// multiplicities p = (2, 1, 2) and the derivative-order couplings of the full
// system in one space dimension, where the finite-propagation claim can be
// tested against slope-one cones at desk scale.

#include <vector>

#include "rvf/characteristics.hpp"
#include "rvf/thermo.hpp"

namespace rvf {

struct ModelSystem1p1 {
    // transport vector of the entropy-slot factor; timelike means |C1| < C0
    double C0 = 1.0;
    double C1 = 0.3;
    // lower-order couplings, bounded by the dependence table of the system:
    // the g-slot and s-slot equations may see third derivatives of g and
    // second derivatives of the others; the C-slot equation may see fourth
    // derivatives of g and third of C, and no s at all
    double a1 = 0.0, a2 = 0.0, a3 = 0.0;  // g-slot equation
    double b1 = 0.0, b2 = 0.0, b3 = 0.0;  // s-slot equation
    double c1 = 0.0, c3 = 0.0;            // C-slot equation

    static ModelSystem1p1 decoupled();
    static ModelSystem1p1 default_coupled();

    double max_speed() const;  // cone slope of the principal factors
};

struct Grid1p1 {
    double length = 2.0;  // periodic domain [0, length)
    int n = 256;
    double cfl = 0.4;
    double horizon = 0.5;
    int save_stride = 8;  // snapshot cadence in steps

    double dx() const { return length / n; }
};

// initial time-derivative profiles per unknown: g-slot orders 0..4,
// s-slot orders 0..3, C-slot orders 0..3 (one less than each Leray index)
struct InitialData1p1 {
    std::vector<std::vector<double>> g, s, C;

    static InitialData1p1 zero(int n);
};

struct Evolution1p1Result {
    std::vector<double> times;
    // snapshots[k][slot][i], slot 0 = g, 1 = s, 2 = C
    std::vector<std::array<std::vector<double>, 3>> snapshots;
    double norm_surrogate_drift = 0.0;
    long steps = 0;

    const std::array<std::vector<double>, 3>& final_state() const { return snapshots.back(); }
};

Evolution1p1Result evolve(const ModelSystem1p1& model, const Grid1p1& grid,
                          const InitialData1p1& data, int threads = 1);

struct DodSpec {
    double bump_center = 0.5;
    double bump_width = 0.2;     // support diameter of the compact bump
    double bump_amplitude = 1.0;
    int bump_slot = 0;           // 0 = g, 1 = s, 2 = C
    double probe_lo = 1.4;       // probe interval, must avoid the causal future
    double probe_hi = 1.6;
    double tolerance = 1e-8;
};

struct DodResult {
    double leak = 0.0;  // max difference over the probe region and saved times
    double tolerance = 0.0;
    bool pass = false;
    bool expected_influence = false;  // probe intersects the cone: difference is O(1)
};

// evolves the background with and without the bump and measures the
// difference on the probe region; throws GeometryError when the probe meets
// the slope-one causal future of the bump (unless expect_influence)
DodResult domain_of_dependence_test(const ModelSystem1p1& model, const Grid1p1& grid,
                                    const InitialData1p1& background, const DodSpec& spec,
                                    bool expect_influence = false, int threads = 1);

// compactly supported smooth bump on [c - w/2, c + w/2]
double bump_function(double x, double center, double halfwidth);

struct SpeedScanRow {
    double F = 0.0, s = 0.0;
    double p_plus_rho = 0.0;
    double max_speed_naive = 0.0;
    double max_speed_lichnerowicz = 0.0;
    bool naive_superluminal = false;
    bool flow_hyperbolic = false;   // entropy-factor verdict at the state
    bool metric_hyperbolic = false; // light-cone factor verdict
};

// scans a ramp of states F in [F_lo, F_hi] at fixed entropy; the naive column
// comes from the linearized plane-wave modes, the other from the symbols of
// the irrotational system
std::vector<SpeedScanRow> speed_scan(const EquationOfState& eos, double F_lo, double F_hi,
                                     int n_states, double s_fixed, double kappa, double vartheta);

} // namespace rvf
