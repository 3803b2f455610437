#pragma once

// Principal symbols, hyperbolicity tests by line sampling, characteristic
// cones and causality verdicts.
//
// A homogeneous polynomial h of degree m is hyperbolic with respect to an
// axis zeta when every line through zeta meets the cone {h = 0} in m real
// distinct points. Lines are tested projectively: for a sampled direction
// eta the line {eta + t zeta} gives a degree-m polynomial in t with leading
// coefficient h(zeta), so no roots escape to infinity once h(zeta) != 0.

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rvf/tensor.hpp"
#include "rvf/thermo.hpp"

namespace rvf {

struct PrincipalSymbol {
    int degree = 1;
    std::string label;
    std::function<double(const Vec4&)> eval;

    // set when the symbol is a declared power of a lower-degree factor,
    // e.g. the quartic metric symbol = (light cone)^2
    std::shared_ptr<PrincipalSymbol> base_factor;
    int factor_multiplicity = 1;

    double operator()(const Vec4& xi) const { return eval(xi); }
};

struct LineRoots {
    Vec4 direction;
    std::vector<double> roots;  // real roots found on the line
    bool all_real = false;
    bool distinct = false;
    bool degenerate = false;    // symbol vanished identically on the line
};

struct ConeReport {
    bool hyperbolic = false;           // m real distinct roots on every line
    bool factors_hyperbolic = false;   // product symbols: base factor passes
    int factor_multiplicity = 1;
    Vec4 axis = Vec4::Zero();
    int n_directions = 0;
    int degenerate_lines = 0;
    int failing_lines = 0;
    std::vector<LineRoots> lines;
    std::string note;
};

struct InclusionReport {
    bool holds = false;
    double min_margin = 0.0;  // min over boundary samples of C^a xi_a
    Vec4 worst_direction = Vec4::Zero();
    int n_samples = 0;
};

struct AcousticMode {
    std::complex<double> omega;
    double phase_speed = 0.0;  // |Re omega| / k
    double damping = 0.0;      // Im omega
};

struct BadOperatorReport {
    Mat4 quadratic_form;           // Q^{lr} = g^{lr} - C^l C^r
    int n_positive = 0, n_negative = 0, n_zero = 0;
    bool degenerate = false;
    bool has_real_cone = false;    // signature pattern (1,3) or (3,1)
    bool hyperbolic = false;       // line-sampling verdict
    bool surfaces_spacelike = false;
    double min_normal_norm = 0.0;  // min over sampled cone covectors of g^{-1}(xi,xi)
    ConeReport cone;
};

// h(xi) = C^a xi_a, the flow-line symbol (degree 1)
PrincipalSymbol symbol_flow(const Vec4& C_up);

// h(xi) = g^{ab} xi_a xi_b, the light-cone symbol (degree 2)
PrincipalSymbol symbol_light(const Metric4Jet& g);

// h(xi) = (C^a xi_a)(g^{rm} xi_r xi_m), degree 3
PrincipalSymbol symbol_entropy(const Metric4Jet& g, const Vec4& C_up);

// h(xi) = (g^{ab} xi_a xi_b)^2, degree 4, declared as light^2
PrincipalSymbol symbol_quartic(const Metric4Jet& g);

// line-sampling hyperbolicity verdict; n_dirs sampled directions, verdicts
// deterministic for a fixed seed
ConeReport is_hyperbolic(const PrincipalSymbol& h, const Vec4& axis, int n_dirs = 512,
                         double distinct_tol = 1e-8, unsigned seed = 2718);

// sampled-boundary check that the half-space {C^a xi_a >= 0} contains the
// future metric half-cone {g^{ab} xi_a xi_b >= 0} oriented toward C
InclusionReport half_space_contains_cone(const Metric4Jet& g, const Vec4& C_up, int n_dirs = 512);

// same check with the timelike-C precondition enforced (NotTimelike otherwise)
InclusionReport cone_inclusion(const Metric4Jet& g, const Vec4& C_up, int n_dirs = 512);

// roots v of h(-v, khat) = 0: normal propagation speeds of characteristic
// surfaces with spatial normal khat (constant-coefficient context)
std::vector<double> normal_speeds(const PrincipalSymbol& h, const Eigen::Vector3d& khat);

// max |v| over sampled spatial directions
double max_normal_speed(const PrincipalSymbol& h, int n_dirs = 128);

// Linearized plane-wave modes of the naive-tensor fluid system around a
// constant rest-frame state on a flat background: the five roots in omega of
// det M(omega, k) = 0 for the coupled (du, dr, ds) system, built from the
// first-law closure of the given equation of state. Throws DegenerateState
// when the background state is unusable.
std::vector<AcousticMode> naive_acoustic_speeds(const EquationOfState& eos, double F, double s,
                                                double kappa, double vartheta,
                                                const Eigen::Vector3d& wave_direction,
                                                double k = 1.0);

// sound speed squared of the first-law closure, r / (F dr/dF)
double sound_speed_squared(const EquationOfState& eos, double F, double s);

// signature analysis and hyperbolicity verdict of (g^{lr} - C^l C^r) xi_l xi_r
BadOperatorReport bad_operator_analysis(const Metric4Jet& g, const Vec4& C_up);

// roots of a complex-coefficient polynomial (leading coefficient first),
// via the companion matrix
std::vector<std::complex<double>> polynomial_roots(std::vector<std::complex<double>> coeffs);

// coefficients (leading first) of t -> h(base + t * dir), degree m
std::vector<double> line_polynomial(const PrincipalSymbol& h, const Vec4& base, const Vec4& dir);

} // namespace rvf
