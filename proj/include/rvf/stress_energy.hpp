#pragma once

// Stress-energy assembly for a relativistic viscous fluid and the decomposed
// conservation-law residuals. The viscous variants differ in which velocity
// enters the dissipative terms: the four-velocity u (naive) or the dynamic
// velocity C_a = F u_a (all others).
//
//   naive:           (p+rho) u u - p g + kappa pi div(u) + theta_v pi pi (grad u + grad u^T)
//   lichnerowicz:    same with u-derivatives replaced by C-derivatives
//   incompressible:  lichnerowicz without the bulk term (div C = 0 on the class)
//   irrotational:    viscous part 2 theta_v pi pi grad C (curl-free class)

#include "rvf/tensor.hpp"
#include "rvf/thermo.hpp"

namespace rvf {

enum class Variant { Perfect, Naive, Lichnerowicz, Incompressible, Irrotational };

const char* variant_name(Variant v);

struct StressEnergy {
    Mat4 T = Mat4::Zero();
    Variant variant = Variant::Perfect;
    double kappa = 0.0;
    double vartheta = 0.0;
};

struct ViscousTerms {
    double L_s = 0.0;
    double V_s = 0.0;
    Vec4 L = Vec4::Zero();
    Vec4 V = Vec4::Zero();
};

// exact component-wise evaluation of the chosen variant from a C 1-jet.
// F consistency between thermo.F and sqrt(C.C) is enforced.
StressEnergy assemble(Variant variant, const ThermoState& st, const Metric4Jet& g,
                      const CovectorJet& C_jet, double kappa, double vartheta);

// naive variant evaluated directly from a u 1-jet (normalization enforced)
StressEnergy assemble_naive_from_u(const ThermoState& st, const Metric4Jet& g,
                                   const CovectorJet& u_jet, double kappa, double vartheta);

// the four dissipative scalars/covectors entering the decomposed conservation
// laws; needs a C 2-jet
ViscousTerms viscous_terms(const ThermoState& st, const Metric4Jet& g, const CovectorJet& C_jet);

// (r theta / F) C^a d_a s + kappa L_s + vartheta V_s
double entropy_residual(const ThermoState& st, const Metric4Jet& g, const CovectorJet& C_jet,
                        const ScalarJet& s_jet, double kappa, double vartheta);

// (r/F) C^a Omega_{ab} + theta r d_b s - (r theta / F^2) C_b C^a d_a s
//   + kappa L_b + vartheta V_b
Vec4 momentum_residual(const ThermoState& st, const Metric4Jet& g, const CovectorJet& C_jet,
                       const ScalarJet& s_jet, const Mat4& Omega, double kappa, double vartheta);

// Omega_{ab} = d_a C_b - d_b C_a (equal to the covariant curl)
Mat4 vorticity(const CovectorJet& C_jet);

// u 1-jet from a C 1-jet via F = sqrt(g^{-1}(C,C)), u = C / F
CovectorJet velocity_jet_from_current(const Metric4Jet& g, const CovectorJet& C_jet);

} // namespace rvf
