#include "rvf/stress_energy.hpp"

#include <cmath>

namespace rvf {

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::Perfect: return "perfect";
        case Variant::Naive: return "naive";
        case Variant::Lichnerowicz: return "lichnerowicz";
        case Variant::Incompressible: return "incompressible";
        case Variant::Irrotational: return "irrotational";
    }
    return "?";
}

namespace {

// shared contractions for one evaluation point
struct Context {
    Mat4 ginv;
    Vec4 C;       // covariant components
    Vec4 Cup;     // C^a
    double F;
    Vec4 u, uup;  // u_a, u^a
    Mat4 pi_ll;   // pi_{ab}
    Mat4 pi_mx;   // pi_a^b, row = a
    Mat4 pi_uu;   // pi^{ab}
    Mat4 DC;      // nabla_a C_b
    double divC;
    Ten3 gam;

    Context(const Metric4Jet& g, const CovectorJet& Cj) {
        ginv = g.inverse();
        C = Cj.value;
        Cup = ginv * C;
        const double F2 = C.dot(Cup);
        if (!(F2 > 0.0)) throw NotTimelike("current C is not timelike");
        F = std::sqrt(F2);
        u = C / F;
        uup = Cup / F;
        pi_ll = g.g - u * u.transpose();
        pi_mx = Mat4::Identity() - u * uup.transpose();
        pi_uu = ginv - uup * uup.transpose();
        gam = christoffel(g);
        DC = covariant_derivative(g, Cj);
        divC = (ginv.transpose().cwiseProduct(DC)).sum();
    }
};

// d_a F from the C 1-jet, with F^2 = g^{mn} C_m C_n
Vec4 dF_from_jet(const Metric4Jet& g, const CovectorJet& Cj, const Context& cx) {
    Vec4 dF;
    for (int a = 0; a < 4; ++a) {
        const Mat4 dginv = -cx.ginv * g.d1g[a] * cx.ginv;
        double dF2 = cx.C.dot(dginv * cx.C);
        for (int m = 0; m < 4; ++m) dF2 += 2.0 * cx.Cup[m] * Cj.d1(a, m);
        dF[a] = 0.5 * dF2 / cx.F;
    }
    return dF;
}

Mat4 symmetrized(const Mat4& D) { return D + D.transpose(); }

} // namespace

CovectorJet velocity_jet_from_current(const Metric4Jet& g, const CovectorJet& C_jet) {
    const Context cx(g, C_jet);
    const Vec4 dF = dF_from_jet(g, C_jet, cx);
    CovectorJet u;
    u.order = 1;
    u.value = cx.u;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            u.d1(a, b) = C_jet.d1(a, b) / cx.F - C_jet.value[b] * dF[a] / (cx.F * cx.F);
    return u;
}

StressEnergy assemble_naive_from_u(const ThermoState& st, const Metric4Jet& g,
                                   const CovectorJet& u_jet, double kappa, double vartheta) {
    const Vec4 uup = g.inverse() * u_jet.value;
    const double n = u_jet.value.dot(uup);
    if (std::abs(n - 1.0) > 1e-9)
        throw NormalizationError("u.u = " + std::to_string(n) + ", expected 1");
    if (kappa < 0.0 || vartheta < 0.0) throw DomainError("viscosities must be non-negative");

    StressEnergy out;
    out.kappa = kappa;
    out.vartheta = vartheta;
    const Vec4 u = u_jet.value;
    out.T = (st.p + st.rho) * u * u.transpose() - st.p * g.g;
    if (kappa == 0.0 && vartheta == 0.0) {
        out.variant = Variant::Perfect;
        return out;
    }
    if (!(vartheta > 0.0)) throw AssumptionViolation("viscous variants require vartheta > 0");
    out.variant = Variant::Naive;
    const Mat4 pi_ll = g.g - u * u.transpose();
    const Mat4 pi_mx = Mat4::Identity() - u * uup.transpose();
    const Mat4 Du = covariant_derivative(g, u_jet);
    const double divu = (g.inverse().transpose().cwiseProduct(Du)).sum();
    out.T += kappa * pi_ll * divu + vartheta * pi_mx * symmetrized(Du) * pi_mx.transpose();
    return out;
}

StressEnergy assemble(Variant variant, const ThermoState& st, const Metric4Jet& g,
                      const CovectorJet& C_jet, double kappa, double vartheta) {
    if (C_jet.order < 1) throw InsufficientJet("assemble needs a C 1-jet");
    if (kappa < 0.0 || vartheta < 0.0) throw DomainError("viscosities must be non-negative");
    const Context cx(g, C_jet);
    if (std::abs(cx.F - st.F) > 1e-9 * std::max(1.0, st.F))
        throw NormalizationError("thermo index F inconsistent with sqrt(C.C)");
    if (variant == Variant::Perfect && (kappa != 0.0 || vartheta != 0.0))
        throw DomainError("perfect variant must be assembled with kappa = vartheta = 0");

    if (variant == Variant::Naive && (kappa != 0.0 || vartheta != 0.0))
        return assemble_naive_from_u(st, g, velocity_jet_from_current(g, C_jet), kappa, vartheta);

    StressEnergy out;
    out.kappa = kappa;
    out.vartheta = vartheta;
    out.T = (st.p + st.rho) * cx.u * cx.u.transpose() - st.p * g.g;
    if (kappa == 0.0 && vartheta == 0.0) {
        out.variant = Variant::Perfect;
        return out;
    }
    if (!(vartheta > 0.0)) throw AssumptionViolation("viscous variants require vartheta > 0");
    out.variant = variant;

    switch (variant) {
        case Variant::Perfect:
        case Variant::Naive:
            break;
        case Variant::Lichnerowicz:
            out.T += kappa * cx.pi_ll * cx.divC
                   + vartheta * cx.pi_mx * symmetrized(cx.DC) * cx.pi_mx.transpose();
            break;
        case Variant::Incompressible:
            out.T += vartheta * cx.pi_mx * symmetrized(cx.DC) * cx.pi_mx.transpose();
            break;
        case Variant::Irrotational:
            out.T += 2.0 * vartheta * cx.pi_mx * cx.DC * cx.pi_mx.transpose();
            break;
    }
    return out;
}

ViscousTerms viscous_terms(const ThermoState& st, const Metric4Jet& g, const CovectorJet& C_jet) {
    if (C_jet.order < 2) throw InsufficientJet("viscous_terms needs a C 2-jet");
    (void)st;
    const Context cx(g, C_jet);
    const double F = cx.F, F2 = F * F;
    const Vec4 dF = dF_from_jet(g, C_jet, cx);
    const Mat4 S = symmetrized(cx.DC);
    const Ten3 DDC = second_covariant_derivative(g, C_jet);

    // raw partials d_a g^{mn} and d_a C^b, used inside the K-tensor derivatives
    Ten3 dginv = zero_ten3();
    Mat4 dCup;
    for (int a = 0; a < 4; ++a) {
        dginv[a] = -cx.ginv * g.d1g[a] * cx.ginv;
        const Vec4 col = dginv[a] * cx.C + cx.ginv * C_jet.d1.row(a).transpose();
        for (int b = 0; b < 4; ++b) dCup(a, b) = col[b];
    }
    const auto dFinv2 = [&](int a) { return -2.0 * dF[a] / (F2 * F); };

    // nablaK1[l](b,n) = nabla_l (F^-2 C_b C^n)
    Ten3 nablaK1 = zero_ten3();
    for (int l = 0; l < 4; ++l)
        for (int b = 0; b < 4; ++b)
            for (int n = 0; n < 4; ++n) {
                double e = dFinv2(l) * cx.C[b] * cx.Cup[n]
                         + (C_jet.d1(l, b) * cx.Cup[n] + cx.C[b] * dCup(l, n)) / F2;
                for (int s = 0; s < 4; ++s)
                    e += (-cx.gam[s](l, b) * cx.C[s] * cx.Cup[n]
                          + cx.gam[n](l, s) * cx.C[b] * cx.Cup[s]) / F2;
                nablaK1[l](b, n) = e;
            }

    // D^r = nabla_a (F^-2 C^r C^a)
    Vec4 Dvec = Vec4::Zero();
    for (int r = 0; r < 4; ++r) {
        double e = 0.0;
        for (int a = 0; a < 4; ++a) {
            e += dFinv2(a) * cx.Cup[r] * cx.Cup[a]
               + (dCup(a, r) * cx.Cup[a] + cx.Cup[r] * dCup(a, a)) / F2;
            for (int s = 0; s < 4; ++s)
                e += (cx.gam[r](a, s) * cx.Cup[s] * cx.Cup[a]
                      + cx.gam[a](a, s) * cx.Cup[r] * cx.Cup[s]) / F2;
        }
        Dvec[r] = e;
    }

    // nablaK3[a](m,c) = nabla_a (F^-2 C^m C_c)
    Ten3 nablaK3 = zero_ten3();
    for (int a = 0; a < 4; ++a)
        for (int m = 0; m < 4; ++m)
            for (int c = 0; c < 4; ++c) {
                double e = dFinv2(a) * cx.Cup[m] * cx.C[c]
                         + (dCup(a, m) * cx.C[c] + cx.Cup[m] * C_jet.d1(a, c)) / F2;
                for (int s = 0; s < 4; ++s)
                    e += (cx.gam[m](a, s) * cx.Cup[s] * cx.C[c]
                          - cx.gam[s](a, c) * cx.Cup[m] * cx.C[s]) / F2;
                nablaK3[a](m, c) = e;
            }

    ViscousTerms out;

    // L_s = F^-2 [ (1/F) C^t C^m nabla_t C_m - F div C ] div C
    double CCdC = 0.0;
    for (int t = 0; t < 4; ++t)
        for (int m = 0; m < 4; ++m) CCdC += cx.Cup[t] * cx.Cup[m] * cx.DC(t, m);
    out.L_s = (CCdC / F - F * cx.divC) * cx.divC / F2;

    // V_s = -(1/F) pi_a^m S_{mn} W^{an},  W^{an} = g^{al} C^b nablaK1[l](b,n)
    double Vs = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int n = 0; n < 4; ++n) {
            double W = 0.0;
            for (int l = 0; l < 4; ++l)
                for (int b = 0; b < 4; ++b) W += cx.ginv(a, l) * cx.Cup[b] * nablaK1[l](b, n);
            for (int m = 0; m < 4; ++m) Vs += cx.pi_mx(a, m) * S(m, n) * W;
        }
    out.V_s = -Vs / F;

    // nabla_a div C = g^{mn} nabla_a nabla_m C_n
    Vec4 nabla_div = Vec4::Zero();
    for (int a = 0; a < 4; ++a)
        for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n) nabla_div[a] += cx.ginv(m, n) * DDC[a](m, n);

    // L_b = pi_b^a nabla_a div C - F^-2 pi_b^c (C^a nabla_a C_c) div C
    Vec4 acc = Vec4::Zero();
    for (int c = 0; c < 4; ++c)
        for (int a = 0; a < 4; ++a) acc[c] += cx.Cup[a] * cx.DC(a, c);
    for (int b = 0; b < 4; ++b) {
        double e = 0.0;
        for (int a = 0; a < 4; ++a) e += cx.pi_mx(b, a) * nabla_div[a];
        for (int c = 0; c < 4; ++c) e -= cx.pi_mx(b, c) * acc[c] * cx.divC / F2;
        out.L[b] = e;
    }

    // V_b, the three blocks of the displayed formula
    for (int b = 0; b < 4; ++b) {
        double t1 = 0.0;
        for (int m = 0; m < 4; ++m)
            for (int r = 0; r < 4; ++r) t1 += cx.pi_mx(b, m) * S(r, m) * Dvec[r];

        double t2 = 0.0;
        for (int a = 0; a < 4; ++a)
            for (int r = 0; r < 4; ++r)
                for (int m = 0; m < 4; ++m)
                    for (int c = 0; c < 4; ++c)
                        t2 += cx.pi_uu(a, r) * S(r, m) * cx.pi_mx(b, c) * nablaK3[a](m, c);

        double t3 = 0.0;
        for (int m = 0; m < 4; ++m)
            for (int a = 0; a < 4; ++a)
                for (int r = 0; r < 4; ++r)
                    t3 += cx.pi_mx(b, m) * cx.pi_uu(a, r) * (DDC[a](r, m) + DDC[a](m, r));

        out.V[b] = -t1 - t2 + t3;
    }
    return out;
}

Mat4 vorticity(const CovectorJet& C_jet) {
    if (C_jet.order < 1) throw InsufficientJet("vorticity needs a C 1-jet");
    return C_jet.d1 - C_jet.d1.transpose();
}

double entropy_residual(const ThermoState& st, const Metric4Jet& g, const CovectorJet& C_jet,
                        const ScalarJet& s_jet, double kappa, double vartheta) {
    if (C_jet.order < 2 || s_jet.order < 1)
        throw InsufficientJet("entropy_residual needs a C 2-jet and an s 1-jet");
    const Context cx(g, C_jet);
    const ViscousTerms vt = viscous_terms(st, g, C_jet);
    const double Cds = cx.Cup.dot(s_jet.d1);
    return st.r * st.theta / cx.F * Cds + kappa * vt.L_s + vartheta * vt.V_s;
}

Vec4 momentum_residual(const ThermoState& st, const Metric4Jet& g, const CovectorJet& C_jet,
                       const ScalarJet& s_jet, const Mat4& Omega, double kappa, double vartheta) {
    if (C_jet.order < 2 || s_jet.order < 1)
        throw InsufficientJet("momentum_residual needs a C 2-jet and an s 1-jet");
    const Context cx(g, C_jet);
    const ViscousTerms vt = viscous_terms(st, g, C_jet);
    const double Cds = cx.Cup.dot(s_jet.d1);
    Vec4 out;
    for (int b = 0; b < 4; ++b) {
        double e = st.theta * st.r * s_jet.d1[b]
                 - st.r * st.theta / (cx.F * cx.F) * cx.C[b] * Cds
                 + kappa * vt.L[b] + vartheta * vt.V[b];
        for (int a = 0; a < 4; ++a) e += st.r / cx.F * cx.Cup[a] * Omega(a, b);
        out[b] = e;
    }
    return out;
}

} // namespace rvf
