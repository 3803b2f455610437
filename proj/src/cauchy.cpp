#include "rvf/cauchy.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace rvf {

JetVec4 make_jet_vec4(int degree) {
    return {TaylorJet(degree), TaylorJet(degree), TaylorJet(degree), TaylorJet(degree)};
}

JetMat4 make_jet_mat4(int degree) {
    return {make_jet_vec4(degree), make_jet_vec4(degree), make_jet_vec4(degree),
            make_jet_vec4(degree)};
}

SliceData::SliceData(int degree)
    : jet_degree(degree),
      g(make_jet_mat4(degree)),
      u(make_jet_vec4(degree)),
      s(degree),
      F(degree) {}

SliceData SliceData::constant_state(const Mat4& g_point, const Vec4& u_lower, double s0,
                                    double F0, int degree) {
    SliceData d(degree);
    for (int a = 0; a < 4; ++a) {
        d.u[a] = TaylorJet(degree, u_lower[a]);
        for (int b = 0; b < 4; ++b) d.g[a][b] = TaylorJet(degree, g_point(a, b));
    }
    d.s = TaylorJet(degree, s0);
    d.F = TaylorJet(degree, F0);
    return d;
}

namespace {

using J = TaylorJet;
using JetTen3 = std::array<JetMat4, 4>;  // [l](m,n)

J jzero(int N) { return J(N); }

// 4x4 jet matrix inverse by Gaussian elimination; pivots on constant terms
JetMat4 jet_inverse(const JetMat4& m, int N) {
    std::array<std::array<J, 8>, 4> aug = {{
        {m[0][0], m[0][1], m[0][2], m[0][3], J(N, 1), J(N), J(N), J(N)},
        {m[1][0], m[1][1], m[1][2], m[1][3], J(N), J(N, 1), J(N), J(N)},
        {m[2][0], m[2][1], m[2][2], m[2][3], J(N), J(N), J(N, 1), J(N)},
        {m[3][0], m[3][1], m[3][2], m[3][3], J(N), J(N), J(N), J(N, 1)},
    }};
    for (int col = 0; col < 4; ++col) {
        int piv = -1;
        double best = 0.0;
        for (int r = col; r < 4; ++r)
            if (std::abs(aug[r][col].value()) > best) {
                best = std::abs(aug[r][col].value());
                piv = r;
            }
        if (piv < 0 || best < 1e-14) throw SingularMetric("jet metric not invertible");
        std::swap(aug[col], aug[piv]);
        const J inv_p = aug[col][col].reciprocal();
        for (int c = 0; c < 8; ++c) aug[col][c] = aug[col][c] * inv_p;
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            const J f = aug[r][col];
            if (f.max_abs_coefficient() == 0.0) continue;
            for (int c = 0; c < 8; ++c) aug[r][c] -= f * aug[col][c];
        }
    }
    JetMat4 out = make_jet_mat4(N);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) out[r][c] = aug[r][c + 4];
    return out;
}

struct GeoJets {
    JetMat4 ginv;
    JetTen3 gam;      // Gamma^l_{mn}
    JetMat4 ricci;
    JetVec4 gamma_up; // g^{mn} Gamma^l_{mn}

    explicit GeoJets(int N)
        : ginv(make_jet_mat4(N)),
          gam{make_jet_mat4(N), make_jet_mat4(N), make_jet_mat4(N), make_jet_mat4(N)},
          ricci(make_jet_mat4(N)),
          gamma_up(make_jet_vec4(N)) {}
};

GeoJets build_geo(const JetMat4& g, int N) {
    GeoJets geo(N);
    geo.ginv = jet_inverse(g, N);

    std::array<JetMat4, 4> dg = {make_jet_mat4(N), make_jet_mat4(N), make_jet_mat4(N),
                                 make_jet_mat4(N)};
    for (int c = 0; c < 4; ++c)
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) dg[c][a][b] = g[a][b].derive(c);

    for (int l = 0; l < 4; ++l)
        for (int m = 0; m < 4; ++m)
            for (int n = m; n < 4; ++n) {
                J e(N);
                for (int r = 0; r < 4; ++r)
                    e += geo.ginv[l][r] * (dg[m][r][n] + dg[n][r][m] - dg[r][m][n]);
                e *= 0.5;
                geo.gam[l][m][n] = e;
                geo.gam[l][n][m] = e;
            }

    for (int s = 0; s < 4; ++s)
        for (int n = 0; n < 4; ++n) {
            J e(N);
            for (int m = 0; m < 4; ++m) e += geo.gam[m][n][s].derive(m) - geo.gam[m][m][s].derive(n);
            for (int m = 0; m < 4; ++m)
                for (int l = 0; l < 4; ++l)
                    e += geo.gam[m][m][l] * geo.gam[l][n][s] - geo.gam[m][n][l] * geo.gam[l][m][s];
            geo.ricci[s][n] = e;
        }

    for (int l = 0; l < 4; ++l) {
        J e(N);
        for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n) e += geo.ginv[m][n] * geo.gam[l][m][n];
        geo.gamma_up[l] = e;
    }
    return geo;
}

// closed-form equation-of-state families evaluated on jets
struct JetThermo {
    J r, rF, rs, theta, p;
};

JetThermo jet_thermo(const EquationOfState& eos, const J& F, const J& s, int N) {
    const auto par = eos.parameters();
    JetThermo t{J(N), J(N), J(N), J(N), J(N)};
    switch (eos.family()) {
        case EquationOfState::Family::PowerLaw: {
            const double c = par.at("c"), a = par.at("a");
            t.r = F.pow(a) * c;
            t.rF = F.pow(a - 1.0) * (c * a);
            t.rs = J(N);
            t.theta = J(N, par.at("theta0")) + par.at("theta_s") * s;
            t.p = (F.pow(a + 1.0) - 1.0) * (c / (a + 1.0));
            break;
        }
        case EquationOfState::Family::AffineIndex: {
            const double gam = par.at("gamma"), K0 = par.at("K0"), beta = par.at("beta");
            const J Fm1 = F - 1.0;
            const J arg = Fm1 * ((gam - 1.0) / (gam * K0)) * (s * (-beta)).exp();
            t.r = arg.pow(1.0 / (gam - 1.0));
            t.rF = t.r / (Fm1 * (gam - 1.0));
            t.rs = t.r * (-beta / (gam - 1.0));
            t.theta = Fm1 * (beta / gam);
            t.p = t.r * Fm1 * ((gam - 1.0) / gam);
            break;
        }
        case EquationOfState::Family::Tabulated:
            throw AssumptionViolation("the slice-data ladder needs a closed-form EOS family");
    }
    return t;
}

struct FluidJets {
    JetVec4 C, Cup, u, uup;
    J F, F2;
    JetThermo th;
    JetMat4 DC, Du;        // nabla_a C_b, nabla_a u_b
    JetMat4 Duup;          // nabla_a u^b
    J divC, divu;
    JetMat4 pi_mx;         // pi_a^b
    JetMat4 pi_uu;         // pi^{ab}

    explicit FluidJets(int N)
        : C(make_jet_vec4(N)), Cup(make_jet_vec4(N)), u(make_jet_vec4(N)),
          uup(make_jet_vec4(N)), F(N), F2(N), th{J(N), J(N), J(N), J(N), J(N)},
          DC(make_jet_mat4(N)), Du(make_jet_mat4(N)), Duup(make_jet_mat4(N)), divC(N),
          divu(N), pi_mx(make_jet_mat4(N)), pi_uu(make_jet_mat4(N)) {}
};

// phase 1: C = F u from independent (u, F); phase 2: C primary, u = C/F
FluidJets build_fluid(const GeoJets& geo, const JetMat4& g, const JetVec4* u_field,
                      const J* F_field, const JetVec4* C_field, const J& s,
                      const EquationOfState& eos, int N) {
    FluidJets f(N);
    (void)g;
    if (C_field) {
        f.C = *C_field;
        J F2(N);
        for (int a = 0; a < 4; ++a) {
            J up(N);
            for (int b = 0; b < 4; ++b) up += geo.ginv[a][b] * f.C[b];
            f.Cup[a] = up;
        }
        for (int a = 0; a < 4; ++a) F2 += f.C[a] * f.Cup[a];
        f.F2 = F2;
        f.F = F2.sqrt();
        const J Finv = f.F.reciprocal();
        for (int a = 0; a < 4; ++a) {
            f.u[a] = f.C[a] * Finv;
            f.uup[a] = f.Cup[a] * Finv;
        }
    } else {
        f.F = *F_field;
        f.F2 = f.F * f.F;
        f.u = *u_field;
        for (int a = 0; a < 4; ++a) {
            J up(N);
            for (int b = 0; b < 4; ++b) up += geo.ginv[a][b] * f.u[b];
            f.uup[a] = up;
            f.C[a] = f.F * f.u[a];
        }
        for (int a = 0; a < 4; ++a) f.Cup[a] = f.F * f.uup[a];
    }

    f.th = jet_thermo(eos, f.F, s, N);

    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            J dc = f.C[b].derive(a);
            J du = f.u[b].derive(a);
            for (int l = 0; l < 4; ++l) {
                dc -= geo.gam[l][a][b] * f.C[l];
                du -= geo.gam[l][a][b] * f.u[l];
            }
            f.DC[a][b] = dc;
            f.Du[a][b] = du;
        }
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            J e(N);
            for (int c = 0; c < 4; ++c) e += geo.ginv[b][c] * f.Du[a][c];
            f.Duup[a][b] = e;
        }
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            f.divC += geo.ginv[a][b] * f.DC[a][b];
            f.divu += geo.ginv[a][b] * f.Du[a][b];
        }
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            f.pi_mx[a][b] = (a == b ? J(N, 1.0) : J(N)) - f.u[a] * f.uup[b];
            f.pi_uu[a][b] = geo.ginv[a][b] - f.uup[a] * f.uup[b];
        }
    return f;
}

// stress-energy of the incompressible variant (bulk term absent on the class)
JetMat4 jet_stress_energy(const GeoJets& geo, const JetMat4& g, const FluidJets& f,
                          double vartheta, int N) {
    JetMat4 T = make_jet_mat4(N);
    const J w = f.th.r * f.F;  // p + rho
    JetMat4 S = make_jet_mat4(N);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) S[a][b] = f.DC[a][b] + f.DC[b][a];
    for (int a = 0; a < 4; ++a)
        for (int b = a; b < 4; ++b) {
            J e = w * f.u[a] * f.u[b] - f.th.p * g[a][b];
            J visc(N);
            for (int r = 0; r < 4; ++r)
                for (int m = 0; m < 4; ++m) visc += f.pi_mx[a][r] * f.pi_mx[b][m] * S[r][m];
            e += vartheta * visc;
            T[a][b] = e;
            T[b][a] = e;
        }
    (void)geo;
    return T;
}

// mixed Einstein tensor row S_alpha^0 minus the matter side
JetVec4 jet_constraints(const GeoJets& geo, const JetMat4& g, const JetMat4& T, double gravity,
                        int N) {
    J R(N);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) R += geo.ginv[a][b] * geo.ricci[a][b];
    JetVec4 out = make_jet_vec4(N);
    for (int al = 0; al < 4; ++al) {
        J e(N);
        for (int b = 0; b < 4; ++b) e += (geo.ricci[al][b] - gravity * T[al][b]) * geo.ginv[b][0];
        e -= (al == 0 ? R * 0.5 : J(N));
        out[al] = e;
    }
    return out;
}

// gauge-subtracted Einstein evolution residual: the reduced system in
// harmonic coordinates, principal part -1/2 g^{mn} d_m d_n g_{ab}
JetMat4 jet_reduced_einstein(const GeoJets& geo, const JetMat4& g, const JetMat4& T,
                             double gravity, int N) {
    J trT(N);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) trT += geo.ginv[a][b] * T[a][b];
    JetMat4 out = make_jet_mat4(N);
    for (int a = 0; a < 4; ++a)
        for (int b = a; b < 4; ++b) {
            J gauge(N);
            for (int l = 0; l < 4; ++l)
                gauge += g[a][l] * geo.gamma_up[l].derive(b) + g[b][l] * geo.gamma_up[l].derive(a);
            J e = geo.ricci[a][b] - 0.5 * gauge - gravity * (T[a][b] - 0.5 * trT * g[a][b]);
            out[a][b] = e;
            out[b][a] = e;
        }
    return out;
}

// entropy transport in velocity form plus the literal bulk scalar; the bulk
// term vanishes identically on divergence-free data
J jet_entropy_equation(const GeoJets& geo, const FluidJets& f, double kappa, double vartheta,
                       const J& s, int N, bool with_bulk) {
    J useful(N);
    for (int a = 0; a < 4; ++a) useful += f.uup[a] * s.derive(a);
    J E = f.th.r * f.th.theta * useful;

    J t1(N), t2(N);
    for (int a = 0; a < 4; ++a)
        for (int r = 0; r < 4; ++r)
            for (int b = 0; b < 4; ++b) t1 += f.pi_uu[a][r] * f.Du[r][b] * f.Duup[a][b];
    for (int a = 0; a < 4; ++a)
        for (int m = 0; m < 4; ++m) t2 += f.Duup[a][m] * f.Duup[m][a];
    E -= vartheta * f.F * (t1 + t2);

    if (with_bulk && kappa != 0.0) {
        J CCdC(N);
        for (int t = 0; t < 4; ++t)
            for (int m = 0; m < 4; ++m) CCdC += f.Cup[t] * f.Cup[m] * f.DC[t][m];
        const J Ls = (CCdC / f.F - f.F * f.divC) * f.divC / f.F2;
        E += kappa * Ls;
    }
    return E;
}

J jet_mass_conservation(const FluidJets& f, const J& s, int N) {
    J e(N);
    for (int a = 0; a < 4; ++a)
        e += f.uup[a] * (f.th.rs * s.derive(a) + f.th.rF * f.F.derive(a));
    e += f.th.r * f.divu;
    return e;
}

JetMat4 jet_vorticity(const JetVec4& C, int N) {
    JetMat4 Om = make_jet_mat4(N);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) Om[a][b] = C[b].derive(a) - C[a].derive(b);
    return Om;
}

// second covariant derivative of the current: DDC[a](b,c) = nabla_a nabla_b C_c
JetTen3 jet_second_cov(const GeoJets& geo, const FluidJets& f, int N) {
    JetTen3 out = {make_jet_mat4(N), make_jet_mat4(N), make_jet_mat4(N), make_jet_mat4(N)};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c) {
                J e = f.DC[b][c].derive(a);
                for (int l = 0; l < 4; ++l)
                    e -= geo.gam[l][a][b] * f.DC[l][c] + geo.gam[l][a][c] * f.DC[b][l];
                out[a][b][c] = e;
            }
    return out;
}

// the projected momentum equation of the incompressible system, with the
// vorticity entering as the curl of the current
JetVec4 jet_momentum_equation(const GeoJets& geo, const FluidJets& f, const J& s, double kappa,
                              double vartheta, int N, bool with_bulk) {
    const JetMat4 Om = jet_vorticity(f.C, N);
    const JetTen3 DDC = jet_second_cov(geo, f, N);

    JetMat4 S = make_jet_mat4(N);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) S[a][b] = f.DC[a][b] + f.DC[b][a];

    // D^r = nabla_a (u^r u^a)
    JetVec4 Dvec = make_jet_vec4(N);
    for (int r = 0; r < 4; ++r) {
        J e(N);
        for (int a = 0; a < 4; ++a) e += f.Duup[a][r] * f.uup[a];
        e += f.uup[r] * f.divu;
        Dvec[r] = e;
    }

    J Cds(N);
    for (int a = 0; a < 4; ++a) Cds += f.Cup[a] * s.derive(a);

    JetVec4 out = make_jet_vec4(N);
    for (int b = 0; b < 4; ++b) {
        J e = f.th.theta * f.th.r * s.derive(b) - f.th.r * f.th.theta / f.F2 * f.C[b] * Cds;
        for (int a = 0; a < 4; ++a) e += f.th.r / f.F * f.Cup[a] * Om[a][b];

        // V_b
        J t1(N), t2(N), t3(N);
        for (int m = 0; m < 4; ++m)
            for (int r = 0; r < 4; ++r) t1 += f.pi_mx[b][m] * S[r][m] * Dvec[r];
        for (int a = 0; a < 4; ++a)
            for (int r = 0; r < 4; ++r)
                for (int m = 0; m < 4; ++m) {
                    const J SK = f.pi_uu[a][r] * S[r][m];
                    for (int c = 0; c < 4; ++c) {
                        const J dK = f.Duup[a][m] * f.u[c] + f.uup[m] * f.Du[a][c];
                        t2 += SK * f.pi_mx[b][c] * dK;
                    }
                }
        for (int m = 0; m < 4; ++m)
            for (int a = 0; a < 4; ++a)
                for (int r = 0; r < 4; ++r)
                    t3 += f.pi_mx[b][m] * f.pi_uu[a][r] * (DDC[a][r][m] + DDC[a][m][r]);
        e += vartheta * (t3 - t1 - t2);

        if (with_bulk && kappa != 0.0) {
            // L_b, carrying the divergence factors literally
            JetVec4 ndiv = make_jet_vec4(N);
            for (int a = 0; a < 4; ++a) {
                J nd(N);
                for (int m = 0; m < 4; ++m)
                    for (int n = 0; n < 4; ++n) nd += geo.ginv[m][n] * DDC[a][m][n];
                ndiv[a] = nd;
            }
            J Lb(N);
            for (int a = 0; a < 4; ++a) Lb += f.pi_mx[b][a] * ndiv[a];
            for (int c = 0; c < 4; ++c) {
                J acc(N);
                for (int a = 0; a < 4; ++a) acc += f.Cup[a] * f.DC[a][c];
                Lb -= f.pi_mx[b][c] * acc * f.divC / f.F2;
            }
            e += kappa * Lb;
        }
        out[b] = e;
    }
    return out;
}

// wave-form current residual of the irrotational system
JetVec4 jet_current_wave(const GeoJets& geo, const FluidJets& f, int N) {
    const JetTen3 DDC = jet_second_cov(geo, f, N);
    JetVec4 out = make_jet_vec4(N);
    for (int al = 0; al < 4; ++al) {
        J e(N);
        for (int m = 0; m < 4; ++m)
            for (int r = 0; r < 4; ++r) e += geo.ginv[m][r] * DDC[m][r][al];
        // nabla_al div C
        J nd(N);
        for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n) nd += geo.ginv[m][n] * DDC[al][m][n];
        e -= nd;
        for (int m = 0; m < 4; ++m)
            for (int b = 0; b < 4; ++b) e -= geo.ricci[al][b] * geo.ginv[b][m] * f.C[m];
        out[al] = e;
    }
    return out;
}

void collect_coefficients(const J& E, int t_order, int spatial_cap, std::vector<double>& out) {
    const auto& L = JetLayout::of(E.degree());
    for (const auto& m : L.monomials) {
        if (m[0] != t_order) continue;
        if (m[1] + m[2] + m[3] > spatial_cap) continue;
        out.push_back(E.coefficient(m));
    }
}

std::vector<MultiIndex> spatial_indices(int N, int t_order, int spatial_cap) {
    std::vector<MultiIndex> out;
    const auto& L = JetLayout::of(N);
    for (const auto& m : L.monomials) {
        if (m[0] != 0) continue;
        if (m[1] + m[2] + m[3] > spatial_cap) continue;
        MultiIndex idx = m;
        idx[0] = t_order;
        out.push_back(idx);
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------------------

struct CauchyLadder::Impl {
    int N;
    EquationOfState eos;
    CauchyOptions opt;

    // adapted-frame maps: x = A x'
    std::array<std::array<double, 4>, 4> A{}, Ainv{};
    Mat4 Amat = Mat4::Identity(), Ainvmat = Mat4::Identity();

    JetMat4 g;
    JetVec4 u;
    J s, F;
    JetVec4 C;
    bool C_ready = false;

    int done = 0;  // number of completed steps
    std::vector<StepReport> reports;
    CauchyHierarchy out;
    bool continued = false;

    Impl(SliceData slice, EquationOfState e, CauchyOptions o)
        : N(slice.jet_degree), eos(std::move(e)), opt(o), g(make_jet_mat4(N)),
          u(make_jet_vec4(N)), s(N), F(N), C(make_jet_vec4(N)) {
        if (!(opt.vartheta > 0.0))
            throw AssumptionViolation("the slice-data ladder requires vartheta > 0");
        if (opt.kappa < 0.0) throw DomainError("kappa must be non-negative");
        // adapted frame from the point values of the slice
        Mat4 g0;
        Vec4 u0;
        for (int a = 0; a < 4; ++a) {
            u0[a] = slice.u[a].value();
            for (int b = 0; b < 4; ++b) g0(a, b) = slice.g[a][b].value();
        }
        Eigen::FullPivLU<Mat4> lu(g0);
        if (!lu.isInvertible()) throw SingularMetric("slice metric is singular at the point");
        const Vec4 u_up = lu.inverse() * u0;
        const double un = u0.dot(u_up);
        if (!(un > 0.0)) throw NotTimelike("slice velocity is not timelike");
        if (std::abs(u_up[0]) < 1e-12) throw NotTimelike("slice velocity has no time component");

        Amat.setIdentity();
        for (int i = 1; i < 4; ++i) {
            Amat(i, 0) = u_up[i] / u_up[0];
            for (int j = 1; j < 4; ++j) Amat(i, j) = opt.spatial_frame(i - 1, j - 1);
        }
        Ainvmat = Amat.inverse();
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                A[a][b] = Amat(a, b);
                Ainv[a][b] = Ainvmat(a, b);
            }

        // pull the fields into the adapted frame
        for (int a = 0; a < 4; ++a) {
            J acc(N);
            for (int c = 0; c < 4; ++c)
                if (A[c][a] != 0.0) acc += A[c][a] * slice.u[c].compose_linear(A);
            u[a] = acc;
            for (int b = 0; b < 4; ++b) {
                J e(N);
                for (int c = 0; c < 4; ++c)
                    for (int d = 0; d < 4; ++d)
                        if (A[c][a] * A[d][b] != 0.0)
                            e += (A[c][a] * A[d][b]) * slice.g[c][d].compose_linear(A);
                g[a][b] = e;
            }
        }
        s = slice.s.compose_linear(A);
        F = slice.F.compose_linear(A);
    }

    GeoJets geo() const { return build_geo(g, N); }

    FluidJets fluid(const GeoJets& gd) const {
        if (C_ready) return build_fluid(gd, g, nullptr, nullptr, &C, s, eos, N);
        return build_fluid(gd, g, &u, &F, nullptr, s, eos, N);
    }

    // ---- generic linear step ----
    struct Unknowns {
        std::vector<std::vector<J*>> groups;  // jets sharing one coefficient
        int t_order;
        int spatial_cap;
    };

    StepReport solve_linear_step(const std::string& name, const Unknowns& unk,
                                 const std::function<std::vector<double>()>& equations,
                                 double fail_tol = 1e-6) {
        StepReport rep;
        rep.name = name;

        const auto idxs = spatial_indices(N, unk.t_order, unk.spatial_cap);
        std::vector<std::pair<const std::vector<J*>*, MultiIndex>> slots;
        for (const auto& grp : unk.groups)
            for (const auto& m : idxs) slots.emplace_back(&grp, m);
        rep.unknown_count = (int)slots.size();

        const std::vector<double> E0 = equations();
        const int n_eq = (int)E0.size();
        Eigen::MatrixXd Ab(n_eq, (int)slots.size());
        for (size_t j = 0; j < slots.size(); ++j) {
            for (J* jet : *slots[j].first)
                jet->set_coefficient(slots[j].second, jet->coefficient(slots[j].second) + 1.0);
            const std::vector<double> Ei = equations();
            for (J* jet : *slots[j].first)
                jet->set_coefficient(slots[j].second, jet->coefficient(slots[j].second) - 1.0);
            for (int i = 0; i < n_eq; ++i) Ab(i, (int)j) = Ei[i] - E0[i];
        }

        Eigen::VectorXd b(n_eq);
        for (int i = 0; i < n_eq; ++i) b[i] = -E0[i];
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(Ab, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
        svd.setThreshold(1e-10);
        rep.rank = (int)svd.rank();
        rep.rank_deficient = rep.rank < (int)slots.size();
        const double smin = rep.rank > 0 ? svd.singularValues()[rep.rank - 1] : 0.0;
        rep.condition = (smin > 0.0) ? smax / smin : std::numeric_limits<double>::infinity();
        const Eigen::VectorXd x = svd.solve(b);

        for (size_t j = 0; j < slots.size(); ++j)
            for (J* jet : *slots[j].first)
                jet->set_coefficient(slots[j].second, jet->coefficient(slots[j].second) + x[(int)j]);

        const std::vector<double> Ef = equations();
        double res = 0.0, scale = 1.0;
        for (double v : Ef) res = std::max(res, std::abs(v));
        for (double v : E0) scale = std::max(scale, std::abs(v));
        rep.residual = res;
        if (res > fail_tol * scale)
            throw StepFailure(name, "imposed equations not solvable to tolerance (residual " +
                                        std::to_string(res) + ")",
                              rep.condition);
        reports.push_back(rep);
        return rep;
    }

    // ---- the steps ----

    void run_until(int step);

    void step0_harmonic() {
        // zero the time slopes of the g_{0l} row, then enforce harmonicity
        const auto idxs = spatial_indices(N, 1, N - 1);
        for (int l = 0; l < 4; ++l)
            for (const auto& m : idxs) {
                g[0][l].set_coefficient(m, 0.0);
                g[l][0].set_coefficient(m, 0.0);
            }
        Unknowns unk;
        unk.t_order = 1;
        unk.spatial_cap = N - 1;
        for (int l = 0; l < 4; ++l) {
            std::vector<J*> grp = {&g[0][l]};
            if (l != 0) grp.push_back(&g[l][0]);
            unk.groups.push_back(grp);
        }
        solve_linear_step("harmonic_time_slopes", unk, [&]() {
            const GeoJets gd = geo();
            std::vector<double> out;
            for (int l = 0; l < 4; ++l) collect_coefficients(gd.gamma_up[l], 0, N - 1, out);
            return out;
        });
    }

    void step1_velocity_slope() {
        // admissibility: the unit-norm residual on the slice
        {
            const GeoJets gd = geo();
            J norm(N, -1.0);
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) norm += gd.ginv[a][b] * u[a] * u[b];
            std::vector<double> v;
            collect_coefficients(norm, 0, N - 1, v);
            double worst = 0.0;
            for (double x : v) worst = std::max(worst, std::abs(x));
            if (worst > 1e-7)
                throw NormalizationError("slice velocity is not unit-normalized (residual " +
                                         std::to_string(worst) + ")");
        }
        Unknowns unk;
        unk.t_order = 1;
        unk.spatial_cap = N - 2;
        for (int a = 0; a < 4; ++a) unk.groups.push_back({&u[a]});
        auto rep = solve_linear_step("velocity_from_constraints", unk, [&]() {
            const GeoJets gd = geo();
            const FluidJets f = fluid(gd);
            const JetMat4 T = jet_stress_energy(gd, g, f, opt.vartheta, N);
            const JetVec4 K = jet_constraints(gd, g, T, opt.gravity, N);
            J norm(N, -1.0);
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) norm += gd.ginv[a][b] * u[a] * u[b];
            std::vector<double> out;
            collect_coefficients(norm, 1, N - 2, out);
            for (int al = 0; al < 4; ++al) collect_coefficients(K[al], 0, N - 2, out);
            return out;
        });
        out.constraint_residual = rep.residual;
        if (opt.check_constraints && rep.residual > opt.constraint_tol)
            throw StepFailure("velocity_from_constraints",
                              "slice data violates the constraints beyond tolerance",
                              rep.condition);
    }

    void step2_entropy_slope() {
        {
            const auto t = jet_thermo(eos, F, s, N);
            if (!(t.r.value() > 0.0) || !(t.theta.value() > 0.0))
                throw StepFailure("entropy_transport", "needs r > 0 and theta > 0");
        }
        Unknowns unk;
        unk.t_order = 1;
        unk.spatial_cap = N - 2;
        unk.groups.push_back({&s});
        solve_linear_step("entropy_transport", unk, [&]() {
            const GeoJets gd = geo();
            const FluidJets f = fluid(gd);
            // the bulk scalar is dropped here: its evaluation would need the
            // still-undetermined time slope of the index
            const J E = jet_entropy_equation(gd, f, opt.kappa, opt.vartheta, s, N, false);
            std::vector<double> out;
            collect_coefficients(E, 0, N - 2, out);
            return out;
        });
    }

    void step3_index_slope() {
        {
            const auto t = jet_thermo(eos, F, s, N);
            if (!(t.rF.value() > 0.0))
                throw ConditionViolation("mass conservation solve needs dr/dF > 0");
        }
        Unknowns unk;
        unk.t_order = 1;
        unk.spatial_cap = N - 2;
        unk.groups.push_back({&F});
        solve_linear_step("mass_conservation", unk, [&]() {
            const GeoJets gd = geo();
            const FluidJets f = fluid(gd);
            const J E = jet_mass_conservation(f, s, N);
            std::vector<double> out;
            collect_coefficients(E, 0, N - 2, out);
            return out;
        });
    }

    void step4_current_assembly() {
        for (int a = 0; a < 4; ++a) C[a] = F * u[a];
        C_ready = true;
        const GeoJets gd = geo();
        const FluidJets f = fluid(gd);
        std::vector<double> v;
        collect_coefficients(f.divC, 0, N - 2, v);
        double worst = 0.0;
        for (double x : v) worst = std::max(worst, std::abs(x));
        out.incompressibility_residual = worst;
        StepReport rep;
        rep.name = "current_assembly";
        rep.residual = worst;
        reports.push_back(rep);
    }

    void step5_metric_acceleration() {
        Unknowns unk;
        unk.t_order = 2;
        unk.spatial_cap = N - 2;
        for (int a = 0; a < 4; ++a)
            for (int b = a; b < 4; ++b) {
                std::vector<J*> grp = {&g[a][b]};
                if (a != b) grp.push_back(&g[b][a]);
                unk.groups.push_back(grp);
            }
        solve_linear_step("metric_wave_order2", unk, [&]() {
            const GeoJets gd = geo();
            const FluidJets f = fluid(gd);
            const JetMat4 T = jet_stress_energy(gd, g, f, opt.vartheta, N);
            const JetMat4 E = jet_reduced_einstein(gd, g, T, opt.gravity, N);
            std::vector<double> out;
            for (int a = 0; a < 4; ++a)
                for (int b = a; b < 4; ++b) collect_coefficients(E[a][b], 0, N - 2, out);
            return out;
        });
    }

    StepReport current_step(const std::string& name, int t_order, int cap_c) {
        Unknowns unk;
        unk.t_order = t_order;
        unk.spatial_cap = cap_c;
        for (int a = 0; a < 4; ++a) unk.groups.push_back({&C[a]});

        bool fallback = false;
        auto equations = [&, t_order, cap_c]() {
            const GeoJets gd = geo();
            const FluidJets f = fluid(gd);
            std::vector<double> out;
            const JetVec4 M = jet_momentum_equation(gd, f, s, opt.kappa, opt.vartheta, N, true);
            for (int al = 0; al < 4; ++al) collect_coefficients(M[al], t_order - 2, cap_c, out);
            collect_coefficients(f.divC, t_order - 1, cap_c, out);
            if (fallback) {
                const JetVec4 W = jet_current_wave(gd, f, N);
                for (int al = 0; al < 4; ++al) collect_coefficients(W[al], t_order - 2, cap_c, out);
            }
            return out;
        };

        StepReport rep;
        try {
            rep = solve_linear_step(name, unk, equations);
        } catch (const StepFailure&) {
            if (opt.target != CauchyTarget::Irrotational) throw;
            fallback = true;
            rep = solve_linear_step(name + "_wave_route", unk, equations);
            reports.back().used_wave_fallback = true;
            return reports.back();
        }
        if (rep.rank_deficient) {
            // the projected system cannot see the flow-parallel component in
            // this configuration; bring in the wave-form current equation
            if (opt.target == CauchyTarget::Irrotational) {
                fallback = true;
                rep = solve_linear_step(name + "_wave_route", unk, equations);
                reports.back().used_wave_fallback = true;
            }
        }
        return reports.back();
    }

    void step6_current_acceleration() {
        auto rep = current_step("current_acceleration", 2, N - 3);
        // the classical 3x3 block of this solve and its closed-form determinant
        Mat4 g0;
        Vec4 u0;
        for (int a = 0; a < 4; ++a) {
            u0[a] = u[a].value();
            for (int b = 0; b < 4; ++b) g0(a, b) = g[a][b].value();
        }
        const Vec4 uup = g0.inverse() * u0;
        try {
            const auto sys = assemble_d00C_system(g0, uup, opt.vartheta);
            reports.back().determinant = sys.det;
            reports.back().expected_determinant = sys.expected_det;
        } catch (const NotTimelike&) {
        }
        (void)rep;
    }

    // vorticity from the rearranged projected momentum balance: the current
    // contraction determines the mixed rows, the tangential block is the curl
    // of the slice current
    JetMat4 omega_tilde() {
        const GeoJets gd = geo();
        const FluidJets f = fluid(gd);
        const JetMat4 Om_dC = jet_vorticity(C, N);

        // w_b = C^a Omega_{ab} from the force balance
        const JetVec4 M0 = jet_momentum_equation(gd, f, s, opt.kappa, opt.vartheta, N, true);
        // subtract the vorticity contraction to isolate the remainder terms
        JetVec4 rest = make_jet_vec4(N);
        for (int b = 0; b < 4; ++b) {
            J e = M0[b];
            for (int a = 0; a < 4; ++a) e -= f.th.r / f.F * f.Cup[a] * Om_dC[a][b];
            rest[b] = e;
        }
        JetVec4 w = make_jet_vec4(N);
        for (int b = 0; b < 4; ++b) w[b] = -(f.F / f.th.r) * rest[b];

        JetMat4 Om = make_jet_mat4(N);
        const J c0inv = f.Cup[0].reciprocal();
        for (int i = 1; i < 4; ++i)
            for (int j = 1; j < 4; ++j) Om[i][j] = Om_dC[i][j];
        for (int i = 1; i < 4; ++i) {
            J e = w[i];
            for (int jj = 1; jj < 4; ++jj) e -= f.Cup[jj] * Om[jj][i];
            Om[0][i] = e * c0inv;
            Om[i][0] = -Om[0][i];
        }
        return Om;
    }

    void step7_vorticity() {
        const JetMat4 Om = omega_tilde();
        const JetMat4 Om_dC = jet_vorticity(C, N);
        double cross = 0.0, mag = 0.0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                cross = std::max(cross, std::abs(Om[a][b].value() - Om_dC[a][b].value()));
                mag = std::max(mag, std::abs(Om[a][b].value()));
            }
        out.vorticity_residual =
            (opt.target == CauchyTarget::Irrotational) ? std::max(cross, mag) : cross;
        if (opt.target == CauchyTarget::Irrotational && mag > 1e-6)
            throw StepFailure("vorticity_slice",
                              "irrotational target but the slice vorticity is " +
                                  std::to_string(mag));
        StepReport rep;
        rep.name = "vorticity_slice";
        rep.residual = cross;
        reports.push_back(rep);
    }

    void step8_entropy_acceleration() {
        Unknowns unk;
        unk.t_order = 2;
        unk.spatial_cap = N - 3;
        unk.groups.push_back({&s});
        solve_linear_step("entropy_transport_slope", unk, [&]() {
            const GeoJets gd = geo();
            const FluidJets f = fluid(gd);
            const J E = jet_entropy_equation(gd, f, opt.kappa, opt.vartheta, s, N, true);
            std::vector<double> out;
            collect_coefficients(E, 1, N - 3, out);
            return out;
        });
    }

    void step9_metric_jerk() {
        Unknowns unk;
        unk.t_order = 3;
        unk.spatial_cap = N - 3;
        for (int a = 0; a < 4; ++a)
            for (int b = a; b < 4; ++b) {
                std::vector<J*> grp = {&g[a][b]};
                if (a != b) grp.push_back(&g[b][a]);
                unk.groups.push_back(grp);
            }
        solve_linear_step("metric_wave_order3", unk, [&]() {
            const GeoJets gd = geo();
            const FluidJets f = fluid(gd);
            const JetMat4 T = jet_stress_energy(gd, g, f, opt.vartheta, N);
            const JetMat4 E = jet_reduced_einstein(gd, g, T, opt.gravity, N);
            std::vector<double> out;
            for (int a = 0; a < 4; ++a)
                for (int b = a; b < 4; ++b) collect_coefficients(E[a][b], 1, N - 3, out);
            return out;
        });
    }

    void step10_current_jerk() { current_step("current_jerk", 3, N - 4); }

    void step11_vorticity_slope() {
        const JetMat4 Om = omega_tilde();
        double mag = 0.0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) mag = std::max(mag, std::abs(Om[a][b].derivative({1, 0, 0, 0})));
        if (opt.target == CauchyTarget::Irrotational)
            out.vorticity_residual = std::max(out.vorticity_residual, mag);
        StepReport rep;
        rep.name = "vorticity_slope";
        rep.residual = 0.0;
        reports.push_back(rep);
    }

    void step12_metric_snap() {
        Unknowns unk;
        unk.t_order = 4;
        unk.spatial_cap = N - 4;
        for (int a = 0; a < 4; ++a)
            for (int b = a; b < 4; ++b) {
                std::vector<J*> grp = {&g[a][b]};
                if (a != b) grp.push_back(&g[b][a]);
                unk.groups.push_back(grp);
            }
        solve_linear_step("metric_wave_order4", unk, [&]() {
            const GeoJets gd = geo();
            const FluidJets f = fluid(gd);
            const JetMat4 T = jet_stress_energy(gd, g, f, opt.vartheta, N);
            const JetMat4 E = jet_reduced_einstein(gd, g, T, opt.gravity, N);
            std::vector<double> out;
            for (int a = 0; a < 4; ++a)
                for (int b = a; b < 4; ++b) collect_coefficients(E[a][b], 2, N - 4, out);
            return out;
        });
    }

    void step13_entropy_jerk() {
        Unknowns unk;
        unk.t_order = 3;
        unk.spatial_cap = N - 4;
        unk.groups.push_back({&s});
        solve_linear_step("entropy_transport_curvature", unk, [&]() {
            const GeoJets gd = geo();
            const FluidJets f = fluid(gd);
            const J E = jet_entropy_equation(gd, f, opt.kappa, opt.vartheta, s, N, true);
            std::vector<double> out;
            collect_coefficients(E, 2, N - 4, out);
            return out;
        });
    }

    void continue_one_rung() {
        if (continued) return;
        // one more metric order and one more current order, needed by the
        // compatibility residuals
        {
            Unknowns unk;
            unk.t_order = 5;
            unk.spatial_cap = 0;
            for (int a = 0; a < 4; ++a)
                for (int b = a; b < 4; ++b) {
                    std::vector<J*> grp = {&g[a][b]};
                    if (a != b) grp.push_back(&g[b][a]);
                    unk.groups.push_back(grp);
                }
            solve_linear_step("metric_wave_order5", unk, [&]() {
                const GeoJets gd = geo();
                const FluidJets f = fluid(gd);
                const JetMat4 T = jet_stress_energy(gd, g, f, opt.vartheta, N);
                const JetMat4 E = jet_reduced_einstein(gd, g, T, opt.gravity, N);
                std::vector<double> out;
                for (int a = 0; a < 4; ++a)
                    for (int b = a; b < 4; ++b) collect_coefficients(E[a][b], 3, 0, out);
                return out;
            });
        }
        current_step("current_snap", 4, 0);
        continued = true;
    }

    CompatibilityReport run_compatibility() {
        continue_one_rung();
        const GeoJets gd = geo();
        const FluidJets f = fluid(gd);
        const JetMat4 T = jet_stress_energy(gd, g, f, opt.vartheta, N);
        const JetMat4 E19 = jet_reduced_einstein(gd, g, T, opt.gravity, N);
        const J Es = jet_entropy_equation(gd, f, opt.kappa, opt.vartheta, s, N, true);
        const JetVec4 E17 = jet_current_wave(gd, f, N);

        auto box = [&](const J& E) {
            // g^{ls} d_l d_s E
            J r(N);
            for (int l = 0; l < 4; ++l)
                for (int ss = 0; ss < 4; ++ss) r += gd.ginv[l][ss] * E.derive(l).derive(ss);
            return r;
        };

        CompatibilityReport rep;
        for (int a = 0; a < 4; ++a)
            for (int b = a; b < 4; ++b) {
                const J r = box(E19[a][b]);
                rep.metric_depth0 = std::max(rep.metric_depth0, std::abs(r.value()));
                rep.metric_depth1 = std::max(rep.metric_depth1, std::abs(r.derivative({1, 0, 0, 0})));
            }
        {
            const J r = box(Es);
            rep.entropy_depth0 = std::abs(r.value());
            rep.entropy_depth1 = std::abs(r.derivative({1, 0, 0, 0}));
        }
        for (int al = 0; al < 4; ++al) {
            const J r = box(E17[al]);
            rep.current_depth0 = std::max(rep.current_depth0, std::abs(r.value()));
        }
        return rep;
    }

    // ---- back transform and packaging ----

    J to_original_scalar(const J& f) const { return f.compose_linear(Ainv); }

    JetVec4 to_original_covector(const JetVec4& w) const {
        JetVec4 out = make_jet_vec4(N);
        for (int b = 0; b < 4; ++b) {
            J e(N);
            for (int a = 0; a < 4; ++a)
                if (Ainv[a][b] != 0.0) e += Ainv[a][b] * w[a].compose_linear(Ainv);
            out[b] = e;
        }
        return out;
    }

    JetMat4 to_original_tensor02(const JetMat4& w) const {
        JetMat4 out = make_jet_mat4(N);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                J e(N);
                for (int c = 0; c < 4; ++c)
                    for (int d = 0; d < 4; ++d)
                        if (Ainv[c][a] * Ainv[d][b] != 0.0)
                            e += (Ainv[c][a] * Ainv[d][b]) * w[c][d].compose_linear(Ainv);
                out[a][b] = e;
            }
        return out;
    }
};

void CauchyLadder::Impl::run_until(int step) {
    while (done < step) {
        switch (done) {
            case 0: step0_harmonic(); break;
            case 1: step1_velocity_slope(); break;
            case 2: step2_entropy_slope(); break;
            case 3: step3_index_slope(); break;
            case 4: step4_current_assembly(); break;
            case 5: step5_metric_acceleration(); break;
            case 6: step6_current_acceleration(); break;
            case 7: step7_vorticity(); break;
            case 8: step8_entropy_acceleration(); break;
            case 9: step9_metric_jerk(); break;
            case 10: step10_current_jerk(); break;
            case 11: step11_vorticity_slope(); break;
            case 12: step12_metric_snap(); break;
            case 13: step13_entropy_jerk(); break;
            default: return;
        }
        ++done;
    }
}

CauchyLadder::CauchyLadder(SliceData slice, EquationOfState eos, CauchyOptions opt)
    : impl_(std::make_unique<Impl>(std::move(slice), std::move(eos), opt)) {}

CauchyLadder::~CauchyLadder() = default;
CauchyLadder::CauchyLadder(CauchyLadder&&) noexcept = default;
CauchyLadder& CauchyLadder::operator=(CauchyLadder&&) noexcept = default;

namespace {

Vec4 t_derivative_vec(const JetVec4& w, int k) {
    Vec4 out;
    MultiIndex m = {k, 0, 0, 0};
    for (int a = 0; a < 4; ++a) out[a] = w[a].derivative(m);
    return out;
}

Mat4 t_derivative_mat(const JetMat4& w, int k) {
    Mat4 out;
    MultiIndex m = {k, 0, 0, 0};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) out(a, b) = w[a][b].derivative(m);
    return out;
}

} // namespace

Vec4 CauchyLadder::step_d0_u() {
    impl_->run_until(2);
    return t_derivative_vec(impl_->to_original_covector(impl_->u), 1);
}

double CauchyLadder::step_d0_s() {
    impl_->run_until(3);
    return impl_->to_original_scalar(impl_->s).derivative({1, 0, 0, 0});
}

double CauchyLadder::step_d0_F() {
    impl_->run_until(4);
    return impl_->to_original_scalar(impl_->F).derivative({1, 0, 0, 0});
}

Vec4 CauchyLadder::step_d0_C() {
    impl_->run_until(5);
    return t_derivative_vec(impl_->to_original_covector(impl_->C), 1);
}

Mat4 CauchyLadder::step_d00_g() {
    impl_->run_until(6);
    return t_derivative_mat(impl_->to_original_tensor02(impl_->g), 2);
}

Vec4 CauchyLadder::step_d00_C() {
    impl_->run_until(7);
    return t_derivative_vec(impl_->to_original_covector(impl_->C), 2);
}

Mat4 CauchyLadder::step_omega() {
    impl_->run_until(8);
    return t_derivative_mat(impl_->to_original_tensor02(impl_->omega_tilde()), 0);
}

double CauchyLadder::step_d00_s() {
    impl_->run_until(9);
    return impl_->to_original_scalar(impl_->s).derivative({2, 0, 0, 0});
}

Mat4 CauchyLadder::step_d000_g() {
    impl_->run_until(10);
    return t_derivative_mat(impl_->to_original_tensor02(impl_->g), 3);
}

Vec4 CauchyLadder::step_d000_C() {
    impl_->run_until(11);
    return t_derivative_vec(impl_->to_original_covector(impl_->C), 3);
}

Mat4 CauchyLadder::step_d0_omega() {
    impl_->run_until(12);
    return t_derivative_mat(impl_->to_original_tensor02(impl_->omega_tilde()), 1);
}

Mat4 CauchyLadder::step_d0000_g() {
    impl_->run_until(13);
    return t_derivative_mat(impl_->to_original_tensor02(impl_->g), 4);
}

double CauchyLadder::step_d000_s() {
    impl_->run_until(14);
    return impl_->to_original_scalar(impl_->s).derivative({3, 0, 0, 0});
}

CompatibilityReport CauchyLadder::compatibility() {
    impl_->run_until(14);
    return impl_->run_compatibility();
}

const std::vector<StepReport>& CauchyLadder::reports() const { return impl_->reports; }

double CompatibilityReport::max_abs() const {
    return std::max({metric_depth0, metric_depth1, entropy_depth0, entropy_depth1, current_depth0});
}

std::vector<std::string> hierarchy_order() {
    return {"d0_u",  "d0_s",   "d0_F",   "d0_C",   "d00_g",    "d00_C",  "omega",
            "d00_s", "d000_g", "d000_C", "d0_omega", "d0000_g", "d000_s"};
}

namespace {

const std::map<std::string, std::vector<std::string>>& entry_dependencies() {
    static const std::map<std::string, std::vector<std::string>> deps = {
        {"d0_u", {}},
        {"d0_s", {"d0_u"}},
        {"d0_F", {"d0_u", "d0_s"}},
        {"d0_C", {"d0_u", "d0_F"}},
        {"d00_g", {"d0_C"}},
        {"d00_C", {"d0_C", "d00_g"}},
        {"omega", {"d0_C", "d00_C"}},
        {"d00_s", {"d0_s", "d00_C"}},
        {"d000_g", {"d00_g", "d00_C", "d00_s"}},
        {"d000_C", {"d00_C", "d000_g"}},
        {"d0_omega", {"omega", "d000_C"}},
        {"d0000_g", {"d000_g", "d000_C", "d00_s"}},
        {"d000_s", {"d00_s", "d000_C", "d000_g"}},
    };
    return deps;
}

void push_entry(CauchyHierarchy& h, const std::string& name, const std::string& step,
                const std::vector<double>& values) {
    HierarchyEntry e;
    e.name = name;
    e.producing_step = step;
    e.values = values;
    e.depends_on = entry_dependencies().at(name);
    h.entries.push_back(std::move(e));
}

std::vector<double> flat(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }

std::vector<double> flat(const Mat4& m) {
    std::vector<double> out;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) out.push_back(m(a, b));
    return out;
}

} // namespace

CauchyHierarchy CauchyLadder::finish(bool with_compatibility) {
    impl_->run_until(14);
    CauchyHierarchy h = impl_->out;
    h.reports = impl_->reports;

    const JetVec4 u_o = impl_->to_original_covector(impl_->u);
    const JetVec4 C_o = impl_->to_original_covector(impl_->C);
    const JetMat4 g_o = impl_->to_original_tensor02(impl_->g);
    const JetMat4 om_o = impl_->to_original_tensor02(impl_->omega_tilde());
    const TaylorJet s_o = impl_->to_original_scalar(impl_->s);
    const TaylorJet F_o = impl_->to_original_scalar(impl_->F);

    h.d0_u = t_derivative_vec(u_o, 1);
    h.d0_s = s_o.derivative({1, 0, 0, 0});
    h.d0_F = F_o.derivative({1, 0, 0, 0});
    h.d0_C = t_derivative_vec(C_o, 1);
    h.d00_g = t_derivative_mat(g_o, 2);
    h.d00_C = t_derivative_vec(C_o, 2);
    h.omega = t_derivative_mat(om_o, 0);
    h.d00_s = s_o.derivative({2, 0, 0, 0});
    h.d000_g = t_derivative_mat(g_o, 3);
    h.d000_C = t_derivative_vec(C_o, 3);
    h.d0_omega = t_derivative_mat(om_o, 1);
    h.d0000_g = t_derivative_mat(g_o, 4);
    h.d000_s = s_o.derivative({3, 0, 0, 0});

    push_entry(h, "d0_u", "velocity_from_constraints", flat(h.d0_u));
    push_entry(h, "d0_s", "entropy_transport", {h.d0_s});
    push_entry(h, "d0_F", "mass_conservation", {h.d0_F});
    push_entry(h, "d0_C", "current_assembly", flat(h.d0_C));
    push_entry(h, "d00_g", "metric_wave_order2", flat(h.d00_g));
    push_entry(h, "d00_C", "current_acceleration", flat(h.d00_C));
    push_entry(h, "omega", "vorticity_slice", flat(h.omega));
    push_entry(h, "d00_s", "entropy_transport_slope", {h.d00_s});
    push_entry(h, "d000_g", "metric_wave_order3", flat(h.d000_g));
    push_entry(h, "d000_C", "current_jerk", flat(h.d000_C));
    push_entry(h, "d0_omega", "vorticity_slope", flat(h.d0_omega));
    push_entry(h, "d0000_g", "metric_wave_order4", flat(h.d0000_g));
    push_entry(h, "d000_s", "entropy_transport_curvature", {h.d000_s});

    if (with_compatibility) h.compatibility = impl_->run_compatibility();
    return h;
}

CauchyHierarchy build_hierarchy(const SliceData& slice, const EquationOfState& eos,
                                const CauchyOptions& opt) {
    CauchyLadder ladder(slice, eos, opt);
    return ladder.finish(true);
}

const HierarchyEntry* CauchyHierarchy::find(const std::string& name) const {
    for (const auto& e : entries)
        if (e.name == name) return &e;
    return nullptr;
}

bool audit_dependency_order(const CauchyHierarchy& h) {
    std::map<std::string, size_t> pos;
    for (size_t i = 0; i < h.entries.size(); ++i) pos[h.entries[i].name] = i;
    const auto order = hierarchy_order();
    if (h.entries.size() != order.size()) return false;
    for (size_t i = 0; i < order.size(); ++i)
        if (h.entries[i].name != order[i]) return false;
    for (const auto& e : h.entries)
        for (const auto& d : e.depends_on)
            if (!pos.count(d) || pos.at(d) >= pos.at(e.name)) return false;
    return true;
}

CurrentAccelerationSystem assemble_d00C_system(const Mat4& g_point, const Vec4& u_up,
                                               double vartheta) {
    const double un = u_up.dot(g_point * u_up);
    if (!(un > 0.0)) throw NotTimelike("current-acceleration system needs a timelike velocity");
    if (std::abs(u_up[0]) < 1e-14) throw NotTimelike("velocity has no time component");

    // slice-preserving shear to u^i = 0
    Mat4 A = Mat4::Identity();
    for (int i = 1; i < 4; ++i) A(i, 0) = u_up[i] / u_up[0];
    const Mat4 gp = A.transpose() * g_point * A;
    const Vec4 up = A.inverse() * u_up;
    const Mat4 gpinv = gp.inverse();
    const Vec4 ulow = gp * up;

    CurrentAccelerationSystem sys;
    sys.pi00 = gpinv(0, 0) - up[0] * up[0];
    // pi_i^0 = -u_i u^0, pi^{j0} = g^{j0} - u^j u^0
    for (int i = 1; i < 4; ++i)
        for (int j = 1; j < 4; ++j) {
            const double pi_i0 = (i == 0 ? 1.0 : 0.0) - ulow[i] * up[0];
            const double pi_j0 = gpinv(j, 0) - up[j] * up[0];
            sys.matrix(i - 1, j - 1) = vartheta * ((i == j ? sys.pi00 : 0.0) + pi_i0 * pi_j0);
        }
    sys.det = sys.matrix.determinant();
    sys.expected_det = 2.0 * vartheta * vartheta * vartheta * sys.pi00 * sys.pi00 * sys.pi00;
    return sys;
}

// ---------------------------------------------------------------------------
// fixture interchange

namespace {

TaylorJet jet_from_json(const nlohmann::json& arr, int N) {
    TaylorJet j(N);
    for (const auto& row : arr) {
        if (!row.is_array() || row.size() != 5) throw ConfigError("jet rows must be [k0,k1,k2,k3,v]");
        const MultiIndex m = {row[0].get<int>(), row[1].get<int>(), row[2].get<int>(),
                              row[3].get<int>()};
        j.set_coefficient(m, row[4].get<double>());
    }
    return j;
}

} // namespace

SliceData slice_from_json_file(const std::string& path, EquationOfState* eos_out,
                               CauchyOptions* opt_out) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open slice file: " + path);
    nlohmann::json doc;
    in >> doc;

    const int N = doc.value("jet_degree", 5);
    SliceData slice(N);
    const auto& sj = doc.at("slice");
    for (int a = 0; a < 4; ++a) {
        slice.u[a] = jet_from_json(sj.at("u").at(a), N);
        for (int b = 0; b < 4; ++b) slice.g[a][b] = jet_from_json(sj.at("g").at(a * 4 + b), N);
    }
    slice.s = jet_from_json(sj.at("s"), N);
    slice.F = jet_from_json(sj.at("F"), N);

    if (eos_out) {
        const auto& ej = doc.at("eos");
        const std::string family = ej.at("family").get<std::string>();
        if (family == "power_law")
            *eos_out = EquationOfState::power_law(ej.at("c"), ej.at("a"), ej.at("theta0"),
                                                  ej.value("theta_s", 0.0));
        else if (family == "affine_index")
            *eos_out = EquationOfState::affine_index(ej.at("gamma"), ej.at("K0"), ej.at("beta"));
        else
            throw ConfigError("unsupported EOS family in slice file: " + family);
    }
    if (opt_out) {
        const auto& oj = doc.at("options");
        opt_out->kappa = oj.value("kappa", 0.0);
        opt_out->vartheta = oj.value("vartheta", 1.0);
        opt_out->gravity = oj.value("gravity", 1.0);
        opt_out->constraint_tol = oj.value("constraint_tol", 1e-8);
        const std::string t = oj.value("target", "irrotational");
        opt_out->target =
            t == "incompressible" ? CauchyTarget::Incompressible : CauchyTarget::Irrotational;
    }
    return slice;
}

std::string hierarchy_to_json(const CauchyHierarchy& h) {
    nlohmann::json doc;
    doc["entries"] = nlohmann::json::array();
    for (const auto& e : h.entries) {
        nlohmann::json je;
        je["name"] = e.name;
        je["producing_step"] = e.producing_step;
        je["values"] = e.values;
        je["depends_on"] = e.depends_on;
        if (e.oracle_delta) je["oracle_delta"] = *e.oracle_delta;
        doc["entries"].push_back(je);
    }
    doc["reports"] = nlohmann::json::array();
    for (const auto& r : h.reports) {
        nlohmann::json jr;
        jr["name"] = r.name;
        jr["residual"] = r.residual;
        jr["condition"] = r.condition;
        jr["rank"] = r.rank;
        jr["unknowns"] = r.unknown_count;
        jr["rank_deficient"] = r.rank_deficient;
        jr["used_wave_fallback"] = r.used_wave_fallback;
        if (r.expected_determinant != 0.0) {
            jr["determinant"] = r.determinant;
            jr["expected_determinant"] = r.expected_determinant;
        }
        doc["reports"].push_back(jr);
    }
    doc["diagnostics"] = {{"constraint_residual", h.constraint_residual},
                          {"incompressibility_residual", h.incompressibility_residual},
                          {"vorticity_residual", h.vorticity_residual}};
    if (h.compatibility) {
        const auto& c = *h.compatibility;
        doc["compatibility"] = {{"metric_depth0", c.metric_depth0},
                                {"metric_depth1", c.metric_depth1},
                                {"entropy_depth0", c.entropy_depth0},
                                {"entropy_depth1", c.entropy_depth1},
                                {"current_depth0", c.current_depth0}};
    }
    return doc.dump(2);
}

} // namespace rvf
