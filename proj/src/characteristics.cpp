#include "rvf/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace rvf {

namespace {

// deterministic direction samples on the covector 3-sphere
std::vector<Vec4> sphere4_directions(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> N(0.0, 1.0);
    std::vector<Vec4> out;
    out.reserve(n);
    while ((int)out.size() < n) {
        Vec4 v(N(rng), N(rng), N(rng), N(rng));
        const double len = v.norm();
        if (len < 1e-8) continue;
        out.push_back(v / len);
    }
    return out;
}

// Fibonacci lattice on the spatial 2-sphere
std::vector<Eigen::Vector3d> sphere3_directions(int n) {
    std::vector<Eigen::Vector3d> out;
    out.reserve(n);
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / n;
        const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = 2.0 * M_PI * i / golden;
        out.emplace_back(rad * std::cos(phi), rad * std::sin(phi), z);
    }
    return out;
}

} // namespace

std::vector<std::complex<double>> polynomial_roots(std::vector<std::complex<double>> c) {
    double scale = 0.0;
    for (const auto& z : c) scale = std::max(scale, std::abs(z));
    if (scale == 0.0) return {};
    while (c.size() > 1 && std::abs(c.front()) < 1e-13 * scale) c.erase(c.begin());
    // deflate exact zero roots: trailing coefficients below noise level
    std::vector<std::complex<double>> zeros;
    while (c.size() > 1 && std::abs(c.back()) < 1e-13 * scale) {
        c.pop_back();
        zeros.emplace_back(0.0, 0.0);
    }
    const int deg = (int)c.size() - 1;
    if (deg < 1) return zeros;
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -c[deg - i] / c[0];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp);
    std::vector<std::complex<double>> roots = zeros;
    roots.reserve(deg + zeros.size());
    for (int i = 0; i < deg; ++i) roots.push_back(es.eigenvalues()[i]);
    return roots;
}

std::vector<double> line_polynomial(const PrincipalSymbol& h, const Vec4& base, const Vec4& dir) {
    const int m = h.degree;
    Eigen::MatrixXd V(m + 1, m + 1);
    Eigen::VectorXd y(m + 1);
    for (int j = 0; j <= m; ++j) {
        const double t = j - m / 2.0;
        y[j] = h(base + t * dir);
        double pw = 1.0;
        for (int q = m; q >= 0; --q) {
            V(j, q) = pw;  // t^0 lands in column m, t^m in column 0
            pw *= t;
        }
    }
    Eigen::VectorXd coef = V.fullPivLu().solve(y);
    std::vector<double> out(m + 1);
    for (int q = 0; q <= m; ++q) out[q] = coef[q];
    return out;
}

PrincipalSymbol symbol_flow(const Vec4& C_up) {
    PrincipalSymbol s;
    s.degree = 1;
    s.label = "flow";
    s.eval = [C_up](const Vec4& xi) { return C_up.dot(xi); };
    return s;
}

PrincipalSymbol symbol_light(const Metric4Jet& g) {
    const Mat4 ginv = g.inverse();
    PrincipalSymbol s;
    s.degree = 2;
    s.label = "light";
    s.eval = [ginv](const Vec4& xi) { return xi.dot(ginv * xi); };
    return s;
}

PrincipalSymbol symbol_entropy(const Metric4Jet& g, const Vec4& C_up) {
    const Mat4 ginv = g.inverse();
    PrincipalSymbol s;
    s.degree = 3;
    s.label = "entropy";
    s.eval = [ginv, C_up](const Vec4& xi) { return C_up.dot(xi) * xi.dot(ginv * xi); };
    return s;
}

PrincipalSymbol symbol_quartic(const Metric4Jet& g) {
    auto base = std::make_shared<PrincipalSymbol>(symbol_light(g));
    PrincipalSymbol s;
    s.degree = 4;
    s.label = "metric^2";
    s.eval = [base](const Vec4& xi) {
        const double v = (*base)(xi);
        return v * v;
    };
    s.base_factor = base;
    s.factor_multiplicity = 2;
    return s;
}

namespace {

LineRoots analyze_line(const PrincipalSymbol& h, const Vec4& axis, const Vec4& eta,
                       double distinct_tol) {
    LineRoots lr;
    lr.direction = eta;
    auto coefs = line_polynomial(h, eta, axis);
    double scale = 0.0;
    for (double c : coefs) scale = std::max(scale, std::abs(c));
    if (scale == 0.0) {
        lr.degenerate = true;
        return lr;
    }
    std::vector<std::complex<double>> cc(coefs.begin(), coefs.end());
    const auto roots = polynomial_roots(cc);
    if ((int)roots.size() != h.degree) {
        // degree dropped: a root escaped to infinity, the count cannot be m
        lr.all_real = false;
        return lr;
    }
    double maxmag = 1.0;
    for (const auto& z : roots) maxmag = std::max(maxmag, std::abs(z));
    lr.all_real = true;
    for (const auto& z : roots) {
        if (std::abs(z.imag()) > 1e-7 * maxmag) lr.all_real = false;
        lr.roots.push_back(z.real());
    }
    std::sort(lr.roots.begin(), lr.roots.end());
    lr.distinct = true;
    for (size_t i = 0; i + 1 < lr.roots.size(); ++i)
        if (std::abs(lr.roots[i + 1] - lr.roots[i]) <= distinct_tol * maxmag) lr.distinct = false;
    return lr;
}

} // namespace

ConeReport is_hyperbolic(const PrincipalSymbol& h, const Vec4& axis, int n_dirs,
                         double distinct_tol, unsigned seed) {
    if (axis.norm() == 0.0) throw DomainError("is_hyperbolic needs a nonzero axis");
    ConeReport rep;
    rep.axis = axis;
    rep.n_directions = n_dirs;
    rep.factor_multiplicity = h.factor_multiplicity;

    // a declared product has multiple roots by construction; test its factor
    if (h.base_factor && h.factor_multiplicity > 1) {
        ConeReport base = is_hyperbolic(*h.base_factor, axis, n_dirs, distinct_tol, seed);
        rep.hyperbolic = false;
        rep.factors_hyperbolic = base.hyperbolic;
        rep.degenerate_lines = base.degenerate_lines;
        rep.failing_lines = base.failing_lines;
        rep.lines = std::move(base.lines);
        rep.note = "product symbol: roots real with multiplicity " +
                   std::to_string(h.factor_multiplicity) + ", factor " +
                   (base.hyperbolic ? "hyperbolic" : "not hyperbolic");
        return rep;
    }

    const Vec4 axis_hat = axis / axis.norm();
    double href = std::abs(h(axis_hat));
    if (href < 1e-12) {
        rep.note = "axis lies on the characteristic cone";
        return rep;
    }

    const auto dirs = sphere4_directions(n_dirs, seed);
    rep.hyperbolic = true;
    for (const auto& eta : dirs) {
        if (std::abs(std::abs(eta.dot(axis_hat)) - 1.0) < 1e-10) continue;
        LineRoots lr = analyze_line(h, axis, eta, distinct_tol);
        if (lr.degenerate) {
            ++rep.degenerate_lines;
            rep.hyperbolic = false;
        } else if (!(lr.all_real && lr.distinct)) {
            ++rep.failing_lines;
            rep.hyperbolic = false;
        }
        rep.lines.push_back(std::move(lr));
    }
    if (rep.degenerate_lines > 0) rep.note = "degenerate lines encountered";
    return rep;
}

InclusionReport half_space_contains_cone(const Metric4Jet& g, const Vec4& C_up, int n_dirs) {
    const Mat4 ginv = g.inverse();

    // orthonormal coframe for g^{-1}: one timelike leg f0, three spacelike
    std::array<Vec4, 4> seeds = {Vec4(1, 0, 0, 0), Vec4(0, 1, 0, 0), Vec4(0, 0, 1, 0),
                                 Vec4(0, 0, 0, 1)};
    int t_seed = -1;
    double best = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double q = seeds[i].dot(ginv * seeds[i]);
        if (q > best) {
            best = q;
            t_seed = i;
        }
    }
    if (t_seed < 0) {
        seeds[3] = seeds[0];
        seeds[0] = g.g * C_up;  // lowered current is timelike for timelike C
    } else {
        std::swap(seeds[0], seeds[t_seed]);
    }

    std::array<Vec4, 4> frame;
    int have = 0;
    for (int i = 0; i < 4; ++i) {
        Vec4 v = seeds[i];
        for (int j = 0; j < have; ++j) {
            const double sgn = (j == 0) ? 1.0 : -1.0;
            v -= sgn * frame[j].dot(ginv * v) * frame[j];
        }
        const double q = v.dot(ginv * v);
        const double expect = (have == 0) ? 1.0 : -1.0;
        if (std::abs(q) < 1e-12 || (q > 0) != (expect > 0))
            throw SingularMetric("degenerate coframe in cone sampling");
        frame[have++] = v / std::sqrt(std::abs(q));
    }

    // orient the timelike leg toward the current
    if (C_up.dot(frame[0]) < 0.0) frame[0] = -frame[0];

    InclusionReport rep;
    rep.n_samples = n_dirs;
    rep.min_margin = std::numeric_limits<double>::infinity();
    for (const auto& n : sphere3_directions(n_dirs)) {
        const Vec4 xi = frame[0] + n[0] * frame[1] + n[1] * frame[2] + n[2] * frame[3];
        const double margin = C_up.dot(xi);
        if (margin < rep.min_margin) {
            rep.min_margin = margin;
            rep.worst_direction = xi;
        }
    }
    rep.holds = rep.min_margin > 0.0;
    return rep;
}

InclusionReport cone_inclusion(const Metric4Jet& g, const Vec4& C_up, int n_dirs) {
    if (norm_squared(g, C_up) <= 0.0)
        throw NotTimelike("cone_inclusion requires a timelike current");
    return half_space_contains_cone(g, C_up, n_dirs);
}

std::vector<double> normal_speeds(const PrincipalSymbol& h, const Eigen::Vector3d& khat) {
    // a declared power has the same root set as its factor, without the
    // multiple-root noise of the companion matrix
    if (h.base_factor && h.factor_multiplicity > 1) return normal_speeds(*h.base_factor, khat);
    // xi = (-v, khat): normals of surfaces f = khat.x - v t
    const Vec4 base(0.0, khat[0], khat[1], khat[2]);
    const Vec4 dir(-1.0, 0, 0, 0);
    auto coefs = line_polynomial(h, base, dir);
    std::vector<std::complex<double>> cc(coefs.begin(), coefs.end());
    std::vector<double> out;
    for (const auto& z : polynomial_roots(cc))
        if (std::abs(z.imag()) < 1e-8 * std::max(1.0, std::abs(z))) out.push_back(z.real());
    return out;
}

double max_normal_speed(const PrincipalSymbol& h, int n_dirs) {
    double vmax = 0.0;
    for (const auto& n : sphere3_directions(n_dirs))
        for (double v : normal_speeds(h, n)) vmax = std::max(vmax, std::abs(v));
    return vmax;
}

double sound_speed_squared(const EquationOfState& eos, double F, double s) {
    const double r = eos.r(F, s);
    const double rF = eos.dr_dF(F, s);
    if (!(r > 0.0) || !(rF > 0.0)) throw DegenerateState("need r > 0 and dr/dF > 0");
    return r / (F * rF);
}

std::vector<AcousticMode> naive_acoustic_speeds(const EquationOfState& eos, double F, double s,
                                                double kappa, double vartheta,
                                                const Eigen::Vector3d& wave_direction,
                                                double k) {
    if (kappa < 0.0 || vartheta < 0.0) throw DomainError("viscosities must be non-negative");
    if (wave_direction.norm() == 0.0 || k <= 0.0)
        throw DomainError("need a nonzero wave direction and k > 0");
    const auto st = eos.eval(F, s);
    const double w = st.r * st.F;  // p + rho
    if (!(w > 0.0) || !(st.dr_dF > 0.0) || !(st.theta > 0.0))
        throw DegenerateState("background state unusable for the acoustic analysis");

    // first-law closure around the state, independent variables (r, s)
    const double cs2 = sound_speed_squared(eos, F, s);
    const double p_r = cs2 * st.F;                                     // dp/dr at fixed s
    const double p_s = -st.r * st.dr_ds / st.dr_dF - st.r * st.theta;  // dp/ds at fixed r
    const double P_r = st.F;                                           // drho/dr
    const double P_s = st.r * st.theta;                                // drho/ds

    const Eigen::Vector3d q = k * wave_direction.normalized();
    const double q2 = q.squaredNorm();

    using Cx = std::complex<double>;
    const Cx I(0.0, 1.0);
    auto M_at = [&](Cx om) {
        Eigen::Matrix<Cx, 5, 5> M;
        M.setZero();
        for (int j = 0; j < 3; ++j) {
            for (int i = 0; i < 3; ++i) {
                M(j, i) = (kappa + vartheta) * q[j] * q[i];
                if (i == j) M(j, i) += I * om * w + vartheta * q2;
            }
            M(j, 3) = I * q[j] * p_r;
            M(j, 4) = I * q[j] * p_s;
            M(3, j) = I * w * q[j];
            M(4, j) = I * st.r * q[j];
        }
        M(3, 3) = I * om * P_r;
        M(3, 4) = I * om * P_s;
        M(4, 3) = I * om;
        return M;
    };

    // det M is a degree-5 polynomial in omega; recover coefficients from 6 samples
    Eigen::Matrix<Cx, 6, 6> V;
    Eigen::Matrix<Cx, 6, 1> y;
    for (int j = 0; j < 6; ++j) {
        const Cx om(j - 2.5, 0.4 * (j % 2 ? 1 : -1));
        y[j] = M_at(om).determinant();
        Cx pw(1.0, 0.0);
        for (int qq = 5; qq >= 0; --qq) {
            V(j, qq) = pw;
            pw *= om;
        }
    }
    Eigen::Matrix<Cx, 6, 1> coef = V.fullPivLu().solve(y);
    std::vector<Cx> cc(coef.data(), coef.data() + 6);
    const auto roots = polynomial_roots(cc);

    std::vector<AcousticMode> out;
    for (const auto& om : roots) {
        AcousticMode m;
        m.omega = om;
        m.phase_speed = std::abs(om.real()) / k;
        m.damping = om.imag();
        out.push_back(m);
    }
    // pad with zero modes when the determinant degenerated (e.g. kappa = vartheta = 0)
    while (out.size() < 5) out.push_back(AcousticMode{});
    std::sort(out.begin(), out.end(),
              [](const AcousticMode& a, const AcousticMode& b) { return a.phase_speed > b.phase_speed; });
    return out;
}

BadOperatorReport bad_operator_analysis(const Metric4Jet& g, const Vec4& C_up) {
    BadOperatorReport rep;
    rep.quadratic_form = g.inverse() - C_up * C_up.transpose();

    Eigen::SelfAdjointEigenSolver<Mat4> es(rep.quadratic_form);
    const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
    for (int i = 0; i < 4; ++i) {
        const double ev = es.eigenvalues()[i];
        if (std::abs(ev) < 1e-10 * std::max(1.0, scale))
            ++rep.n_zero;
        else if (ev > 0)
            ++rep.n_positive;
        else
            ++rep.n_negative;
    }
    rep.degenerate = rep.n_zero > 0;
    rep.has_real_cone = !rep.degenerate &&
                        ((rep.n_positive == 1 && rep.n_negative == 3) ||
                         (rep.n_positive == 3 && rep.n_negative == 1));

    PrincipalSymbol sym;
    sym.degree = 2;
    sym.label = "would-be acoustic";
    const Mat4 Q = rep.quadratic_form;
    sym.eval = [Q](const Vec4& xi) { return xi.dot(Q * xi); };

    Vec4 axis(1, 0, 0, 0);
    if (rep.has_real_cone) {
        // the distinguished eigendirection (the minority sign)
        const bool want_pos = rep.n_positive == 1;
        for (int i = 0; i < 4; ++i)
            if ((es.eigenvalues()[i] > 0) == want_pos) axis = es.eigenvectors().col(i);
    }
    rep.cone = is_hyperbolic(sym, axis, 128);
    rep.hyperbolic = rep.cone.hyperbolic;

    if (rep.has_real_cone) {
        // sample the cone; positive g^{-1}(xi,xi) means spacelike surfaces
        std::array<Vec4, 4> e;
        std::array<double, 4> lam;
        const bool pos_is_axis = rep.n_positive == 1;
        int sp = 1;
        for (int i = 0; i < 4; ++i) {
            const double ev = es.eigenvalues()[i];
            if ((ev > 0) == pos_is_axis) {
                e[0] = es.eigenvectors().col(i);
                lam[0] = std::abs(ev);
            } else {
                e[sp] = es.eigenvectors().col(i);
                lam[sp] = std::abs(ev);
                ++sp;
            }
        }
        const Mat4 ginv = g.inverse();
        rep.min_normal_norm = std::numeric_limits<double>::infinity();
        for (const auto& n : sphere3_directions(128)) {
            Vec4 xi = e[0] / std::sqrt(lam[0]);
            for (int i = 0; i < 3; ++i) xi += n[i] * e[i + 1] / std::sqrt(lam[i + 1]);
            rep.min_normal_norm = std::min(rep.min_normal_norm, xi.dot(ginv * xi));
        }
        rep.surfaces_spacelike = rep.min_normal_norm > 0.0;
    }
    return rep;
}

} // namespace rvf
