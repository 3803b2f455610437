#include "doctest.h"

#include <cmath>
#include <random>

#include "rvf/characteristics.hpp"

using namespace rvf;

namespace {

std::mt19937& rng() {
    static std::mt19937 r(8642);
    return r;
}

double uni(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng());
}

Metric4Jet random_lorentzian_metric(double amp = 0.25) {
    for (;;) {
        Metric4Jet g = Metric4Jet::minkowski();
        Mat4 P;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) P(i, j) = amp * uni(-1, 1);
        g.g += ((P + P.transpose()) * 0.5).eval();
        if (g.has_lorentzian_signature()) return g;
    }
}

Vec4 random_timelike_vector(const Metric4Jet& g) {
    for (;;) {
        Vec4 v(uni(0.8, 2.0), uni(-0.45, 0.45), uni(-0.45, 0.45), uni(-0.45, 0.45));
        if (norm_squared(g, v) > 0.05) return v;
    }
}

Vec4 random_spacelike_vector(const Metric4Jet& g) {
    for (;;) {
        Vec4 v(uni(-0.3, 0.3), uni(0.6, 1.8), uni(-1.2, 1.2), uni(-1.2, 1.2));
        if (norm_squared(g, v) < -0.05) return v;
    }
}

Mat4 boost_x(double eta) {
    Mat4 b = Mat4::Identity();
    b(0, 0) = std::cosh(eta);
    b(0, 1) = b(1, 0) = std::sinh(eta);
    b(1, 1) = std::cosh(eta);
    return b;
}

} // namespace

TEST_CASE("flow symbol: basic values and dot-product oracle") {
    const auto h = symbol_flow(Vec4(1, 0, 0, 0));
    CHECK(h(Vec4(1, 0, 0, 0)) == 1.0);
    CHECK(h(Vec4(0, 0.3, -0.2, 0.9)) == 0.0);
    for (int k = 0; k < 100; ++k) {
        Vec4 C(uni(-2, 2), uni(-2, 2), uni(-2, 2), uni(-2, 2));
        Vec4 xi(uni(-2, 2), uni(-2, 2), uni(-2, 2), uni(-2, 2));
        double dot = 0.0;
        for (int i = 0; i < 4; ++i) dot += C[i] * xi[i];
        CHECK(symbol_flow(C)(xi) == doctest::Approx(dot).epsilon(1e-14));
    }
}

TEST_CASE("light symbol: null and timelike covectors, quadratic-form oracle") {
    const auto g = Metric4Jet::minkowski();
    const auto h = symbol_light(g);
    CHECK(h(Vec4(1, 1, 0, 0)) == doctest::Approx(0.0).scale(1.0));
    CHECK(h(Vec4(1, 0, 0, 0)) == doctest::Approx(1.0));
    for (int k = 0; k < 50; ++k) {
        const auto gm = random_lorentzian_metric();
        const auto hm = symbol_light(gm);
        const Mat4 gi = gm.inverse();
        Vec4 xi(uni(-2, 2), uni(-2, 2), uni(-2, 2), uni(-2, 2));
        double form = 0.0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) form += gi(a, b) * xi[a] * xi[b];
        CHECK(hm(xi) == doctest::Approx(form).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("light symbol rejects a singular metric") {
    Metric4Jet g = Metric4Jet::minkowski();
    g.g.setZero();
    CHECK_THROWS_AS(symbol_light(g), SingularMetric);
}

TEST_CASE("entropy symbol factorizes as flow times light") {
    // the cubic contraction g^{rm} C^a xi_r xi_m xi_a, coded independently,
    // must agree with the factored product
    for (int k = 0; k < 1000; ++k) {
        const auto g = random_lorentzian_metric();
        const Vec4 C = random_timelike_vector(g);
        const Vec4 xi(uni(-2, 2), uni(-2, 2), uni(-2, 2), uni(-2, 2));
        const Mat4 gi = g.inverse();
        double cubic = 0.0;
        for (int r = 0; r < 4; ++r)
            for (int m = 0; m < 4; ++m)
                for (int a = 0; a < 4; ++a) cubic += gi(r, m) * C[a] * xi[r] * xi[m] * xi[a];
        const double prod = symbol_flow(C)(xi) * symbol_light(g)(xi);
        const double ent = symbol_entropy(g, C)(xi);
        CHECK(std::abs(ent - cubic) < 1e-12 * std::max(1.0, std::abs(cubic)));
        CHECK(std::abs(ent - prod) < 1e-12 * std::max(1.0, std::abs(cubic)));
    }
}

TEST_CASE("quartic symbol is the square of the light symbol") {
    for (int k = 0; k < 200; ++k) {
        const auto g = random_lorentzian_metric();
        const Vec4 xi(uni(-2, 2), uni(-2, 2), uni(-2, 2), uni(-2, 2));
        const Mat4 gi = g.inverse();
        double quart = 0.0;
        for (int r = 0; r < 4; ++r)
            for (int m = 0; m < 4; ++m)
                for (int l = 0; l < 4; ++l)
                    for (int s = 0; s < 4; ++s)
                        quart += gi(r, m) * gi(l, s) * xi[r] * xi[m] * xi[l] * xi[s];
        const double sq = symbol_light(g)(xi);
        CHECK(symbol_quartic(g)(xi) == doctest::Approx(sq * sq).epsilon(1e-11).scale(1.0));
        CHECK(symbol_quartic(g)(xi) == doctest::Approx(quart).epsilon(1e-11).scale(1.0));
    }
    CHECK(symbol_quartic(Metric4Jet::minkowski())(Vec4(1, 1, 0, 0)) ==
          doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("every constructed symbol is homogeneous of its declared degree") {
    const auto g = random_lorentzian_metric();
    const Vec4 C = random_timelike_vector(g);
    const std::vector<PrincipalSymbol> syms = {symbol_flow(C), symbol_light(g),
                                               symbol_entropy(g, C), symbol_quartic(g)};
    for (const auto& h : syms)
        for (int k = 0; k < 50; ++k) {
            const Vec4 xi(uni(-2, 2), uni(-2, 2), uni(-2, 2), uni(-2, 2));
            const double lam = uni(0.2, 3.0);
            const double lhs = h(lam * xi);
            const double rhs = std::pow(lam, h.degree) * h(xi);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10).scale(1.0));
        }
}

TEST_CASE("entropy symbol at the rest frame: roots {0, +|k|, -|k|} in xi_0") {
    const auto g = Metric4Jet::minkowski();
    const double F = 1.6;
    const auto h = symbol_entropy(g, Vec4(F, 0, 0, 0));
    const Eigen::Vector3d kvec(0.3, -1.1, 0.7);
    const auto coefs = line_polynomial(h, Vec4(0, kvec[0], kvec[1], kvec[2]), Vec4(1, 0, 0, 0));
    std::vector<std::complex<double>> cc(coefs.begin(), coefs.end());
    auto roots = polynomial_roots(cc);
    REQUIRE(roots.size() == 3);
    std::vector<double> rr;
    for (auto z : roots) {
        CHECK(std::abs(z.imag()) < 1e-9);
        rr.push_back(z.real());
    }
    std::sort(rr.begin(), rr.end());
    const double kn = kvec.norm();
    CHECK(rr[0] == doctest::Approx(-kn).epsilon(1e-9));
    CHECK(rr[1] == doctest::Approx(0.0).scale(1.0));
    CHECK(rr[2] == doctest::Approx(kn).epsilon(1e-9));
}

TEST_CASE("hyperbolicity verdicts: light cone, elliptic quadratic, quartic square") {
    const auto g = Metric4Jet::minkowski();

    const auto light = is_hyperbolic(symbol_light(g), Vec4(1, 0, 0, 0), 256);
    CHECK(light.hyperbolic);
    for (const auto& ln : light.lines) CHECK(ln.roots.size() == 2);

    PrincipalSymbol elliptic;
    elliptic.degree = 2;
    elliptic.label = "xi0^2 + xi1^2";
    elliptic.eval = [](const Vec4& xi) { return xi[0] * xi[0] + xi[1] * xi[1]; };
    CHECK_FALSE(is_hyperbolic(elliptic, Vec4(1, 0, 0, 0), 128).hyperbolic);

    const auto quart = is_hyperbolic(symbol_quartic(g), Vec4(1, 0, 0, 0), 128);
    CHECK_FALSE(quart.hyperbolic);
    CHECK(quart.factors_hyperbolic);
    CHECK(quart.factor_multiplicity == 2);
}

TEST_CASE("entropy symbol is hyperbolic exactly for timelike currents") {
    for (int k = 0; k < 12; ++k) {
        const auto g = random_lorentzian_metric();
        const Vec4 Ct = random_timelike_vector(g);
        const auto ht = symbol_entropy(g, Ct);
        CHECK(is_hyperbolic(ht, lower_index(g, Ct), 192).hyperbolic);

        const Vec4 Cs = random_spacelike_vector(g);
        const auto hs = symbol_entropy(g, Cs);
        CHECK_FALSE(is_hyperbolic(hs, lower_index(g, Cs), 192).hyperbolic);
    }
}

TEST_CASE("axis on the cone is rejected, zero axis is an error") {
    const auto g = Metric4Jet::minkowski();
    const auto light = symbol_light(g);
    CHECK_FALSE(is_hyperbolic(light, Vec4(1, 1, 0, 0), 64).hyperbolic);
    CHECK_THROWS_AS(is_hyperbolic(light, Vec4::Zero(), 64), DomainError);
}

TEST_CASE("cone inclusion holds for timelike currents, fails for spacelike ones") {
    const auto g = Metric4Jet::minkowski();
    const auto rest = cone_inclusion(g, Vec4(1.5, 0, 0, 0), 512);
    CHECK(rest.holds);
    CHECK(rest.min_margin == doctest::Approx(1.5).epsilon(1e-9));

    for (double eta : {0.4, 1.1, -0.8}) {
        const Vec4 C = boost_x(eta) * Vec4(1.2, 0, 0, 0);
        const auto rep = cone_inclusion(g, C, 512);
        CHECK(rep.holds);
        // independent sampled-interior oracle: covectors inside the future cone
        for (int k = 0; k < 2000; ++k) {
            Vec4 xi(uni(0.1, 2.0), uni(-2, 2), uni(-2, 2), uni(-2, 2));
            if (conorm_squared(g, xi) < 0.0) continue;
            if (xi.dot(C) < 0.0) xi = -xi;  // orientation: the half containing C
            CHECK(C.dot(xi) >= 0.0);
        }
    }

    CHECK_THROWS_AS(cone_inclusion(g, Vec4(0.1, 1.0, 0, 0), 128), NotTimelike);
    CHECK_FALSE(half_space_contains_cone(g, Vec4(0.1, 1.0, 0, 0), 512).holds);
}

TEST_CASE("cone inclusion on random curved metrics with timelike currents") {
    for (int k = 0; k < 30; ++k) {
        const auto g = random_lorentzian_metric();
        const Vec4 C = random_timelike_vector(g);
        CHECK(cone_inclusion(g, C, 256).holds);
    }
}

TEST_CASE("normal speeds of the causal symbols stay at or below light speed") {
    const auto g = Metric4Jet::minkowski();
    for (double eta : {0.0, 0.5, -0.9}) {
        const double F = 1.4;
        const Vec4 C = boost_x(eta) * Vec4(F, 0, 0, 0);
        CHECK(max_normal_speed(symbol_flow(C), 96) <= 1.0 - 1e-9);
        CHECK(max_normal_speed(symbol_light(g), 96) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(max_normal_speed(symbol_quartic(g), 96) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(max_normal_speed(symbol_entropy(g, C), 96) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("acoustic modes: inviscid limit gives the perfect-fluid sound speed and zero") {
    const auto eos = EquationOfState::power_law(1.0, 1.8, 0.7);
    const double F = 1.9, s = 1.1;
    const double cs = std::sqrt(sound_speed_squared(eos, F, s));
    CHECK(cs < 1.0);
    const auto modes = naive_acoustic_speeds(eos, F, s, 0.0, 0.0, {1, 0, 0});
    REQUIRE(modes.size() == 5);
    CHECK(modes[0].phase_speed == doctest::Approx(cs).epsilon(1e-9));
    CHECK(modes[1].phase_speed == doctest::Approx(cs).epsilon(1e-9));
    for (size_t i = 2; i < 5; ++i) CHECK(modes[i].phase_speed < 1e-12);
    for (const auto& m : modes) CHECK(m.phase_speed <= 1.0 + 1e-9);
}

TEST_CASE("acoustic modes match the closed-form dispersion relation") {
    const auto eos = EquationOfState::power_law(1.3, 2.2, 0.9);
    const double F = 1.5, s = 0.8, kappa = 0.23, vth = 0.61, k = 1.0;
    const auto st = eos.eval(F, s);
    const double w = st.r * st.F;
    const double cs2 = sound_speed_squared(eos, F, s);
    const double nu = (kappa + 2.0 * vth) / w;

    const auto modes = naive_acoustic_speeds(eos, F, s, kappa, vth, {0, 0, 1}, k);
    std::vector<std::complex<double>> expect;
    expect.emplace_back(0.0, 0.0);
    expect.emplace_back(0.0, vth * k * k / w);
    expect.emplace_back(0.0, vth * k * k / w);
    const std::complex<double> disc =
        std::sqrt(std::complex<double>(4.0 * cs2 * k * k - nu * nu * k * k * k * k, 0.0));
    expect.push_back((std::complex<double>(0, 1) * nu * k * k + disc) / 2.0);
    expect.push_back((std::complex<double>(0, 1) * nu * k * k - disc) / 2.0);

    for (const auto& e : expect) {
        double best = 1e300;
        for (const auto& m : modes) best = std::min(best, std::abs(m.omega - e));
        CHECK(best < 1e-6);
    }
}

TEST_CASE("acoustic phase speeds at or below light whenever the sound-speed condition holds") {
    const auto eos = EquationOfState::power_law(1.0, 1.4, 1.0);
    for (double F : {1.1, 1.8, 3.0})
        for (double vth : {0.4, 2.0}) {
            const auto modes = naive_acoustic_speeds(eos, F, 1.0, 0.1, vth, {1, 1, 0});
            for (const auto& m : modes) CHECK(m.phase_speed <= 1.0 + 1e-9);
        }
}

TEST_CASE("acoustic mode scan crosses light speed along a p+rho ramp for a stiff gas") {
    // adiabatic index above 2: the sound speed exceeds 1 once F is large enough
    const auto eos = EquationOfState::affine_index(2.6, 1.0, 1.0);
    const double vth = 0.3, s = 0.7;
    double prev_speed = 0.0;
    bool crossed = false;
    double w_at_cross = 0.0;
    for (double F = 1.3; F < 12.0; F += 0.1) {
        const auto st = eos.eval(F, s);
        const auto modes = naive_acoustic_speeds(eos, F, s, 0.0, vth, {1, 0, 0});
        const double v = modes[0].phase_speed;
        if (!crossed && prev_speed <= 1.0 && v > 1.0) {
            crossed = true;
            w_at_cross = st.r * st.F;
        }
        prev_speed = v;
    }
    CHECK(crossed);
    CHECK(w_at_cross > 0.0);
    CHECK(naive_acoustic_speeds(eos, 1.3, s, 0.0, vth, {1, 0, 0})[0].phase_speed < 1.0);
}

TEST_CASE("acoustic analysis rejects bad inputs") {
    const auto eos = EquationOfState::power_law(1.0, 1.5, 1.0);
    CHECK_THROWS_AS(naive_acoustic_speeds(eos, -2.0, 1.0, 0.0, 0.1, {1, 0, 0}), DomainError);
    CHECK_THROWS_AS(naive_acoustic_speeds(eos, 1.5, 1.0, 0.0, 0.1, {0, 0, 0}), DomainError);
}

TEST_CASE("would-be acoustic operator: rest frame signatures across F") {
    const auto g = Metric4Jet::minkowski();

    auto rep = bad_operator_analysis(g, Vec4(1.4, 0, 0, 0));  // F^2 ~ 2
    CHECK(rep.n_positive == 0);
    CHECK(rep.n_negative == 4);
    CHECK_FALSE(rep.has_real_cone);
    CHECK_FALSE(rep.hyperbolic);

    rep = bad_operator_analysis(g, Vec4(1.0, 0, 0, 0));  // F^2 = 1
    CHECK(rep.degenerate);
    CHECK_FALSE(rep.hyperbolic);

    rep = bad_operator_analysis(g, Vec4(0.6, 0, 0, 0));  // 0 < F^2 < 1
    CHECK(rep.has_real_cone);
    CHECK(rep.surfaces_spacelike);
    CHECK(rep.min_normal_norm > 0.0);
}

TEST_CASE("would-be acoustic operator: boosted states match the eigenvalue-signature oracle") {
    const auto g = Metric4Jet::minkowski();
    for (int k = 0; k < 40; ++k) {
        const double F = uni(0.3, 2.0);
        if (std::abs(F - 1.0) < 0.05) continue;
        const Vec4 C = boost_x(uni(-1.2, 1.2)) * Vec4(F, 0, 0, 0);
        const auto rep = bad_operator_analysis(g, C);
        // congruent to diag(1 - F^2, -1, -1, -1)
        if (F < 1.0) {
            CHECK(rep.n_positive == 1);
            CHECK(rep.n_negative == 3);
            CHECK(rep.has_real_cone);
            CHECK(rep.surfaces_spacelike);
        } else {
            CHECK(rep.n_positive == 0);
            CHECK(rep.n_negative == 4);
            CHECK_FALSE(rep.has_real_cone);
            CHECK_FALSE(rep.hyperbolic);
        }
    }
}
