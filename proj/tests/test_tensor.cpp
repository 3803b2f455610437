#include "doctest.h"

#include <cmath>
#include <random>

#include "rvf/tensor.hpp"

using namespace rvf;

namespace {

// analytic metric family: g = eta + sum_k A_k * (c_k . x + x^T Q_k x), exact jets
struct PolyMetric {
    std::vector<Mat4> A;
    std::vector<Vec4> c;
    std::vector<Mat4> Q;  // symmetric

    Metric4Jet jet_at(const Vec4& x) const {
        Metric4Jet m = Metric4Jet::minkowski();
        m.order = 2;
        for (size_t k = 0; k < A.size(); ++k) {
            const double phi = c[k].dot(x) + x.dot(Q[k] * x);
            const Vec4 dphi = c[k] + 2.0 * (Q[k] * x);
            m.g += A[k] * phi;
            for (int a = 0; a < 4; ++a) {
                m.d1g[a] += A[k] * dphi[a];
                for (int b = 0; b < 4; ++b) m.d2g[a][b] += A[k] * (2.0 * Q[k](a, b));
            }
        }
        return m;
    }
};

PolyMetric random_poly_metric(std::mt19937& rng, double amp = 0.04, int terms = 3) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    PolyMetric pm;
    for (int k = 0; k < terms; ++k) {
        Mat4 A, Q;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                A(i, j) = amp * U(rng);
                Q(i, j) = 0.5 * U(rng);
            }
        A = ((A + A.transpose()) * 0.5).eval();
        Q = ((Q + Q.transpose()) * 0.5).eval();
        Vec4 c;
        for (int i = 0; i < 4; ++i) c[i] = U(rng);
        pm.A.push_back(A);
        pm.c.push_back(c);
        pm.Q.push_back(Q);
    }
    return pm;
}

// FLRW fixture: g = diag(1, -a^2, -a^2, -a^2), a(t) = 1 + t/4 + t^2/10
struct Flrw {
    double t;
    double a() const { return 1.0 + t / 4.0 + t * t / 10.0; }
    double ad() const { return 0.25 + 0.2 * t; }
    double add() const { return 0.2; }

    Metric4Jet jet() const {
        Metric4Jet m = Metric4Jet::minkowski();
        const double A = a(), Ad = ad(), Add = add();
        for (int i = 1; i < 4; ++i) {
            m.g(i, i) = -A * A;
            m.d1g[0](i, i) = -2.0 * A * Ad;
            m.d2g[0][0](i, i) = -2.0 * (Ad * Ad + A * Add);
        }
        return m;
    }
};

// Jacobi eigenvalue iteration, used as an independent inertia oracle
std::array<double, 4> jacobi_eigenvalues(Mat4 S) {
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) off += S(p, q) * S(p, q);
        if (off < 1e-26) break;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) {
                if (std::abs(S(p, q)) < 1e-18) continue;
                const double theta = (S(q, q) - S(p, p)) / (2.0 * S(p, q));
                const double sgn = theta >= 0.0 ? 1.0 : -1.0;
                const double tt = sgn / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double cc = 1.0 / std::sqrt(tt * tt + 1.0);
                const double ss = tt * cc;
                Mat4 J = Mat4::Identity();
                J(p, p) = cc; J(q, q) = cc; J(p, q) = ss; J(q, p) = -ss;
                S = (J.transpose() * S * J).eval();
            }
    }
    return {S(0, 0), S(1, 1), S(2, 2), S(3, 3)};
}

Mat4 boost_x(double eta) {
    Mat4 b = Mat4::Identity();
    b(0, 0) = std::cosh(eta);
    b(0, 1) = b(1, 0) = std::sinh(eta);
    b(1, 1) = std::cosh(eta);
    return b;
}

} // namespace

TEST_CASE("index raising and lowering on Minkowski") {
    const Metric4Jet g = Metric4Jet::minkowski();
    Vec4 e0(1, 0, 0, 0), e1(0, 1, 0, 0);
    CHECK(lower_index(g, e0).isApprox(Vec4(1, 0, 0, 0), 1e-15));
    CHECK(lower_index(g, e1).isApprox(Vec4(0, -1, 0, 0), 1e-15));
}

TEST_CASE("raise after lower is the identity on random nondegenerate metrics") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        Metric4Jet g = Metric4Jet::minkowski();
        Mat4 P;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) P(i, j) = 0.2 * U(rng);
        g.g += ((P + P.transpose()) * 0.5).eval();
        if (std::abs(g.g.determinant()) < 1e-3) continue;
        Vec4 v;
        for (int i = 0; i < 4; ++i) v[i] = U(rng);
        const Vec4 rt = raise_index(g, lower_index(g, v));
        CHECK((rt - v).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("singular metric is rejected") {
    Metric4Jet g = Metric4Jet::minkowski();
    g.g(0, 0) = 0.0;
    g.g(1, 1) = 0.0;
    g.g(0, 1) = g.g(1, 0) = 0.0;
    CHECK_THROWS_AS(raise_index(g, Vec4(1, 0, 0, 0)), SingularMetric);
}

TEST_CASE("signature detection agrees with a Jacobi inertia oracle") {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    int lorentzian_seen = 0, other_seen = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        Metric4Jet g = Metric4Jet::minkowski();
        // perturbations large enough to flip the signature now and then
        const double amp = 0.2 + 1.3 * (trial % 7) / 6.0;
        Mat4 P;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) P(i, j) = amp * U(rng);
        g.g += ((P + P.transpose()) * 0.5).eval();
        const auto ev = jacobi_eigenvalues(g.g);
        int pos = 0, neg = 0;
        for (double e : ev) (e > 0.0 ? pos : neg)++;
        const bool expect = (pos == 1 && neg == 3);
        CHECK(g.has_lorentzian_signature() == expect);
        (expect ? lorentzian_seen : other_seen)++;
    }
    // the sample must actually exercise both outcomes
    CHECK(lorentzian_seen > 100);
    CHECK(other_seen > 100);
}

TEST_CASE("projection tensor in the rest frame and its algebraic identity") {
    const Metric4Jet g = Metric4Jet::minkowski();
    const Vec4 u(1, 0, 0, 0);
    const Mat4 pi = projection(g, u);
    Mat4 expect = Mat4::Zero();
    expect(1, 1) = expect(2, 2) = expect(3, 3) = -1.0;
    CHECK((pi - expect).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((pi * u).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("projection of a boosted velocity matches the boosted rest-frame projector") {
    const Metric4Jet g = Metric4Jet::minkowski();
    for (double eta : {0.3, 0.9, -1.2}) {
        const Mat4 B = boost_x(eta);
        const Vec4 u = B * Vec4(1, 0, 0, 0);
        const Mat4 pi = projection(g, u);
        CHECK((pi * u).cwiseAbs().maxCoeff() < 1e-12);
        Mat4 pi_rest = Mat4::Zero();
        pi_rest(1, 1) = pi_rest(2, 2) = pi_rest(3, 3) = -1.0;
        const Mat4 Binv = boost_x(-eta);
        const Mat4 expect = Binv.transpose() * pi_rest * Binv;
        CHECK((pi - expect).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("projection rejects non-normalized velocities") {
    const Metric4Jet g = Metric4Jet::minkowski();
    CHECK_THROWS_AS(projection(g, Vec4(2, 0, 0, 0)), NormalizationError);
}

TEST_CASE("curvature of a constant metric vanishes") {
    const auto cp = curvature(Metric4Jet::minkowski());
    CHECK(cp.scalar == 0.0);
    CHECK(cp.ricci.cwiseAbs().maxCoeff() == 0.0);
    for (int l = 0; l < 4; ++l) CHECK(cp.christoffel[l].cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("FLRW curvature matches the closed forms") {
    const Flrw f{0.3};
    const auto cp = curvature(f.jet());
    const double a = f.a(), ad = f.ad(), add = f.add();

    for (int i = 1; i < 4; ++i) {
        CHECK(cp.christoffel[0](i, i) == doctest::Approx(a * ad).epsilon(1e-12));
        CHECK(cp.christoffel[i](0, i) == doctest::Approx(ad / a).epsilon(1e-12));
    }
    CHECK(cp.ricci(0, 0) == doctest::Approx(-3.0 * add / a).epsilon(1e-12));
    for (int i = 1; i < 4; ++i)
        CHECK(cp.ricci(i, i) == doctest::Approx(a * add + 2.0 * ad * ad).epsilon(1e-12));
    CHECK(cp.scalar == doctest::Approx(-6.0 * (add / a + ad * ad / (a * a))).epsilon(1e-12));
}

TEST_CASE("christoffel symbols are symmetric in the lower indices") {
    std::mt19937 rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        const auto pm = random_poly_metric(rng);
        Vec4 x(0.1, -0.2, 0.3, 0.05);
        const auto gam = christoffel(pm.jet_at(x));
        for (int l = 0; l < 4; ++l)
            CHECK((gam[l] - gam[l].transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("metric compatibility: nabla g = 0 on random analytic jets") {
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 50; ++trial) {
        const auto pm = random_poly_metric(rng);
        const Vec4 x(0.2, 0.1, -0.15, 0.3);
        const Metric4Jet m = pm.jet_at(x);
        const Ten3 ng = covariant_derivative_tensor02(m, m.g, m.d1g);
        for (int c = 0; c < 4; ++c) CHECK(ng[c].cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("ricci symmetry, riemann antisymmetry and first Bianchi identity") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        const auto pm = random_poly_metric(rng);
        const Metric4Jet m = pm.jet_at(Vec4(0.1, 0.2, -0.1, 0.25));
        const auto cp = curvature(m);
        CHECK((cp.ricci - cp.ricci.transpose()).cwiseAbs().maxCoeff() < 1e-10);
        for (int r = 0; r < 4; ++r)
            for (int s = 0; s < 4; ++s)
                for (int a = 0; a < 4; ++a)
                    for (int b = 0; b < 4; ++b) {
                        CHECK(std::abs(cp.riemann[r][s](a, b) + cp.riemann[r][s](b, a)) < 1e-10);
                        const double cyc = cp.riemann[r][s](a, b) + cp.riemann[r][a](b, s)
                                         + cp.riemann[r][b](s, a);
                        CHECK(std::abs(cyc) < 1e-10);
                    }
    }
}

TEST_CASE("covariant derivative on a flat metric returns raw partials") {
    const Metric4Jet g = Metric4Jet::minkowski();
    CovectorJet w;
    w.value = Vec4(0.3, -0.1, 0.7, 0.2);
    w.d1 << 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16;
    const Mat4 nw = covariant_derivative(g, w);
    CHECK((nw - w.d1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("antisymmetrized covariant derivative drops the Christoffel terms") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const auto pm = random_poly_metric(rng);
        const Metric4Jet m = pm.jet_at(Vec4(0.1, -0.3, 0.2, 0.4));
        CovectorJet w;
        for (int i = 0; i < 4; ++i) {
            w.value[i] = U(rng);
            for (int j = 0; j < 4; ++j) w.d1(i, j) = U(rng);
        }
        const Mat4 nw = covariant_derivative(m, w);
        const Mat4 lhs = nw - nw.transpose();
        const Mat4 rhs = w.d1 - w.d1.transpose();
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("FLRW comoving current divergence matches F' + 3(adot/a)F") {
    const Flrw f{0.3};
    const double F = 2.0 + 0.5 * f.t, Fd = 0.5;
    VectorJet C;
    C.value = Vec4(F, 0, 0, 0);
    C.d1.setZero();
    C.d1(0, 0) = Fd;
    const Mat4 nc = covariant_derivative(f.jet(), C);
    const double div = nc.trace();
    CHECK(div == doctest::Approx(Fd + 3.0 * (f.ad() / f.a()) * F).epsilon(1e-12));
}

TEST_CASE("second covariant derivative needs a 2-jet") {
    CovectorJet w;
    w.order = 1;
    CHECK_THROWS_AS(second_covariant_derivative(Metric4Jet::minkowski(), w), InsufficientJet);
}
