#include "doctest.h"

#include <cmath>
#include <random>

#include "rvf/jet.hpp"

using namespace rvf;

namespace {

// analytic test function f = (2 + t + 0.5 x)^2 * (1 + 0.3 y - 0.2 z t)
TaylorJet sample_jet(int N) {
    const auto t = TaylorJet::coordinate(N, 0);
    const auto x = TaylorJet::coordinate(N, 1);
    const auto y = TaylorJet::coordinate(N, 2);
    const auto z = TaylorJet::coordinate(N, 3);
    const auto a = TaylorJet::constant(N, 2.0) + t + 0.5 * x;
    return a * a * (TaylorJet::constant(N, 1.0) + 0.3 * y - 0.2 * (z * t));
}

double sample_fn(double t, double x, double y, double z) {
    const double a = 2.0 + t + 0.5 * x;
    return a * a * (1.0 + 0.3 * y - 0.2 * z * t);
}

} // namespace

TEST_CASE("jet layout enumerates all monomials once") {
    const auto& L = JetLayout::of(5);
    CHECK(L.size() == 126);  // C(9,4)
    for (int i = 0; i < L.size(); ++i) CHECK(L.position(L.monomials[i]) == i);
}

TEST_CASE("polynomial arithmetic reproduces exact Taylor coefficients") {
    const int N = 5;
    const auto f = sample_jet(N);
    CHECK(f.value() == doctest::Approx(4.0));
    // d/dt at 0: 2*2*1 = 4 ; d/dx: 2*2*0.5 = 2 ; d/dy: 4*0.3
    CHECK(f.derivative({1, 0, 0, 0}) == doctest::Approx(4.0));
    CHECK(f.derivative({0, 1, 0, 0}) == doctest::Approx(2.0));
    CHECK(f.derivative({0, 0, 1, 0}) == doctest::Approx(1.2));
    // d^2/dt dz = -0.2 * 4 = -0.8 at origin
    CHECK(f.derivative({1, 0, 0, 1}) == doctest::Approx(-0.8));
}

TEST_CASE("derive matches finite differences of the analytic function") {
    const int N = 6;
    const auto f = sample_jet(N);
    const auto ft = f.derive(0);
    const auto fx = f.derive(1);
    const double h = 1e-6;
    CHECK(ft.value() == doctest::Approx((sample_fn(h, 0, 0, 0) - sample_fn(-h, 0, 0, 0)) / (2 * h))
                            .epsilon(1e-8));
    CHECK(fx.value() == doctest::Approx((sample_fn(0, h, 0, 0) - sample_fn(0, -h, 0, 0)) / (2 * h))
                            .epsilon(1e-8));
    CHECK(ft.valid_order() == N - 1);
}

TEST_CASE("reciprocal, sqrt, pow, exp and log invert each other on jets") {
    const int N = 6;
    const auto f = sample_jet(N) + 1.0;  // keep it away from zero
    const auto r = f.reciprocal();
    const auto one = f * r;
    CHECK(one.value() == doctest::Approx(1.0));
    for (const auto& m : JetLayout::of(N).monomials) {
        const double expect = (m == MultiIndex{0, 0, 0, 0}) ? 1.0 : 0.0;
        CHECK(one.coefficient(m) == doctest::Approx(expect).epsilon(1e-12).scale(1.0));
    }

    const auto s = f.sqrt();
    const auto back = s * s - f;
    CHECK(back.max_abs_coefficient() < 1e-12);

    const auto p = f.pow(1.7);
    const auto q = p.pow(1.0 / 1.7) - f;
    CHECK(q.max_abs_coefficient() < 1e-10);

    const auto lg = f.log();
    const auto ex = lg.exp() - f;
    CHECK(ex.max_abs_coefficient() < 1e-10);
}

TEST_CASE("pow with exponent 2 equals the plain product") {
    const int N = 5;
    const auto f = sample_jet(N) + 0.7;
    const auto a = f.pow(2.0);
    const auto b = f * f;
    CHECK((a - b).max_abs_coefficient() < 1e-10);
}

TEST_CASE("linear composition: substituting coordinates matches direct evaluation") {
    const int N = 5;
    const auto f = sample_jet(N);
    // x = A x', a shear mixing t into x plus a spatial rotation flavor
    std::array<std::array<double, 4>, 4> A = {{{1.0, 0.0, 0.0, 0.0},
                                               {0.3, 1.0, 0.0, 0.0},
                                               {0.0, 0.0, 0.8, 0.6},
                                               {0.0, 0.0, -0.6, 0.8}}};
    const auto g = f.compose_linear(A);
    // check g's Taylor expansion against sampled values of f(Ax)
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> U(-0.05, 0.05);
    for (int trial = 0; trial < 20; ++trial) {
        const double t = U(rng), x = U(rng), y = U(rng), z = U(rng);
        const double X0 = A[0][0] * t;
        const double X1 = A[1][0] * t + A[1][1] * x;
        const double X2 = A[2][2] * y + A[2][3] * z;
        const double X3 = A[3][2] * y + A[3][3] * z;
        const double direct = sample_fn(X0, X1, X2, X3);
        // evaluate the jet g at (t,x,y,z)
        double acc = 0.0;
        for (const auto& m : JetLayout::of(N).monomials)
            acc += g.coefficient(m) * std::pow(t, m[0]) * std::pow(x, m[1]) * std::pow(y, m[2]) *
                   std::pow(z, m[3]);
        CHECK(acc == doctest::Approx(direct).epsilon(1e-9));
    }
}

TEST_CASE("valid-order bookkeeping guards truncated coefficients") {
    const int N = 4;
    auto f = sample_jet(N);
    const auto d = f.derive(0).derive(1);
    CHECK(d.valid_order() == N - 2);
    CHECK_THROWS_AS(d.coefficient({2, 1, 0, 0}), InsufficientJet);
    CHECK_NOTHROW(d.coefficient({1, 1, 0, 0}));
}

TEST_CASE("dropping t-orders zeroes exactly the higher time coefficients") {
    const int N = 4;
    auto f = sample_jet(N);
    const auto g = f.drop_t_orders_above(1);
    CHECK(g.coefficient({1, 0, 0, 1}) == f.coefficient({1, 0, 0, 1}));
    CHECK(g.coefficient({2, 0, 0, 0}) == 0.0);
    CHECK(g.coefficient({0, 2, 0, 0}) == f.coefficient({0, 2, 0, 0}));
}
