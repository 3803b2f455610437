#include "doctest.h"

#include <cmath>
#include <random>

#include "rvf/gevrey.hpp"

using namespace rvf;

namespace {

std::vector<double> factorial_power_sequence(int K, double power, double radius = 1.0) {
    std::vector<double> seq(K + 1);
    for (int k = 0; k <= K; ++k)
        seq[k] = std::exp(power * std::lgamma(k + 1.0) + k * std::log(radius));
    return seq;
}

} // namespace

TEST_CASE("all-ones sequence: sup is 1 at a = 0 for any sigma >= 1") {
    const std::vector<double> ones(30, 1.0);
    for (double sigma : {1.0, 1.5, 2.0, 3.0}) {
        const auto res = gevrey_norm(ones, 0, sigma);
        CHECK(res.value == doctest::Approx(1.0));
        CHECK(res.argmax == 0);
        CHECK_FALSE(res.diverging);
    }
}

TEST_CASE("k! at sigma = 1 stays bounded; its terms approach 1/e from below") {
    const auto seq = factorial_power_sequence(60, 1.0);
    const auto res = gevrey_norm(seq, 0, 1.0);
    CHECK(res.value == doctest::Approx(1.0));  // the a = 0 term dominates
    CHECK_FALSE(res.diverging);
    // Stirling bound oracle on the tail terms: (a!)^{1/(1+a)} / (1+a) < 1/e + margin
    for (int a = 10; a <= 60; ++a) {
        const double term = std::exp(std::lgamma(a + 1.0) / (1.0 + a)) / (1.0 + a);
        CHECK(term < 1.0 / std::exp(1.0) + 0.05);
        CHECK(term > 0.2);
    }
}

TEST_CASE("(k!)^3 at sigma = 2 diverges and is flagged") {
    const auto seq = factorial_power_sequence(40, 3.0);
    const auto res = gevrey_norm(seq, 0, 2.0);
    CHECK(res.diverging);
    CHECK(res.argmax == 40);
    // Stirling oracle: the terms grow like a / e^3
    const int a = 40;
    const double term = std::pow(1.0 + a, -2.0) * std::exp(3.0 * std::lgamma(a + 1.0) / (1.0 + a));
    CHECK(res.value == doctest::Approx(term).epsilon(1e-9));
    CHECK(term > 1.0);
}

TEST_CASE("gevrey norm is nonincreasing in sigma") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> U(0.2, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> seq(25);
        for (auto& v : seq) v = U(rng);
        for (int m : {0, 2}) {
            double prev = std::numeric_limits<double>::infinity();
            for (double sigma = 1.0; sigma <= 3.0; sigma += 0.25) {
                const double v = gevrey_norm(seq, m, sigma).value;
                CHECK(v <= prev + 1e-14);
                prev = v;
            }
        }
    }
}

TEST_CASE("insufficient orders and bad inputs are rejected") {
    CHECK_THROWS_AS(gevrey_norm({1.0, 2.0}, 2, 1.0), InsufficientOrders);
    CHECK_THROWS_AS(gevrey_norm({1.0, -1.0, 2.0}, 0, 1.0), DomainError);
    CHECK_THROWS_AS(gevrey_norm({1.0, 2.0, 3.0}, 0, 0.5), DomainError);
    CHECK_THROWS_AS(estimate_sigma({1, 1, 1, 1}), InsufficientOrders);
}

TEST_CASE("sigma estimation: analytic class k! gives sigma close to 1") {
    const auto est = estimate_sigma(factorial_power_sequence(40, 1.0));
    CHECK(std::abs(est.sigma_hat - 1.0) < 0.05);
    CHECK(est.reliable);
    CHECK_FALSE(est.entire);
    CHECK(est.admissible_w2);
}

TEST_CASE("sigma estimation: (k!)^2 gives sigma close to 2 and is inadmissible for w = 2") {
    const auto est = estimate_sigma(factorial_power_sequence(40, 2.0));
    CHECK(std::abs(est.sigma_hat - 2.0) < 0.1);
    CHECK(est.reliable);
    // the flag is mechanical in sigma_hat, which sits within 0.1 of the boundary here
    CHECK(est.admissible_w2 == (est.sigma_hat < 2.0));
}

TEST_CASE("sigma estimation: geometric growth is flagged entire") {
    const auto est = estimate_sigma(factorial_power_sequence(40, 0.0, 2.5));
    CHECK(est.sigma_hat < 0.1);
    CHECK(est.entire);
    CHECK(est.admissible_w2);
}

TEST_CASE("admissibility flag follows the sigma < 2 rule near the boundary") {
    CHECK(estimate_sigma(factorial_power_sequence(40, 1.7)).admissible_w2);
    CHECK_FALSE(estimate_sigma(factorial_power_sequence(40, 2.3)).admissible_w2);
}

TEST_CASE("scaling the sequence leaves the estimate invariant") {
    const auto base = factorial_power_sequence(40, 1.5);
    const auto e0 = estimate_sigma(base);
    for (double lam : {1e-6, 3.0, 1e8}) {
        auto scaled = base;
        for (auto& v : scaled) v *= lam;
        const auto e1 = estimate_sigma(scaled);
        CHECK(e1.sigma_hat == doctest::Approx(e0.sigma_hat).epsilon(1e-9));
        CHECK(e1.admissible_w2 == e0.admissible_w2);
        // scaling cannot change the finite/infinite classification either
        const auto n0 = gevrey_norm(base, 0, 2.0);
        const auto n1 = gevrey_norm(scaled, 0, 2.0);
        CHECK(n0.diverging == n1.diverging);
    }
}

TEST_CASE("a non-log-convex tail is flagged unreliable") {
    auto seq = factorial_power_sequence(30, 1.0);
    seq[25] *= 40.0;  // dent the tail
    const auto est = estimate_sigma(seq);
    CHECK_FALSE(est.reliable);
}
