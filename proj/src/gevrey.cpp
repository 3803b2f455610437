#include "rvf/gevrey.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace rvf {

GevreyNormResult gevrey_norm(const std::vector<double>& seq, int m, double sigma) {
    if (m < 0) throw DomainError("gevrey_norm needs m >= 0");
    if (sigma < 1.0) throw DomainError("gevrey_norm needs sigma >= 1");
    const int K = (int)seq.size() - 1;
    if (K <= m) throw InsufficientOrders("need derivative orders beyond m");
    for (double v : seq)
        if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("sequence entries must be finite and non-negative");

    GevreyNormResult out;
    std::vector<double> terms;
    for (int a = 0; a + m <= K; ++a) {
        const double t = std::pow(1.0 + a, -sigma) * std::pow(seq[m + a], 1.0 / (1.0 + a));
        terms.push_back(t);
        if (t > out.value) {
            out.value = t;
            out.argmax = a;
        }
    }

    // divergence heuristic: the sup sits at the last order and the tail of
    // log(term) grows against log(1+a) with a clearly positive slope
    const int n = (int)terms.size();
    if (out.argmax == n - 1 && n >= 6) {
        const int lo = 2 * n / 3;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int cnt = 0;
        for (int a = lo; a < n; ++a) {
            if (terms[a] <= 0.0) continue;
            const double x = std::log(1.0 + a), y = std::log(terms[a]);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
            ++cnt;
        }
        if (cnt >= 3) {
            const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
            out.diverging = slope > 0.5;
        }
    }
    return out;
}

SigmaEstimate estimate_sigma(const std::vector<double>& seq) {
    const int K = (int)seq.size() - 1;
    if (K < 10) throw InsufficientOrders("sigma estimation needs K >= 10");

    std::vector<double> logv(K + 1);
    for (int k = 0; k <= K; ++k) {
        if (!(seq[k] > 0.0)) throw DomainError("sigma estimation needs positive entries");
        logv[k] = std::log(seq[k]);
    }

    SigmaEstimate out;

    // log-convexity of the tail; estimation is unreliable without it
    const int tail_start = K / 2;
    for (int k = std::max(1, tail_start); k + 1 <= K; ++k) {
        const double second = logv[k + 1] - 2.0 * logv[k] + logv[k - 1];
        if (second < -1e-9 * std::max(1.0, std::abs(logv[k]))) {
            out.reliable = false;
            break;
        }
    }

    const int n = K;  // fit on k = 1..K
    Eigen::MatrixXd X(n, 3);
    Eigen::VectorXd y(n);
    for (int k = 1; k <= K; ++k) {
        X(k - 1, 0) = k * std::log((double)k);
        X(k - 1, 1) = k;
        X(k - 1, 2) = 1.0;
        y(k - 1) = logv[k];
    }
    const Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
    out.sigma_hat = beta[0];

    const Eigen::VectorXd res = y - X * beta;
    const double dof = std::max(1.0, double(n - 3));
    const double s2 = res.squaredNorm() / dof;
    const Eigen::MatrixXd cov = s2 * (X.transpose() * X).inverse();
    out.ci_halfwidth = 1.96 * std::sqrt(std::max(0.0, cov(0, 0)));

    out.entire = out.sigma_hat < 0.5;
    out.admissible_w2 = out.sigma_hat < 2.0;
    return out;
}

} // namespace rvf
