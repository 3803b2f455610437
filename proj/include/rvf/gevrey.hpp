#pragma once

// Numerical Gevrey norms over derivative-magnitude sequences and estimation
// of the class exponent sigma from factorial-power growth.
//
// The sequence entry seq[k] stands for |D^k u|; normalization constants are
// taken to be 1, so only growth rates are meaningful (which is all the
// admissibility classification needs).

#include <vector>

#include "rvf/errors.hpp"

namespace rvf {

struct GevreyNormResult {
    double value = 0.0;   // sup over a of (1+a)^{-sigma} seq[m+a]^{1/(1+a)}
    int argmax = 0;
    bool diverging = false;  // tail growth heuristic: the sup is unbounded in K
};

// discrete sup over available orders; throws InsufficientOrders when K <= m
GevreyNormResult gevrey_norm(const std::vector<double>& seq, int m, double sigma);

struct SigmaEstimate {
    double sigma_hat = 0.0;
    double ci_halfwidth = 0.0;   // 95% interval from the fit residuals
    bool reliable = true;        // false when the log-sequence tail is not convex
    bool entire = false;         // growth clearly below any factorial power
    bool admissible_w2 = false;  // sigma_hat < 2, the w = 2 admissibility rule
};

// least-squares fit of log seq[k] against sigma * k log k + c * k + d
SigmaEstimate estimate_sigma(const std::vector<double>& seq);

} // namespace rvf
