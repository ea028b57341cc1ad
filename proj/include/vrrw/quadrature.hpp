#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vrrw {

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SimpsonResult {
    double value = 0;
    double error_estimate = 0;
    int evaluations = 0;
    bool converged = true;
};

// Adaptive Simpson on [a, b] with relative tolerance rel_tol (absolute
// floor abs_tol). Reports non-convergence instead of throwing.
SimpsonResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double rel_tol, double abs_tol = 0.0, int max_depth = 18);

// n-point Gauss-Legendre rule on [-1, 1]. Weights are rescaled so their
// floating-point sum is 1 (the rule integrates the mean over the interval).
struct GaussRule {
    std::vector<double> nodes;   // in (-1, 1)
    std::vector<double> weights; // sum to 1
};

const GaussRule& gauss_legendre(int n);

// Mean-normalised rule applied to [a, b]: (b - a) * sum_k w_k f(x_k) / sum_k w_k.
// Integrates constants exactly whenever b - a is exact.
double gauss_integrate(const GaussRule& rule, const std::function<double(double)>& f,
                       double a, double b);

} // namespace vrrw
