#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace roughvol {

struct BoxMinimizerOptions {
    int max_iterations = 500;
    double grad_tol = 1e-8;       ///< on the infinity norm of the projected gradient
    double rel_f_tol = 1e-12;     ///< relative objective change between accepted steps
    double fd_rel_step = 1e-6;    ///< central-difference step, relative to max(|x_i|, 1)
};

struct BoxMinimum {
    std::vector<double> x;
    double f = 0.0;
    double projected_gradient = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    std::string message;
};

/// Projected BFGS with finite-difference gradients and Armijo backtracking
/// along the projection arc. The start is clamped into [lower, upper].
BoxMinimum minimize_box(const std::function<double(std::span<const double>)>& f, std::vector<double> x0,
                        std::span<const double> lower, std::span<const double> upper,
                        const BoxMinimizerOptions& options = {});

}  // namespace roughvol
