#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>

namespace roughvol {

/// 21-point Gauss-Kronrod rule on [-1, 1] (10-point Gauss embedded).
struct Gk21 {
    static constexpr std::size_t kPoints = 21;
    static const std::array<double, kPoints>& nodes();
    static const std::array<double, kPoints>& kronrod_weights();
    static const std::array<double, kPoints>& gauss_weights();  ///< zero on Kronrod-only nodes

    /// Maps node i to [a, b].
    static double node(std::size_t i, double a, double b) {
        return 0.5 * (a + b) + 0.5 * (b - a) * nodes()[i];
    }
};

struct PanelEstimate {
    double value = 0.0;
    double error = 0.0;
};

/// Combines integrand values at the 21 mapped nodes of [a, b] into the Kronrod
/// estimate and a QUADPACK-style error estimate.
PanelEstimate gk21_combine(std::span<const double, Gk21::kPoints> f, double a, double b);

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t panels = 0;
    bool converged = false;
};

/// Globally adaptive Gauss-Kronrod integration starting from the partition
/// given by `breakpoints` (sorted, at least two entries). Bisects the panel with
/// the largest error until the total error is below max(abs_tol, rel_tol |I|)
/// or `max_panels` is reached.
QuadResult integrate_adaptive(const std::function<double(double)>& f, std::span<const double> breakpoints,
                              double abs_tol, double rel_tol, std::size_t max_panels = 20000);

/// Composite 20-point Gauss-Legendre over the given panel boundaries.
double integrate_gauss_legendre(const std::function<double(double)>& f, std::span<const double> breakpoints);

}  // namespace roughvol
