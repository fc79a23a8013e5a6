#include "roughvol/error.hpp"
#include "roughvol/quadrature.hpp"
#include "roughvol/whittle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace roughvol {

double objective_oracle(const LogRvIncrements& y, double hurst, double nu, const SpectralConfig& config) {
    constexpr double kPi = std::numbers::pi;
    config.validate();
    if (y.y.empty()) throw ValidationError("objective_oracle: empty series");
    if (!(hurst >= 0.03 && hurst < 1.0)) throw std::domain_error("objective_oracle: requires 0.03 <= H < 1");
    if (!(nu > 0.0)) throw std::domain_error("objective_oracle: nu must be > 0");
    if (y.m < 1) throw std::domain_error("objective_oracle: m must be >= 1");

    const double n = static_cast<double>(y.size());
    const double weight = 2.0 / y.m;
    const double nu2 = nu * nu;
    auto integrand = [&](double lambda) {
        const double g = nu2 * f_h(lambda, hurst, config.paxson_k) + weight * ell(lambda);
        return std::log(g) + periodogram(y.y, lambda) / g;
    };

    // (0, lambda_a]: lambda = lambda_a e^{-x}; the Jacobian lambda tames the
    // log and power singularities at the origin.
    const double lambda_a = std::min(0.1 / n, 0.1);
    const double x_max = std::min(40.0 / (2.0 * hurst), std::log(lambda_a) + 690.0);
    std::vector<double> xs;
    const auto nx = static_cast<std::size_t>(std::ceil(x_max / 0.5));
    for (std::size_t i = 0; i <= nx; ++i) xs.push_back(x_max * static_cast<double>(i) / static_cast<double>(nx));
    const double near_zero = integrate_gauss_legendre(
        [&](double x) {
            const double lambda = lambda_a * std::exp(-x);
            return integrand(lambda) * lambda;
        },
        xs);

    // [lambda_a, pi]: geometric panels, then a uniform grid resolving the
    // periodogram oscillation.
    const double width = kPi / (2.0 * n);
    std::vector<double> breaks = {lambda_a};
    while (breaks.back() < width && breaks.back() < kPi) breaks.push_back(std::min(2.0 * breaks.back(), kPi));
    const double start = breaks.back();
    if (start < kPi) {
        const auto count = static_cast<std::size_t>(std::ceil((kPi - start) / width));
        for (std::size_t i = 1; i <= count; ++i) {
            breaks.push_back(i == count ? kPi : start + (kPi - start) * static_cast<double>(i) / static_cast<double>(count));
        }
    }
    const double bulk = integrate_gauss_legendre(integrand, breaks);
    return (near_zero + bulk) / (2.0 * kPi);
}

}  // namespace roughvol
