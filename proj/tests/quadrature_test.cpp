#include "roughvol/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace roughvol {
namespace {

TEST(Gk21, NodesAndWeights) {
    double wk = 0.0, wg = 0.0;
    for (std::size_t i = 0; i < Gk21::kPoints; ++i) {
        wk += Gk21::kronrod_weights()[i];
        wg += Gk21::gauss_weights()[i];
        EXPECT_NEAR(Gk21::nodes()[i], -Gk21::nodes()[Gk21::kPoints - 1 - i], 1e-16);
    }
    EXPECT_NEAR(wk, 2.0, 1e-14);
    EXPECT_NEAR(wg, 2.0, 1e-14);
}

TEST(Gk21, ExactForHighDegreePolynomials) {
    // Kronrod 21 is exact through degree 31.
    std::array<double, Gk21::kPoints> f{};
    const double a = -0.3, b = 1.7;
    for (std::size_t i = 0; i < Gk21::kPoints; ++i) f[i] = std::pow(Gk21::node(i, a, b), 30);
    const auto est = gk21_combine(f, a, b);
    const double exact = (std::pow(b, 31) - std::pow(a, 31)) / 31.0;
    EXPECT_NEAR(est.value, exact, 1e-13 * exact);
}

TEST(IntegrateAdaptive, SmoothAndSingularIntegrands) {
    const double breaks[] = {0.0, 1.0};
    auto q = integrate_adaptive([](double x) { return std::exp(x); }, breaks, 1e-12, 1e-12);
    EXPECT_TRUE(q.converged);
    EXPECT_NEAR(q.value, std::exp(1.0) - 1.0, 1e-13);
    q = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, breaks, 1e-10, 1e-10);
    EXPECT_TRUE(q.converged);
    EXPECT_NEAR(q.value, 2.0, 1e-9);
    q = integrate_adaptive([](double x) { return std::log(x); }, breaks, 1e-12, 1e-12);
    EXPECT_NEAR(q.value, -1.0, 1e-11);
}

TEST(IntegrateAdaptive, ReportsNonConvergence) {
    const double breaks[] = {0.0, 1.0};
    const auto q = integrate_adaptive([](double x) { return std::sin(1.0 / (x + 1e-6)); }, breaks, 1e-15, 1e-15, 10);
    EXPECT_FALSE(q.converged);
    EXPECT_LE(q.panels, 10u);
}

TEST(IntegrateGaussLegendre, CompositeRule) {
    std::vector<double> breaks;
    for (int i = 0; i <= 8; ++i) breaks.push_back(std::numbers::pi * i / 8.0);
    const double v = integrate_gauss_legendre([](double x) { return std::sin(x); }, breaks);
    EXPECT_NEAR(v, 2.0, 1e-14);
    const double breaks2[] = {0.0, 2.0};
    EXPECT_NEAR(integrate_gauss_legendre([](double x) { return std::pow(x, 39); }, breaks2), std::pow(2.0, 40) / 40.0,
                1e-9 * std::pow(2.0, 40) / 40.0);
}

}  // namespace
}  // namespace roughvol
