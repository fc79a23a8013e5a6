#include "roughvol/error.hpp"
#include "roughvol/frac_sim.hpp"
#include "roughvol/proxy.hpp"
#include "roughvol/scaling.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

namespace roughvol {
namespace {

std::vector<double> fbm(double hurst, std::size_t n, std::uint64_t seed) {
    const auto inc = simulate_fgn({hurst, n, 1.0, seed});
    std::vector<double> x(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) x[i + 1] = x[i] + inc.values[i];
    return x;
}

double scaling_h_of_simulation(double hurst, double eta, double alpha, std::uint64_t seed) {
    FouSpec spec;
    spec.hurst = hurst;
    spec.eta = eta;
    spec.alpha = alpha;
    spec.m = 78;
    spec.n_days = 2500;
    spec.seed = seed;
    const auto paths = simulate_fou_price(spec);
    const auto rv = realized_variance(paths.log_price, spec.m, spec.delta);
    const auto qs = default_scaling_qs();
    const auto lags = default_scaling_lags();
    return fit_scaling(log_volatility(rv.values), qs, lags).h_estimate;
}

TEST(StructureFunction, TrivialSeries) {
    const std::vector<double> flat(20, 1.5);
    EXPECT_EQ(structure_function(flat, 2.0, 3), 0.0);
    std::vector<double> alt(21);
    for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = static_cast<double>(i % 2);
    EXPECT_DOUBLE_EQ(structure_function(alt, 2.0, 1), 1.0);
    EXPECT_DOUBLE_EQ(structure_function(alt, 0.5, 2), 0.0);
}

TEST(StructureFunction, Errors) {
    const std::vector<double> x = {1.0, 2.0, 3.0};
    EXPECT_THROW(structure_function(x, 1.0, 3), ValidationError);
    EXPECT_THROW(structure_function(x, 0.0, 1), ValidationError);
    EXPECT_THROW(structure_function(x, 1.0, 0), ValidationError);
}

TEST(StructureFunction, SecondMomentOfFbm) {
    const auto x = fbm(0.3, 100000, 1);
    for (int lag : {1, 4, 16}) {
        // Sample mean of squared increments: relative MC error well below 5% at 1e5 points.
        EXPECT_NEAR(structure_function(x, 2.0, lag) / std::pow(lag, 0.6), 1.0, 0.05) << "lag=" << lag;
    }
}

TEST(StructureFunction, ShiftAndScale) {
    const auto x = fbm(0.2, 2000, 2);
    auto shifted = x, scaled = x;
    for (auto& v : shifted) v += 4.0;
    for (auto& v : scaled) v *= 3.0;
    const double base = structure_function(x, 1.5, 5);
    EXPECT_NEAR(structure_function(shifted, 1.5, 5), base, 1e-12 * base);
    EXPECT_NEAR(structure_function(scaled, 1.5, 5), std::pow(3.0, 1.5) * base, 1e-12 * base);
}

TEST(FitScaling, RecoversHurstOfFbm) {
    const auto x = fbm(0.3, 100000, 3);
    const auto qs = default_scaling_qs();
    const auto lags = default_scaling_lags();
    const auto fit = fit_scaling(x, qs, lags);
    EXPECT_NEAR(fit.h_estimate, 0.3, 0.02);
    EXPECT_GT(fit.r2_stage2, 0.99);
    for (double r2 : fit.r2_stage1) EXPECT_GT(r2, 0.99);
    // Monofractal: zeta_{2q} ~ 2 zeta_q for q = 0.5, 1, 1.5.
    EXPECT_NEAR(fit.zeta[1], 2.0 * fit.zeta[0], 0.02);
    EXPECT_NEAR(fit.zeta[4], 2.0 * fit.zeta[2], 0.04);
    EXPECT_NEAR(fit.h_with_intercept, 0.3, 0.03);
}

TEST(FitScaling, OrderInvariance) {
    const auto x = fbm(0.4, 5000, 4);
    const std::vector<double> qs = {0.5, 1.0, 2.0, 3.0};
    const std::vector<double> qs_rev = {3.0, 2.0, 1.0, 0.5};
    const std::vector<int> lags = {1, 2, 5, 10, 20};
    const auto a = fit_scaling(x, qs, lags);
    const auto b = fit_scaling(x, qs_rev, lags);
    EXPECT_NEAR(a.h_estimate, b.h_estimate, 1e-14);
    EXPECT_NEAR(a.zeta[0], b.zeta[3], 1e-14);
}

TEST(FitScaling, Errors) {
    const std::vector<double> flat(100, 0.0);
    const std::vector<double> qs = {1.0};
    const std::vector<int> lags = {1, 2};
    EXPECT_THROW(fit_scaling(flat, qs, lags), ValidationError);
    const auto x = fbm(0.3, 200, 5);
    EXPECT_THROW(fit_scaling(x, qs, std::vector<int>{1}), ValidationError);
    EXPECT_THROW(fit_scaling(x, std::vector<double>{}, lags), ValidationError);
    EXPECT_THROW(fit_scaling(x, qs, std::vector<int>{2, 1}), ValidationError);
}

TEST(FitScaling, RoughLookingFiveMinuteProxy) {
    // Very rough log-volatility (H = 0.03) is read as H of roughly 0.12 by the
    // regression on a 5-minute proxy.
    EXPECT_NEAR(scaling_h_of_simulation(0.03, 2.5, 0.005, 42), 0.12, 0.03);
}

TEST(FitScaling, SmoothVolatilityLooksRoughThroughProxy) {
    EXPECT_LT(scaling_h_of_simulation(0.5, 0.8, 10.0, 43), 0.15);
}

TEST(LogVolatility, HalvesLogVariance) {
    const std::vector<double> rv = {1.0, std::exp(2.0)};
    const auto lv = log_volatility(rv);
    EXPECT_DOUBLE_EQ(lv[0], 0.0);
    EXPECT_NEAR(lv[1], 1.0, 1e-15);
    EXPECT_THROW(log_volatility(std::vector<double>{0.0}), ValidationError);
}

}  // namespace
}  // namespace roughvol
