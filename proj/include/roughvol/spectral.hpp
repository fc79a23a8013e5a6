#pragma once

#include <span>
#include <vector>

namespace roughvol {

/// Truncation and quadrature controls for the Whittle objective.
struct SpectralConfig {
    int paxson_k = 500;       ///< alias terms summed explicitly before the tail correction
    int taylor_j = 20;        ///< terms kept in the low-frequency cosine expansion
    double psi = 1e-5;        ///< cut frequency below which series corrections replace quadrature
    double quad_rel_tol = 1e-8;
    double quad_abs_tol = 1e-10;
    /// Largest noise-to-signal ratio of g at the cut for which the closed-form
    /// corrections are used as is; beyond it the cut moves down and the gap is
    /// integrated. Infinity keeps the corrections at psi unconditionally.
    double series_ratio_limit = 1e-3;

    void validate() const;
};

/// C_H = Gamma(2H+1) sin(pi H) / (2 pi); returns 0 at the H = 1 limit.
double c_h(double hurst);

/// Spectral density of daily averages of fBm increments (Paxson truncation
/// with K explicit alias pairs plus an integral tail). Even in lambda.
/// At lambda = 0 returns the analytic limit for H <= 1/2, throws for H > 1/2.
double f_h(double lambda, double hurst, int paxson_k);

/// Same series as f_h, reorganised for repeated evaluation at one H: alias
/// pairs beyond the first few are summed through per-H power moments.
class PaxsonDensity {
public:
    PaxsonDensity(double hurst, int paxson_k);

    double operator()(double lambda) const;
    double hurst() const noexcept { return hurst_; }
    double c_h() const noexcept { return c_h_; }

private:
    static constexpr int kDirectPairs = 4;
    static constexpr int kMoments = 14;

    double hurst_;
    int k_;
    double c_h_;
    double a_;  // 3 + 2H
    double b_;  // 2 + 2H
    double moments_[kMoments] = {};  // sum_k binom_i (2 pi k)^{-a-2i} for k > kDirectPairs
    double tail_[kMoments] = {};     // expansion of the d2 correction at K and K+1
};

/// Spectral density of the first difference of unit-variance white noise, (1 - cos lambda) / pi.
double ell(double lambda);

/// g(lambda) = nu^2 f_H(lambda) + (2/m) ell(lambda) with nu = eta delta^H.
struct ModelSpectrum {
    double hurst = 0.5;
    double nu = 1.0;
    int m = 1;
    SpectralConfig config{};

    void validate() const;
};

double g_spectrum(const ModelSpectrum& spectrum, double lambda);

/// I_n(lambda, y) = |sum_{t=1}^n y_t exp(i t lambda)|^2 / (2 pi n), evaluated by a
/// Goertzel recurrence with Reinsch's modification (stable near 0 and pi).
double periodogram(std::span<const double> y, double lambda);

/// Biased sample autocovariance (1/n) sum_t y_t y_{t+tau}, tau = 0..n-1, via FFT.
std::vector<double> autocovariance_hat(std::span<const double> y);

}  // namespace roughvol
