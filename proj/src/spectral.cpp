#include "roughvol/spectral.hpp"

#include "fft.hpp"
#include "roughvol/error.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace roughvol {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_hurst(double hurst, const char* who) {
    if (!(hurst > 0.0 && hurst <= 1.0)) {
        throw std::domain_error(std::string(who) + ": hurst must lie in (0, 1], got " + std::to_string(hurst));
    }
}

double check_lambda(double lambda, const char* who) {
    const double x = std::abs(lambda);
    if (!(x <= kPi * (1.0 + 1e-12))) {
        throw std::domain_error(std::string(who) + ": lambda must lie in [-pi, pi], got " + std::to_string(lambda));
    }
    return std::min(x, kPi);
}

/// (2 (1 - cos x))^2 |x|^{-3-2H} written to avoid cancellation and overflow near 0.
double leading_alias(double x, double hurst) {
    const double half = 0.5 * x;
    const double sinc = std::sin(half) / half;
    const double s2 = sinc * sinc;
    return s2 * s2 * std::pow(x, 1.0 - 2.0 * hurst);
}

double window(double x) {
    const double s = std::sin(0.5 * x);
    const double w = 4.0 * s * s;  // 2 (1 - cos x)
    return w * w;
}

double d1(double k, double x, double a) { return std::pow(kTwoPi * k + x, -a) + std::pow(kTwoPi * k - x, -a); }

double d2(double k, double x, double b) {
    return (std::pow(kTwoPi * k + x, -b) + std::pow(kTwoPi * k - x, -b)) / (kTwoPi * b);
}

}  // namespace

void SpectralConfig::validate() const {
    if (paxson_k < 1) throw ValidationError("SpectralConfig: paxson_k must be >= 1");
    if (taylor_j < 1) throw ValidationError("SpectralConfig: taylor_j must be >= 1");
    if (!(psi > 0.0 && psi <= kPi)) throw ValidationError("SpectralConfig: psi must lie in (0, pi]");
    if (!(quad_rel_tol > 0.0) || !(quad_abs_tol > 0.0)) {
        throw ValidationError("SpectralConfig: quadrature tolerances must be > 0");
    }
    if (!(series_ratio_limit > 0.0)) throw ValidationError("SpectralConfig: series_ratio_limit must be > 0");
}

double c_h(double hurst) {
    if (!(hurst > 0.0)) throw std::domain_error("c_h: hurst must be > 0, got " + std::to_string(hurst));
    if (hurst > 1.0) throw std::domain_error("c_h: hurst must be <= 1, got " + std::to_string(hurst));
    // sin(pi H) = sin(pi (1 - H)) is exactly zero at H = 1.
    const double s = std::sin(kPi * std::min(hurst, 1.0 - hurst));
    return std::tgamma(2.0 * hurst + 1.0) * s / kTwoPi;
}

double f_h(double lambda, double hurst, int paxson_k) {
    check_hurst(hurst, "f_h");
    if (paxson_k < 1) throw std::domain_error("f_h: K must be >= 1");
    const double x = check_lambda(lambda, "f_h");
    const double ch = c_h(hurst);
    if (x == 0.0) {
        if (hurst < 0.5) return 0.0;
        if (hurst == 0.5) return ch;
        throw std::domain_error("f_h: density diverges at lambda = 0 for H > 1/2");
    }
    const double a = 3.0 + 2.0 * hurst;
    const double b = 2.0 + 2.0 * hurst;
    double alias = 0.0;
    for (int k = paxson_k; k >= 1; --k) alias += d1(k, x, a);
    alias += 0.5 * (d2(paxson_k, x, b) + d2(paxson_k + 1.0, x, b));
    return ch * (leading_alias(x, hurst) + window(x) * alias);
}

PaxsonDensity::PaxsonDensity(double hurst, int paxson_k)
    : hurst_(hurst), k_(paxson_k), c_h_(0.0), a_(3.0 + 2.0 * hurst), b_(2.0 + 2.0 * hurst) {
    check_hurst(hurst, "PaxsonDensity");
    if (paxson_k < 1) throw std::domain_error("PaxsonDensity: K must be >= 1");
    c_h_ = roughvol::c_h(hurst);

    // (2 pi k + x)^{-a} + (2 pi k - x)^{-a} = 2 sum_i binom(a, i) x^{2i} (2 pi k)^{-a-2i},
    // binom(a, i) = a (a+1) ... (a+2i-1) / (2i)!. Converges fast once 2 pi k >> pi.
    auto rising = [](double p, int i) {
        double c = 1.0;
        for (int j = 0; j < 2 * i; ++j) c *= (p + j) / (j + 1.0);
        return c;
    };
    for (int k = k_; k > kDirectPairs; --k) {
        const double base = kTwoPi * k;
        const double q = 1.0 / (base * base);
        double p = std::pow(base, -a_);
        for (int i = 0; i < kMoments; ++i) {
            moments_[i] += p;
            p *= q;
        }
    }
    if (k_ > kDirectPairs) {
        for (int xk : {k_, k_ + 1}) {
            const double base = kTwoPi * xk;
            const double q = 1.0 / (base * base);
            double p = std::pow(base, -b_);
            for (int i = 0; i < kMoments; ++i) {
                tail_[i] += 0.5 * p / (kTwoPi * b_);
                p *= q;
            }
        }
    }
    for (int i = 0; i < kMoments; ++i) {
        moments_[i] *= 2.0 * rising(a_, i);
        tail_[i] *= 2.0 * rising(b_, i);
    }
}

double PaxsonDensity::operator()(double lambda) const {
    const double x = check_lambda(lambda, "PaxsonDensity");
    if (x == 0.0) return f_h(0.0, hurst_, k_);

    double alias = 0.0;
    const int direct = std::min(k_, kDirectPairs);
    for (int k = direct; k >= 1; --k) alias += d1(k, x, a_);
    if (k_ > kDirectPairs) {
        const double x2 = x * x;
        double series = 0.0;
        for (int i = kMoments - 1; i >= 0; --i) series = series * x2 + (moments_[i] + tail_[i]);
        alias += series;
    } else {
        alias += 0.5 * (d2(k_, x, b_) + d2(k_ + 1.0, x, b_));
    }
    return c_h_ * (leading_alias(x, hurst_) + window(x) * alias);
}

double ell(double lambda) {
    const double s = std::sin(0.5 * lambda);
    return 2.0 * s * s / kPi;
}

void ModelSpectrum::validate() const {
    check_hurst(hurst, "ModelSpectrum");
    if (!(nu >= 0.0) || !std::isfinite(nu)) throw std::domain_error("ModelSpectrum: nu must be >= 0");
    if (m < 1) throw std::domain_error("ModelSpectrum: m must be >= 1");
    config.validate();
}

double g_spectrum(const ModelSpectrum& spectrum, double lambda) {
    spectrum.validate();
    const double noise = 2.0 / spectrum.m * ell(lambda);
    if (spectrum.nu == 0.0) return noise;
    return spectrum.nu * spectrum.nu * f_h(lambda, spectrum.hurst, spectrum.config.paxson_k) + noise;
}

double periodogram(std::span<const double> y, double lambda) {
    const std::size_t n = y.size();
    if (n == 0) return 0.0;
    const double x = std::cos(lambda);
    double b1 = 0.0;   // b_{k+1}
    double cosine = 0.0;
    if (x >= 0.0) {
        const double s = std::sin(0.5 * lambda);
        const double mu = -4.0 * s * s;
        double d = 0.0;  // b_{k+1} - b_{k+2}
        for (std::size_t k = n; k >= 1; --k) {
            d = y[k - 1] + mu * b1 + d;
            b1 = d + b1;
        }
        cosine = 0.5 * mu * b1 + d;
    } else {
        const double c = std::cos(0.5 * lambda);
        const double nu = 4.0 * c * c;
        double e = 0.0;  // b_{k+1} + b_{k+2}
        for (std::size_t k = n; k >= 1; --k) {
            e = y[k - 1] + nu * b1 - e;
            b1 = e - b1;
        }
        cosine = 0.5 * nu * b1 - e;
    }
    const double sine = b1 * std::sin(lambda);
    return (cosine * cosine + sine * sine) / (kTwoPi * static_cast<double>(n));
}

std::vector<double> autocovariance_hat(std::span<const double> y) {
    const std::size_t n = y.size();
    if (n == 0) return {};
    const std::size_t len = detail::good_fft_size(2 * n);
    std::vector<double> padded(len, 0.0);
    std::copy(y.begin(), y.end(), padded.begin());
    auto spec = detail::rfft(padded);
    for (auto& z : spec) z = std::norm(z);
    const auto r = detail::irfft(spec, len);
    std::vector<double> gamma(n);
    const double scale = 1.0 / (static_cast<double>(len) * static_cast<double>(n));
    for (std::size_t tau = 0; tau < n; ++tau) gamma[tau] = r[tau] * scale;
    return gamma;
}

}  // namespace roughvol
