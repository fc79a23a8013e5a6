#pragma once

#include <cstdint>
#include <vector>

namespace roughvol {

/// Driving noise specification: n_steps increments of fBm on a grid of step dt.
struct FgnSpec {
    double hurst = 0.5;
    std::size_t n_steps = 1;
    double dt = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Fractional Ornstein-Uhlenbeck log-variance driving a driftless log-price.
///
///   d log S_u      = sigma_u dB_u
///   d log sigma^2_u = alpha (c - log sigma^2_u) du + eta dW^H_u
///
/// Time is measured in years of business time; one day has length delta and is
/// sampled at m equidistant points (times `substeps` for a finer simulation grid).
struct FouSpec {
    double alpha = 0.001;
    double c = -3.2;
    double eta = 1.0;
    double hurst = 0.1;
    double logvar0 = -3.2;
    double s0 = 100.0;
    double delta = 1.0 / 250.0;
    int m = 80;
    int n_days = 2501;
    int substeps = 1;
    double overflow_bound = 50.0;
    std::uint64_t seed = 0;

    void validate() const;
    std::size_t n_steps() const;
    double dt() const;
};

enum class PathKind { log_price, log_variance, increments };

struct GridPath {
    std::vector<double> values;
    double dt = 1.0;
    double t0 = 0.0;
    PathKind kind = PathKind::log_price;

    std::size_t size() const noexcept { return values.size(); }
    double time(std::size_t i) const noexcept { return t0 + dt * static_cast<double>(i); }
};

struct FouPaths {
    GridPath log_variance;
    GridPath log_price;
};

/// Autocovariance of unit-step, unit-variance fractional Gaussian noise.
double fgn_autocovariance(double hurst, long long lag);

enum class FgnMethod { automatic, cholesky };

/// Exact fGn sampler by circulant embedding. Construction computes the
/// embedding spectrum once; sample() is const and reentrant.
///
/// If the embedding has an eigenvalue below -1e-10 the generator falls back to
/// a Cholesky factor of the exact covariance (n_steps <= 8192 only).
/// FgnMethod::cholesky forces the fallback route.
class FgnGenerator {
public:
    FgnGenerator(double hurst, std::size_t n_steps, double dt, FgnMethod method = FgnMethod::automatic);

    /// n_steps increments, each N(0, dt^{2H}), stationary with the fGn ACF.
    std::vector<double> sample(std::uint64_t seed) const;

    double hurst() const noexcept { return hurst_; }
    std::size_t n_steps() const noexcept { return n_; }
    double dt() const noexcept { return dt_; }
    bool uses_cholesky() const noexcept { return !chol_.empty(); }

private:
    bool try_circulant();
    void build_cholesky();

    double hurst_;
    std::size_t n_;
    double dt_;
    double scale_;
    std::size_t embed_size_ = 0;
    std::vector<double> sqrt_eig_;  // sqrt(lambda_k / M), circulant route
    std::vector<double> chol_;      // packed lower factor, fallback route
};

GridPath simulate_fgn(const FgnSpec& spec);

/// Reusable Euler-Maruyama simulator: the fGn embedding is shared across seeds.
class FouSimulator {
public:
    explicit FouSimulator(const FouSpec& spec);

    FouPaths simulate(std::uint64_t seed) const;
    const FouSpec& spec() const noexcept { return spec_; }

private:
    FouSpec spec_;
    FgnGenerator fgn_;
};

FouPaths simulate_fou_price(const FouSpec& spec);

/// Seeds of the two independent random streams derived from one user seed.
std::uint64_t volatility_stream_seed(std::uint64_t seed);
std::uint64_t price_stream_seed(std::uint64_t seed);

/// SplitMix64 finalizer; used for all seed derivations.
std::uint64_t mix64(std::uint64_t x);

}  // namespace roughvol
