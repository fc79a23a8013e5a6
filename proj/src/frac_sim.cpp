#include "roughvol/frac_sim.hpp"

#include "fft.hpp"
#include "roughvol/error.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>
#include <string>

namespace roughvol {

namespace {

constexpr std::uint64_t kVolatilityStream = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kPriceStream = 0xd1b54a32d192ed03ULL;
constexpr std::size_t kCholeskyLimit = 8192;
constexpr double kEmbeddingTolerance = -1e-10;

void check_hurst(double hurst) {
    if (!(hurst > 0.0 && hurst <= 1.0)) {
        throw std::domain_error("hurst must lie in (0, 1], got " + std::to_string(hurst));
    }
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t volatility_stream_seed(std::uint64_t seed) { return mix64(seed ^ kVolatilityStream); }
std::uint64_t price_stream_seed(std::uint64_t seed) { return mix64(seed ^ kPriceStream); }

void FgnSpec::validate() const {
    check_hurst(hurst);
    if (n_steps < 1) throw ValidationError("FgnSpec: n_steps must be >= 1");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("FgnSpec: dt must be positive");
}

void FouSpec::validate() const {
    check_hurst(hurst);
    if (!(alpha >= 0.0)) throw ValidationError("FouSpec: alpha must be >= 0");
    if (!(eta > 0.0)) throw ValidationError("FouSpec: eta must be > 0");
    if (m < 1) throw ValidationError("FouSpec: m must be >= 1");
    if (!(delta > 0.0)) throw ValidationError("FouSpec: delta must be > 0");
    if (n_days < 1) throw ValidationError("FouSpec: n_days must be >= 1");
    if (substeps < 1) throw ValidationError("FouSpec: substeps must be >= 1");
    if (!(overflow_bound > 0.0)) throw ValidationError("FouSpec: overflow_bound must be > 0");
    if (!(s0 > 0.0)) throw ValidationError("FouSpec: s0 must be > 0");
    if (!std::isfinite(c) || !std::isfinite(logvar0)) throw ValidationError("FouSpec: c and logvar0 must be finite");
}

std::size_t FouSpec::n_steps() const {
    return static_cast<std::size_t>(n_days) * static_cast<std::size_t>(m) * static_cast<std::size_t>(substeps);
}

double FouSpec::dt() const { return delta / (static_cast<double>(m) * static_cast<double>(substeps)); }

double fgn_autocovariance(double hurst, long long lag) {
    check_hurst(hurst);
    const double tau = std::abs(static_cast<double>(lag));
    const double two_h = 2.0 * hurst;
    return 0.5 * (std::pow(tau + 1.0, two_h) - 2.0 * std::pow(tau, two_h) + std::pow(std::abs(tau - 1.0), two_h));
}

FgnGenerator::FgnGenerator(double hurst, std::size_t n_steps, double dt, FgnMethod method)
    : hurst_(hurst), n_(n_steps), dt_(dt), scale_(0.0) {
    FgnSpec{hurst, n_steps, dt, 0}.validate();
    scale_ = std::pow(dt, hurst);
    if (method == FgnMethod::automatic) {
        if (hurst == 0.5 || n_ == 1) return;  // independent increments
        if (try_circulant()) return;
        if (n_ > kCholeskyLimit) {
            throw NumericalError("fGn synthesis: circulant embedding is not nonnegative-definite and n_steps=" +
                                 std::to_string(n_) + " exceeds the Cholesky fallback limit");
        }
    }
    build_cholesky();
}

bool FgnGenerator::try_circulant() {
    const std::size_t m = detail::good_fft_size(2 * n_);
    std::vector<double> row(m);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t lag = std::min(k, m - k);
        row[k] = fgn_autocovariance(hurst_, static_cast<long long>(lag));
    }
    const auto eig = detail::rfft(row);
    std::vector<double> root(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double v = (k <= m / 2 ? eig[k] : std::conj(eig[m - k])).real();
        if (v < kEmbeddingTolerance) return false;
        root[k] = std::sqrt(std::max(v, 0.0) / static_cast<double>(m));
    }
    embed_size_ = m;
    sqrt_eig_ = std::move(root);
    return true;
}

void FgnGenerator::build_cholesky() {
    if (n_ > kCholeskyLimit) {
        throw NumericalError("fGn synthesis: Cholesky route limited to n_steps <= 8192");
    }
    Eigen::MatrixXd cov(n_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            cov(i, j) = fgn_autocovariance(hurst_, static_cast<long long>(i) - static_cast<long long>(j));
        }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("fGn synthesis: covariance matrix is not positive definite");
    }
    const Eigen::MatrixXd l = llt.matrixL();
    chol_.reserve(n_ * (n_ + 1) / 2);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j <= i; ++j) chol_.push_back(l(i, j));
    }
}

std::vector<double> FgnGenerator::sample(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<double> out(n_);

    if (!chol_.empty()) {
        std::vector<double> z(n_);
        for (auto& v : z) v = normal(rng);
        std::size_t idx = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j <= i; ++j) acc += chol_[idx++] * z[j];
            out[i] = scale_ * acc;
        }
        return out;
    }
    if (sqrt_eig_.empty()) {
        for (auto& v : out) v = scale_ * normal(rng);
        return out;
    }

    std::vector<std::complex<double>> w(embed_size_);
    for (std::size_t k = 0; k < embed_size_; ++k) {
        const double a = normal(rng);
        const double b = normal(rng);
        w[k] = sqrt_eig_[k] * std::complex<double>(a, b);
    }
    detail::fft_forward(w);
    for (std::size_t i = 0; i < n_; ++i) out[i] = scale_ * w[i].real();
    return out;
}

GridPath simulate_fgn(const FgnSpec& spec) {
    spec.validate();
    FgnGenerator gen(spec.hurst, spec.n_steps, spec.dt);
    return GridPath{gen.sample(spec.seed), spec.dt, 0.0, PathKind::increments};
}

FouSimulator::FouSimulator(const FouSpec& spec)
    : spec_((spec.validate(), spec)), fgn_(spec.hurst, spec.n_steps(), spec.dt()) {}

FouPaths FouSimulator::simulate(std::uint64_t seed) const {
    const std::size_t n = spec_.n_steps();
    const double dt = spec_.dt();
    const double sqrt_dt = std::sqrt(dt);
    const std::vector<double> dw = fgn_.sample(volatility_stream_seed(seed));

    std::mt19937_64 rng(price_stream_seed(seed));
    std::normal_distribution<double> normal;

    FouPaths out;
    out.log_variance = GridPath{std::vector<double>(n + 1), dt, 0.0, PathKind::log_variance};
    out.log_price = GridPath{std::vector<double>(n + 1), dt, 0.0, PathKind::log_price};
    auto& v = out.log_variance.values;
    auto& x = out.log_price.values;
    v[0] = spec_.logvar0;
    x[0] = std::log(spec_.s0);
    for (std::size_t k = 0; k < n; ++k) {
        v[k + 1] = v[k] + spec_.alpha * (spec_.c - v[k]) * dt + spec_.eta * dw[k];
        if (!(std::abs(v[k + 1]) <= spec_.overflow_bound)) {
            throw NumericalError("fOU simulation: |log variance| exceeded " + std::to_string(spec_.overflow_bound) +
                                 " at step " + std::to_string(k + 1));
        }
        x[k + 1] = x[k] + std::exp(0.5 * v[k]) * sqrt_dt * normal(rng);
    }
    return out;
}

FouPaths simulate_fou_price(const FouSpec& spec) { return FouSimulator(spec).simulate(spec.seed); }

}  // namespace roughvol
