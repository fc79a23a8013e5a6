#pragma once

#include "roughvol/optimizer.hpp"
#include "roughvol/proxy.hpp"
#include "roughvol/spectral.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace roughvol {

/// Parameter box Theta_H x Theta_eta. The nu-box follows from delta.
struct ParamBox {
    double h_min = 0.001;
    double h_max = 0.99;
    double eta_min = 0.1;
    double eta_max = 10.0;

    void validate() const;
    double nu_min(double delta) const;  ///< eta_min delta^{h_max}
    double nu_max(double delta) const;  ///< eta_max delta^{h_min}
};

struct StartPoint {
    double hurst = 0.1;
    double nu = 1.0;
};

/// Outcome of one local minimisation.
struct StartOutcome {
    StartPoint start;
    double h_hat = 0.0;
    double nu_hat = 0.0;
    double objective = 0.0;
    bool converged = false;
    bool failed = false;
    int iterations = 0;
    int evaluations = 0;
    std::string message;
};

struct WhittleFit {
    double h_hat = 0.0;
    double nu_hat = 0.0;
    double eta_hat = 0.0;
    double objective = 0.0;
    int n_starts = 0;
    bool converged = false;
    StartPoint start_used;
    double delta = 0.0;
    int m = 0;
    std::vector<StartOutcome> outcomes;
    std::vector<std::string> warnings;
};

/// Low-frequency coefficient a_{H,nu}(tau, psi, J): the J-term cosine
/// expansion of (1/2pi) int_0^psi cos(tau lambda) / g(lambda) d lambda.
double a_coefficient(double hurst, double nu, long long tau, double psi, int taylor_j, int m);

/// Bound on the truncation error of a_coefficient over tau < n.
double a_truncation_bound(double hurst, double nu, std::size_t n, double psi, int taylor_j, int m);

/// Closed-form replacement of (1/2pi) int_0^psi log g(lambda) d lambda.
double correction_a1(double hurst, double nu, double psi, int m);

/// Replacement of (1/2pi) int_0^psi I_n(lambda) / g(lambda) d lambda from the
/// sample autocovariances.
double correction_a2(double hurst, double nu, double psi, int taylor_j, int m, std::span<const double> gamma_hat);

struct ObjectiveValue {
    double value = 0.0;
    double integral = 0.0;       ///< (1/2pi) int_cut^pi (log g + I/g)
    double cut = 0.0;            ///< psi, or lower where noise dominates g at psi
    double a1 = 0.0;
    double a2 = 0.0;
    double quad_error = 0.0;     ///< absolute error estimate on `integral`
    bool quad_converged = true;
    bool truncation_ok = true;   ///< a_truncation_bound <= 1e-10
};

/// Whittle contrast U_n(H, nu) for one series. Construction precomputes the
/// sample autocovariance and the periodogram on a fixed Gauss-Kronrod panel
/// grid over [psi, pi]; evaluation is const and safe to call concurrently.
class WhittleObjective {
public:
    WhittleObjective(std::span<const double> y, int m, const SpectralConfig& config = {});
    explicit WhittleObjective(const LogRvIncrements& y, const SpectralConfig& config = {})
        : WhittleObjective(y.y, y.m, config) {}

    ObjectiveValue evaluate(double hurst, double nu) const;
    double operator()(double hurst, double nu) const { return evaluate(hurst, nu).value; }

    std::size_t size() const noexcept { return y_.size(); }
    int m() const noexcept { return m_; }
    const SpectralConfig& config() const noexcept { return config_; }
    const std::vector<double>& gamma_hat() const noexcept { return gamma_; }
    std::size_t panel_count() const noexcept { return panels_.size(); }

private:
    struct Panel {
        double a;
        double b;
    };

    std::vector<double> y_;
    int m_;
    SpectralConfig config_;
    std::vector<double> gamma_;
    std::vector<Panel> panels_;
    std::vector<double> lambda_;  // node abscissae, 21 per panel
    std::vector<double> pgram_;   // periodogram at the nodes
    std::vector<double> noise_;   // (2/m) ell at the nodes
};

/// Approximate contrast: adaptive quadrature on [psi, pi] plus the two
/// low-frequency corrections. Where the microstructure term dominates g at psi
/// the corrections are taken below a lower cut and the gap is integrated.
double objective(const LogRvIncrements& y, double hurst, double nu, const SpectralConfig& config = {});

/// Brute-force contrast (1/4pi) int_{-pi}^{pi} (log g + I/g) by composite
/// Gauss-Legendre on (0, pi], with an exponential change of variable below
/// 0.1/n that absorbs the integrable singularity at the origin. Slow; intended
/// as a reference for the approximate contrast. Requires hurst >= 0.03.
double objective_oracle(const LogRvIncrements& y, double hurst, double nu, const SpectralConfig& config = {});

/// Starting grid: H in {0.01, 0.05, 0.1, 0.2, ..., 0.9} x nu in {0.5, 1.5, 2.5, 3.5},
/// restricted to the box.
std::vector<StartPoint> default_starts(const ParamBox& box, double delta);

struct EstimateOptions {
    int workers = 1;
    BoxMinimizerOptions minimizer{};
};

/// Multi-start bounded minimisation of U_n over Theta_H x Theta_nu, optimised
/// in (H, log nu). Keeps the lowest objective (ties: smallest H, then nu) and
/// back-transforms eta = delta^{-H} nu.
WhittleFit estimate(const LogRvIncrements& y, const ParamBox& box, std::span<const StartPoint> starts,
                    const SpectralConfig& config = {}, const EstimateOptions& options = {});

/// Warnings for the high-frequency regime conditions on (delta, m, n, box).
std::vector<std::string> regime_warnings(double delta, int m, std::size_t n, const ParamBox& box);

}  // namespace roughvol
