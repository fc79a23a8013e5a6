#pragma once

#include <span>
#include <vector>

namespace roughvol {

/// Two-stage log-log regression of structure functions of log-volatility.
struct ScalingFit {
    std::vector<double> qs;
    std::vector<int> lags;
    std::vector<double> zeta;           ///< stage-1 slope per q
    std::vector<double> intercept_eta;  ///< stage-1 intercept per q
    std::vector<double> r2_stage1;
    double h_estimate = 0.0;            ///< stage-2 slope of zeta on q through the origin
    double r2_stage2 = 0.0;             ///< uncentred R^2 of the origin fit
    double h_with_intercept = 0.0;      ///< stage-2 slope when an intercept is allowed
    double intercept_stage2 = 0.0;
    /// log structure function, log_m[i][j] for qs[i], lags[j]
    std::vector<std::vector<double>> log_m;
};

/// (1/(len - lag)) sum_t |x_{t+lag} - x_t|^q.
double structure_function(std::span<const double> log_vol, double q, int lag);

/// Stage 1 regresses log structure_function on log lag per q; stage 2 regresses
/// the slopes on q.
ScalingFit fit_scaling(std::span<const double> log_vol, std::span<const double> qs, std::span<const int> lags);

std::vector<double> default_scaling_qs();
std::vector<int> default_scaling_lags();

/// log sigma-hat = 0.5 log rv.
std::vector<double> log_volatility(std::span<const double> rv);

}  // namespace roughvol
