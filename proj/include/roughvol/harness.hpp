#pragma once

#include "roughvol/scaling.hpp"
#include "roughvol/spectral.hpp"
#include "roughvol/whittle.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace roughvol {

/// How the multi-start minimiser is seeded in experiments.
enum class StartMode {
    truth,  ///< single start at the data-generating (H0, nu0)
    grid,   ///< default_starts over the parameter box
};

StartMode parse_start_mode(const std::string& text);
std::string to_string(StartMode mode);

struct McConfig {
    std::vector<double> h0_list = {0.01, 0.05, 0.1, 0.3, 0.5, 0.7};
    std::vector<double> eta0_list = {1.0, 2.0, 3.0};
    std::vector<int> m_list = {80, 400};
    int n_paths = 30;
    int n_days = 2500;  ///< number of log-RV increments per path
    double delta = 1.0 / 250.0;
    double alpha = 0.001;
    double c = -3.2;
    std::uint64_t base_seed = 0;
    ParamBox box{};
    SpectralConfig spectral{};
    BoxMinimizerOptions minimizer{};
    StartMode start_mode = StartMode::truth;
    int workers = 1;

    void validate() const;
    /// Parses `key = value` lines (lists comma-separated, '#' comments). Keys
    /// mirror the field names; unknown keys are errors.
    static McConfig parse(const std::string& text, const std::string& origin = "<config>");
};

struct McCell {
    double h0 = 0.0;
    double eta0 = 0.0;
    int m = 0;
    int n_paths = 0;
    int n_converged = 0;
    int n_failed = 0;
    double mean_h = 0.0;
    double var_h = 0.0;
    double mean_eta = 0.0;
    double var_eta = 0.0;
    bool cell_failed = false;  ///< more than 20% of paths failed
    double wall_seconds = 0.0;
    std::vector<double> h_hats;    ///< per path; NaN for failed paths
    std::vector<double> eta_hats;
};

struct McReport {
    McConfig config;
    std::vector<McCell> cells;
};

/// Seed of path `path` in cell (h0, eta0, m).
std::uint64_t mc_path_seed(std::uint64_t base_seed, double h0, double eta0, int m, int path);

McReport run_mc_table(const McConfig& config);

/// One row per cell; deterministic (no timings).
std::string mc_report_csv(const McReport& report);
std::string mc_report_summary(const McReport& report);

struct IllusionConfig {
    double hurst = 0.5;
    double eta = 0.8;
    double alpha = 10.0;
    double c = -3.2;
    double delta = 1.0 / 250.0;
    int n_days = 2500;
    /// RV frequencies; each must divide the simulation resolution m_sim.
    std::vector<int> m_list = {80, 400, 2000};
    int m_sim = 2000;
    std::uint64_t seed = 0;
    std::vector<double> qs = default_scaling_qs();
    std::vector<int> lags = default_scaling_lags();
    ParamBox box{};
    SpectralConfig spectral{};
    BoxMinimizerOptions minimizer{};
    StartMode start_mode = StartMode::grid;
    int workers = 1;

    void validate() const;
};

struct IllusionRow {
    int m = 0;
    double scaling_h = 0.0;
    double scaling_h_intercept = 0.0;
    double whittle_h = 0.0;
    double whittle_eta = 0.0;
    bool whittle_converged = false;
};

/// One price path on the m_sim grid; RV at every listed frequency is fed to
/// both the scaling regression and the Whittle estimator.
std::vector<IllusionRow> run_illusion_experiment(const IllusionConfig& config);
std::string illusion_csv(const std::vector<IllusionRow>& rows);

struct ZscoreConfig {
    double hurst = 0.3;
    double eta = 1.0;
    double alpha = 0.001;
    double c = -3.2;
    double delta = 1.0 / 250.0;
    int m = 1000;
    int n_days = 2000;
    int substeps = 1;
    std::uint64_t seed = 0;

    void validate() const;
};

struct ZscoreResult {
    std::size_t n = 0;
    double mean = 0.0;
    double sample_variance = 0.0;
    double lag1_autocorr = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double jarque_bera = 0.0;
};

/// Simulates the fOU model and summarises sqrt(m)(log rv - log iv).
ZscoreResult run_zscore_experiment(const ZscoreConfig& config);
std::string zscore_csv(const ZscoreResult& result);

/// Moments of a sample (unbiased variance, lag-1 autocorrelation, skewness,
/// excess kurtosis, Jarque-Bera).
ZscoreResult summarize_sample(std::span<const double> z);

}  // namespace roughvol
