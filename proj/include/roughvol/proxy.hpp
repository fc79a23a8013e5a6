#pragma once

#include "roughvol/frac_sim.hpp"

#include <span>
#include <string>
#include <vector>

namespace roughvol {

/// Daily realized variances sigma-hat^2_t(m, delta), t = 1..n_days.
struct RvSeries {
    std::vector<double> values;
    double delta = 1.0 / 250.0;
    int m = 1;
    /// Optional per-row labels carried through from ingested files.
    std::vector<std::string> dates;

    /// Throws ValidationError naming the first offending day if any value is
    /// not strictly positive and finite, or if m < 1 / delta <= 0.
    void validate() const;
    std::size_t size() const noexcept { return values.size(); }
};

/// Y_t = log rv_{t+1} - log rv_t, t = 1..n.
struct LogRvIncrements {
    std::vector<double> y;
    double delta = 1.0 / 250.0;
    int m = 1;

    std::size_t size() const noexcept { return y.size(); }
};

/// Sum of m squared intraday log-returns per complete day. The grid step must
/// divide delta/m exactly (in grid indices); finer grids are subsampled.
RvSeries realized_variance(const GridPath& log_price, int m, double delta);

/// Trapezoidal per-day integral of exp(log_variance) on the path's own grid.
std::vector<double> integrated_variance(const GridPath& log_variance, double delta);

LogRvIncrements log_rv_increments(const RvSeries& rv);

/// z_t = sqrt(m) (log rv_t - log iv_t).
std::vector<double> error_zscores(const RvSeries& rv, std::span<const double> iv);

/// Number of grid steps per `period` for a grid of step dt; throws if the
/// ratio is not an integer up to rounding.
std::size_t grid_stride(double dt, double period, const char* what);

}  // namespace roughvol
