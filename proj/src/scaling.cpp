#include "roughvol/scaling.hpp"

#include "roughvol/error.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace roughvol {

namespace {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

LineFit ols(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
    return fit;
}

}  // namespace

double structure_function(std::span<const double> log_vol, double q, int lag) {
    if (!(q > 0.0)) throw ValidationError("structure_function: q must be > 0");
    if (lag < 1) throw ValidationError("structure_function: lag must be >= 1");
    if (static_cast<std::size_t>(lag) >= log_vol.size()) {
        throw ValidationError("structure_function: lag " + std::to_string(lag) + " leaves no increments in a series of length " +
                              std::to_string(log_vol.size()));
    }
    const std::size_t count = log_vol.size() - static_cast<std::size_t>(lag);
    double acc = 0.0;
    for (std::size_t t = 0; t < count; ++t) acc += std::pow(std::abs(log_vol[t + lag] - log_vol[t]), q);
    return acc / static_cast<double>(count);
}

ScalingFit fit_scaling(std::span<const double> log_vol, std::span<const double> qs, std::span<const int> lags) {
    if (qs.empty()) throw ValidationError("fit_scaling: need at least one q");
    if (lags.size() < 2) throw ValidationError("fit_scaling: need at least two lags");
    for (std::size_t j = 0; j < lags.size(); ++j) {
        if (lags[j] < 1 || (j > 0 && lags[j] <= lags[j - 1])) {
            throw ValidationError("fit_scaling: lags must be strictly increasing positive integers");
        }
    }
    for (double q : qs) {
        if (!(q > 0.0)) throw ValidationError("fit_scaling: q values must be positive");
    }

    ScalingFit fit;
    fit.qs.assign(qs.begin(), qs.end());
    fit.lags.assign(lags.begin(), lags.end());
    std::vector<double> log_lag(lags.size());
    for (std::size_t j = 0; j < lags.size(); ++j) log_lag[j] = std::log(static_cast<double>(lags[j]));

    for (double q : qs) {
        std::vector<double> row(lags.size());
        for (std::size_t j = 0; j < lags.size(); ++j) {
            const double sf = structure_function(log_vol, q, lags[j]);
            if (!(sf > 0.0)) {
                throw ValidationError("fit_scaling: structure function vanishes (q=" + std::to_string(q) + ", lag=" +
                                      std::to_string(lags[j]) + "); the regression is degenerate");
            }
            row[j] = std::log(sf);
        }
        const LineFit line = ols(log_lag, row);
        fit.zeta.push_back(line.slope);
        fit.intercept_eta.push_back(line.intercept);
        fit.r2_stage1.push_back(line.r2);
        fit.log_m.push_back(std::move(row));
    }

    double sqq = 0.0, sqz = 0.0, szz = 0.0;
    for (std::size_t i = 0; i < qs.size(); ++i) {
        sqq += qs[i] * qs[i];
        sqz += qs[i] * fit.zeta[i];
        szz += fit.zeta[i] * fit.zeta[i];
    }
    fit.h_estimate = sqz / sqq;
    fit.r2_stage2 = szz > 0.0 ? sqz * sqz / (sqq * szz) : 1.0;
    if (qs.size() >= 2) {
        const LineFit line = ols(qs, fit.zeta);
        fit.h_with_intercept = line.slope;
        fit.intercept_stage2 = line.intercept;
    } else {
        fit.h_with_intercept = fit.h_estimate;
    }
    return fit;
}

std::vector<double> default_scaling_qs() { return {0.5, 1.0, 1.5, 2.0, 3.0}; }

std::vector<int> default_scaling_lags() {
    std::vector<int> lags(50);
    std::iota(lags.begin(), lags.end(), 1);
    return lags;
}

std::vector<double> log_volatility(std::span<const double> rv) {
    std::vector<double> out(rv.size());
    for (std::size_t i = 0; i < rv.size(); ++i) {
        if (!(rv[i] > 0.0)) throw ValidationError("log_volatility: realized variance of day " + std::to_string(i + 1) + " is not positive");
        out[i] = 0.5 * std::log(rv[i]);
    }
    return out;
}

}  // namespace roughvol
