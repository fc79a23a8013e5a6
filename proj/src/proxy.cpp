#include "roughvol/proxy.hpp"

#include "roughvol/error.hpp"

#include <cmath>
#include <string>

namespace roughvol {

std::size_t grid_stride(double dt, double period, const char* what) {
    if (!(dt > 0.0) || !(period > 0.0)) throw ValidationError(std::string(what) + ": step sizes must be positive");
    const double ratio = period / dt;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-6 * std::max(1.0, ratio)) {
        throw ValidationError(std::string(what) + ": grid step " + std::to_string(dt) +
                              " does not divide the sampling interval " + std::to_string(period));
    }
    return static_cast<std::size_t>(rounded);
}

void RvSeries::validate() const {
    if (m < 1) throw ValidationError("RvSeries: m must be >= 1");
    if (!(delta > 0.0)) throw ValidationError("RvSeries: delta must be > 0");
    if (!dates.empty() && dates.size() != values.size()) {
        throw ValidationError("RvSeries: dates and values differ in length");
    }
    for (std::size_t t = 0; t < values.size(); ++t) {
        if (!(values[t] > 0.0) || !std::isfinite(values[t])) {
            throw ValidationError("RvSeries: realized variance of day " + std::to_string(t + 1) +
                                  " is not strictly positive (" + std::to_string(values[t]) +
                                  "); log-RV is undefined for such days");
        }
    }
}

RvSeries realized_variance(const GridPath& log_price, int m, double delta) {
    if (m < 1) throw ValidationError("realized_variance: m must be >= 1");
    if (!(delta > 0.0)) throw ValidationError("realized_variance: delta must be > 0");
    const std::size_t stride = grid_stride(log_price.dt, delta / m, "realized_variance");
    const std::size_t per_day = stride * static_cast<std::size_t>(m);
    if (log_price.size() < per_day + 1) {
        throw ValidationError("realized_variance: path shorter than one day of " + std::to_string(m) +
                              " samples");
    }
    const std::size_t n_days = (log_price.size() - 1) / per_day;
    const auto& x = log_price.values;

    RvSeries rv;
    rv.delta = delta;
    rv.m = m;
    rv.values.resize(n_days);
    for (std::size_t t = 0; t < n_days; ++t) {
        const std::size_t base = t * per_day;
        double acc = 0.0;
        for (int j = 0; j < m; ++j) {
            const double r = x[base + (j + 1) * stride] - x[base + j * stride];
            acc += r * r;
        }
        rv.values[t] = acc;
    }
    rv.validate();
    return rv;
}

std::vector<double> integrated_variance(const GridPath& log_variance, double delta) {
    const std::size_t per_day = grid_stride(log_variance.dt, delta, "integrated_variance");
    if (log_variance.size() < per_day + 1) {
        throw ValidationError("integrated_variance: path shorter than one day");
    }
    const std::size_t n_days = (log_variance.size() - 1) / per_day;
    const auto& v = log_variance.values;
    const double h = log_variance.dt;
    std::vector<double> iv(n_days);
    double left = std::exp(v[0]);
    for (std::size_t t = 0; t < n_days; ++t) {
        const std::size_t base = t * per_day;
        double acc = 0.5 * left;
        for (std::size_t k = 1; k < per_day; ++k) acc += std::exp(v[base + k]);
        const double right = std::exp(v[base + per_day]);
        acc += 0.5 * right;
        iv[t] = acc * h;
        left = right;
    }
    return iv;
}

LogRvIncrements log_rv_increments(const RvSeries& rv) {
    rv.validate();
    LogRvIncrements out;
    out.delta = rv.delta;
    out.m = rv.m;
    if (rv.size() < 2) return out;
    out.y.resize(rv.size() - 1);
    double prev = std::log(rv.values[0]);
    for (std::size_t t = 1; t < rv.size(); ++t) {
        const double cur = std::log(rv.values[t]);
        out.y[t - 1] = cur - prev;
        prev = cur;
    }
    return out;
}

std::vector<double> error_zscores(const RvSeries& rv, std::span<const double> iv) {
    if (rv.size() != iv.size()) {
        throw ValidationError("error_zscores: rv has " + std::to_string(rv.size()) + " days but iv has " +
                              std::to_string(iv.size()));
    }
    rv.validate();
    const double root_m = std::sqrt(static_cast<double>(rv.m));
    std::vector<double> z(iv.size());
    for (std::size_t t = 0; t < iv.size(); ++t) {
        if (!(iv[t] > 0.0)) {
            throw std::domain_error("error_zscores: integrated variance of day " + std::to_string(t + 1) +
                                    " is not positive");
        }
        z[t] = root_m * (std::log(rv.values[t]) - std::log(iv[t]));
    }
    return z;
}

}  // namespace roughvol
