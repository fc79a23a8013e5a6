#include "roughvol/optimizer.hpp"

#include "roughvol/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace roughvol {

namespace {

class Problem {
public:
    Problem(const std::function<double(std::span<const double>)>& f, std::span<const double> lower,
            std::span<const double> upper, double rel_step)
        : f_(f), lo_(lower), hi_(upper), rel_step_(rel_step) {}

    double value(std::span<const double> x) {
        ++evaluations;
        return f_(x);
    }

    std::vector<double> gradient(std::vector<double> x) {
        const std::size_t n = x.size();
        std::vector<double> g(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double xi = x[i];
            const double h = rel_step_ * std::max(std::abs(xi), 1.0);
            const double up = std::min(xi + h, hi_[i]);
            const double dn = std::max(xi - h, lo_[i]);
            x[i] = up;
            const double fu = value(x);
            x[i] = dn;
            const double fd = value(x);
            x[i] = xi;
            g[i] = (up > dn) ? (fu - fd) / (up - dn) : 0.0;
        }
        return g;
    }

    void project(std::vector<double>& x) const {
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo_[i], hi_[i]);
    }

    /// Zeroes components that point out of the box at active bounds.
    std::vector<double> projected(const std::vector<double>& x, const std::vector<double>& g) const {
        std::vector<double> p = g;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if ((x[i] <= lo_[i] && g[i] > 0.0) || (x[i] >= hi_[i] && g[i] < 0.0)) p[i] = 0.0;
        }
        return p;
    }

    int evaluations = 0;

private:
    const std::function<double(std::span<const double>)>& f_;
    std::span<const double> lo_;
    std::span<const double> hi_;
    double rel_step_;
};

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

using Matrix = std::vector<std::vector<double>>;

Matrix identity(std::size_t n) {
    Matrix b(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) b[i][i] = 1.0;
    return b;
}

}  // namespace

BoxMinimum minimize_box(const std::function<double(std::span<const double>)>& f, std::vector<double> x0,
                        std::span<const double> lower, std::span<const double> upper,
                        const BoxMinimizerOptions& options) {
    const std::size_t n = x0.size();
    if (lower.size() != n || upper.size() != n) throw ValidationError("minimize_box: dimension mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(lower[i] <= upper[i])) throw ValidationError("minimize_box: empty box");
    }

    Problem prob(f, lower, upper, options.fd_rel_step);
    std::vector<double> x = std::move(x0);
    prob.project(x);
    double fx = prob.value(x);
    if (!std::isfinite(fx)) throw NumericalError("minimize_box: objective is not finite at the start");
    std::vector<double> g = prob.gradient(x);
    Matrix hinv = identity(n);
    bool fresh = true;

    BoxMinimum out;
    for (int iter = 0; iter < options.max_iterations; ++iter) {
        out.iterations = iter + 1;
        const std::vector<double> pg = prob.projected(x, g);
        out.projected_gradient = inf_norm(pg);
        if (out.projected_gradient < options.grad_tol) {
            out.converged = true;
            out.message = "projected gradient below tolerance";
            break;
        }

        // Quasi-Newton step on the free variables only.
        std::vector<bool> free(n);
        for (std::size_t i = 0; i < n; ++i) free[i] = pg[i] != 0.0 || (x[i] > lower[i] && x[i] < upper[i]);
        std::vector<double> d(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (!free[i]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (free[j]) d[i] -= hinv[i][j] * g[j];
            }
        }
        double slope = 0.0;
        for (std::size_t i = 0; i < n; ++i) slope += d[i] * g[i];
        if (!(slope < 0.0)) {
            hinv = identity(n);
            fresh = true;
            for (std::size_t i = 0; i < n; ++i) d[i] = free[i] ? -g[i] : 0.0;
        }
        if (fresh) {
            const double scale = std::min(1.0, 0.1 / std::max(inf_norm(d), 1e-300));
            for (double& di : d) di *= scale;
        }

        double t = 1.0;
        std::vector<double> xn(n);
        double fn = fx;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t i = 0; i < n; ++i) xn[i] = x[i] + t * d[i];
            prob.project(xn);
            double decrease = 0.0;
            for (std::size_t i = 0; i < n; ++i) decrease += g[i] * (xn[i] - x[i]);
            fn = prob.value(xn);
            if (std::isfinite(fn) && fn <= fx + 1e-4 * decrease) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            if (!fresh) {
                hinv = identity(n);
                fresh = true;
                continue;
            }
            out.converged = out.projected_gradient <= 1e-5;
            out.message = "line search made no progress";
            break;
        }

        const std::vector<double> gn = prob.gradient(xn);
        std::vector<double> s(n), yv(n);
        double sy = 0.0, ss = 0.0, yy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = xn[i] - x[i];
            yv[i] = gn[i] - g[i];
            sy += s[i] * yv[i];
            ss += s[i] * s[i];
            yy += yv[i] * yv[i];
        }
        if (sy > 1e-12 * std::sqrt(ss * yy)) {
            if (fresh) {
                // Shanno-Phua scaling of the initial inverse Hessian.
                hinv = identity(n);
                for (std::size_t i = 0; i < n; ++i) hinv[i][i] = sy / yy;
            }
            // H+ = (I - rho s y^T) H (I - rho y s^T) + rho s s^T
            const double rho = 1.0 / sy;
            std::vector<double> hy(n, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) hy[i] += hinv[i][j] * yv[j];
            double yhy = 0.0;
            for (std::size_t i = 0; i < n; ++i) yhy += yv[i] * hy[i];
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    hinv[i][j] += -rho * (s[i] * hy[j] + hy[i] * s[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
                }
            }
            fresh = false;
        }

        const double change = std::abs(fx - fn);
        x = xn;
        g = gn;
        const double prev = fx;
        fx = fn;
        if (change <= options.rel_f_tol * std::max(std::abs(prev), std::numeric_limits<double>::min())) {
            out.projected_gradient = inf_norm(prob.projected(x, g));
            out.converged = true;
            out.message = "relative objective change below tolerance";
            break;
        }
    }
    if (out.message.empty()) out.message = "iteration limit reached";
    out.x = x;
    out.f = fx;
    out.evaluations = prob.evaluations;
    return out;
}

}  // namespace roughvol
