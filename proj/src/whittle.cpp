#include "roughvol/whittle.hpp"

#include "roughvol/error.hpp"
#include "roughvol/parallel.hpp"
#include "roughvol/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <queue>
#include <sstream>

namespace roughvol {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTruncationLimit = 1e-10;

/// nu^2 C_H, the leading coefficient of g near the origin.
double leading_coefficient(double hurst, double nu) {
    const double k = nu * nu * c_h(hurst);
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw std::domain_error("Whittle contrast: nu^2 C_H must be positive (H in (0,1), nu > 0)");
    }
    return k;
}

void check_psi(double psi) {
    if (!(psi > 0.0 && psi <= kPi)) throw std::domain_error("psi must lie in (0, pi]");
}

/// Coefficients c_j with a(tau) = (1/2pi) sum_j c_j (tau psi)^{2j} / (2j)!.
std::vector<double> expansion_terms(double hurst, double nu, double psi, int taylor_j, int m) {
    check_psi(psi);
    if (taylor_j < 0) throw std::domain_error("J must be >= 0");
    if (m < 1) throw std::domain_error("m must be >= 1");
    const double k = leading_coefficient(hurst, nu);
    const double p2h = std::pow(psi, 2.0 * hurst);
    const double p14h = std::pow(psi, 1.0 + 4.0 * hurst) / (k * m * kPi);
    std::vector<double> c(static_cast<std::size_t>(taylor_j) + 1);
    for (int j = 0; j <= taylor_j; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        c[j] = sign / k * (p2h / (2.0 * j + 2.0 * hurst) - p14h / (1.0 + 2.0 * j + 4.0 * hurst));
    }
    return c;
}

double a_from_terms(const std::vector<double>& c, double tau, double psi) {
    const double x2 = (tau * psi) * (tau * psi);
    double t = 1.0;  // (tau psi)^{2j} / (2j)!
    double acc = c[0];
    for (std::size_t j = 1; j < c.size(); ++j) {
        t *= x2 / ((2.0 * j - 1.0) * (2.0 * j));
        if (t == 0.0) break;
        acc += c[j] * t;
    }
    return acc / kTwoPi;
}

}  // namespace

void ParamBox::validate() const {
    if (!(h_min > 0.0 && h_min < h_max && h_max <= 1.0)) {
        throw ValidationError("ParamBox: need 0 < h_min < h_max <= 1");
    }
    if (!(eta_min > 0.0 && eta_min < eta_max) || !std::isfinite(eta_max)) {
        throw ValidationError("ParamBox: need 0 < eta_min < eta_max");
    }
}

double ParamBox::nu_min(double delta) const { return eta_min * std::pow(delta, h_max); }
double ParamBox::nu_max(double delta) const { return eta_max * std::pow(delta, h_min); }

double a_coefficient(double hurst, double nu, long long tau, double psi, int taylor_j, int m) {
    if (tau < 0) throw std::domain_error("a_coefficient: tau must be >= 0");
    return a_from_terms(expansion_terms(hurst, nu, psi, taylor_j, m), static_cast<double>(tau), psi);
}

double a_truncation_bound(double hurst, double nu, std::size_t n, double psi, int taylor_j, int m) {
    check_psi(psi);
    if (m < 1) throw std::domain_error("m must be >= 1");
    const double k = leading_coefficient(hurst, nu);
    const double inv_g_integral = std::pow(psi, 2.0 * hurst) / (2.0 * hurst * k);
    const double log_lead = 2.0 * taylor_j * std::log(static_cast<double>(std::max<std::size_t>(n, 1)) * psi) -
                            std::lgamma(2.0 * taylor_j + 2.0);
    return std::exp(log_lead) * 0.5 * inv_g_integral;
}

double correction_a1(double hurst, double nu, double psi, int m) {
    check_psi(psi);
    if (m < 1) throw std::domain_error("correction_a1: m must be >= 1");
    const double k = leading_coefficient(hurst, nu);
    const double value = psi * std::log(k) + psi * (std::log(psi) - 1.0) * (1.0 - 2.0 * hurst) +
                         std::pow(psi, 2.0 + 2.0 * hurst) / (k * m * kPi * (2.0 + 2.0 * hurst));
    return value / kTwoPi;
}

double correction_a2(double hurst, double nu, double psi, int taylor_j, int m, std::span<const double> gamma_hat) {
    if (gamma_hat.empty()) throw std::domain_error("correction_a2: gamma_hat must be nonempty");
    const auto c = expansion_terms(hurst, nu, psi, taylor_j, m);
    double acc = 0.0;
    for (std::size_t tau = gamma_hat.size() - 1; tau >= 1; --tau) {
        acc += a_from_terms(c, static_cast<double>(tau), psi) * gamma_hat[tau];
    }
    acc = a_from_terms(c, 0.0, psi) * gamma_hat[0] + 2.0 * acc;
    return acc / kTwoPi;
}

WhittleObjective::WhittleObjective(std::span<const double> y, int m, const SpectralConfig& config)
    : y_(y.begin(), y.end()), m_(m), config_(config) {
    config_.validate();
    if (y_.empty()) throw ValidationError("WhittleObjective: empty series");
    if (m_ < 1) throw ValidationError("WhittleObjective: m must be >= 1");
    for (double v : y_) {
        if (!std::isfinite(v)) throw ValidationError("WhittleObjective: series contains non-finite values");
    }
    gamma_ = autocovariance_hat(y_);

    // Geometric panels resolve the power-law behaviour near psi; uniform panels
    // of one period of the fastest periodogram oscillation cover the rest.
    const double n = static_cast<double>(y_.size());
    const double width = std::min(kTwoPi / n, kPi / 16.0);
    double a = config_.psi;
    while (a < kPi && a < width) {
        const double b = std::min(2.0 * a, kPi);
        panels_.push_back({a, b});
        a = b;
    }
    if (a < kPi) {
        const auto count = static_cast<std::size_t>(std::ceil((kPi - a) / width));
        const double step = (kPi - a) / static_cast<double>(count);
        for (std::size_t i = 0; i < count; ++i) {
            const double lo = a + step * static_cast<double>(i);
            const double hi = (i + 1 == count) ? kPi : a + step * static_cast<double>(i + 1);
            panels_.push_back({lo, hi});
        }
    }

    lambda_.reserve(panels_.size() * Gk21::kPoints);
    for (const auto& p : panels_) {
        for (std::size_t i = 0; i < Gk21::kPoints; ++i) lambda_.push_back(Gk21::node(i, p.a, p.b));
    }
    pgram_.resize(lambda_.size());
    noise_.resize(lambda_.size());
    const double weight = 2.0 / static_cast<double>(m_);
    for (std::size_t i = 0; i < lambda_.size(); ++i) {
        pgram_[i] = periodogram(y_, lambda_[i]);
        noise_[i] = weight * ell(lambda_[i]);
    }
}

ObjectiveValue WhittleObjective::evaluate(double hurst, double nu) const {
    if (!(hurst > 0.0 && hurst < 1.0)) throw std::domain_error("Whittle contrast: H must lie in (0, 1)");
    if (!(nu > 0.0) || !std::isfinite(nu)) throw std::domain_error("Whittle contrast: nu must be > 0");
    const PaxsonDensity density(hurst, config_.paxson_k);
    const double nu2 = nu * nu;
    const double weight = 2.0 / static_cast<double>(m_);

    struct Scored {
        double a;
        double b;
        PanelEstimate est;
        bool operator<(const Scored& o) const { return est.error < o.est.error; }
    };
    std::vector<Scored> scored(panels_.size());
    std::array<double, Gk21::kPoints> f{};
    double total = 0.0;
    double error = 0.0;
    for (std::size_t p = 0; p < panels_.size(); ++p) {
        const std::size_t base = p * Gk21::kPoints;
        for (std::size_t i = 0; i < Gk21::kPoints; ++i) {
            const double g = nu2 * density(lambda_[base + i]) + noise_[base + i];
            f[i] = std::log(g) + pgram_[base + i] / g;
        }
        scored[p] = {panels_[p].a, panels_[p].b, gk21_combine(f, panels_[p].a, panels_[p].b)};
        total += scored[p].est.value;
        error += scored[p].est.error;
    }

    ObjectiveValue out;
    auto tolerance = [&](double v) { return std::max(config_.quad_abs_tol, config_.quad_rel_tol * std::abs(v)); };
    if (error > tolerance(total)) {
        // Refine adaptively; new nodes need the periodogram evaluated directly.
        auto integrand = [&](double lambda) {
            const double g = nu2 * density(lambda) + weight * ell(lambda);
            return std::log(g) + periodogram(y_, lambda) / g;
        };
        std::priority_queue<Scored> heap(scored.begin(), scored.end());
        const std::size_t limit = 4 * panels_.size() + 1000;
        while (error > tolerance(total) && heap.size() < limit) {
            const Scored worst = heap.top();
            heap.pop();
            const double mid = 0.5 * (worst.a + worst.b);
            Scored halves[2] = {{worst.a, mid, {}}, {mid, worst.b, {}}};
            for (auto& h : halves) {
                for (std::size_t i = 0; i < Gk21::kPoints; ++i) f[i] = integrand(Gk21::node(i, h.a, h.b));
                h.est = gk21_combine(f, h.a, h.b);
                heap.push(h);
            }
            total += halves[0].est.value + halves[1].est.value - worst.est.value;
            error += halves[0].est.error + halves[1].est.error - worst.est.error;
        }
        total = 0.0;
        error = 0.0;
        while (!heap.empty()) {
            total += heap.top().est.value;
            error += heap.top().est.error;
            heap.pop();
        }
    }
    out.quad_converged = error <= tolerance(total);

    // The closed-form corrections expand 1/g in powers of (noise / signal),
    // which is (lambda / lambda_c)^{1+2H}. When that ratio is not small at psi
    // the series is useless, so they are applied below a lower cut and the
    // band between the cut and psi is integrated directly.
    const double psi = config_.psi;
    const double ratio = std::pow(psi, 1.0 + 2.0 * hurst) / (nu2 * c_h(hurst) * m_ * kPi);
    double cut = psi;
    if (ratio > config_.series_ratio_limit) {
        // The dropped terms of the expansions scale as the square of the ratio.
        cut = psi * std::pow(config_.series_ratio_limit / ratio, 1.0 / (1.0 + 2.0 * hurst));
        std::vector<double> breaks = {cut};
        while (breaks.back() < psi) breaks.push_back(std::min(2.0 * breaks.back(), psi));
        const auto band = integrate_adaptive(
            [&](double lambda) {
                const double g = nu2 * density(lambda) + weight * ell(lambda);
                return std::log(g) + periodogram(y_, lambda) / g;
            },
            breaks, config_.quad_abs_tol, config_.quad_rel_tol);
        total += band.value;
        error += band.error;
        out.quad_converged = out.quad_converged && band.converged;
    }
    out.cut = cut;
    out.quad_error = error / kTwoPi;
    out.integral = total / kTwoPi;
    out.a1 = correction_a1(hurst, nu, cut, m_);
    out.a2 = correction_a2(hurst, nu, cut, config_.taylor_j, m_, gamma_);
    out.truncation_ok = a_truncation_bound(hurst, nu, y_.size(), cut, config_.taylor_j, m_) <= kTruncationLimit;
    out.value = out.integral + out.a1 + out.a2;
    return out;
}

double objective(const LogRvIncrements& y, double hurst, double nu, const SpectralConfig& config) {
    const WhittleObjective contrast(y, config);
    const ObjectiveValue v = contrast.evaluate(hurst, nu);
    if (!v.quad_converged) {
        std::ostringstream msg;
        msg << "Whittle contrast: quadrature did not converge at H=" << hurst << ", nu=" << nu
            << " (achieved error estimate " << v.quad_error << ")";
        throw NumericalError(msg.str());
    }
    return v.value;
}

std::vector<StartPoint> default_starts(const ParamBox& box, double delta) {
    box.validate();
    static constexpr double kHurst[] = {0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    static constexpr double kNu[] = {0.5, 1.5, 2.5, 3.5};
    const double lo = box.nu_min(delta);
    const double hi = box.nu_max(delta);
    std::vector<StartPoint> starts;
    for (double h : kHurst) {
        if (h < box.h_min || h > box.h_max) continue;
        for (double nu : kNu) {
            if (nu >= lo && nu <= hi) starts.push_back({h, nu});
        }
    }
    return starts;
}

std::vector<std::string> regime_warnings(double delta, int m, std::size_t n, const ParamBox& box) {
    std::vector<std::string> out;
    if (delta > 0.1 || m < 10) {
        out.push_back("high-frequency regime: expected small delta and large m, got delta=" +
                      std::to_string(delta) + ", m=" + std::to_string(m));
    }
    const double horizon = static_cast<double>(n) * delta;
    if (horizon < 1.0) {
        out.push_back("observation horizon n*delta=" + std::to_string(horizon) + " is short");
    }
    const double noise_ratio = m * std::pow(delta, 2.0 * box.h_max);
    if (noise_ratio < 1e-3) {
        out.push_back("m*delta^(2*h_max)=" + std::to_string(noise_ratio) +
                      " is small: proxy noise dominates the signal near h_max");
    }
    return out;
}

WhittleFit estimate(const LogRvIncrements& y, const ParamBox& box, std::span<const StartPoint> starts,
                    const SpectralConfig& config, const EstimateOptions& options) {
    box.validate();
    config.validate();
    if (starts.empty()) throw ValidationError("estimate: no starting points");
    if (y.size() < 2) throw ValidationError("estimate: need at least two log-RV increments");
    if (!(y.delta > 0.0)) throw ValidationError("estimate: delta must be > 0");

    const WhittleObjective contrast(y, config);
    const double delta = y.delta;
    const std::vector<double> lower = {box.h_min, std::log(box.nu_min(delta))};
    const std::vector<double> upper = {box.h_max, std::log(box.nu_max(delta))};
    const std::function<double(std::span<const double>)> f = [&](std::span<const double> x) {
        return contrast(x[0], std::exp(x[1]));
    };

    std::vector<StartOutcome> outcomes(starts.size());
    parallel_for(starts.size(), options.workers, [&](std::size_t i) {
        StartOutcome& o = outcomes[i];
        o.start = starts[i];
        try {
            if (!(starts[i].nu > 0.0)) throw ValidationError("start nu must be > 0");
            const BoxMinimum r = minimize_box(f, {starts[i].hurst, std::log(starts[i].nu)}, lower, upper,
                                              options.minimizer);
            o.h_hat = r.x[0];
            o.nu_hat = std::exp(r.x[1]);
            o.objective = r.f;
            o.converged = r.converged;
            o.iterations = r.iterations;
            o.evaluations = r.evaluations;
            o.message = r.message;
            o.failed = !std::isfinite(r.f);
        } catch (const std::exception& e) {
            o.failed = true;
            o.message = e.what();
        }
    });

    const StartOutcome* best = nullptr;
    for (const auto& o : outcomes) {
        if (o.failed) continue;
        if (best == nullptr || o.objective < best->objective ||
            (o.objective == best->objective &&
             (o.h_hat < best->h_hat || (o.h_hat == best->h_hat && o.nu_hat < best->nu_hat)))) {
            best = &o;
        }
    }
    if (best == nullptr) {
        std::ostringstream msg;
        msg << "estimate: all " << outcomes.size() << " starts failed";
        for (const auto& o : outcomes) msg << "; (" << o.start.hurst << ", " << o.start.nu << "): " << o.message;
        throw NumericalError(msg.str());
    }

    WhittleFit fit;
    fit.h_hat = best->h_hat;
    fit.nu_hat = best->nu_hat;
    fit.eta_hat = best->nu_hat * std::pow(delta, -best->h_hat);
    fit.objective = best->objective;
    fit.converged = best->converged;
    fit.start_used = best->start;
    fit.n_starts = static_cast<int>(starts.size());
    fit.delta = delta;
    fit.m = y.m;
    fit.warnings = regime_warnings(delta, y.m, y.size(), box);
    const ObjectiveValue at_best = contrast.evaluate(fit.h_hat, fit.nu_hat);
    if (!at_best.truncation_ok) {
        fit.warnings.push_back("low-frequency expansion truncation bound exceeds 1e-10 at the optimum; raise J or lower psi");
    }
    if (!at_best.quad_converged) {
        fit.warnings.push_back("quadrature error estimate " + std::to_string(at_best.quad_error) +
                               " exceeds tolerance at the optimum");
    }
    fit.outcomes = std::move(outcomes);
    return fit;
}

}  // namespace roughvol
