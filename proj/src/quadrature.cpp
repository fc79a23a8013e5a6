#include "roughvol/quadrature.hpp"

#include "roughvol/error.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace roughvol {

namespace {

struct Gk21Tables {
    std::array<double, Gk21::kPoints> nodes{};
    std::array<double, Gk21::kPoints> kronrod{};
    std::array<double, Gk21::kPoints> gauss{};

    Gk21Tables() {
        using kronrod_rule = boost::math::quadrature::gauss_kronrod<double, 21>;
        using gauss_rule = boost::math::quadrature::gauss<double, 10>;
        const auto& x = kronrod_rule::abscissa();   // 11 nonnegative nodes, x[0] = 0
        const auto& wk = kronrod_rule::weights();
        const auto& wg = gauss_rule::weights();     // Gauss nodes are x[1], x[3], ..., x[9]
        nodes[10] = 0.0;
        kronrod[10] = wk[0];
        gauss[10] = 0.0;
        for (std::size_t i = 1; i < x.size(); ++i) {
            const double g = (i % 2 == 1) ? wg[i / 2] : 0.0;
            nodes[10 - i] = -x[i];
            nodes[10 + i] = x[i];
            kronrod[10 - i] = kronrod[10 + i] = wk[i];
            gauss[10 - i] = gauss[10 + i] = g;
        }
    }
};

const Gk21Tables& tables() {
    static const Gk21Tables t;
    return t;
}

struct Panel {
    double a;
    double b;
    PanelEstimate est;
    bool operator<(const Panel& other) const { return est.error < other.est.error; }
};

PanelEstimate eval_panel(const std::function<double(double)>& f, double a, double b) {
    std::array<double, Gk21::kPoints> v{};
    for (std::size_t i = 0; i < Gk21::kPoints; ++i) v[i] = f(Gk21::node(i, a, b));
    return gk21_combine(v, a, b);
}

}  // namespace

const std::array<double, Gk21::kPoints>& Gk21::nodes() { return tables().nodes; }
const std::array<double, Gk21::kPoints>& Gk21::kronrod_weights() { return tables().kronrod; }
const std::array<double, Gk21::kPoints>& Gk21::gauss_weights() { return tables().gauss; }

PanelEstimate gk21_combine(std::span<const double, Gk21::kPoints> f, double a, double b) {
    const auto& t = tables();
    const double half = 0.5 * (b - a);
    double k = 0.0;
    double g = 0.0;
    double abs_sum = 0.0;
    for (std::size_t i = 0; i < Gk21::kPoints; ++i) {
        k += t.kronrod[i] * f[i];
        g += t.gauss[i] * f[i];
        abs_sum += t.kronrod[i] * std::abs(f[i]);
    }
    const double mean = 0.5 * k;
    double asc = 0.0;
    for (std::size_t i = 0; i < Gk21::kPoints; ++i) asc += t.kronrod[i] * std::abs(f[i] - mean);

    k *= half;
    g *= half;
    abs_sum *= std::abs(half);
    asc *= std::abs(half);
    double err = std::abs(k - g);
    if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (abs_sum > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * abs_sum, err);
    return {k, err};
}

QuadResult integrate_adaptive(const std::function<double(double)>& f, std::span<const double> breakpoints,
                              double abs_tol, double rel_tol, std::size_t max_panels) {
    if (breakpoints.size() < 2) throw ValidationError("integrate_adaptive: need at least two breakpoints");
    std::priority_queue<Panel> heap;
    double total = 0.0;
    double error = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        Panel p{breakpoints[i], breakpoints[i + 1], eval_panel(f, breakpoints[i], breakpoints[i + 1])};
        total += p.est.value;
        error += p.est.error;
        heap.push(p);
    }
    while (error > std::max(abs_tol, rel_tol * std::abs(total)) && heap.size() < max_panels) {
        const Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            heap.push(worst);
            break;
        }
        const Panel left{worst.a, mid, eval_panel(f, worst.a, mid)};
        const Panel right{mid, worst.b, eval_panel(f, mid, worst.b)};
        total += left.est.value + right.est.value - worst.est.value;
        error += left.est.error + right.est.error - worst.est.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed drift from the incremental updates.
    QuadResult out;
    out.panels = heap.size();
    while (!heap.empty()) {
        out.value += heap.top().est.value;
        out.error += heap.top().est.error;
        heap.pop();
    }
    out.converged = out.error <= std::max(abs_tol, rel_tol * std::abs(out.value));
    return out;
}

double integrate_gauss_legendre(const std::function<double(double)>& f, std::span<const double> breakpoints) {
    using rule = boost::math::quadrature::gauss<double, 20>;
    const auto& x = rule::abscissa();  // 10 positive nodes
    const auto& w = rule::weights();
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double a = breakpoints[i];
        const double b = breakpoints[i + 1];
        const double c = 0.5 * (a + b);
        const double h = 0.5 * (b - a);
        double acc = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) acc += w[j] * (f(c - h * x[j]) + f(c + h * x[j]));
        total += h * acc;
    }
    return total;
}

}  // namespace roughvol
