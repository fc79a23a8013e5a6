#include "roughvol/harness.hpp"

#include "roughvol/csv.hpp"
#include "roughvol/error.hpp"
#include "roughvol/frac_sim.hpp"
#include "roughvol/parallel.hpp"
#include "roughvol/proxy.hpp"

#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <type_traits>

namespace roughvol {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

template <class T>
T parse_scalar(const std::string& text, const std::string& where) {
    if constexpr (std::is_floating_point_v<T>) {
        // from_chars also accepts inf and nan, which istream does not.
        T v{};
        const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || end != text.data() + text.size()) {
            throw ValidationError(where + ": cannot parse '" + text + "'");
        }
        return v;
    }
    std::istringstream in(text);
    T v{};
    in >> v;
    if (in.fail() || !(in >> std::ws).eof()) throw ValidationError(where + ": cannot parse '" + text + "'");
    return v;
}

template <class T>
std::vector<T> parse_list(const std::string& text, const std::string& where) {
    std::vector<T> out;
    for (const auto& item : split_csv_line(text)) {
        if (!item.empty()) out.push_back(parse_scalar<T>(item, where));
    }
    if (out.empty()) throw ValidationError(where + ": empty list");
    return out;
}

void require_positive_list(const std::vector<double>& v, const char* name) {
    if (v.empty()) throw ValidationError(std::string(name) + " must be nonempty");
    for (double x : v) {
        if (!(x > 0.0)) throw ValidationError(std::string(name) + " entries must be positive");
    }
}

/// Unbiased mean and variance of the finite entries.
std::pair<double, double> mean_var(const std::vector<double>& xs) {
    double n = 0.0, mean = 0.0, m2 = 0.0;
    for (double x : xs) {
        if (std::isnan(x)) continue;
        n += 1.0;
        const double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }
    if (n == 0.0) return {kNaN, kNaN};
    return {mean, n > 1.0 ? m2 / (n - 1.0) : kNaN};
}

std::vector<StartPoint> experiment_starts(StartMode mode, const ParamBox& box, double delta, double h0, double eta0) {
    if (mode == StartMode::truth) return {{h0, eta0 * std::pow(delta, h0)}};
    return default_starts(box, delta);
}

}  // namespace

StartMode parse_start_mode(const std::string& text) {
    if (text == "truth") return StartMode::truth;
    if (text == "grid") return StartMode::grid;
    throw ValidationError("start mode must be 'truth' or 'grid', got '" + text + "'");
}

std::string to_string(StartMode mode) { return mode == StartMode::truth ? "truth" : "grid"; }

void McConfig::validate() const {
    for (double h : h0_list) {
        if (!(h > 0.0 && h < 1.0)) throw ValidationError("McConfig: h0_list entries must lie in (0, 1)");
    }
    if (h0_list.empty()) throw ValidationError("McConfig: h0_list must be nonempty");
    require_positive_list(eta0_list, "McConfig: eta0_list");
    if (m_list.empty()) throw ValidationError("McConfig: m_list must be nonempty");
    for (int m : m_list) {
        if (m < 1) throw ValidationError("McConfig: m_list entries must be >= 1");
    }
    if (n_paths < 1) throw ValidationError("McConfig: n_paths must be >= 1");
    if (n_days < 2) throw ValidationError("McConfig: n_days must be >= 2");
    if (!(delta > 0.0)) throw ValidationError("McConfig: delta must be > 0");
    if (!(alpha >= 0.0)) throw ValidationError("McConfig: alpha must be >= 0");
    if (workers < 1) throw ValidationError("McConfig: workers must be >= 1");
    box.validate();
    spectral.validate();
}

McConfig McConfig::parse(const std::string& text, const std::string& origin) {
    McConfig cfg;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string line = lines[i];
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(origin, i + 1, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string where = origin + ":" + std::to_string(i + 1) + ": " + key;
        if (key == "h0_list") cfg.h0_list = parse_list<double>(value, where);
        else if (key == "eta0_list") cfg.eta0_list = parse_list<double>(value, where);
        else if (key == "m_list") cfg.m_list = parse_list<int>(value, where);
        else if (key == "n_paths") cfg.n_paths = parse_scalar<int>(value, where);
        else if (key == "full_scale") cfg.n_paths = parse_scalar<int>(value, where) != 0 ? 100 : cfg.n_paths;
        else if (key == "n_days") cfg.n_days = parse_scalar<int>(value, where);
        else if (key == "delta") cfg.delta = parse_scalar<double>(value, where);
        else if (key == "alpha") cfg.alpha = parse_scalar<double>(value, where);
        else if (key == "c") cfg.c = parse_scalar<double>(value, where);
        else if (key == "base_seed") cfg.base_seed = parse_scalar<std::uint64_t>(value, where);
        else if (key == "h_min") cfg.box.h_min = parse_scalar<double>(value, where);
        else if (key == "h_max") cfg.box.h_max = parse_scalar<double>(value, where);
        else if (key == "eta_min") cfg.box.eta_min = parse_scalar<double>(value, where);
        else if (key == "eta_max") cfg.box.eta_max = parse_scalar<double>(value, where);
        else if (key == "psi") cfg.spectral.psi = parse_scalar<double>(value, where);
        else if (key == "paxson_k") cfg.spectral.paxson_k = parse_scalar<int>(value, where);
        else if (key == "taylor_j") cfg.spectral.taylor_j = parse_scalar<int>(value, where);
        else if (key == "series_ratio_limit") cfg.spectral.series_ratio_limit = parse_scalar<double>(value, where);
        else if (key == "quad_rel_tol") cfg.spectral.quad_rel_tol = parse_scalar<double>(value, where);
        else if (key == "quad_abs_tol") cfg.spectral.quad_abs_tol = parse_scalar<double>(value, where);
        else if (key == "max_iterations") cfg.minimizer.max_iterations = parse_scalar<int>(value, where);
        else if (key == "start_mode") cfg.start_mode = parse_start_mode(value);
        else if (key == "workers") cfg.workers = parse_scalar<int>(value, where);
        else throw ParseError(origin, i + 1, "unknown key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

std::uint64_t mc_path_seed(std::uint64_t base_seed, double h0, double eta0, int m, int path) {
    std::uint64_t s = mix64(base_seed);
    s = mix64(s ^ std::bit_cast<std::uint64_t>(h0));
    s = mix64(s ^ std::bit_cast<std::uint64_t>(eta0));
    s = mix64(s ^ static_cast<std::uint64_t>(m));
    return mix64(s ^ static_cast<std::uint64_t>(path));
}

McReport run_mc_table(const McConfig& config) {
    config.validate();
    McReport report;
    report.config = config;
    for (double h0 : config.h0_list) {
        for (double eta0 : config.eta0_list) {
            for (int m : config.m_list) {
                const auto started = std::chrono::steady_clock::now();
                FouSpec spec;
                spec.alpha = config.alpha;
                spec.c = config.c;
                spec.logvar0 = config.c;
                spec.eta = eta0;
                spec.hurst = h0;
                spec.delta = config.delta;
                spec.m = m;
                spec.n_days = config.n_days + 1;
                const FouSimulator simulator(spec);
                const auto starts = experiment_starts(config.start_mode, config.box, config.delta, h0, eta0);

                McCell cell;
                cell.h0 = h0;
                cell.eta0 = eta0;
                cell.m = m;
                cell.n_paths = config.n_paths;
                cell.h_hats.assign(config.n_paths, kNaN);
                cell.eta_hats.assign(config.n_paths, kNaN);
                parallel_for(static_cast<std::size_t>(config.n_paths), config.workers, [&](std::size_t p) {
                    try {
                        const auto paths = simulator.simulate(mc_path_seed(config.base_seed, h0, eta0, m, static_cast<int>(p)));
                        const auto y = log_rv_increments(realized_variance(paths.log_price, m, config.delta));
                        const WhittleFit fit = estimate(y, config.box, starts, config.spectral, {1, config.minimizer});
                        if (fit.converged) {
                            cell.h_hats[p] = fit.h_hat;
                            cell.eta_hats[p] = fit.eta_hat;
                        }
                    } catch (const std::exception&) {
                        // Counted as a failed path below.
                    }
                });
                for (double h : cell.h_hats) {
                    if (std::isnan(h)) ++cell.n_failed;
                }
                cell.n_converged = cell.n_paths - cell.n_failed;
                cell.cell_failed = cell.n_failed * 5 > cell.n_paths;
                std::tie(cell.mean_h, cell.var_h) = mean_var(cell.h_hats);
                std::tie(cell.mean_eta, cell.var_eta) = mean_var(cell.eta_hats);
                cell.wall_seconds =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
                report.cells.push_back(std::move(cell));
            }
        }
    }
    return report;
}

std::string mc_report_csv(const McReport& report) {
    std::string out = "h0,eta0,m,n_paths,n_converged,n_failed,mean_h,var_h,mean_eta,var_eta,cell_failed\n";
    for (const auto& c : report.cells) {
        out += format_number(c.h0) + ',' + format_number(c.eta0) + ',' + std::to_string(c.m) + ',' +
               std::to_string(c.n_paths) + ',' + std::to_string(c.n_converged) + ',' + std::to_string(c.n_failed) +
               ',' + format_number(c.mean_h) + ',' + format_number(c.var_h) + ',' + format_number(c.mean_eta) +
               ',' + format_number(c.var_eta) + ',' + (c.cell_failed ? "1" : "0") + '\n';
    }
    return out;
}

std::string mc_report_summary(const McReport& report) {
    std::ostringstream out;
    out.precision(6);
    out << "Monte Carlo: " << report.config.n_paths << " paths per cell, n=" << report.config.n_days
        << ", delta=" << report.config.delta << ", start=" << to_string(report.config.start_mode) << "\n";
    for (const auto& c : report.cells) {
        out << "H0=" << c.h0 << " eta0=" << c.eta0 << " m=" << c.m << ": mean H=" << c.mean_h << " (var "
            << c.var_h << "), mean eta=" << c.mean_eta << " (var " << c.var_eta << "), failed " << c.n_failed
            << "/" << c.n_paths << (c.cell_failed ? " [CELL FAILED]" : "") << "\n";
    }
    return out.str();
}

void IllusionConfig::validate() const {
    FouSpec{alpha, c, eta, hurst, c, 100.0, delta, m_sim, n_days + 1}.validate();
    if (n_days < 2) throw ValidationError("illusion: n_days must be >= 2");
    if (m_list.empty()) throw ValidationError("illusion: m_list must be nonempty");
    for (int m : m_list) {
        if (m < 1 || m_sim % m != 0) {
            throw ValidationError("illusion: each RV frequency must divide m_sim=" + std::to_string(m_sim) + ", got " +
                                  std::to_string(m));
        }
    }
    require_positive_list(qs, "illusion: qs");
    box.validate();
    spectral.validate();
}

std::vector<IllusionRow> run_illusion_experiment(const IllusionConfig& config) {
    config.validate();
    FouSpec spec;
    spec.alpha = config.alpha;
    spec.c = config.c;
    spec.logvar0 = config.c;
    spec.eta = config.eta;
    spec.hurst = config.hurst;
    spec.delta = config.delta;
    spec.m = config.m_sim;
    spec.n_days = config.n_days + 1;
    spec.seed = config.seed;
    const FouPaths paths = simulate_fou_price(spec);
    const auto starts = experiment_starts(config.start_mode, config.box, config.delta, config.hurst, config.eta);

    std::vector<IllusionRow> rows;
    for (int m : config.m_list) {
        const RvSeries rv = realized_variance(paths.log_price, m, config.delta);
        const ScalingFit scaling = fit_scaling(log_volatility(rv.values), config.qs, config.lags);
        const WhittleFit fit =
            estimate(log_rv_increments(rv), config.box, starts, config.spectral, {config.workers, config.minimizer});
        rows.push_back({m, scaling.h_estimate, scaling.h_with_intercept, fit.h_hat, fit.eta_hat, fit.converged});
    }
    return rows;
}

std::string illusion_csv(const std::vector<IllusionRow>& rows) {
    std::string out = "m,scaling_h,scaling_h_intercept,whittle_h,whittle_eta,whittle_converged\n";
    for (const auto& r : rows) {
        out += std::to_string(r.m) + ',' + format_number(r.scaling_h) + ',' + format_number(r.scaling_h_intercept) +
               ',' + format_number(r.whittle_h) + ',' + format_number(r.whittle_eta) + ',' +
               (r.whittle_converged ? "1" : "0") + '\n';
    }
    return out;
}

void ZscoreConfig::validate() const {
    FouSpec{alpha, c, eta, hurst, c, 100.0, delta, m, n_days, substeps}.validate();
    if (m < 50) throw ValidationError("zscore: m must be >= 50");
    if (n_days < 3) throw ValidationError("zscore: n_days must be >= 3");
}

ZscoreResult summarize_sample(std::span<const double> z) {
    ZscoreResult r;
    r.n = z.size();
    if (r.n < 3) throw ValidationError("summarize_sample: need at least three values");
    const double n = static_cast<double>(r.n);
    double mean = 0.0;
    for (double v : z) mean += v;
    mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0, lag = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double d = z[i] - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
        if (i + 1 < z.size()) lag += d * (z[i + 1] - mean);
    }
    r.mean = mean;
    r.sample_variance = m2 / (n - 1.0);
    r.lag1_autocorr = lag / m2;
    const double pop_var = m2 / n;
    r.skewness = (m3 / n) / std::pow(pop_var, 1.5);
    r.excess_kurtosis = (m4 / n) / (pop_var * pop_var) - 3.0;
    r.jarque_bera = n / 6.0 * (r.skewness * r.skewness + 0.25 * r.excess_kurtosis * r.excess_kurtosis);
    return r;
}

ZscoreResult run_zscore_experiment(const ZscoreConfig& config) {
    config.validate();
    FouSpec spec;
    spec.alpha = config.alpha;
    spec.c = config.c;
    spec.logvar0 = config.c;
    spec.eta = config.eta;
    spec.hurst = config.hurst;
    spec.delta = config.delta;
    spec.m = config.m;
    spec.n_days = config.n_days;
    spec.substeps = config.substeps;
    spec.seed = config.seed;
    const FouPaths paths = simulate_fou_price(spec);
    const RvSeries rv = realized_variance(paths.log_price, config.m, config.delta);
    const auto iv = integrated_variance(paths.log_variance, config.delta);
    return summarize_sample(error_zscores(rv, iv));
}

std::string zscore_csv(const ZscoreResult& r) {
    return "n,mean,sample_variance,lag1_autocorr,skewness,excess_kurtosis,jarque_bera\n" + std::to_string(r.n) + ',' +
           format_number(r.mean) + ',' + format_number(r.sample_variance) + ',' + format_number(r.lag1_autocorr) +
           ',' + format_number(r.skewness) + ',' + format_number(r.excess_kurtosis) + ',' +
           format_number(r.jarque_bera) + '\n';
}

}  // namespace roughvol
