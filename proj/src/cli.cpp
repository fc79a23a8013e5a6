#include "roughvol/cli.hpp"

#include "roughvol/csv.hpp"
#include "roughvol/error.hpp"
#include "roughvol/frac_sim.hpp"
#include "roughvol/harness.hpp"
#include "roughvol/ingest.hpp"
#include "roughvol/proxy.hpp"
#include "roughvol/scaling.hpp"
#include "roughvol/spectral.hpp"
#include "roughvol/whittle.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

namespace roughvol {

namespace {

/// Writes to `path` atomically, or to `out` when the path is empty or "-".
void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << content;
    } else {
        write_file_atomic(path, content);
    }
}

std::string six(double v) { return format_number(v, 6); }

/// "1-50", "1,2,5,10" or a mix of both.
std::vector<int> parse_int_list(const std::string& text, const char* what) {
    std::vector<int> out;
    for (const auto& item : split_csv_line(text)) {
        if (item.empty()) continue;
        try {
            const auto dash = item.find('-', 1);
            if (dash == std::string::npos) {
                std::size_t used = 0;
                out.push_back(std::stoi(item, &used));
                if (used != item.size()) throw std::invalid_argument(item);
            } else {
                const int lo = std::stoi(item.substr(0, dash));
                const int hi = std::stoi(item.substr(dash + 1));
                if (hi < lo) throw std::invalid_argument(item);
                for (int v = lo; v <= hi; ++v) out.push_back(v);
            }
        } catch (const std::logic_error&) {
            throw ValidationError(std::string(what) + ": cannot parse '" + item + "'");
        }
    }
    if (out.empty()) throw ValidationError(std::string(what) + ": empty list");
    return out;
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> out;
    for (const auto& item : split_csv_line(text)) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw ValidationError(std::string(what) + ": cannot parse '" + item + "'");
        }
    }
    if (out.empty()) throw ValidationError(std::string(what) + ": empty list");
    return out;
}

/// Reads starting points from a headed CSV with columns `h,nu`.
std::vector<StartPoint> read_starts(const std::string& path) {
    const auto lines = split_lines(read_text_file(path));
    if (lines.empty() || split_csv_line(lines[0]) != std::vector<std::string>{"h", "nu"}) {
        throw ParseError(path, 1, "expected header 'h,nu'");
    }
    std::vector<StartPoint> starts;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto f = split_csv_line(lines[i]);
        try {
            if (f.size() != 2) throw std::invalid_argument("field count");
            starts.push_back({std::stod(f[0]), std::stod(f[1])});
        } catch (const std::logic_error&) {
            throw ParseError(path, i + 1, "expected two numbers 'h,nu'");
        }
    }
    if (starts.empty()) throw ValidationError(path + ": no starting points");
    return starts;
}

struct SpectralFlags {
    SpectralConfig config{};
    void add(CLI::App* app) {
        app->add_option("--psi", config.psi, "Cut frequency for the low-frequency corrections");
        app->add_option("--paxson-k", config.paxson_k, "Alias pairs summed explicitly in f_H");
        app->add_option("--taylor-j", config.taylor_j, "Terms of the low-frequency cosine expansion");
        app->add_option("--series-ratio-limit", config.series_ratio_limit,
                        "Noise-to-signal ratio at psi above which the low band is partly integrated (inf: never)");
        app->add_option("--quad-rel-tol", config.quad_rel_tol, "Relative quadrature tolerance");
        app->add_option("--quad-abs-tol", config.quad_abs_tol, "Absolute quadrature tolerance");
    }
};

struct BoxFlags {
    ParamBox box{};
    void add(CLI::App* app) {
        app->add_option("--h-min", box.h_min, "Lower bound on H");
        app->add_option("--h-max", box.h_max, "Upper bound on H");
        app->add_option("--eta-min", box.eta_min, "Lower bound on eta");
        app->add_option("--eta-max", box.eta_max, "Upper bound on eta");
    }
};

struct SimulateCmd {
    FouSpec spec{};
    std::uint64_t seed = 0;
    std::optional<double> logvar0;
    std::string out;
    std::string variance_out;
};

struct RvCmd {
    std::string path;
    int m = 80;
    double delta = 1.0 / 250.0;
    std::string out;
};

struct InputFlags {
    std::string rv;
    std::string column = "rv";
    std::string date_column = "date";
    double delta = 1.0 / 250.0;
    int m = 80;
    void add(CLI::App* app) {
        app->add_option("--rv", rv, "Realized-variance CSV")->required();
        app->add_option("--column", column, "Name of the realized-variance column");
        app->add_option("--date-column", date_column, "Name of the date column (optional in the file)");
        app->add_option("--delta", delta, "Length of one observation interval in years");
        app->add_option("--m", m, "Intraday returns per realized variance");
    }
    IngestResult read() const {
        IngestOptions opt;
        opt.rv_column = column;
        opt.date_column = date_column;
        opt.delta = delta;
        opt.m = m;
        return read_rv_csv(rv, opt);
    }
};

struct EstimateCmd {
    InputFlags input;
    BoxFlags box;
    SpectralFlags spectral;
    std::string starts;
    int workers = 1;
    std::string out;
    std::string diagnostics;
};

struct ScalingCmd {
    InputFlags input;
    std::string qs = "0.5,1,1.5,2,3";
    std::string lags = "1-50";
    std::string out;
    std::string summary;
};

struct SpectrumCmd {
    double hurst = 0.1;
    double eta = 1.0;
    double delta = 1.0 / 250.0;
    std::optional<double> nu;
    int m = 80;
    int points = 512;
    SpectralFlags spectral;
    std::string out;
};

struct McCmd {
    std::string config;
    std::uint64_t seed = 0;
    int workers = 1;
    std::optional<int> paths;
    bool full_scale = false;
    std::string h0;
    std::string eta0;
    std::string m_list;
    std::optional<int> days;
    std::string start;
    std::string out;
    std::string summary;
};

struct IllusionCmd {
    IllusionConfig config{};
    std::string m_list = "80,400,2000";
    std::string start = "grid";
    SpectralFlags spectral;
    std::string out;
};

struct ZscoreCmd {
    ZscoreConfig config{};
    int workers = 1;
    std::string out;
};

struct IngestCmd {
    InputFlags input;
    std::string market;
    std::string sessions;
    int frequency = 5;
    bool strict = false;
    std::string out;
};

int run_simulate(const SimulateCmd& cmd, std::ostream& out, std::ostream& err, bool verbose) {
    FouSpec spec = cmd.spec;
    spec.seed = cmd.seed;
    spec.logvar0 = cmd.logvar0.value_or(spec.c);
    const FouPaths paths = simulate_fou_price(spec);
    emit(cmd.out, grid_path_csv(paths.log_price), out);
    if (!cmd.variance_out.empty()) emit(cmd.variance_out, grid_path_csv(paths.log_variance), out);
    if (verbose) err << "simulated " << paths.log_price.size() << " grid points\n";
    return 0;
}

int run_rv(const RvCmd& cmd, std::ostream& out) {
    const GridPath path = read_grid_path_csv(cmd.path, PathKind::log_price);
    emit(cmd.out, rv_csv(realized_variance(path, cmd.m, cmd.delta)), out);
    return 0;
}

int run_estimate(const EstimateCmd& cmd, std::ostream& out, std::ostream& err) {
    const IngestResult data = cmd.input.read();
    const LogRvIncrements y = log_rv_increments(data.rv);
    const auto starts = cmd.starts.empty() ? default_starts(cmd.box.box, y.delta) : read_starts(cmd.starts);
    EstimateOptions options;
    options.workers = cmd.workers;
    const WhittleFit fit = estimate(y, cmd.box.box, starts, cmd.spectral.config, options);

    std::string row = "h_hat,nu_hat,eta_hat,objective,converged\n";
    row += format_number(fit.h_hat) + ',' + format_number(fit.nu_hat) + ',' + format_number(fit.eta_hat) + ',' +
           format_number(fit.objective) + ',' + (fit.converged ? "1" : "0") + '\n';
    emit(cmd.out, row, out);

    std::ostringstream diag;
    diag << "h_hat=" << six(fit.h_hat) << "\nnu_hat=" << six(fit.nu_hat) << "\neta_hat=" << six(fit.eta_hat)
         << "\nobjective=" << six(fit.objective) << "\nconverged=" << (fit.converged ? "true" : "false")
         << "\nn=" << y.size() << "\ndelta=" << six(fit.delta) << "\nm=" << fit.m << "\nrows_read="
         << data.report.rows_read << "\nrows_dropped=" << data.report.rows_dropped << "\nn_starts=" << fit.n_starts
         << "\nstart_h=" << six(fit.start_used.hurst) << "\nstart_nu=" << six(fit.start_used.nu) << '\n';
    for (std::size_t i = 0; i < fit.outcomes.size(); ++i) {
        const auto& o = fit.outcomes[i];
        diag << "start." << i << "=h0:" << six(o.start.hurst) << " nu0:" << six(o.start.nu);
        if (o.failed) {
            diag << " failed:" << o.message << '\n';
        } else {
            diag << " h:" << six(o.h_hat) << " nu:" << six(o.nu_hat) << " objective:" << six(o.objective)
                 << " converged:" << (o.converged ? "true" : "false") << " iterations:" << o.iterations << '\n';
        }
    }
    for (const auto& w : fit.warnings) {
        diag << "warning=" << w << '\n';
        err << "warning: " << w << '\n';
    }
    std::string diag_path = cmd.diagnostics;
    if (diag_path.empty() && !cmd.out.empty() && cmd.out != "-") diag_path = cmd.out + ".diag.txt";
    if (diag_path.empty()) {
        err << diag.str();
    } else {
        write_file_atomic(diag_path, diag.str());
    }
    return 0;
}

int run_scaling(const ScalingCmd& cmd, std::ostream& out) {
    const IngestResult data = cmd.input.read();
    const auto qs = parse_double_list(cmd.qs, "--qs");
    const auto lags = parse_int_list(cmd.lags, "--lags");
    const ScalingFit fit = fit_scaling(log_volatility(data.rv.values), qs, lags);

    std::string csv = "q,lag,log_lag,log_m\n";
    for (std::size_t i = 0; i < fit.qs.size(); ++i) {
        for (std::size_t j = 0; j < fit.lags.size(); ++j) {
            csv += format_number(fit.qs[i]) + ',' + std::to_string(fit.lags[j]) + ',' +
                   format_number(std::log(static_cast<double>(fit.lags[j]))) + ',' + format_number(fit.log_m[i][j]) +
                   '\n';
        }
    }
    std::ostringstream summary;
    summary << "h_estimate=" << six(fit.h_estimate) << "\nr2_stage2=" << six(fit.r2_stage2)
            << "\nh_with_intercept=" << six(fit.h_with_intercept) << "\nintercept_stage2=" << six(fit.intercept_stage2)
            << '\n';
    for (std::size_t i = 0; i < fit.qs.size(); ++i) {
        summary << "q=" << six(fit.qs[i]) << " zeta=" << six(fit.zeta[i]) << " intercept=" << six(fit.intercept_eta[i])
                << " r2=" << six(fit.r2_stage1[i]) << '\n';
    }
    if (cmd.out.empty() || cmd.out == "-") {
        out << csv;
        if (cmd.summary.empty()) return 0;
    } else {
        write_file_atomic(cmd.out, csv);
    }
    emit(cmd.summary, summary.str(), out);
    return 0;
}

int run_spectrum(const SpectrumCmd& cmd, std::ostream& out) {
    if (cmd.points < 1) throw ValidationError("--points must be >= 1");
    ModelSpectrum spectrum;
    spectrum.hurst = cmd.hurst;
    spectrum.nu = cmd.nu.value_or(cmd.eta * std::pow(cmd.delta, cmd.hurst));
    spectrum.m = cmd.m;
    spectrum.config = cmd.spectral.config;
    spectrum.validate();
    std::string csv = "lambda,f_h,ell,g\n";
    for (int j = 1; j <= cmd.points; ++j) {
        const double lambda = std::numbers::pi * j / cmd.points;
        csv += format_number(lambda) + ',' + format_number(f_h(lambda, cmd.hurst, spectrum.config.paxson_k)) + ',' +
               format_number(ell(lambda)) + ',' + format_number(g_spectrum(spectrum, lambda)) + '\n';
    }
    emit(cmd.out, csv, out);
    return 0;
}

int run_mc(const McCmd& cmd, std::ostream& out, std::ostream& err) {
    McConfig config = cmd.config.empty() ? McConfig{} : McConfig::parse(read_text_file(cmd.config), cmd.config);
    config.base_seed = cmd.seed;
    config.workers = cmd.workers;
    if (cmd.full_scale) config.n_paths = 100;
    if (cmd.paths) config.n_paths = *cmd.paths;
    if (!cmd.h0.empty()) config.h0_list = parse_double_list(cmd.h0, "--h0");
    if (!cmd.eta0.empty()) config.eta0_list = parse_double_list(cmd.eta0, "--eta0");
    if (!cmd.m_list.empty()) config.m_list = parse_int_list(cmd.m_list, "--m-list");
    if (cmd.days) config.n_days = *cmd.days;
    if (!cmd.start.empty()) config.start_mode = parse_start_mode(cmd.start);
    config.validate();
    const McReport report = run_mc_table(config);
    emit(cmd.out, mc_report_csv(report), out);
    if (!cmd.summary.empty()) write_file_atomic(cmd.summary, mc_report_summary(report));
    else err << mc_report_summary(report);
    for (const auto& c : report.cells) {
        err << "cell H0=" << six(c.h0) << " eta0=" << six(c.eta0) << " m=" << c.m << " wall " << six(c.wall_seconds)
            << " s\n";
    }
    return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hurst and vol-of-vol estimation from realized variance"};
    app.name("roughvol");
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "Extra progress output on stderr");

    SimulateCmd sim;
    auto* s = app.add_subcommand("simulate", "Simulate a fractional OU log-variance and log-price path");
    s->add_option("--h", sim.spec.hurst, "Hurst parameter H");
    s->add_option("--eta", sim.spec.eta, "Volatility of log-variance eta");
    s->add_option("--alpha", sim.spec.alpha, "Mean-reversion speed");
    s->add_option("--c", sim.spec.c, "Mean log-variance");
    s->add_option("--logvar0", sim.logvar0, "Initial log-variance (default: c)");
    s->add_option("--delta", sim.spec.delta, "Day length in years");
    s->add_option("--days", sim.spec.n_days, "Days to simulate");
    s->add_option("--m", sim.spec.m, "Grid points per day");
    s->add_option("--substeps", sim.spec.substeps, "Simulation steps per grid interval");
    s->add_option("--overflow-bound", sim.spec.overflow_bound, "Abort if |log-variance| exceeds this");
    s->add_option("--seed", sim.seed, "Random seed")->required();
    s->add_option("--out", sim.out, "Log-price CSV (t,value); '-' for stdout")->required();
    s->add_option("--variance-out", sim.variance_out, "Optional log-variance CSV");

    RvCmd rv;
    auto* r = app.add_subcommand("rv", "Daily realized variance from a log-price path");
    r->add_option("--path", rv.path, "Log-price CSV (t,value)")->required();
    r->add_option("--m", rv.m, "Intraday returns per day");
    r->add_option("--delta", rv.delta, "Day length in years");
    r->add_option("--out", rv.out, "Output CSV (date,rv); '-' for stdout")->required();

    EstimateCmd est;
    auto* e = app.add_subcommand("estimate", "Whittle estimate of (H, eta) from a realized-variance CSV");
    est.input.add(e);
    est.box.add(e);
    est.spectral.add(e);
    e->add_option("--starts", est.starts, "CSV of starting points (h,nu); default: built-in grid");
    e->add_option("--workers", est.workers, "Threads for the multi-start search");
    e->add_option("--out", est.out, "Output CSV; default stdout");
    e->add_option("--diagnostics", est.diagnostics, "Diagnostics file; default <out>.diag.txt or stderr");

    ScalingCmd sc;
    auto* g = app.add_subcommand("scaling", "Structure-function scaling regression");
    sc.input.add(g);
    g->add_option("--qs", sc.qs, "Moments q");
    g->add_option("--lags", sc.lags, "Lags in days, e.g. 1-50 or 1,2,5");
    g->add_option("--out", sc.out, "Long-form CSV (q,lag,log_lag,log_m); default stdout");
    g->add_option("--summary", sc.summary, "Summary file; default appended to stdout");

    SpectrumCmd sp;
    auto* p = app.add_subcommand("spectrum", "Tabulate f_H, ell and g on (0, pi]");
    p->add_option("--h", sp.hurst, "Hurst parameter H");
    p->add_option("--eta", sp.eta, "eta (used with --delta when --nu is absent)");
    p->add_option("--delta", sp.delta, "Day length in years");
    p->add_option("--nu", sp.nu, "nu = eta delta^H, overrides --eta/--delta");
    p->add_option("--m", sp.m, "Intraday returns per day");
    p->add_option("--points", sp.points, "Frequencies j pi / points, j = 1..points");
    sp.spectral.add(p);
    p->add_option("--out", sp.out, "Output CSV; default stdout");

    McCmd mc;
    auto* mcs = app.add_subcommand("mc", "Monte Carlo table of Whittle estimates");
    mcs->add_option("--config", mc.config, "key = value file mirroring the Monte Carlo configuration");
    mcs->add_option("--seed", mc.seed, "Base seed")->required();
    mcs->add_option("--workers", mc.workers, "Worker threads");
    mcs->add_option("--paths", mc.paths, "Paths per cell (default 30)");
    mcs->add_flag("--full-scale", mc.full_scale, "Use 100 paths per cell");
    mcs->add_option("--h0", mc.h0, "H0 grid (default 0.01,0.05,0.1,0.3,0.5,0.7)");
    mcs->add_option("--eta0", mc.eta0, "eta0 grid (default 1,2,3)");
    mcs->add_option("--m-list", mc.m_list, "Intraday counts (default 80,400)");
    mcs->add_option("--days", mc.days, "Log-RV increments per path (default 2500)");
    mcs->add_option("--start", mc.start, "Start mode: truth or grid (default truth)");
    mcs->add_option("--out", mc.out, "Report CSV; default stdout");
    mcs->add_option("--summary", mc.summary, "Text summary; default stderr");

    IllusionCmd il;
    auto* ils = app.add_subcommand("illusion", "Scaling regression versus Whittle on a H = 0.5 path");
    ils->add_option("--seed", il.config.seed, "Random seed")->required();
    ils->add_option("--workers", il.config.workers, "Threads for the multi-start search");
    ils->add_option("--h", il.config.hurst, "Hurst parameter of the simulated path");
    ils->add_option("--eta", il.config.eta, "eta of the simulated path");
    ils->add_option("--alpha", il.config.alpha, "Mean-reversion speed");
    ils->add_option("--c", il.config.c, "Mean log-variance");
    ils->add_option("--days", il.config.n_days, "Log-RV increments");
    ils->add_option("--m-list", il.m_list, "RV frequencies");
    ils->add_option("--m-sim", il.config.m_sim, "Simulation grid points per day");
    ils->add_option("--start", il.start, "Start mode: truth or grid");
    il.spectral.add(ils);
    ils->add_option("--out", il.out, "Output CSV; default stdout");

    ZscoreCmd zs;
    auto* zss = app.add_subcommand("zscore", "Moments of sqrt(m)(log RV - log IV) on a simulated path");
    zss->add_option("--seed", zs.config.seed, "Random seed")->required();
    zss->add_option("--m", zs.config.m, "Intraday returns per day");
    zss->add_option("--days", zs.config.n_days, "Days");
    zss->add_option("--h", zs.config.hurst, "Hurst parameter");
    zss->add_option("--eta", zs.config.eta, "eta");
    zss->add_option("--alpha", zs.config.alpha, "Mean-reversion speed");
    zss->add_option("--substeps", zs.config.substeps, "Simulation steps per return interval");
    zss->add_option("--workers", zs.workers, "Accepted for uniformity; this experiment is a single serial path");
    zss->add_option("--out", zs.out, "Output CSV; default stdout");

    IngestCmd ing;
    auto* in = app.add_subcommand("ingest-check", "Validate a realized-variance CSV and derive m");
    ing.input.add(in);
    in->add_option("--market", ing.market, "Preset calendar: spx, ftse, nikkei, dax, russell");
    in->add_option("--sessions", ing.sessions, "Sessions, e.g. 09:00-11:30,12:30-15:00");
    in->add_option("--freq", ing.frequency, "RV sampling interval in minutes");
    in->add_flag("--strict", ing.strict, "Fail on dropped rows instead of closing gaps");
    in->add_option("--out", ing.out, "Canonical date,rv CSV");

    std::vector<std::string> storage = {"roughvol"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : storage) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& ex) {
        if (ex.get_exit_code() == 0) return app.exit(ex, out, err);
        err << "error: " << ex.what() << " (see --help)\n";
        return 1;
    }

    try {
        if (s->parsed()) return run_simulate(sim, out, err, verbose);
        if (r->parsed()) return run_rv(rv, out);
        if (e->parsed()) return run_estimate(est, out, err);
        if (g->parsed()) return run_scaling(sc, out);
        if (p->parsed()) return run_spectrum(sp, out);
        if (mcs->parsed()) return run_mc(mc, out, err);
        if (ils->parsed()) {
            il.config.m_list = parse_int_list(il.m_list, "--m-list");
            il.config.start_mode = parse_start_mode(il.start);
            il.config.spectral = il.spectral.config;
            emit(il.out, illusion_csv(run_illusion_experiment(il.config)), out);
            return 0;
        }
        if (zss->parsed()) {
            emit(zs.out, zscore_csv(run_zscore_experiment(zs.config)), out);
            return 0;
        }
        if (in->parsed()) {
            IngestOptions opt;
            opt.rv_column = ing.input.column;
            opt.date_column = ing.input.date_column;
            opt.delta = ing.input.delta;
            opt.m = ing.input.m;
            opt.strict = ing.strict;
            if (!ing.market.empty() && !ing.sessions.empty()) {
                throw ValidationError("--market and --sessions are mutually exclusive");
            }
            std::optional<int> m;
            if (!ing.market.empty()) {
                auto cal = MarketCalendar::preset(ing.market);
                cal.rv_frequency_minutes = ing.frequency;
                m = compute_m(cal);
            } else if (!ing.sessions.empty()) {
                m = compute_m(MarketCalendar::parse(ing.sessions, ing.frequency));
            }
            if (m) opt.m = *m;
            const IngestResult data = read_rv_csv(ing.input.rv, opt);
            std::ostringstream report;
            report << "rows_read=" << data.report.rows_read << "\nrows_kept=" << data.report.rows_kept
                   << "\nrows_dropped=" << data.report.rows_dropped << '\n';
            for (const auto& [reason, count] : data.report.reasons) report << "dropped." << reason << '=' << count << '\n';
            if (!data.report.first_date.empty()) {
                report << "first_date=" << data.report.first_date << "\nlast_date=" << data.report.last_date << '\n';
            }
            if (m) report << "m=" << *m << '\n';
            if (!ing.out.empty()) write_file_atomic(ing.out, rv_csv(data.rv));
            out << report.str();
            return 0;
        }
    } catch (const std::invalid_argument& ex) {  // ValidationError, ParseError
        err << "error: " << ex.what() << '\n';
        return 1;
    } catch (const std::domain_error& ex) {
        err << "error: " << ex.what() << '\n';
        return 1;
    } catch (const std::exception& ex) {
        err << "runtime failure: " << ex.what() << '\n';
        return 2;
    }
    return 1;
}

int dispatch(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dispatch(args, std::cout, std::cerr);
}

}  // namespace roughvol
