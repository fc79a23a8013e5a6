#pragma once

#include "roughvol/proxy.hpp"

#include <map>
#include <string>
#include <vector>

namespace roughvol {

/// Trading sessions of one day, as minutes after midnight.
struct Session {
    int open = 0;
    int close = 0;
};

struct MarketCalendar {
    std::vector<Session> sessions;
    int rv_frequency_minutes = 5;

    /// Sessions must be nonempty, each open < close, sorted and non-overlapping.
    void validate() const;
    int total_minutes() const;

    /// Parses "HH:MM-HH:MM[,HH:MM-HH:MM...]".
    static MarketCalendar parse(const std::string& sessions, int rv_frequency_minutes = 5);
    /// Named presets: spx, ftse, nikkei, dax, russell.
    static MarketCalendar preset(const std::string& market);
};

/// floor(total session minutes / rv_frequency_minutes).
int compute_m(const MarketCalendar& calendar);

struct IngestReport {
    std::size_t rows_read = 0;
    std::size_t rows_kept = 0;
    std::size_t rows_dropped = 0;
    std::map<std::string, std::size_t> reasons;  ///< "missing", "nonpositive"
    std::string first_date;
    std::string last_date;
};

struct IngestOptions {
    std::string date_column = "date";
    std::string rv_column = "rv";
    double delta = 1.0 / 250.0;
    int m = 1;
    /// Fail instead of closing up gaps left by dropped rows.
    bool strict = false;
};

struct IngestResult {
    RvSeries rv;
    IngestReport report;
};

/// Reads a headed CSV of daily realized variances. Rows with a missing or
/// nonpositive value are dropped and the survivors treated as consecutive
/// business days. A date column is optional; when absent dates are left empty.
IngestResult read_rv_csv(const std::string& path, const IngestOptions& options = {});

}  // namespace roughvol
