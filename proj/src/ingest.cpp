#include "roughvol/ingest.hpp"

#include "roughvol/csv.hpp"
#include "roughvol/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

namespace roughvol {

namespace {

int parse_clock(const std::string& text) {
    int h = 0, m = 0;
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ValidationError("session time '" + text + "' is not HH:MM");
    const auto hp = std::from_chars(text.data(), text.data() + colon, h);
    const auto mp = std::from_chars(text.data() + colon + 1, text.data() + text.size(), m);
    if (hp.ec != std::errc() || hp.ptr != text.data() + colon || mp.ec != std::errc() ||
        mp.ptr != text.data() + text.size() || h < 0 || h > 24 || m < 0 || m > 59 || (h == 24 && m != 0)) {
        throw ValidationError("session time '" + text + "' is not HH:MM");
    }
    return 60 * h + m;
}

bool is_missing(const std::string& cell) {
    std::string lower;
    for (char ch : cell) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return lower.empty() || lower == "na" || lower == "nan" || lower == "null" || lower == "n/a";
}

}  // namespace

void MarketCalendar::validate() const {
    if (sessions.empty()) throw ValidationError("MarketCalendar: no trading sessions");
    if (rv_frequency_minutes < 1) throw ValidationError("MarketCalendar: RV frequency must be >= 1 minute");
    for (std::size_t i = 0; i < sessions.size(); ++i) {
        if (sessions[i].open >= sessions[i].close) {
            throw ValidationError("MarketCalendar: session " + std::to_string(i + 1) + " closes before it opens");
        }
        if (i > 0 && sessions[i].open < sessions[i - 1].close) {
            throw ValidationError("MarketCalendar: sessions overlap or are out of order");
        }
    }
}

int MarketCalendar::total_minutes() const {
    int total = 0;
    for (const auto& s : sessions) total += s.close - s.open;
    return total;
}

MarketCalendar MarketCalendar::parse(const std::string& text, int rv_frequency_minutes) {
    MarketCalendar cal;
    cal.rv_frequency_minutes = rv_frequency_minutes;
    for (const auto& item : split_csv_line(text)) {
        if (item.empty()) continue;
        const auto dash = item.find('-');
        if (dash == std::string::npos) throw ValidationError("session '" + item + "' is not HH:MM-HH:MM");
        cal.sessions.push_back({parse_clock(item.substr(0, dash)), parse_clock(item.substr(dash + 1))});
    }
    cal.validate();
    return cal;
}

MarketCalendar MarketCalendar::preset(const std::string& market) {
    if (market == "spx" || market == "russell") return parse("09:30-16:00");
    if (market == "ftse") return parse("08:00-16:30");
    if (market == "nikkei") return parse("09:00-11:30,12:30-15:00");
    if (market == "dax") return parse("09:00-17:40");
    throw ValidationError("unknown market '" + market + "' (known: spx, ftse, nikkei, dax, russell)");
}

int compute_m(const MarketCalendar& calendar) {
    calendar.validate();
    const int m = calendar.total_minutes() / calendar.rv_frequency_minutes;
    if (m < 1) throw ValidationError("compute_m: sessions shorter than one RV interval");
    return m;
}

IngestResult read_rv_csv(const std::string& path, const IngestOptions& options) {
    if (options.m < 1) throw ValidationError("read_rv_csv: m must be >= 1");
    if (!(options.delta > 0.0)) throw ValidationError("read_rv_csv: delta must be > 0");
    const auto lines = split_lines(read_text_file(path));
    if (lines.empty()) throw ParseError(path, 1, "missing header row");
    const auto header = split_csv_line(lines[0]);
    const auto find = [&](const std::string& name) -> long {
        const auto it = std::find(header.begin(), header.end(), name);
        return it == header.end() ? -1 : static_cast<long>(it - header.begin());
    };
    const long rv_col = find(options.rv_column);
    if (rv_col < 0) throw ParseError(path, 1, "column '" + options.rv_column + "' not found in header");
    const long date_col = find(options.date_column);

    IngestResult result;
    result.rv.delta = options.delta;
    result.rv.m = options.m;
    auto& report = result.report;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].find_first_not_of(" \t") == std::string::npos) continue;
        const std::size_t line_no = i + 1;
        const auto fields = split_csv_line(lines[i]);
        if (fields.size() != header.size()) {
            throw ParseError(path, line_no, "expected " + std::to_string(header.size()) + " fields, found " +
                                                std::to_string(fields.size()));
        }
        ++report.rows_read;
        const std::string& cell = fields[static_cast<std::size_t>(rv_col)];
        std::string reason;
        double value = 0.0;
        if (is_missing(cell)) {
            reason = "missing";
        } else {
            const char* begin = cell.data();
            const char* end = begin + cell.size();
            if (*begin == '+') ++begin;
            const auto [ptr, ec] = std::from_chars(begin, end, value);
            if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
                throw ParseError(path, line_no, "column '" + options.rv_column + "' is not numeric: '" + cell + "'");
            }
            if (!(value > 0.0)) reason = "nonpositive";
        }
        if (!reason.empty()) {
            if (options.strict) {
                throw ParseError(path, line_no, reason + " realized variance; strict mode does not close gaps");
            }
            ++report.rows_dropped;
            ++report.reasons[reason];
            continue;
        }
        result.rv.values.push_back(value);
        if (date_col >= 0) result.rv.dates.push_back(fields[static_cast<std::size_t>(date_col)]);
    }
    report.rows_kept = result.rv.values.size();
    if (report.rows_kept == 0) {
        throw ValidationError(path + ": no usable rows (" + std::to_string(report.rows_read) + " read, all dropped)");
    }
    if (!result.rv.dates.empty()) {
        report.first_date = result.rv.dates.front();
        report.last_date = result.rv.dates.back();
    }
    result.rv.validate();
    return result;
}

}  // namespace roughvol
