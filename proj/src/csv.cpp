#include "roughvol/csv.hpp"

#include "roughvol/error.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace roughvol {

std::string format_number(double value, int digits) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    // Without a precision to_chars emits the shortest round-trip form, which
    // never needs more than 17 significant digits.
    const auto res = digits >= 17 ? std::to_chars(buf, buf + sizeof buf, value)
                                   : std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, digits);
    return std::string(buf, res.ptr);
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot open output file " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw std::runtime_error("cannot move output into place at " + path);
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open input file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    auto push = [&] {
        const auto first = field.find_first_not_of(" \t\"");
        const auto last = field.find_last_not_of(" \t\"");
        fields.push_back(first == std::string::npos ? std::string() : field.substr(first, last - first + 1));
        field.clear();
    };
    for (char ch : line) {
        if (ch == ',') {
            push();
        } else {
            field += ch;
        }
    }
    push();
    return fields;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        start = end + 1;
    }
    return lines;
}

std::string grid_path_csv(const GridPath& path) {
    std::string out = "t,value\n";
    for (std::size_t i = 0; i < path.size(); ++i) {
        out += format_number(path.time(i));
        out += ',';
        out += format_number(path.values[i]);
        out += '\n';
    }
    return out;
}

namespace {

double parse_double(const std::string& cell, const std::string& path, std::size_t line) {
    double v = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    if (!cell.empty() && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (cell.empty() || ec != std::errc() || ptr != end) {
        throw ParseError(path, line, "not a number: '" + cell + "'");
    }
    return v;
}

}  // namespace

GridPath read_grid_path_csv(const std::string& path, PathKind kind) {
    const auto lines = split_lines(read_text_file(path));
    if (lines.empty()) throw ParseError(path, 1, "empty file");
    const auto header = split_csv_line(lines[0]);
    if (header.size() != 2 || header[0] != "t" || header[1] != "value") {
        throw ParseError(path, 1, "expected header 't,value'");
    }
    std::vector<double> t;
    GridPath out;
    out.kind = kind;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto f = split_csv_line(lines[i]);
        if (f.size() != 2) throw ParseError(path, i + 1, "expected 2 fields, found " + std::to_string(f.size()));
        t.push_back(parse_double(f[0], path, i + 1));
        out.values.push_back(parse_double(f[1], path, i + 1));
    }
    if (t.size() < 2) throw ValidationError(path + ": need at least two rows");
    out.t0 = t[0];
    out.dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    if (!(out.dt > 0.0)) throw ValidationError(path + ": time column must be increasing");
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (std::abs((t[i] - t[i - 1]) - out.dt) > 1e-6 * out.dt) {
            throw ParseError(path, i + 2, "time grid is not uniform");
        }
    }
    // Re-derive dt from the first step when it is exact, keeping file round
    // trips bit-identical to in-memory paths.
    if (std::abs((t[1] - t[0]) - out.dt) <= 1e-12 * out.dt) out.dt = t[1] - t[0];
    return out;
}

std::string rv_csv(const RvSeries& rv) {
    std::string out = "date,rv\n";
    for (std::size_t i = 0; i < rv.size(); ++i) {
        out += rv.dates.empty() ? std::to_string(i + 1) : rv.dates[i];
        out += ',';
        out += format_number(rv.values[i]);
        out += '\n';
    }
    return out;
}

}  // namespace roughvol
