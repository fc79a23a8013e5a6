#pragma once

#include "roughvol/frac_sim.hpp"
#include "roughvol/proxy.hpp"

#include <string>
#include <vector>

namespace roughvol {

/// Shortest round-trip decimal with at most `digits` significant digits.
std::string format_number(double value, int digits = 17);

/// Writes to `path` via a temporary sibling and rename, so readers never see
/// a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

/// Throws ValidationError naming the path if it cannot be opened.
std::string read_text_file(const std::string& path);

/// Splits one CSV record on commas; surrounding whitespace and double quotes
/// are stripped from each field.
std::vector<std::string> split_csv_line(const std::string& line);

/// Splits text into lines, dropping a trailing '\r' and the final empty line.
std::vector<std::string> split_lines(const std::string& text);

/// `t,value` rows at 17 significant digits.
std::string grid_path_csv(const GridPath& path);

/// Reads a `t,value` file; the step is taken from the first two rows and must
/// be uniform.
GridPath read_grid_path_csv(const std::string& path, PathKind kind);

/// Canonical `date,rv` file; the date column falls back to the 1-based day index.
std::string rv_csv(const RvSeries& rv);

}  // namespace roughvol
