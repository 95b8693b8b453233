#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace rtpol {

/// Shortest round-trip decimal representation.
std::string format_number(double x);

/// Empty string for nullopt (blank CSV cell).
std::string format_optional(const std::optional<double>& x);

struct CsvTable {
    std::vector<std::string> comments; ///< lines starting with '#', without the marker
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by name; throws SchemaError naming the column when absent.
    std::size_t column(std::string_view name) const;
    bool has_column(std::string_view name) const;
};

/// Comma-separated text. Cells holding a comma, quote or line break are
/// double-quoted with quotes doubled; '#' lines outside quotes are comments.
CsvTable read_csv(const std::string& path);
CsvTable parse_csv(std::string_view text);

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells);

double parse_double(std::string_view cell, std::string_view what);

} // namespace rtpol
