#include "rtpol/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rtpol/error.hpp"

namespace rtpol {

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (x == 0.0) return "0"; // folds -0
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string format_optional(const std::optional<double>& x) { return x ? format_number(*x) : std::string(); }

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw SchemaError("CSV is missing column \"" + std::string(name) + "\"");
}

bool CsvTable::has_column(std::string_view name) const {
    for (const auto& h : header) {
        if (h == name) return true;
    }
    return false;
}

namespace {

/// Splits one logical record starting at pos; advances pos past its line end.
std::vector<std::string> read_record(std::string_view text, std::size_t& pos) {
    std::vector<std::string> cells(1);
    bool quoted = false;
    while (pos < text.size()) {
        const char c = text[pos];
        if (quoted) {
            if (c == '"') {
                if (pos + 1 < text.size() && text[pos + 1] == '"') {
                    cells.back() += '"';
                    ++pos;
                } else {
                    quoted = false;
                }
            } else {
                cells.back() += c;
            }
            ++pos;
            continue;
        }
        ++pos;
        if (c == '\n') return cells;
        if (c == '"' && cells.back().empty()) {
            quoted = true;
        } else if (c == ',') {
            cells.emplace_back();
        } else if (c != '\r' || (pos < text.size() && text[pos] != '\n')) {
            cells.back() += c;
        }
    }
    if (quoted) throw SchemaError("CSV ends inside a quoted cell");
    return cells;
}

} // namespace

CsvTable parse_csv(std::string_view text) {
    CsvTable table;
    std::size_t pos = 0;
    bool have_header = false;
    while (pos < text.size()) {
        if (text[pos] == '\n' || (text[pos] == '\r' && pos + 1 < text.size() && text[pos + 1] == '\n')) {
            pos += text[pos] == '\n' ? 1 : 2;
            continue;
        }
        if (text[pos] == '#') {
            std::size_t nl = text.find('\n', pos);
            if (nl == std::string_view::npos) nl = text.size();
            std::string_view line = text.substr(pos + 1, nl - pos - 1);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            if (!line.empty() && line.front() == ' ') line.remove_prefix(1);
            table.comments.emplace_back(line);
            pos = nl + 1;
            continue;
        }
        auto cells = read_record(text, pos);
        if (!have_header) {
            table.header = std::move(cells);
            have_header = true;
        } else {
            if (cells.size() != table.header.size()) {
                throw SchemaError("CSV row has " + std::to_string(cells.size()) + " cells, header has " +
                                  std::to_string(table.header.size()));
            }
            table.rows.push_back(std::move(cells));
        }
    }
    return table;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read CSV: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str());
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        const std::string& c = cells[i];
        if (c.find_first_of(",\"\r\n") == std::string::npos && (c.empty() || c.front() != '#')) {
            out << c;
            continue;
        }
        out << '"';
        for (char ch : c) {
            if (ch == '"') out << '"';
            out << ch;
        }
        out << '"';
    }
    out << '\n';
}

double parse_double(std::string_view cell, std::string_view what) {
    double x = 0.0;
    const char* end = cell.data() + cell.size();
    auto res = std::from_chars(cell.data(), end, x);
    if (cell.empty() || res.ec != std::errc() || res.ptr != end) {
        throw SchemaError("cannot parse " + std::string(what) + " value \"" + std::string(cell) + "\"");
    }
    return x;
}

} // namespace rtpol
