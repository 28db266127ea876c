#include "tailsum/tableio.hpp"

#include <cstdio>

#include "tailsum/errors.hpp"

namespace tailsum {

OutputFormat parse_output_format(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "markdown" || name == "md") return OutputFormat::markdown;
    throw domain_error("unknown output format \"" + name + "\" (csv or markdown)");
}

std::string format_number(double x, bool full_precision) {
    char buf[40];
    if (full_precision)
        std::snprintf(buf, sizeof buf, "%.17g", x);
    else
        std::snprintf(buf, sizeof buf, "%.5E", x);
    return buf;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void ResultTable::write(std::ostream& os, OutputFormat format) const {
    if (format == OutputFormat::csv) {
        for (std::size_t i = 0; i < header.size(); ++i)
            os << (i ? "," : "") << csv_escape(header[i]);
        os << '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(row[i]);
            os << '\n';
        }
        return;
    }
    os << '|';
    for (const auto& h : header) os << ' ' << h << " |";
    os << "\n|";
    for (std::size_t i = 0; i < header.size(); ++i) os << " --- |";
    os << '\n';
    for (const auto& row : rows) {
        os << '|';
        for (const auto& cell : row) os << ' ' << cell << " |";
        os << '\n';
    }
}

}  // namespace tailsum
