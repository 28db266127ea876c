#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace tailsum {

enum class OutputFormat { csv, markdown };

OutputFormat parse_output_format(const std::string& name);

// A rendered result table: one fixed header plus string cells. Numeric cells
// are formatted before insertion so CSV and markdown carry the same payload.
struct ResultTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void write(std::ostream& os, OutputFormat format) const;
};

// Scientific notation with six significant digits (the tables' precision),
// or shortest round-trip form (17 significant digits) when full is set.
std::string format_number(double x, bool full_precision);

// RFC-4180-style field quoting: quotes fields containing separators/quotes.
std::string csv_escape(const std::string& field);

}  // namespace tailsum
