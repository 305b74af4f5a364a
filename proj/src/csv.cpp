#include "mcsim/csv.hpp"

#include <cstdio>

namespace mcsim {

std::string format_number(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void CsvWriter::comment(const std::string& line) {
    out_ << "# " << line << "\n";
}

void CsvWriter::header(const std::vector<std::string>& columns) {
    row(columns);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) out_ << ',';
        out_ << cells[i];
    }
    out_ << "\n";
}

} // namespace mcsim
