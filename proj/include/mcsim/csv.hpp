#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace mcsim {

// 9 significant digits, shortest form ("%.9g").
std::string format_number(double v);

// Minimal CSV emitter: '#'-prefixed comment lines, one header row, then data
// rows. Comma separator, '.' decimal point.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void comment(const std::string& line);
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<std::string>& cells);

    static std::string cell(double v) { return format_number(v); }
    static std::string cell(long v) { return std::to_string(v); }
    static std::string cell(int v) { return std::to_string(v); }
    static std::string cell(std::uint64_t v) { return std::to_string(v); }

private:
    std::ostream& out_;
};

} // namespace mcsim
