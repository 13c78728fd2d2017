#pragma once
// CSV output: header row always, '.' decimal separator, full precision for
// linear values and 6 decimals for dB columns.

#include <fstream>
#include <string>
#include <vector>

namespace mimo {

std::string fmt_full(double v);  // shortest round-trip ("%.17g")
std::string fmt_db(double v);    // "%.6f"
std::string fmt_count(unsigned long long v);

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    void write_row(const std::vector<std::string>& fields);

private:
    std::ofstream out_;
    std::size_t columns_;
};

} // namespace mimo
