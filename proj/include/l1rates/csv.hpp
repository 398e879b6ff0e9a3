#pragma once

#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace l1rates {

/// Shortest decimal that round-trips, '.' separator regardless of locale.
std::string format_double(double v);

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    CsvWriter& cell(double v);
    CsvWriter& cell(long long v);
    CsvWriter& cell(unsigned long long v);
    CsvWriter& cell(std::string_view v);
    void end_row();

    const std::string& path() const { return path_; }

private:
    void separator();

    std::string path_;
    std::ofstream out_;
    std::size_t columns_;
    std::size_t pending_ = 0;
};

}  // namespace l1rates
