#pragma once

#include <charconv>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace amc::io {

// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, ptr);
}

class CsvWriter {
public:
    CsvWriter(std::ostream& os, std::span<const std::string_view> columns) : os_(os), ncols_(columns.size()) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) os_ << ',';
            os_ << columns[i];
        }
        os_ << '\n';
    }

    void row(std::span<const double> values) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) os_ << ',';
            os_ << format_double(values[i]);
        }
        os_ << '\n';
    }

    void row(std::initializer_list<double> values) { row(std::span<const double>(values.begin(), values.size())); }

    // Numeric cells followed by trailing text cells.
    void row(std::span<const double> values, std::span<const std::string> text) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) os_ << ',';
            os_ << format_double(values[i]);
        }
        for (const auto& s : text) os_ << ',' << s;
        os_ << '\n';
    }

    std::size_t columns() const { return ncols_; }

private:
    std::ostream& os_;
    std::size_t ncols_;
};

}  // namespace amc::io
