#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cli {

// Carries the process exit code: 2 input/parse, 3 insufficient data,
// 4 reference mismatch, 5 numerical failure.
struct CliError {
    int exit_code;
    std::string message;
};

// Strict dialect: comma separators, first row is the header, decimal point,
// no quoting or locale handling.
struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_of;   // 1-based file line per data row
};

std::string read_file(const std::string& path);   // CliError{2} on failure
Csv parse_csv(const std::string& text, const std::string& path);
Csv read_csv(const std::string& path);

double parse_cell(const Csv& csv, std::size_t row, std::size_t col);

std::string format_double(double x);   // shortest round-trip decimal form
void write_csv(const std::string& path, const Csv& csv);

std::string fnv1a_hex(const std::string& bytes);

} // namespace cli
