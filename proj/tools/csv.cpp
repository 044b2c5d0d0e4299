#include "csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cli {

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw CliError{2, "cannot open '" + path + "'"};
    std::ostringstream ss;
    ss << f.rdbuf();
    if (f.bad()) throw CliError{2, "read failed for '" + path + "'"};
    return ss.str();
}

Csv parse_csv(const std::string& text, const std::string& path) {
    Csv out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        if (pos == text.size() && line_no > 0) break;
        std::size_t eol = text.find('\n', pos);
        std::string line = text.substr(
            pos, eol == std::string::npos ? std::string::npos : eol - pos);
        pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            if (eol == std::string::npos) break;
            continue;
        }

        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            std::size_t comma = line.find(',', start);
            cells.push_back(line.substr(
                start, comma == std::string::npos ? std::string::npos
                                                  : comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }

        if (out.header.empty()) {
            out.header = std::move(cells);
        } else {
            if (cells.size() != out.header.size())
                throw CliError{2, path + ":" + std::to_string(line_no) + ": row has " +
                                      std::to_string(cells.size()) + " cells, header has " +
                                      std::to_string(out.header.size())};
            out.rows.push_back(std::move(cells));
            out.line_of.push_back(line_no);
        }
    }
    if (out.header.empty())
        throw CliError{2, path + ": empty file, expected a header row"};
    return out;
}

Csv read_csv(const std::string& path) {
    return parse_csv(read_file(path), path);
}

double parse_cell(const Csv& csv, std::size_t row, std::size_t col) {
    const std::string& s = csv.rows[row][col];
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw CliError{2, "line " + std::to_string(csv.line_of[row]) + ", column '" +
                              csv.header[col] + "': not a number: '" + s + "'"};
    return x;
}

std::string format_double(double x) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    (void)ec;
    return std::string(buf, ptr);
}

void write_csv(const std::string& path, const Csv& csv) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw CliError{2, "cannot open '" + path + "' for writing"};
    for (std::size_t c = 0; c < csv.header.size(); ++c)
        f << (c ? "," : "") << csv.header[c];
    f << "\n";
    for (const auto& row : csv.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) f << (c ? "," : "") << row[c];
        f << "\n";
    }
    f.flush();
    if (!f) throw CliError{2, "write failed for '" + path + "'"};
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
    return buf;
}

} // namespace cli
