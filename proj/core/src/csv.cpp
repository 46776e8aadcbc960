#include "knnn/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "knnn/errors.hpp"

namespace knnn {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw EmptyInput("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

// Splits into lines on '\n', stripping one trailing '\r' per line.
std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            if (start < text.size()) lines.push_back(text.substr(start));
            break;
        }
        auto line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = end + 1;
    }
    return lines;
}

double parse_field(std::string_view field, std::size_t line_no) {
    if (field.empty()) throw ParseError(line_no, "empty field");
    // strtod accepts leading whitespace and trailing junk; reject both.
    std::string tmp(field);
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(tmp.c_str(), &end);
    if (end != tmp.c_str() + tmp.size() || tmp.front() == ' ' || tmp.front() == '\t')
        throw ParseError(line_no, "malformed numeric field '" + tmp + "'");
    if (!std::isfinite(value))
        throw ParseError(line_no, "non-finite value '" + tmp + "'");
    return value;
}

} // namespace

FeatureMatrix load_csv(const std::filesystem::path& path, bool has_header) {
    const std::string text = read_file(path);
    const auto lines = split_lines(text);

    FeatureMatrix matrix;
    std::vector<double> row;
    std::size_t data_rows = 0;
    for (std::size_t li = 0; li < lines.size(); ++li) {
        if (has_header && li == 0) continue;
        const std::size_t line_no = li + 1;
        std::string_view line = lines[li];
        if (line.empty()) {
            // A trailing blank line is tolerated; blank lines between rows are not.
            if (li + 1 == lines.size()) continue;
            throw ParseError(line_no, "blank line inside data");
        }
        row.clear();
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            const auto field = comma == std::string_view::npos
                                   ? line.substr(start)
                                   : line.substr(start, comma - start);
            row.push_back(parse_field(field, line_no));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        try {
            matrix.append_row(row);
        } catch (const DimensionMismatch&) {
            throw ParseError(line_no, "row has " + std::to_string(row.size()) +
                                          " fields, expected " + std::to_string(matrix.cols()));
        }
        ++data_rows;
    }
    if (data_rows == 0) throw EmptyInput("no data rows in " + path.string());
    return matrix;
}

std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void save_csv(const FeatureMatrix& matrix, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw EmptyInput("cannot open file for writing: " + path.string());
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        const auto row = matrix.row(i);
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            out << format_double(row[c]);
        }
        out << '\n';
    }
}

std::vector<std::uint8_t> load_labels(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    const auto lines = split_lines(text);
    std::vector<std::uint8_t> labels;
    for (std::size_t li = 0; li < lines.size(); ++li) {
        std::string_view line = lines[li];
        if (line.empty()) {
            if (li + 1 == lines.size()) continue;
            throw ParseError(li + 1, "blank line inside labels");
        }
        if (line == "0")
            labels.push_back(0);
        else if (line == "1")
            labels.push_back(1);
        else
            throw ParseError(li + 1, "label must be 0 or 1, got '" + std::string(line) + "'");
    }
    if (labels.empty()) throw EmptyInput("no labels in " + path.string());
    return labels;
}

void save_labels(const std::vector<std::uint8_t>& labels,
                 const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw EmptyInput("cannot open file for writing: " + path.string());
    for (auto l : labels) out << (l ? '1' : '0') << '\n';
}

std::vector<double> load_scores(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    const auto lines = split_lines(text);
    std::vector<double> scores;
    for (std::size_t li = 0; li < lines.size(); ++li) {
        std::string_view line = lines[li];
        if (line.empty()) {
            if (li + 1 == lines.size()) continue;
            throw ParseError(li + 1, "blank line inside scores");
        }
        scores.push_back(parse_field(line, li + 1));
    }
    if (scores.empty()) throw EmptyInput("no scores in " + path.string());
    return scores;
}

void save_scores(const std::vector<double>& scores, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw EmptyInput("cannot open file for writing: " + path.string());
    for (double s : scores) out << format_double(s) << '\n';
}

} // namespace knnn
